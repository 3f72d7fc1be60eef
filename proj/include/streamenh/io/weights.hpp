// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "streamenh/model/graph.hpp"

namespace streamenh {

/// Dense f32 tensor, row-major.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;

  Tensor() = default;
  Tensor(std::vector<std::uint32_t> d, std::vector<float> v);
  static Tensor zeros(const std::vector<int>& shape);

  std::size_t numel() const;
  std::span<const float> values() const { return data; }
  std::span<float> values() { return data; }
  bool same_shape(const std::vector<int>& shape) const;
  bool operator==(const Tensor&) const = default;
};

/// Ordered name -> tensor store plus the JSON header blob. The blob is an
/// object; bundles describing a network carry {"fused": bool, "model":
/// {...}}.
class WeightBundle {
 public:
  nlohmann::json meta = nlohmann::json::object();

  bool fused() const;
  void set_fused(bool fused);
  std::optional<ModelConfig> config() const;
  void set_config(const ModelConfig& config);

  void add(std::string name, Tensor tensor);
  bool contains(std::string_view name) const;
  const Tensor& at(std::string_view name) const;
  Tensor& at(std::string_view name);
  void erase(std::string_view name);

  std::size_t size() const { return entries_.size(); }
  const std::vector<std::pair<std::string, Tensor>>& tensors() const { return entries_; }

  bool operator==(const WeightBundle& other) const;

 private:
  void reindex();

  std::vector<std::pair<std::string, Tensor>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

inline constexpr char kWeightMagic[4] = {'F', 'E', 'N', 'H'};
inline constexpr std::uint32_t kWeightVersion = 1;

/// Layout (all integers little-endian):
///   "FENH" | u32 version | u32 blob length | blob (canonical JSON)
///   | u32 tensor count | per tensor: u16 name length, name,
///     u8 dtype (0 = f32), u8 ndim, u32 x ndim dims, f32 payload
std::vector<std::uint8_t> serialize(const WeightBundle& bundle);

/// Parses a complete file image. Every length is checked against the bytes
/// that remain before anything is allocated. When the blob names a model,
/// the tensors are validated against its graph.
WeightBundle parse(std::span<const std::uint8_t> bytes);

void save(const WeightBundle& bundle, const std::filesystem::path& path);
WeightBundle load(const std::filesystem::path& path);

/// Throws Error(kShapeMismatch) unless the bundle binds every graph
/// parameter exactly once with the declared shape and holds nothing else.
void validate_against_graph(const WeightBundle& bundle, const ModelGraph& graph);

/// Graph for the bundle's embedded config and fusion state.
ModelGraph graph_for(const WeightBundle& bundle);

}  // namespace streamenh
