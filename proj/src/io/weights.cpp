// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/io/weights.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace streamenh {

static_assert(std::endian::native == std::endian::little,
              "weight files are read by memcpy on little-endian hosts");

Tensor::Tensor(std::vector<std::uint32_t> d, std::vector<float> v)
    : dims(std::move(d)), data(std::move(v)) {
  if (data.size() != numel())
    throw Error(ErrorCode::kShape, "tensor data does not match dims");
}

Tensor Tensor::zeros(const std::vector<int>& shape) {
  std::vector<std::uint32_t> d(shape.begin(), shape.end());
  Tensor t;
  t.dims = d;
  t.data.assign(t.numel(), 0.0f);
  return t;
}

std::size_t Tensor::numel() const {
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

bool Tensor::same_shape(const std::vector<int>& shape) const {
  if (shape.size() != dims.size()) return false;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (static_cast<std::uint32_t>(shape[i]) != dims[i]) return false;
  return true;
}

bool WeightBundle::fused() const {
  auto it = meta.find("fused");
  return it != meta.end() && it->is_boolean() && it->get<bool>();
}

void WeightBundle::set_fused(bool fused) { meta["fused"] = fused; }

std::optional<ModelConfig> WeightBundle::config() const {
  auto it = meta.find("model");
  if (it == meta.end()) return std::nullopt;
  return it->get<ModelConfig>();
}

void WeightBundle::set_config(const ModelConfig& config) {
  meta["model"] = config;
  if (!meta.contains("fused")) meta["fused"] = false;
}

void WeightBundle::add(std::string name, Tensor tensor) {
  if (index_.count(name))
    throw Error(ErrorCode::kShapeMismatch, "duplicate tensor '" + name + "'");
  index_.emplace(name, entries_.size());
  entries_.emplace_back(std::move(name), std::move(tensor));
}

bool WeightBundle::contains(std::string_view name) const {
  return index_.count(std::string(name)) > 0;
}

const Tensor& WeightBundle::at(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    throw Error(ErrorCode::kShapeMismatch, "missing tensor '" + std::string(name) + "'");
  return entries_[it->second].second;
}

Tensor& WeightBundle::at(std::string_view name) {
  return const_cast<Tensor&>(std::as_const(*this).at(name));
}

void WeightBundle::erase(std::string_view name) {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return;
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(it->second));
  reindex();
}

void WeightBundle::reindex() {
  index_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].first, i);
}

bool WeightBundle::operator==(const WeightBundle& other) const {
  return meta == other.meta && entries_ == other.entries_;
}

namespace {

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (n > remaining())
      throw Error(ErrorCode::kTruncated, std::string("file ends inside ") + what);
  }

  template <typename T>
  T get(const char* what) {
    need(sizeof(T), what);
    T v;
    std::memcpy(&v, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }

  std::string string(std::size_t n, const char* what) {
    need(n, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }

  void floats(std::vector<float>& out, std::size_t n, const char* what) {
    if (n > remaining() / sizeof(float))
      throw Error(ErrorCode::kTruncated, std::string("file ends inside ") + what);
    out.resize(n);
    std::memcpy(out.data(), bytes_.data() + pos_, n * sizeof(float));
    pos_ += n * sizeof(float);
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

constexpr std::uint32_t kMaxDims = 8;

}  // namespace

std::vector<std::uint8_t> serialize(const WeightBundle& bundle) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kWeightMagic, kWeightMagic + 4);
  put<std::uint32_t>(out, kWeightVersion);
  const std::string blob = bundle.meta.dump();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(blob.size()));
  out.insert(out.end(), blob.begin(), blob.end());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bundle.size()));
  for (const auto& [name, t] : bundle.tensors()) {
    if (name.size() > 0xFFFF)
      throw Error(ErrorCode::kFormat, "tensor name too long");
    if (t.dims.size() > kMaxDims)
      throw Error(ErrorCode::kFormat, "tensor rank too large");
    put<std::uint16_t>(out, static_cast<std::uint16_t>(name.size()));
    out.insert(out.end(), name.begin(), name.end());
    put<std::uint8_t>(out, 0);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(t.dims.size()));
    for (auto d : t.dims) put<std::uint32_t>(out, d);
    const auto* p = reinterpret_cast<const std::uint8_t*>(t.data.data());
    out.insert(out.end(), p, p + t.data.size() * sizeof(float));
  }
  return out;
}

WeightBundle parse(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(4, "magic");
  const std::string magic = r.string(4, "magic");
  if (std::memcmp(magic.data(), kWeightMagic, 4) != 0)
    throw Error(ErrorCode::kBadMagic, "not a weight file");
  const auto version = r.get<std::uint32_t>("version");
  if (version != kWeightVersion)
    throw Error(ErrorCode::kVersionMismatch,
                "version " + std::to_string(version) + ", expected " +
                    std::to_string(kWeightVersion));
  const auto blob_len = r.get<std::uint32_t>("config length");
  const std::string blob = r.string(blob_len, "config blob");

  WeightBundle bundle;
  bundle.meta = nlohmann::json::parse(blob, nullptr, false);
  if (bundle.meta.is_discarded() || !bundle.meta.is_object())
    throw Error(ErrorCode::kFormat, "config blob is not a JSON object");

  const auto count = r.get<std::uint32_t>("tensor count");
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto name_len = r.get<std::uint16_t>("tensor name length");
    std::string name = r.string(name_len, "tensor name");
    const auto dtype = r.get<std::uint8_t>("dtype");
    if (dtype != 0)
      throw Error(ErrorCode::kBadDtype, "tensor '" + name + "' has dtype " +
                                            std::to_string(dtype));
    const auto ndim = r.get<std::uint8_t>("rank");
    if (ndim > kMaxDims)
      throw Error(ErrorCode::kFormat, "tensor '" + name + "' rank " + std::to_string(ndim));
    Tensor t;
    std::size_t numel = 1;
    for (std::uint8_t d = 0; d < ndim; ++d) {
      const auto dim = r.get<std::uint32_t>("dims");
      t.dims.push_back(dim);
      numel *= dim;
      if (dim != 0 && numel > bytes.size())
        throw Error(ErrorCode::kTruncated, "tensor '" + name + "' larger than file");
    }
    r.floats(t.data, numel, "tensor payload");
    if (bundle.contains(name))
      throw Error(ErrorCode::kFormat, "duplicate tensor '" + name + "'");
    bundle.add(std::move(name), std::move(t));
  }
  if (r.remaining() != 0)
    throw Error(ErrorCode::kTruncated,
                "declared tensor count " + std::to_string(count) +
                    " leaves " + std::to_string(r.remaining()) + " trailing bytes");

  if (bundle.meta.contains("model")) {
    ModelGraph graph;
    try {
      graph = graph_for(bundle);
    } catch (const Error& e) {
      throw Error(ErrorCode::kShapeMismatch, std::string("embedded config: ") + e.what());
    }
    validate_against_graph(bundle, graph);
  }
  return bundle;
}

void save(const WeightBundle& bundle, const std::filesystem::path& path) {
  const auto bytes = serialize(bundle);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

WeightBundle load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  return parse(bytes);
}

void validate_against_graph(const WeightBundle& bundle, const ModelGraph& graph) {
  const auto params = graph.parameters();
  for (const auto& p : params) {
    if (!bundle.contains(p.name))
      throw Error(ErrorCode::kShapeMismatch, "missing tensor '" + p.name + "'");
    if (!bundle.at(p.name).same_shape(p.shape))
      throw Error(ErrorCode::kShapeMismatch, "tensor '" + p.name + "' has wrong shape");
  }
  if (bundle.size() != params.size())
    throw Error(ErrorCode::kShapeMismatch,
                "bundle holds " + std::to_string(bundle.size()) +
                    " tensors, graph expects " + std::to_string(params.size()));
}

ModelGraph graph_for(const WeightBundle& bundle) {
  auto config = bundle.config();
  if (!config) throw Error(ErrorCode::kConfig, "bundle carries no model config");
  return build_model(*config, bundle.fused());
}

}  // namespace streamenh
