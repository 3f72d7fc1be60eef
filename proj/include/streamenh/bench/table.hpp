// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "streamenh/bench/macs.hpp"
#include "streamenh/bench/rtf.hpp"

namespace streamenh {

struct BenchRow {
  std::string preset;
  std::string variant;
  std::size_t params = 0;
  double macs_per_s = 0;
  double rtf = 0;
  double p50_us = 0;
  double p90_us = 0;
  double p99_us = 0;
  int threads = 1;

  bool operator==(const BenchRow&) const = default;
};

BenchRow make_row(const RtfReport& rtf, std::size_t params, const MacReport& macs);

/// CSV columns: preset,variant,params,macs_per_s,rtf,p50_us,p90_us,p99_us,threads.
/// Floating-point fields use shortest round-trip formatting.
inline constexpr std::string_view kCsvHeader =
    "preset,variant,params,macs_per_s,rtf,p50_us,p90_us,p99_us,threads";

std::string format_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_csv(std::string_view csv);

/// Aligned text table: Para. (K), MACs, RTF and frame-time percentiles.
std::string format_table(const std::vector<BenchRow>& rows);

}  // namespace streamenh
