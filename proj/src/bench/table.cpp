// Copyright 2026 The streamenh Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "streamenh/bench/table.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "streamenh/common.hpp"

namespace streamenh {
namespace {

std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view field, int line) {
  T v{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw Error(ErrorCode::kFormat, "csv line " + std::to_string(line) + ": bad number '" +
                                        std::string(field) + "'");
  return v;
}

std::string human(double v) {
  char buf[32];
  if (v >= 1e9)
    std::snprintf(buf, sizeof buf, "%.2fG", v / 1e9);
  else
    std::snprintf(buf, sizeof buf, "%.1fM", v / 1e6);
  return buf;
}

}  // namespace

BenchRow make_row(const RtfReport& rtf, std::size_t params, const MacReport& macs) {
  return {rtf.preset, rtf.variant, params, macs.per_second, rtf.rtf,
          rtf.p50_us, rtf.p90_us,  rtf.p99_us, rtf.threads};
}

std::string format_csv(const std::vector<BenchRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += r.preset + ',' + r.variant + ',' + std::to_string(r.params) + ',' +
           shortest(r.macs_per_s) + ',' + shortest(r.rtf) + ',' + shortest(r.p50_us) + ',' +
           shortest(r.p90_us) + ',' + shortest(r.p99_us) + ',' + std::to_string(r.threads) +
           '\n';
  }
  return out;
}

std::vector<BenchRow> parse_csv(std::string_view csv) {
  std::vector<BenchRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (number == 1) {
      if (line != kCsvHeader) throw Error(ErrorCode::kFormat, "csv header mismatch");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest = line;
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      f.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    f.push_back(rest);
    if (f.size() != 9)
      throw Error(ErrorCode::kFormat, "csv line " + std::to_string(number) + ": expected 9 fields");
    BenchRow r;
    r.preset = f[0];
    r.variant = f[1];
    r.params = parse_number<std::size_t>(f[2], number);
    r.macs_per_s = parse_number<double>(f[3], number);
    r.rtf = parse_number<double>(f[4], number);
    r.p50_us = parse_number<double>(f[5], number);
    r.p90_us = parse_number<double>(f[6], number);
    r.p99_us = parse_number<double>(f[7], number);
    r.threads = parse_number<int>(f[8], number);
    rows.push_back(std::move(r));
  }
  if (number == 0) throw Error(ErrorCode::kFormat, "empty csv");
  return rows;
}

std::string format_table(const std::vector<BenchRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-6s %-10s %10s %9s %8s %9s %9s %9s %7s\n", "preset", "variant",
                "Para. (K)", "MACs", "RTF", "p50 us", "p90 us", "p99 us", "threads");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-6s %-10s %10.1f %9s %8.4f %9.1f %9.1f %9.1f %7d\n",
                  r.preset.c_str(), r.variant.c_str(), r.params / 1000.0,
                  human(r.macs_per_s).c_str(), r.rtf, r.p50_us, r.p90_us, r.p99_us, r.threads);
    out += buf;
  }
  return out;
}

}  // namespace streamenh
