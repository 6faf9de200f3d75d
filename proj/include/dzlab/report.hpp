#pragma once

// Plot-ready CSV output with a '#'-prefixed metadata header, and parsers for
// the command-line value syntaxes (q grids, complex points, lists).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dzlab/error.hpp"
#include "dzlab/measure.hpp"
#include "dzlab/numeric.hpp"

namespace dzlab {

/// Shortest round-trip decimal form of a double.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

struct CsvMeta {
  std::string command;
  std::string field_spec;
  std::uint64_t X = 0;
  double kappa = 0.0;
  double zeta_2 = 0.0;
  std::string version;
  std::vector<std::pair<std::string, std::string>> extra;
};

/// The only line that differs between two runs with identical inputs.
inline constexpr std::string_view kTimestampPrefix = "# generated=";

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_csv_header(std::ostream& out, const CsvMeta& meta, const std::vector<std::string>& columns) {
  out << "# dzlab " << meta.command << '\n';
  out << "# field=" << meta.field_spec << '\n';
  out << "# X=" << meta.X << '\n';
  out << "# kappa=" << format_real(meta.kappa) << '\n';
  out << "# zeta_K_2=" << format_real(meta.zeta_2) << '\n';
  out << "# version=" << meta.version << '\n';
  for (const auto& [k, v] : meta.extra) out << "# " << k << '=' << v << '\n';
  out << kTimestampPrefix << utc_timestamp() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

inline void write_csv_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

/// Geometric q grid "hi:lo:per_decade", e.g. "1e-1:1e-5:48" (193 points).
struct QGridSpec {
  double hi = 0.1;
  double lo = 1e-5;
  int per_decade = 48;

  std::vector<double> grid() const { return geometric_grid(hi, lo, per_decade); }
};

inline QGridSpec parse_q_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? std::string_view::npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 3) throw Error(ErrorCode::Config, "q grid must be 'hi:lo:per_decade', got '" + std::string(spec) + "'");
  QGridSpec g;
  g.hi = detail::parse_double(parts[0], spec);
  g.lo = detail::parse_double(parts[1], spec);
  const double ppd = detail::parse_double(parts[2], spec);
  if (!(g.hi > g.lo && g.lo > 0)) throw Error(ErrorCode::Config, "q grid needs hi > lo > 0");
  if (!(ppd >= 1 && ppd == std::floor(ppd))) throw Error(ErrorCode::Config, "q grid needs an integer per_decade >= 1");
  g.per_decade = static_cast<int>(ppd);
  return g;
}

/// "2", "1.25+1i", "2-3i", "-0.5i", "1e-3+2i".
inline Complex parse_complex(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::Config, "empty complex number");
  if (text.back() != 'i') return {detail::parse_double(text, text), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag = [&](std::string_view s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return detail::parse_double(s, text);
  };
  if (split == std::string_view::npos) return {0.0, imag(body)};
  return {detail::parse_double(body.substr(0, split), text), imag(body.substr(split))};
}

inline std::vector<std::string> split_list(std::string_view text, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto at = text.find(sep, start);
    out.emplace_back(text.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

}  // namespace dzlab
