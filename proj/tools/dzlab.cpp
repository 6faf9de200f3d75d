// dzlab: command-line driver for the Dedekind-zeta measure experiments.
//
// Exit codes: 0 ok, 1 verification failure, 2 configuration error,
// 3 capability error (the field presentation or numerics cannot deliver).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dzlab/cache.hpp"
#include "dzlab/field.hpp"
#include "dzlab/measure.hpp"
#include "dzlab/mellin.hpp"
#include "dzlab/report.hpp"
#include "dzlab/sieve.hpp"
#include "dzlab/verify.hpp"
#include "dzlab/zeta.hpp"

#ifndef DZLAB_VERSION
#define DZLAB_VERSION "unknown"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace dzlab;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCapability = 3;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndexDivisor:
    case ErrorCode::Undecided:
    case ErrorCode::Overflow:
    case ErrorCode::PoleAt1:
    case ErrorCode::PoleProximity:
    case ErrorCode::DivisionNearZero:
    case ErrorCode::InsufficientData:
    case ErrorCode::TailTooLarge:
      return kExitCapability;
    default:
      return kExitConfig;
  }
}

struct Options {
  std::string field;
  std::optional<std::uint64_t> X;
  std::string out = "-";
  std::string json_out;
  bool cache = false;
  std::string f;
  std::string q = "1e-1:1e-5:48";
  std::string s;
  std::string xs;
  std::string alphas = "0,0.25,0.5,0.75,1";
  double q0 = 1e-9;
};

/// Output stream for --out ("-" is stdout).
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path == "-" || path.empty()) return;
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    file_ = std::make_unique<std::ofstream>(p);
    if (!*file_) throw Error(ErrorCode::Config, "cannot write " + path);
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_json(const json& j, const std::string& path) {
  Sink sink(path);
  sink.stream() << j.dump(2) << '\n';
}

FieldTables load_tables(const NumberField& K, std::uint64_t X, bool use_cache) {
  if (X > kSieveHardCap) throw Error(ErrorCode::Config, "X = " + std::to_string(X) + " exceeds the hard cap 1e8");
  if (X > kSieveWarnAbove) std::cerr << "warning: X = " << X << " above 1e7 needs several GB of memory\n";
  if (use_cache) {
    const auto path = cache_path(K.spec(), X);
    if (std::filesystem::exists(path)) {
      FieldTables t = read_cache(path);
      if (t.ideal_count.field_spec() != K.spec() || t.X() != X) {
        throw Error(ErrorCode::CacheFormat, path.string() + " holds a different field or bound; delete it and resieve");
      }
      return t;
    }
    FieldTables t = build_tables(K, X);
    write_cache(path, t);
    return t;
  }
  return build_tables(K, X);
}

json field_json(const NumberField& K) {
  json j;
  j["field"] = K.spec();
  j["kind"] = K.kind() == FieldKind::Rational ? "Rational" : K.kind() == FieldKind::Quadratic ? "Quadratic" : "Monogenic";
  j["degree"] = K.degree();
  j["signature"] = {K.signature().r1, K.signature().r2};
  j["discriminant"] = K.discriminant();
  j["index_candidates"] = K.index_candidates();
  return j;
}

json invariants_json(const FieldInvariants& inv) {
  json j;
  j["kappa"] = {{"value", inv.kappa.value}, {"method", to_string(inv.kappa.method)}, {"error_bar", inv.kappa.error_bar}};
  j["zeta_K_2"] = {{"value", inv.zeta_2}, {"abs_err", inv.zeta_2_error}};
  j["mertens_constant"] = inv.mertens_constant;
  return j;
}

CsvMeta make_meta(const std::string& cmd, const NumberField& K, std::uint64_t X, const FieldInvariants& inv) {
  return CsvMeta{cmd, K.spec(), X, inv.kappa.value, inv.zeta_2, DZLAB_VERSION, {}};
}

std::vector<Complex> parse_points(const std::string& text) {
  std::vector<Complex> pts;
  for (const auto& item : split_list(text)) pts.push_back(parse_complex(item));
  return pts;
}

/// Smallest X covering f on the whole grid, printed before any sieving.
std::uint64_t resolve_X(const Options& o, std::uint64_t required, const char* what) {
  std::cerr << "required X = " << required << " (" << what << ")\n";
  if (!o.X) return std::max<std::uint64_t>(required, 1000);
  if (*o.X < required) {
    throw Error(ErrorCode::Config, "--X " + std::to_string(*o.X) + " is below the required " + std::to_string(required) +
                                       " = support_hi / sqrt(q_min)");
  }
  return *o.X;
}

int cmd_field(const Options& o) {
  const NumberField K = parse_field_spec(o.field);
  std::optional<FieldTables> tables;
  if (K.kind() == FieldKind::Monogenic) tables = load_tables(K, o.X.value_or(1000000), o.cache);
  const FieldInvariants inv = compute_invariants(K, tables ? &tables->ideal_count : nullptr);
  json j = field_json(K);
  j.update(invariants_json(inv));
  emit_json(j, o.out);
  return kExitOk;
}

int cmd_sieve(const Options& o) {
  const NumberField K = parse_field_spec(o.field);
  const std::uint64_t X = o.X.value_or(1000000);
  const FieldTables t = build_tables(K, X);
  const auto path = cache_path(K.spec(), X);
  write_cache(path, t);
  const Kappa reg = residue_kappa_regression(t.ideal_count, K.degree());
  json j = field_json(K);
  j["X"] = X;
  j["cache"] = path.string();
  j["prime_ideals"] = t.primes.count();
  j["totient_width_bytes"] = t.totient_sum.width_bytes();
  j["kappa_regression"] = {{"value", reg.value}, {"error_bar", reg.error_bar}};
  emit_json(j, o.json_out.empty() ? "-" : o.json_out);
  return kExitOk;
}

int cmd_mertens(const Options& o) {
  const NumberField K = parse_field_spec(o.field);
  const std::uint64_t X = o.X.value_or(1000000);
  const FieldTables t = load_tables(K, X, o.cache);
  const FieldInvariants inv = compute_invariants(K, &t.ideal_count);
  std::vector<std::uint64_t> xs;
  if (!o.xs.empty()) {
    for (const auto& item : split_list(o.xs)) xs.push_back(static_cast<std::uint64_t>(detail::parse_double(item, o.xs)));
  } else {
    for (double x : geometric_grid(static_cast<double>(X), 10.0, 10)) {
      const auto v = static_cast<std::uint64_t>(std::llround(x));
      if (xs.empty() || xs.back() != v) xs.push_back(v);
    }
    std::reverse(xs.begin(), xs.end());
  }
  Sink sink(o.out);
  write_csv_header(sink.stream(), make_meta("mertens", K, X, inv),
                   {"x", "value", "main_term", "error", "normalized", "normalized_lindelof", "normalized_circle"});
  for (const auto& r : mertens_report(t.totient_sum, inv, K.degree(), xs)) {
    write_csv_row(sink.stream(), {std::to_string(r.x), to_string(r.value), format_real(r.main_term), format_real(r.error),
                                  format_real(r.normalized), format_real(r.normalized_lindelof),
                                  format_real(r.normalized_circle)});
  }
  return kExitOk;
}

int cmd_zeta(const Options& o) {
  const NumberField K = parse_field_spec(o.field);
  std::optional<FieldTables> tables;
  if (K.kind() == FieldKind::Monogenic || o.X) tables = load_tables(K, o.X.value_or(1000000), o.cache);
  const CoeffTable* count = tables ? &tables->ideal_count : nullptr;
  const FieldInvariants inv = compute_invariants(K, count);
  const ZetaEvaluator zeta(K, count, inv.kappa.value);
  json j = field_json(K);
  j.update(invariants_json(inv));
  json values = json::array();
  for (Complex s : parse_points(o.s.empty() ? "2" : o.s)) {
    const ComplexValue v = zeta(s);
    values.push_back({{"s_re", s.real()}, {"s_im", s.imag()}, {"re", v.re()}, {"im", v.im()}, {"abs_err", v.abs_err},
                      {"route", zeta.has_continuation() ? "continuation" : "series"}});
  }
  j["values"] = values;
  emit_json(j, o.out);
  return kExitOk;
}

int cmd_measure(const Options& o, bool scan) {
  const NumberField K = parse_field_spec(o.field);
  if (o.f.empty()) throw Error(ErrorCode::Config, "--f is required");
  const TestFunction f = TestFunction::parse(o.f);
  const QGridSpec grid = parse_q_grid(o.q);
  const std::uint64_t X = resolve_X(o, required_norm_bound(f.support_hi(), grid.lo), "support_hi / sqrt(q_min)");
  const FieldTables t = load_tables(K, X, o.cache);
  const FieldInvariants inv = compute_invariants(K, &t.ideal_count);
  const auto samples = error_curve(t.totient_sum, inv, f, grid.grid());
  CsvMeta meta = make_meta(scan ? "scan" : "measure", K, X, inv);
  meta.extra = {{"f", f.describe()}, {"q", o.q}};
  Sink sink(o.out);
  if (scan) {
    std::vector<double> alphas;
    for (const auto& a : split_list(o.alphas)) alphas.push_back(detail::parse_double(a, o.alphas));
    write_csv_header(sink.stream(), meta, {"alpha", "q", "running_max"});
    for (const auto& series : critical_exponent_scan(samples, alphas)) {
      for (std::size_t i = 0; i < series.q.size(); ++i) {
        write_csv_row(sink.stream(), {format_real(series.alpha), format_real(series.q[i]), format_real(series.running_max[i])});
      }
    }
    return kExitOk;
  }
  write_csv_header(sink.stream(), meta, {"q", "m_q", "m_limit", "error", "error_over_sqrt_q"});
  for (const auto& s : samples) {
    write_csv_row(sink.stream(), {format_real(s.q), format_real(s.m_q), format_real(s.m_limit), format_real(s.error),
                                  format_real(s.error_over_sqrt_q())});
  }
  json fit;
  try {
    const ExponentFit e = exponent_fit(samples);
    fit = {{"alpha_hat", e.alpha_hat}, {"stderr", e.std_error}, {"q_range", {e.q_min, e.q_max}}, {"n_points", e.n_points}};
  } catch (const Error& e) {
    fit = {{"error", e.what()}};
  }
  emit_json(fit, o.json_out.empty() ? (o.out == "-" ? "/dev/stderr" : o.out + ".fit.json") : o.json_out);
  return kExitOk;
}

int cmd_mellin(const Options& o) {
  const NumberField K = parse_field_spec(o.field);
  if (o.f.empty()) throw Error(ErrorCode::Config, "--f is required");
  const TestFunction f = TestFunction::parse(o.f);
  const std::uint64_t X = resolve_X(o, required_norm_bound(f.support_hi(), o.q0), "support_hi / sqrt(q0)");
  const FieldTables t = load_tables(K, X, o.cache);
  const FieldInvariants inv = compute_invariants(K, &t.ideal_count);
  const MellinContext ctx{K, &t, inv};
  CsvMeta meta = make_meta("mellin", K, X, inv);
  meta.extra = {{"f", f.describe()}, {"q0", format_real(o.q0)}};
  Sink sink(o.out);
  write_csv_header(sink.stream(), meta, {"s_re", "s_im", "value_re", "value_im", "method", "err_est"});
  json checks = json::array();
  for (Complex s : parse_points(o.s.empty() ? "1.5,2,1.25+1i,2+3i" : o.s)) {
    std::vector<MellinPoint> pts{mellin_closed(ctx, f, s)};
    if (s.real() >= 1.1) pts.push_back(mellin_numeric(ctx, f, s, o.q0));
    for (const auto& p : pts) {
      write_csv_row(sink.stream(), {format_real(s.real()), format_real(s.imag()), format_real(p.value.re()),
                                    format_real(p.value.im()), to_string(p.method), format_real(p.value.abs_err)});
    }
    if (pts.size() == 2) {
      const double rel = std::abs(pts[1].value.value - pts[0].value.value) / std::abs(pts[0].value.value);
      checks.push_back({{"s_re", s.real()}, {"s_im", s.imag()}, {"relative_defect", rel}, {"passed", rel < 1e-3}});
    }
  }
  emit_json({{"identity_checks", checks}}, o.json_out.empty() ? (o.out == "-" ? "/dev/stderr" : o.out + ".check.json") : o.json_out);
  return kExitOk;
}

int cmd_verify(const Options& o) {
  const NumberField K = parse_field_spec(o.field);
  const VerifyReport r = verify_field(K, o.X.value_or(100000));
  json j;
  j["field"] = r.field_spec;
  j["X"] = r.X;
  j["version"] = DZLAB_VERSION;
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"module", c.module}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  j["checks"] = checks;
  j["passed"] = r.all_passed();
  emit_json(j, o.out);
  return r.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dedekind zeta functions, totient measures and their Mellin transforms"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool needs_f) {
    sub->add_option("--field", o.field, "rational | quad:<d> | poly:<c_n>,...,<c_0>")->required();
    sub->add_option("--X", o.X, "sieve bound");
    sub->add_option("--out", o.out, "output file ('-' for stdout)");
    sub->add_flag("--cache", o.cache, "read/write the sieve cache ($DZLAB_CACHE_DIR)");
    if (needs_f) sub->add_option("--f", o.f, "indicator:a,b | polybump:r | smoothbump:a,b [@lambda]")->required();
  };

  auto* field = app.add_subcommand("field", "print field invariants as JSON");
  add_common(field, false);
  auto* sieve = app.add_subcommand("sieve", "build the coefficient tables and write the cache");
  add_common(sieve, false);
  sieve->add_option("--json", o.json_out, "summary JSON path");
  auto* mertens = app.add_subcommand("mertens", "summatory totient against its main term (CSV)");
  add_common(mertens, false);
  mertens->add_option("--xs", o.xs, "comma-separated evaluation points");
  auto* zeta = app.add_subcommand("zeta", "zeta_K values, kappa and zeta_K(2) (JSON)");
  add_common(zeta, false);
  zeta->add_option("--s", o.s, "comma-separated complex points, e.g. 2,0.5+14i");
  auto* measure = app.add_subcommand("measure", "error curve of m_q(f) (CSV) and exponent fit (JSON)");
  add_common(measure, true);
  measure->add_option("--q", o.q, "geometric grid hi:lo:per_decade");
  measure->add_option("--json", o.json_out, "exponent-fit JSON path");
  auto* scan = app.add_subcommand("scan", "critical exponent scan (CSV)");
  add_common(scan, true);
  scan->add_option("--q", o.q, "geometric grid hi:lo:per_decade");
  scan->add_option("--alphas", o.alphas, "comma-separated exponents");
  auto* mellin = app.add_subcommand("mellin", "Mellin transform, numeric and closed form (CSV + JSON)");
  add_common(mellin, true);
  mellin->add_option("--s", o.s, "comma-separated complex points");
  mellin->add_option("--q0", o.q0, "lower cut of the numeric integral");
  mellin->add_option("--json", o.json_out, "identity-check JSON path");
  auto* verify = app.add_subcommand("verify", "run the invariant suite (JSON); exit 1 on any failure");
  add_common(verify, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*field) return cmd_field(o);
    if (*sieve) return cmd_sieve(o);
    if (*mertens) return cmd_mertens(o);
    if (*zeta) return cmd_zeta(o);
    if (*measure) return cmd_measure(o, false);
    if (*scan) return cmd_measure(o, true);
    if (*mellin) return cmd_mellin(o);
    if (*verify) return cmd_verify(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
