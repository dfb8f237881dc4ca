// besselrules: coefficient tables, sum-rule verification, sideband spectra,
// lineshape sweeps and A_s evaluation from the command line.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
// 3 numeric-regime error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "besselrules/besselrules.hpp"

namespace br = besselrules;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRegime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string output;
  std::string format;
  bool stamp = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format,
                const std::vector<std::string>& formats) {
  cmd->add_option("-o,--output", c.output, "output file (default: stdout)");
  cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember(formats))->capture_default_str();
  c.format = default_format;
  cmd->add_flag("--stamp", c.stamp, "record a generation timestamp in the output metadata");
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void emit(const Common& c, const std::string& body) {
  std::string text = body;
  if (c.stamp && c.format == "csv") text = "# generated " + timestamp() + "\n" + text;
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw UsageError("cannot open '" + c.output + "' for writing");
  out << text;
  if (!out) throw UsageError("failed writing '" + c.output + "'");
}

std::string dump_json(br::Json j, const Common& c) {
  if (c.stamp) j["generated"] = timestamp();
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

struct CoeffsArgs {
  Common common;
  int k_max = 4;
};

int run_coeffs(const CoeffsArgs& a) {
  if (a.k_max < 0 || a.k_max > br::kMaxTableOrder)
    throw UsageError("--k-max must lie in [0, 64]");
  const br::CoeffTable table = br::build_coeff_table(a.k_max);
  const br::DualPathCheck check = br::dual_path_check(table);
  if (a.common.format == "json")
    emit(a.common, dump_json(br::coeff_table_to_json(table, &check), a.common));
  else
    emit(a.common, br::coeff_table_to_csv(table, &check));
  std::cerr << "dual-path check: " << check.status << "\n";
  if (check.status == "mismatch") {
    for (const auto& [k, n] : check.mismatches) std::cerr << "  mismatch at k=" << k << " n=" << n << "\n";
    return kExitVerify;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  std::string suite = "all";
  double tol = 1e-9;
};

int run_verify(const VerifyArgs& a) {
  if (!(a.tol >= 0.0)) throw UsageError("--tol must be non-negative");
  const auto reports = br::run_suite(br::parse_suite(a.suite));
  std::size_t failed = 0;
  for (const auto& r : reports)
    if (!r.passes(a.tol)) ++failed;
  if (a.common.format == "json") {
    std::string body = br::reports_to_jsonl(reports, a.tol);
    if (a.common.stamp) body = br::Json{{"generated", timestamp()}}.dump() + "\n" + body;
    emit(a.common, body);
  } else {
    emit(a.common, br::reports_to_csv(reports, a.tol));
  }
  std::cerr << reports.size() << " checks, " << failed << " outside tolerance " << a.tol << "\n";
  return failed == 0 ? kExitOk : kExitVerify;
}

// ---------------------------------------------------------------------------

struct SidebandArgs {
  Common common;
  std::optional<double> M;
  std::optional<double> y1;
  std::optional<double> y2;
  std::string phi_coeffs;
  double Omega = 1.0;
  std::optional<int> n_max;
  double tol = 1e-14;
};

// [[n, re, im], ...] with n >= 0; negative harmonics follow by conjugation.
br::GeneralModulation parse_phi_coeffs(const std::string& text, double Omega) {
  br::Json j;
  try {
    j = br::Json::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(std::string("--phi-coeffs: not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw UsageError("--phi-coeffs: expected a JSON list of [n, re, im] entries");
  std::map<int, br::Complex> coeffs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    const std::string where = "--phi-coeffs entry " + std::to_string(i) + " (" + e.dump() + ")";
    if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number() || !e[2].is_number())
      throw UsageError(where + ": expected [n, re, im] with integer n");
    const int n = e[0].get<int>();
    if (n < 0) throw UsageError(where + ": n must be non-negative");
    if (coeffs.count(n)) throw UsageError(where + ": duplicate harmonic");
    if (n == 0 && e[2].get<double>() != 0.0) throw UsageError(where + ": phi_0 must be real");
    coeffs[n] = {e[1].get<double>(), e[2].get<double>()};
  }
  return br::GeneralModulation(coeffs, Omega);
}

int run_sidebands(const SidebandArgs& a) {
  const int specs = (a.M ? 1 : 0) + ((a.y1 || a.y2) ? 1 : 0) + (a.phi_coeffs.empty() ? 0 : 1);
  if (specs != 1) throw UsageError("give exactly one of --M, --y1/--y2, --phi-coeffs");
  std::optional<br::GeneralModulation> mod;
  if (a.M) mod = br::GeneralModulation::sinusoidal(*a.M, a.Omega);
  else if (a.y1 || a.y2) mod = br::GeneralModulation::two_tone(a.y1.value_or(0.0), a.y2.value_or(0.0), a.Omega);
  else mod = parse_phi_coeffs(a.phi_coeffs, a.Omega);

  const int window = a.n_max ? *a.n_max : mod->support_bound(br::kBruteTolerance) + 8;
  if (window < 0) throw UsageError("--n-max must be non-negative");
  const br::SidebandSpectrum g = br::general_sidebands(*mod, window);

  int lo = -window, hi = window;
  if (!a.n_max) {
    while (lo < 0 && std::abs(g(lo)) < a.tol) ++lo;
    while (hi > 0 && std::abs(g(hi)) < a.tol) --hi;
  }
  double energy = 0.0;
  for (int n = -window; n <= window; ++n) energy += std::norm(g(n));

  if (a.common.format == "json") {
    br::Json rows = br::Json::array();
    for (int n = lo; n <= hi; ++n)
      rows.push_back({{"n", n}, {"re", g(n).real()}, {"im", g(n).imag()}, {"abs2", std::norm(g(n))}});
    br::Json j{{"sidebands", std::move(rows)},
               {"energy_sum", energy},
               {"samples", g.samples},
               {"alias_estimate", g.alias_estimate},
               {"truncation_tail", g.truncation_tail}};
    emit(a.common, dump_json(std::move(j), a.common));
  } else {
    std::string out = "n,re,im,abs2\n";
    for (int n = lo; n <= hi; ++n)
      out += std::to_string(n) + ',' + br::format_number(g(n).real()) + ',' + br::format_number(g(n).imag()) +
             ',' + br::format_number(std::norm(g(n))) + '\n';
    out += "# energy_sum=" + br::format_number(energy) + '\n';
    emit(a.common, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PhysicalArgs {
  double omega0 = 1e6;
  std::optional<double> omega0_over_gamma;
  double gamma = 1.0;
  double force = 1.0;
  double Omega = 0.02;
  double M = 1.0;
  bool normalized = false;
};

void add_physical(CLI::App* cmd, PhysicalArgs& p) {
  cmd->add_option("--omega0", p.omega0, "resonance frequency (rad/s)")->capture_default_str();
  cmd->add_option("--omega0-over-gamma", p.omega0_over_gamma, "resonance in units of gamma (with --normalized)");
  cmd->add_option("--gamma", p.gamma, "linewidth (rad/s)")->capture_default_str();
  cmd->add_option("--force", p.force, "drive amplitude per unit mass")->capture_default_str();
  cmd->add_option("--Omega", p.Omega, "modulation frequency (rad/s)")->capture_default_str();
  cmd->add_option("--M", p.M, "modulation index")->capture_default_str();
  cmd->add_flag("--normalized", p.normalized, "quantities in units of gamma (gamma = 1)");
}

br::OscillatorParams to_params(const PhysicalArgs& a, double delta) {
  br::OscillatorParams p;
  p.gamma = a.normalized ? 1.0 : a.gamma;
  p.omega0 = a.omega0;
  if (a.omega0_over_gamma) {
    if (!a.normalized) throw UsageError("--omega0-over-gamma requires --normalized");
    p.omega0 = *a.omega0_over_gamma;
  }
  p.force = a.force;
  p.Omega = a.Omega;
  p.M = a.M;
  p.delta = delta;
  p.validate();
  return p;
}

struct LineshapeArgs {
  Common common;
  PhysicalArgs phys;
  double delta_min = -5.0;
  double delta_max = 5.0;
  double delta_step = 0.5;
  std::string method = "exact";
  int harmonics = 2;
  int periods = 2;
  int samples_per_period = 64;
};

int run_lineshape(const LineshapeArgs& a) {
  if (!(a.delta_step > 0.0) || !(a.delta_max >= a.delta_min))
    throw UsageError("sweep needs --Delta-step > 0 and --Delta-max >= --Delta-min");
  if (a.harmonics < 1) throw UsageError("--harmonics must be at least 1");
  const int points = static_cast<int>(std::floor((a.delta_max - a.delta_min) / a.delta_step + 1e-9)) + 1;
  const br::OscillatorParams base = to_params(a.phys, 0.0);

  const auto rows = br::parallel_map<br::HarmonicDecomposition>(
      static_cast<std::size_t>(points),
      [&](std::size_t i) {
        br::OscillatorParams p = base;
        const double Delta = a.delta_min + static_cast<double>(i) * a.delta_step;
        p.delta = Delta * p.gamma / 2.0;
        if (a.method == "exact") return br::modulated_power_exact(p, a.harmonics);
        if (a.method == "perturbative") return br::modulated_power_perturbative(p);
        br::TimeDomainOptions opt;
        opt.periods = a.periods;
        opt.samples_per_period = a.samples_per_period;
        opt.harmonics = a.harmonics;
        auto d = br::time_domain_oracle(p, br::GeneralModulation::sinusoidal(p.M, p.Omega), opt);
        d.domain_warning = !p.perturbative_valid();
        return d;
      },
      br::default_thread_count());

  if (a.common.format == "json") {
    br::Json points_json = br::Json::array();
    for (int i = 0; i < points; ++i) {
      const double Delta = a.delta_min + i * a.delta_step;
      br::Json row = br::harmonics_to_json(rows[static_cast<std::size_t>(i)]);
      row["Delta"] = Delta;
      row["delta"] = Delta * base.gamma / 2.0;
      points_json.push_back(std::move(row));
    }
    br::Json params = br::params_to_json(base);
    params.erase("delta");  // per point
    params.erase("Delta");
    br::Json j{{"method", a.method}, {"params", std::move(params)}, {"points", std::move(points_json)}};
    emit(a.common, dump_json(std::move(j), a.common));
  } else {
    std::string out = br::harmonics_csv_header(a.harmonics);
    for (int i = 0; i < points; ++i) {
      const double Delta = a.delta_min + i * a.delta_step;
      out += br::harmonics_csv_row(Delta, Delta * base.gamma / 2.0, rows[static_cast<std::size_t>(i)], a.harmonics);
    }
    emit(a.common, out);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct ASumArgs {
  Common common;
  int s = 1;
  double M = 1.0;
  double gamma = 1.0;
  double Omega = 0.1;
  std::vector<std::string> methods{"direct"};
  int order = 3;
  int k_max = 40;
  bool expand = false;
};

struct MethodError : std::runtime_error {
  MethodError(const std::string& method, const std::exception& e, bool regime)
      : std::runtime_error(method + ": " + e.what()), regime(regime) {}
  bool regime;
};

int run_a_sum(const ASumArgs& a) {
  if (a.order < 0 || a.order > br::kMaxTableOrder) throw UsageError("--order must lie in [0, 64]");
  std::vector<std::pair<std::string, br::Complex>> values;
  std::vector<br::Json> extras;
  bool warning = false;
  for (const auto& m : a.methods) {
    try {
      if (m == "direct") {
        values.emplace_back(m, br::a_s_direct(a.s, a.M, a.gamma, a.Omega));
      } else if (m == "newberger") {
        values.emplace_back(m, br::a_s_newberger(a.s, a.M, a.gamma, a.Omega));
      } else if (m == "series") {
        const auto r = br::a_s_series(a.s, a.M, a.gamma, a.Omega, a.k_max);
        values.emplace_back(m, r.value);
        extras.push_back({{"method", m}, {"last_term", r.last_term}, {"terms", r.terms}});
      } else {
        const auto r = br::a_s_geometric(a.s, a.M, a.gamma, a.Omega, a.order);
        values.emplace_back(m, r.value);
        warning = warning || r.domain_warning;
        extras.push_back({{"method", m}, {"order", a.order}, {"domain_warning", r.domain_warning}});
      }
    } catch (const br::InvalidArgument& e) {
      throw MethodError(m, e, false);
    } catch (const std::exception& e) {
      throw MethodError(m, e, true);
    }
  }

  std::vector<br::EtaTerm> terms;
  if (a.expand) terms = br::geometric_expansion_terms(br::build_coeff_table(a.order), a.s, a.order);

  if (a.common.format == "json") {
    br::Json vals = br::Json::array();
    for (const auto& [m, v] : values) vals.push_back({{"method", m}, {"re", v.real()}, {"im", v.imag()}});
    br::Json j{{"s", a.s}, {"M", a.M}, {"gamma", a.gamma}, {"Omega", a.Omega}, {"values", std::move(vals)}};
    if (values.size() > 1) {
      br::Json matrix = br::Json::array();
      for (const auto& [m1, v1] : values) {
        br::Json row = br::Json::array();
        for (const auto& [m2, v2] : values) row.push_back(std::abs(v1 - v2) / std::max(1e-300, std::abs(v1)));
        matrix.push_back(std::move(row));
      }
      j["relative_residuals"] = std::move(matrix);
    }
    if (!extras.empty()) j["details"] = extras;
    if (a.expand) {
      br::Json ex = br::Json::array();
      for (const auto& t : terms)
        ex.push_back({{"eta_power", t.power}, {"phase", t.phase.to_string()}, {"coefficient", t.coefficient.to_string()},
                      {"poly", br::poly_to_json(t.coefficient)}, {"value_at_M", t.coefficient.evaluate(a.M)}});
      j["expansion"] = {{"units", "1/gamma"}, {"terms", std::move(ex)}};
    }
    emit(a.common, dump_json(std::move(j), a.common));
  } else {
    std::string out = "method,re,im";
    if (values.size() > 1)
      for (const auto& [m, v] : values) out += ",rel_residual_vs_" + m;
    out += '\n';
    for (const auto& [m1, v1] : values) {
      out += m1 + ',' + br::format_number(v1.real()) + ',' + br::format_number(v1.imag());
      if (values.size() > 1)
        for (const auto& [m2, v2] : values)
          out += ',' + br::format_number(std::abs(v1 - v2) / std::max(1e-300, std::abs(v1)));
      out += '\n';
    }
    if (a.expand) {
      out += "eta_power,phase,coefficient,value_at_M\n";
      for (const auto& t : terms)
        out += std::to_string(t.power) + ',' + t.phase.to_string() + ",\"" + t.coefficient.to_string() + "\"," +
               br::format_number(t.coefficient.evaluate(a.M)) + '\n';
    }
    emit(a.common, out);
  }
  if (warning) std::cerr << "warning: geometric expansion outside its validity range\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bessel-product sum rules: coefficient tables, verification, sidebands and lineshapes"};
  app.require_subcommand(1);

  CoeffsArgs coeffs;
  auto* c_cmd = app.add_subcommand("coeffs", "exact coefficient table D_{k,n}(y)");
  c_cmd->add_option("--k-max", coeffs.k_max, "highest derivative order")->capture_default_str();
  add_common(c_cmd, coeffs.common, "json", {"json", "csv"});

  VerifyArgs verify;
  auto* v_cmd = app.add_subcommand("verify", "check sum rules against brute-force sums");
  v_cmd->add_option("--suite", verify.suite, "core, generalized, spectroscopy or all")
      ->check(CLI::IsMember({"core", "generalized", "spectroscopy", "all"}))
      ->capture_default_str();
  v_cmd->add_option("--tol,--tolerance", verify.tol, "pass threshold on |closed - brute| / max(1, |closed|)")
      ->capture_default_str();
  add_common(v_cmd, verify.common, "json", {"json", "csv"});

  SidebandArgs side;
  auto* s_cmd = app.add_subcommand("sidebands", "sideband amplitudes G_n of a periodic phase modulation");
  s_cmd->add_option("--M", side.M, "sinusoidal modulation index");
  s_cmd->add_option("--y1", side.y1, "two-tone amplitude at the fundamental");
  s_cmd->add_option("--y2", side.y2, "two-tone amplitude at the second harmonic");
  s_cmd->add_option("--phi-coeffs", side.phi_coeffs, "JSON list [[n, re, im], ...], n >= 0");
  s_cmd->add_option("--Omega", side.Omega, "modulation frequency")->capture_default_str();
  s_cmd->add_option("--n-max", side.n_max, "emit |n| <= n_max (default: trim below --tol)");
  s_cmd->add_option("--tol", side.tol, "trim threshold on |G_n|")->capture_default_str();
  add_common(s_cmd, side.common, "csv", {"json", "csv"});

  LineshapeArgs line;
  auto* l_cmd = app.add_subcommand("lineshape", "harmonic lineshapes over a detuning sweep");
  add_physical(l_cmd, line.phys);
  l_cmd->add_option("--Delta-min", line.delta_min, "sweep start, Delta = 2 delta / gamma")->capture_default_str();
  l_cmd->add_option("--Delta-max", line.delta_max, "sweep end")->capture_default_str();
  l_cmd->add_option("--Delta-step", line.delta_step, "sweep step")->capture_default_str();
  l_cmd->add_option("--method", line.method, "exact, perturbative or ode")
      ->check(CLI::IsMember({"exact", "perturbative", "ode"}))
      ->capture_default_str();
  l_cmd->add_option("--harmonics", line.harmonics, "harmonics to report")->capture_default_str();
  l_cmd->add_option("--periods", line.periods, "ode: modulation periods analysed")->capture_default_str();
  l_cmd->add_option("--samples-per-period", line.samples_per_period, "ode: power samples per period")
      ->capture_default_str();
  add_common(l_cmd, line.common, "csv", {"json", "csv"});

  ASumArgs asum;
  auto* a_cmd = app.add_subcommand("a-sum", "A_s = sum_n J_n J_{n-s} / (gamma + i n Omega)");
  a_cmd->add_option("--s", asum.s, "sideband offset")->capture_default_str();
  a_cmd->add_option("--M", asum.M, "modulation index")->capture_default_str();
  a_cmd->add_option("--gamma", asum.gamma, "linewidth")->capture_default_str();
  a_cmd->add_option("--Omega", asum.Omega, "modulation frequency")->capture_default_str();
  a_cmd->add_option("--method", asum.methods, "comma-separated: direct, newberger, series, geometric")
      ->delimiter(',')
      ->check(CLI::IsMember({"direct", "newberger", "series", "geometric"}));
  a_cmd->add_option("--order", asum.order, "geometric expansion order")->capture_default_str();
  a_cmd->add_option("--k-max", asum.k_max, "series terms")->capture_default_str();
  a_cmd->add_flag("--expand", asum.expand, "emit the exact eta-expansion coefficients");
  add_common(a_cmd, asum.common, "json", {"json", "csv"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_cmd->parsed()) return run_coeffs(coeffs);
    if (v_cmd->parsed()) return run_verify(verify);
    if (s_cmd->parsed()) return run_sidebands(side);
    if (l_cmd->parsed()) return run_lineshape(line);
    if (a_cmd->parsed()) return run_a_sum(asum);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const MethodError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.regime ? kExitRegime : kExitUsage;
  } catch (const br::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    // InvalidRegime, RangeError, AccuracyError, ConvergenceError, OracleFailure
    std::cerr << "error: " << e.what() << "\n";
    return kExitRegime;
  }
  return kExitUsage;
}
