#ifndef BESSELRULES_IO_HPP_
#define BESSELRULES_IO_HPP_

// JSON and CSV renderings. Every writer is deterministic: identical inputs
// give identical bytes.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "besselrules/coefficients.hpp"
#include "besselrules/spectroscopy.hpp"
#include "besselrules/sum_rules.hpp"

namespace besselrules {

using Json = nlohmann::ordered_json;

// 17 significant digits; negative zero prints as 0.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Shortest round-trip form, for parameter labels.
inline std::string format_short(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Coefficient tables

inline Json poly_to_json(const DyadicPoly& p) {
  Json arr = Json::array();
  for (const auto& [power, c] : p.terms())
    arr.push_back({{"power", power}, {"num", c.numerator().str()}, {"exp2", c.exponent()}});
  return arr;
}

// "k,n,power,num,exp2" lines for one entry; shared by the CSV writer and the
// checksum so both see the same canonical form.
inline void append_canonical_rows(std::string& out, int k, int n, const DyadicPoly& p) {
  for (const auto& [power, c] : p.terms()) {
    out += std::to_string(k) + ',' + std::to_string(n) + ',' + std::to_string(power) + ',' +
           c.numerator().str() + ',' + std::to_string(c.exponent()) + '\n';
  }
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct DualPathCheck {
  std::string status;  // "ok", "mismatch" or "skipped"
  std::string recursion_checksum;
  std::string faa_di_bruno_checksum;
  std::vector<std::pair<int, int>> mismatches;
};

// Recomputes every entry with k >= 1 by Faa di Bruno and compares exactly.
inline DualPathCheck dual_path_check(const CoeffTable& table) {
  DualPathCheck r;
  std::string canon_rec, canon_fdb;
  if (table.k_max() > kMaxFaaDiBrunoOrder) {
    r.status = "skipped";
    return r;
  }
  for (int k = 0; k <= table.k_max(); ++k) {
    for (int n = -k; n <= k; ++n) {
      const DyadicPoly& rec = table.entry(k, n);
      const DyadicPoly fdb = k == 0 ? rec : coeff_faa_di_bruno(k, n);
      append_canonical_rows(canon_rec, k, n, rec);
      append_canonical_rows(canon_fdb, k, n, fdb);
      if (!(rec == fdb)) r.mismatches.emplace_back(k, n);
    }
  }
  r.recursion_checksum = hex64(fnv1a(canon_rec));
  r.faa_di_bruno_checksum = hex64(fnv1a(canon_fdb));
  r.status = r.mismatches.empty() ? "ok" : "mismatch";
  return r;
}

inline Json coeff_table_to_json(const CoeffTable& table, const DualPathCheck* check = nullptr) {
  Json j;
  j["k_max"] = table.k_max();
  Json entries = Json::array();
  for (int k = 0; k <= table.k_max(); ++k) {
    for (int n = -k; n <= k; ++n) {
      const DyadicPoly& p = table.entry(k, n);
      if (p.is_zero()) continue;
      Json e{{"k", k}, {"n", n}, {"poly", poly_to_json(p)}};
      if (check != nullptr)
        for (const auto& [mk, mn] : check->mismatches)
          if (mk == k && mn == n) e["mismatch"] = true;
      entries.push_back(std::move(e));
    }
  }
  j["entries"] = std::move(entries);
  if (check != nullptr) {
    Json c{{"status", check->status}};
    if (check->status != "skipped") {
      c["recursion"] = check->recursion_checksum;
      c["faa_di_bruno"] = check->faa_di_bruno_checksum;
    }
    j["dual_path_checksum"] = std::move(c);
  }
  return j;
}

inline std::string coeff_table_to_csv(const CoeffTable& table, const DualPathCheck* check = nullptr) {
  std::string out = "k,n,power,num,exp2";
  if (check != nullptr) out += ",mismatch";
  out += '\n';
  for (int k = 0; k <= table.k_max(); ++k) {
    for (int n = -k; n <= k; ++n) {
      std::string rows;
      append_canonical_rows(rows, k, n, table.entry(k, n));
      if (check == nullptr) {
        out += rows;
        continue;
      }
      bool bad = false;
      for (const auto& [mk, mn] : check->mismatches) bad = bad || (mk == k && mn == n);
      std::istringstream lines(rows);
      for (std::string line; std::getline(lines, line);) out += line + (bad ? ",1\n" : ",0\n");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sum-rule reports

inline std::string params_label(const SumRuleReport& r) {
  std::string s;
  for (const auto& [name, value] : r.parameters) {
    if (!s.empty()) s += ';';
    s += name + '=' + format_short(value);
  }
  return s;
}

inline Json report_to_json(const SumRuleReport& r, double tol) {
  Json params = Json::object();
  for (const auto& [name, value] : r.parameters) params[name] = value;
  return Json{{"rule_id", to_string(r.rule_id)},
              {"parameters", std::move(params)},
              {"closed_form", {r.closed_form.real(), r.closed_form.imag()}},
              {"brute_force", {r.brute_force.real(), r.brute_force.imag()}},
              {"truncation_order", r.truncation_order},
              {"abs_residual", r.abs_residual},
              {"rel_residual", r.rel_residual},
              {"pass", r.passes(tol)}};
}

inline std::string reports_to_jsonl(const std::vector<SumRuleReport>& reports, double tol) {
  std::string out;
  for (const auto& r : reports) out += report_to_json(r, tol).dump() + '\n';
  return out;
}

inline std::string reports_to_csv(const std::vector<SumRuleReport>& reports, double tol) {
  std::string out =
      "rule_id,params,closed_re,closed_im,brute_re,brute_im,abs_residual,rel_residual,truncation_order,pass\n";
  for (const auto& r : reports) {
    out += to_string(r.rule_id) + ',' + params_label(r) + ',' + format_number(r.closed_form.real()) + ',' +
           format_number(r.closed_form.imag()) + ',' + format_number(r.brute_force.real()) + ',' +
           format_number(r.brute_force.imag()) + ',' + format_number(r.abs_residual) + ',' +
           format_number(r.rel_residual) + ',' + std::to_string(r.truncation_order) + ',' +
           (r.passes(tol) ? "1" : "0") + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Harmonic decompositions

inline std::string harmonics_csv_header(int harmonics) {
  std::string s = "Delta,delta,dc";
  for (int h = 1; h <= harmonics; ++h)
    s += ",h" + std::to_string(h) + "_cos,h" + std::to_string(h) + "_sin";
  return s + ",domain_warning\n";
}

inline std::string harmonics_csv_row(double Delta, double delta, const HarmonicDecomposition& d, int harmonics) {
  std::string s = format_number(Delta) + ',' + format_number(delta) + ',' + format_number(d.dc);
  for (int h = 1; h <= harmonics; ++h) s += ',' + format_number(d.cos_amp(h)) + ',' + format_number(d.sin_amp(h));
  return s + ',' + (d.domain_warning ? "1" : "0") + '\n';
}

inline Json params_to_json(const OscillatorParams& p) {
  return Json{{"omega0", p.omega0}, {"gamma", p.gamma}, {"force", p.force}, {"delta", p.delta},
              {"Omega", p.Omega},   {"M", p.M},         {"Delta", p.Delta()}, {"eta", p.eta()},
              {"epsilon_abs", std::abs(p.epsilon())},     {"n_max", p.n_max()},
              {"perturbative_valid", p.perturbative_valid()}};
}

inline Json harmonics_to_json(const HarmonicDecomposition& d) {
  return Json{{"dc", d.dc},
              {"cos_amps", d.cos_amps},
              {"sin_amps", d.sin_amps},
              {"domain_warning", d.domain_warning},
              {"truncation_order", d.truncation_order}};
}

}  // namespace besselrules

#endif  // BESSELRULES_IO_HPP_
