#ifndef BESSELRULES_VERIFY_HPP_
#define BESSELRULES_VERIFY_HPP_

// Parameter grids that pit each closed form against its brute-force sum.

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "besselrules/coefficients.hpp"
#include "besselrules/errors.hpp"
#include "besselrules/parallel.hpp"
#include "besselrules/spectroscopy.hpp"
#include "besselrules/sum_rules.hpp"

namespace besselrules {

enum class Suite { core, generalized, spectroscopy, all };

inline Suite parse_suite(const std::string& s) {
  if (s == "core") return Suite::core;
  if (s == "generalized") return Suite::generalized;
  if (s == "spectroscopy") return Suite::spectroscopy;
  if (s == "all") return Suite::all;
  throw InvalidArgument("unknown suite '" + s + "' (core, generalized, spectroscopy, all)");
}

using ReportTask = std::function<SumRuleReport()>;

inline std::vector<SumRuleReport> run_tasks(const std::vector<ReportTask>& tasks, unsigned threads) {
  return parallel_map<SumRuleReport>(tasks.size(), [&](std::size_t i) { return tasks[i](); }, threads);
}

namespace detail {

inline void core_tasks(std::vector<ReportTask>& tasks, const CoeffTable& table) {
  for (double M : {0.5, 1.0, 2.0, 5.0})
    for (int k = 0; k <= 6; ++k)
      for (int s = -8; s <= 8; ++s)
        tasks.push_back([&table, k, s, M] {
          const auto brute = b_ks_brute_impl(k, s, M, 1e-15);
          return SumRuleReport::make(RuleId::b_ks, {{"k", k}, {"s", s}, {"M", M}},
                                     b_ks_closed(table, k, s, M), brute.value, brute.order);
        });
  for (double M : {0.5, 1.0, 2.0, 5.0})
    for (int k = 1; k <= 6; ++k)
      for (int s = 1; s <= k; ++s)
        tasks.push_back([k, s, M] {
          // B_{k,-s} = (-1)^{k+s} B_{k,s}, both from the brute-force path
          const auto plus = b_ks_brute_impl(k, s, M, 1e-15);
          const auto minus = b_ks_brute_impl(k, -s, M, 1e-15);
          const double sign = (k + s) % 2 == 0 ? 1.0 : -1.0;
          return SumRuleReport::make(RuleId::b_ks_parity, {{"k", k}, {"s", s}, {"M", M}},
                                     sign * plus.value, minus.value, plus.order);
        });
  for (auto [y1, y2] : {std::pair{1.0, 0.7}, std::pair{2.0, -1.3}, std::pair{0.5, 0.5}})
    for (int k = 0; k <= 4; ++k)
      for (int q = -4; q <= 4; ++q)
        tasks.push_back([&table, k, q, y1, y2] {
          const auto [lhs, rhs] = addition_formula_sides(k, q, y1, y2, &table);
          return SumRuleReport::make(RuleId::addition, {{"k", k}, {"q", q}, {"y1", y1}, {"y2", y2}}, lhs, rhs,
                                     truncation_bound(std::abs(y1), kBruteTolerance) + brute_margin(k));
        });
  for (double y : {0.0, 0.5, 1.3, 3.0})
    for (int k = 0; k <= 4; ++k)
      for (int q = -4; q <= 4; ++q)
        tasks.push_back([&table, k, q, y] {
          const auto [lhs, rhs] = alternating_sum_sides(k, q, y, &table);
          return SumRuleReport::make(RuleId::alternating, {{"k", k}, {"q", q}, {"y", y}}, rhs, lhs,
                                     truncation_bound(std::abs(y), kBruteTolerance) + brute_margin(k));
        });
  for (int k = 1; k <= 4; ++k)
    for (double y : {0.3, 1.0, 2.0, 5.0})
      for (int q = -10; q <= 10; ++q)
        tasks.push_back([&table, k, q, y] {
          const auto [lhs, rhs] = recursion_sides(k, q, y, &table);
          return SumRuleReport::make(RuleId::recursion, {{"k", k}, {"q", q}, {"y", y}}, lhs, rhs, k);
        });
}

inline GeneralModulation three_harmonic_modulation() {
  return GeneralModulation({{1, Complex(0.3, -0.4)}, {2, Complex(0.0, 0.2)}, {3, Complex(-0.1, 0.05)}}, 1.0);
}

inline void generalized_tasks(std::vector<ReportTask>& tasks) {
  for (double x : {0.0, 1.0, 2.5})
    for (double y : {0.0, 2.0, -1.0})
      for (int q = -3; q <= 3; ++q)
        tasks.push_back([q, x, y] {
          const auto [lhs, rhs] = jcs_sum_rule_sides(q, x, y);
          const int cut = truncation_bound(std::abs(x), kBruteTolerance) + truncation_bound(std::abs(y), kBruteTolerance) + 16;
          return SumRuleReport::make(RuleId::jcs_rule, {{"q", q}, {"x", x}, {"y", y}}, rhs, lhs, cut);
        });
  for (double y1 : {0.0, 1.0, 2.0})
    for (double y2 : {0.0, 0.7, -1.5})
      for (int s = -4; s <= 4; ++s)
        tasks.push_back([s, y1, y2] {
          const auto [lhs, rhs] = jbar_sum_rule_sides(s, y1, y2);
          const int cut = truncation_bound(std::abs(y1), kBruteTolerance) + 2 * truncation_bound(std::abs(y2), kBruteTolerance) + 24;
          return SumRuleReport::make(RuleId::jbar_rule, {{"s", s}, {"y1", y1}, {"y2", y2}}, rhs, lhs, cut);
        });
  struct Named {
    double id;  // 1 sinusoidal, 2 two-tone, 3 three-harmonic
    GeneralModulation mod;
  };
  const std::vector<Named> mods = {{1, GeneralModulation::sinusoidal(2.0, 1.0)},
                                   {2, GeneralModulation::two_tone(1.0, 0.5, 1.0)},
                                   {3, three_harmonic_modulation()}};
  for (const auto& m : mods)
    for (int s = -4; s <= 4; ++s)
      tasks.push_back([m, s] {
        const auto r = general_modulation_rules(m.mod, s);
        return SumRuleReport::make(RuleId::modulation_energy, {{"modulation", m.id}, {"s", s}},
                                   Complex(s == 0 ? 1.0 : 0.0), r.energy, r.truncation_order);
      });
  for (const auto& m : mods)
    for (int s = -4; s <= 4; ++s)
      tasks.push_back([m, s] {
        const auto r = general_modulation_rules(m.mod, s);
        return SumRuleReport::make(RuleId::modulation_first_moment, {{"modulation", m.id}, {"s", s}},
                                   r.expected_first_moment, r.first_moment, r.truncation_order);
      });
}

// A_s values are O(1/gamma); gamma = 1 keeps the pass test relative.
inline void spectroscopy_tasks(std::vector<ReportTask>& tasks) {
  constexpr double gamma = 1.0;
  for (double M : {0.5, 1.0, 2.0})
    for (double ratio : {0.5, 1.0, 3.0, 10.0})
      for (int s = 0; s <= 3; ++s) {
        const double Omega = gamma / ratio;
        const std::vector<std::pair<std::string, double>> params = {
            {"s", s}, {"M", M}, {"gamma", gamma}, {"Omega", Omega}};
        const int cut = truncation_bound(M, 1e-16) + 8;
        tasks.push_back([=] {
          return SumRuleReport::make(RuleId::newberger_vs_direct, params, a_s_newberger(s, M, gamma, Omega),
                                     a_s_direct(s, M, gamma, Omega), cut);
        });
        tasks.push_back([=] {
          return SumRuleReport::make(RuleId::series_vs_direct, params, a_s_series(s, M, gamma, Omega, 40).value,
                                     a_s_direct(s, M, gamma, Omega), cut);
        });
        if (s > 0)
          tasks.push_back([=] {
            const Complex plus = a_s_direct(s, M, gamma, Omega);
            const Complex mirrored = (s % 2 == 0 ? 1.0 : -1.0) * std::conj(plus);
            return SumRuleReport::make(RuleId::negative_s_symmetry, params, mirrored,
                                       a_s_direct(-s, M, gamma, Omega), cut);
          });
      }
}

}  // namespace detail

inline std::vector<SumRuleReport> run_suite(Suite suite, unsigned threads = default_thread_count()) {
  const CoeffTable table = build_coeff_table(6);
  std::vector<ReportTask> tasks;
  if (suite == Suite::core || suite == Suite::all) detail::core_tasks(tasks, table);
  if (suite == Suite::generalized || suite == Suite::all) detail::generalized_tasks(tasks);
  if (suite == Suite::spectroscopy || suite == Suite::all) detail::spectroscopy_tasks(tasks);
  return run_tasks(tasks, threads);
}

}  // namespace besselrules

#endif  // BESSELRULES_VERIFY_HPP_
