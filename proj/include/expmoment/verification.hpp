#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "expmoment/core.hpp"
#include "expmoment/detail/random.hpp"
#include "expmoment/eval.hpp"
#include "expmoment/fejer.hpp"
#include "expmoment/quadrature.hpp"
#include "expmoment/spectral.hpp"

namespace expmoment {

enum class Engine { auto_select, spectral, quadrature, both };

constexpr std::string_view to_string(Engine e) noexcept {
  switch (e) {
    case Engine::auto_select: return "auto";
    case Engine::spectral: return "spectral";
    case Engine::quadrature: return "quadrature";
    case Engine::both: return "both";
  }
  return "unknown";
}

struct VerifyConfig {
  Engine engine = Engine::auto_select;
  QuadratureConfig quadrature;
  /// Pair budget when the spectral engine is requested explicitly.
  std::uint64_t term_budget = 100'000'000;
  /// Auto mode uses the spectral engine up to this many pairs.
  std::uint64_t auto_spectral_budget = 1'000'000;
  double slack_rel = 1e-9;
  double slack_abs = 1e-12;
  /// Relative disagreement between engines treated as a hard failure.
  double engine_agreement = 1e-6;
  std::optional<std::uint64_t> seed;
};

/// Outcome of one inequality lhs <= rhs on one instance.
struct VerificationReport {
  std::string check;
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool passed = false;
  std::string engine;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, double>> details;
  std::vector<std::string> notes;

  std::optional<double> detail(std::string_view key) const {
    for (const auto& [k, v] : details)
      if (k == key) return v;
    return std::nullopt;
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["check"] = check;
    j["lhs"] = lhs;
    j["rhs"] = rhs;
    j["margin"] = margin;
    j["passed"] = passed;
    j["engine"] = engine;
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["instance"] = instance;
    if (!details.empty()) {
      nlohmann::json d = nlohmann::json::object();
      for (const auto& [k, v] : details) d[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
      j["details"] = d;
    }
    if (!notes.empty()) j["notes"] = notes;
    return j;
  }
};

/// lhs <= rhs (1 + slack_rel) + slack_abs
inline bool inequality_holds(double lhs, double rhs, const VerifyConfig& cfg) {
  return lhs <= rhs * (1.0 + cfg.slack_rel) + cfg.slack_abs;
}

namespace detail {

/// A quantity computed by one or both engines.
struct EngineValue {
  std::optional<double> spectral;
  std::optional<double> quadrature;
  std::string engine;

  double primary() const { return spectral ? *spectral : *quadrature; }

  double disagreement() const {
    if (!spectral || !quadrature) return 0.0;
    const double scale = std::max({std::abs(*spectral), std::abs(*quadrature), std::numeric_limits<double>::min()});
    return std::abs(*spectral - *quadrature) / scale;
  }

  static EngineValue exact(double v) { return {v, std::nullopt, "exact"}; }
};

inline std::pair<bool, bool> engines_for(std::size_t N, MomentOrder q, const VerifyConfig& cfg) {
  const std::uint64_t pairs = expansion_pair_count(N, q);
  switch (cfg.engine) {
    case Engine::spectral: return {true, false};
    case Engine::quadrature: return {false, true};
    case Engine::both: return {true, true};
    case Engine::auto_select: break;
  }
  const bool spectral = pairs <= cfg.auto_spectral_budget;
  return {spectral, !spectral};
}

inline std::string engine_name(bool spectral, bool quadrature, bool rational = false) {
  if (spectral && quadrature) return "both";
  if (spectral) return rational ? "spectral_rational" : "spectral";
  return "quadrature";
}

/// Raw integral of |S|^{2q} over the window.
template <ExpandableSource S>
EngineValue window_integral(const S& source, MomentOrder q, const Window& window, const VerifyConfig& cfg) {
  const auto [use_spectral, use_quadrature] = engines_for(source.size(), q, cfg);
  EngineValue v;
  v.engine = engine_name(use_spectral, use_quadrature);
  if (use_spectral) {
    v.spectral = integral_exact(expand(source, q, {.term_budget = cfg.term_budget}), window);
  }
  if (use_quadrature) {
    v.quadrature = windowed_average(source, q, window, cfg.quadrature).value * 2.0 * window.half_width;
  }
  return v;
}

inline bool integer_frequencies(const Instance& instance) {
  for (double phi : instance.frequencies())
    if (phi != std::trunc(phi) || std::abs(phi) >= 0x1.0p40) return false;
  return true;
}

/// int K_T(t - H) |S|^{2q} dt; integer-frequency instances use exact omegas.
template <ExpandableSource S>
EngineValue kernel_integral(const S& source, MomentOrder q, const KernelParams& kernel, const VerifyConfig& cfg,
                            bool rational) {
  const auto [use_spectral, use_quadrature] = engines_for(source.size(), q, cfg);
  EngineValue v;
  v.engine = engine_name(use_spectral, use_quadrature, rational);
  if (use_spectral) {
    const auto e = rational ? rational_mode_expand(source, q, cfg.term_budget)
                            : expand(source, q, {.term_budget = cfg.term_budget});
    v.spectral = fejer_weighted_exact(e, kernel);
  }
  if (use_quadrature) v.quadrature = fejer_weighted_integral(source, q, kernel, cfg.quadrature).value;
  return v;
}

/// Fills lhs/rhs/passed from per-engine values. With both engines the
/// inequality must hold for each, and the engines must agree.
inline void settle(VerificationReport& r, const EngineValue& lhs, const EngineValue& rhs, const VerifyConfig& cfg) {
  r.lhs = lhs.primary();
  r.rhs = rhs.primary();
  r.margin = r.rhs - r.lhs;
  r.passed = inequality_holds(r.lhs, r.rhs, cfg);
  r.engine = lhs.engine == "exact" ? rhs.engine : lhs.engine;
  r.seed = cfg.seed;
  for (const auto* side : {&lhs, &rhs}) {
    const char* name = side == &lhs ? "lhs" : "rhs";
    if (side->spectral && side->quadrature) {
      r.details.emplace_back(std::string(name) + "_spectral", *side->spectral);
      r.details.emplace_back(std::string(name) + "_quadrature", *side->quadrature);
      const double gap = side->disagreement();
      r.details.emplace_back(std::string(name) + "_engine_disagreement", gap);
      if (gap > cfg.engine_agreement) {
        r.passed = false;
        r.notes.push_back(std::string(name) + ": engines disagree beyond tolerance");
      }
    }
  }
  const auto quadrature_or_primary = [](const EngineValue& v) { return v.quadrature ? *v.quadrature : v.primary(); };
  r.passed = r.passed && inequality_holds(quadrature_or_primary(lhs), quadrature_or_primary(rhs), cfg);
}

/// Dense grid max of |S| over [lo, hi] plus a Lipschitz
/// correction L h / 2 that turns it into an upper bound for the true sup.
template <CoefficientSource S>
std::pair<double, double> grid_sup(const S& source, double lo, double hi, std::size_t max_points = 1u << 22) {
  double fmin = source.frequency(0), fmax = source.frequency(0);
  for (std::size_t n = 1; n < source.size(); ++n) {
    fmin = std::min(fmin, source.frequency(n));
    fmax = std::max(fmax, source.frequency(n));
  }
  const double center = 0.5 * (fmin + fmax);
  double lipschitz = 0.0;
  for (std::size_t n = 0; n < source.size(); ++n)
    lipschitz += std::abs(source.coefficient(n)) * std::abs(source.frequency(n) - center);
  const double span = fmax - fmin;
  double h = span > 0.0 ? std::numbers::pi / (8.0 * span) : (hi - lo);
  if (hi > lo) h = std::min(h, (hi - lo) / 4.0);
  std::size_t points = hi > lo ? static_cast<std::size_t>(std::ceil((hi - lo) / h)) + 1 : 1;
  if (points % 2 == 0 && lo == -hi) ++points;  // keep t = 0 on symmetric grids
  if (points > max_points) {
    points = max_points | 1;
    h = (hi - lo) / static_cast<double>(points - 1);
  }
  const auto grid = points == 1 ? EvaluationGrid(std::vector<double>{lo}) : EvaluationGrid::uniform(lo, hi, points);
  const auto values = eval_batch(source, grid, MomentOrder(1));
  double best = 0.0;
  for (double v : values) best = std::max(best, v);
  return {std::sqrt(best), points == 1 ? 0.0 : 0.5 * lipschitz * h};
}

}  // namespace detail

/// Lower bound with explicit constant:
///   (1/3) (sum a_n^2)^q <= (1/2T) int_{|t|<=T} |S|^{2q}.
/// The 1/3 comes from the covering factor 3 of the majorization lemma and the
/// lower Khintchine constant 1 (Jensen: E|sum eps z|^{2q} >= (sum |z|^2)^q).
inline VerificationReport check_lower_bound(const Instance& instance, MomentOrder q, double T,
                                         const VerifyConfig& cfg = {}) {
  VerificationReport r;
  r.check = "theorem1";
  r.instance = summarize(instance) + " q=" + std::to_string(q.value()) + " T=" + detail::short_double(T);
  r.notes.push_back("constant c_q = 1/3: covering factor 3 with lower Khintchine constant 1 (Jensen)");
  const Window window = Window::centered(T);
  if (instance.all_zero()) {
    r.engine = "trivial";
    r.passed = true;
    r.seed = cfg.seed;
    r.notes.push_back("all amplitudes zero: trivially satisfied");
    return r;
  }
  const double lhs = std::pow(energy(instance), q.value()) / 3.0;
  auto rhs = detail::window_integral(instance, q, window, cfg);
  if (rhs.spectral) *rhs.spectral /= 2.0 * T;
  if (rhs.quadrature) *rhs.quadrature /= 2.0 * T;
  detail::settle(r, detail::EngineValue::exact(lhs), rhs, cfg);
  return r;
}

/// int_{|t - T0| <= T} |sum c e^{i t phi}|^{2q} <= 3 int_{|t| <= T} |sum a e^{i t phi}|^{2q}.
inline VerificationReport check_covering_majorization(const ComplexCoefficients& c, MomentOrder q, double T, double T0,
                                      const VerifyConfig& cfg = {}) {
  VerificationReport r;
  r.check = "lemma";
  r.instance = summarize(c) + " q=" + std::to_string(q.value()) + " T=" + detail::short_double(T) +
               " T0=" + detail::short_double(T0);
  const auto lhs = detail::window_integral(c, q, Window(T0, T), cfg);
  auto rhs = detail::window_integral(c.dominating(), q, Window::centered(T), cfg);
  if (rhs.spectral) *rhs.spectral *= 3.0;
  if (rhs.quadrature) *rhs.quadrature *= 3.0;
  detail::settle(r, lhs, rhs, cfg);
  return r;
}

/// int K_T(t - H) |sum c e^{i t phi}|^{2q} <= int K_T(t) |sum a e^{i t phi}|^{2q}.
inline VerificationReport check_kernel_majorization(const ComplexCoefficients& c, MomentOrder q, double T, double H,
                                     const VerifyConfig& cfg = {}) {
  VerificationReport r;
  r.check = "eq45";
  r.instance = summarize(c) + " q=" + std::to_string(q.value()) + " T=" + detail::short_double(T) +
               " H=" + detail::short_double(H);
  const bool rational = detail::integer_frequencies(c.dominating());
  const auto lhs = detail::kernel_integral(c, q, KernelParams(T, H), cfg, rational);
  const auto rhs = detail::kernel_integral(c.dominating(), q, KernelParams(T, 0.0), cfg, rational);
  detail::settle(r, lhs, rhs, cfg);
  return r;
}

/// Engine cross-check: |quadrature - spectral| <= max(rel * |spectral|, abs)
/// for the windowed average.
template <ExpandableSource S>
VerificationReport check_engine_agreement(const S& source, MomentOrder q, const Window& window,
                                          const VerifyConfig& cfg = {}, double rel = 1e-7, double abs = 1e-10) {
  VerificationReport r;
  r.check = "engines";
  r.instance = summarize(source) + " q=" + std::to_string(q.value()) + " center=" + detail::short_double(window.center) +
               " T=" + detail::short_double(window.half_width);
  r.engine = "both";
  r.seed = cfg.seed;
  const double spectral = windowed_average_exact(expand(source, q, {.term_budget = cfg.term_budget}), window).value;
  const auto quad = windowed_average(source, q, window, cfg.quadrature);
  r.lhs = std::abs(quad.value - spectral);
  r.rhs = std::max(rel * std::abs(spectral), abs);
  r.margin = r.rhs - r.lhs;
  r.passed = r.lhs <= r.rhs;
  r.details = {{"spectral", spectral}, {"quadrature", quad.value}, {"quadrature_error", quad.error_estimate}};
  return r;
}

/// Finite-T form of sup a_n <= limsup (1/2T) int |S| <= sup |S|.
///
/// For each n, (1/2T) int |S| >= |(1/2T) int S e^{-i t phi_n}| >= a_n - delta_n(T)
/// with delta_n(T) = sum_{m != n} a_m |sin((phi_m - phi_n) T)| / (|phi_m - phi_n| T).
/// The report's lhs is max_n (a_n - delta_n) at the largest T and rhs the
/// average there; in addition every average must stay below the grid sup.
inline VerificationReport check_sup_chain(const Instance& instance, const std::vector<double>& Ts,
                                          const VerifyConfig& cfg = {}) {
  if (Ts.empty()) throw Error(ErrorKind::InvalidArgument, "sup chain needs at least one T");
  for (std::size_t i = 0; i < instance.size(); ++i)
    for (std::size_t j = i + 1; j < instance.size(); ++j)
      if (instance.frequency(i) == instance.frequency(j)) {
        throw Error(ErrorKind::InvalidArgument, "sup chain needs distinct frequencies");
      }
  VerificationReport r;
  r.check = "sup-chain";
  r.instance = summarize(instance);
  r.engine = "quadrature";
  r.seed = cfg.seed;
  r.notes.push_back("limsup approximated at finite T; delta(T) is the explicit finite-T deviation bound");
  bool sandwich_ok = true;
  double last_average = 0.0;
  for (double T : Ts) {
    const auto avg = abs_average(instance, Window::centered(T), cfg.quadrature);
    const auto [sup, correction] = detail::grid_sup(instance, -T, T);
    const std::string tag = "T=" + detail::short_double(T);
    r.details.emplace_back("average[" + tag + "]", avg.value);
    r.details.emplace_back("grid_sup[" + tag + "]", sup);
    r.details.emplace_back("grid_sup_correction[" + tag + "]", correction);
    if (!inequality_holds(avg.value, sup + correction, cfg)) {
      sandwich_ok = false;
      r.notes.push_back("average exceeds sup at " + tag);
    }
    last_average = avg.value;
  }
  const double T = Ts.back();
  double best = -std::numeric_limits<double>::infinity();
  double best_delta = 0.0, a_max = 0.0;
  for (std::size_t n = 0; n < instance.size(); ++n) {
    detail::CompensatedSum delta;
    for (std::size_t m = 0; m < instance.size(); ++m) {
      if (m == n) continue;
      const double d = instance.frequency(m) - instance.frequency(n);
      delta += instance.amplitude(m) * std::abs(std::sin(d * T)) / (std::abs(d) * T);
    }
    const double candidate = instance.amplitude(n) - delta.value();
    if (candidate > best) {
      best = candidate;
      best_delta = delta.value();
    }
    a_max = std::max(a_max, instance.amplitude(n));
  }
  r.details.emplace_back("max_amplitude", a_max);
  r.details.emplace_back("finite_T_deviation", best_delta);
  r.lhs = best;
  r.rhs = last_average;
  r.margin = r.rhs - r.lhs;
  r.passed = sandwich_ok && inequality_holds(r.lhs, r.rhs, cfg);
  return r;
}

/// K = 1 form of the Ingham-Mordell bound: max a_n <= (1/T) int_{-T}^{T} |S|
/// at T = pi / gamma, for strictly increasing frequencies with gaps >= gamma.
inline VerificationReport check_ingham_mordell(const Instance& instance, double gamma, const VerifyConfig& cfg = {}) {
  if (instance.size() < 2) throw Error(ErrorKind::BadGap, "Ingham-Mordell needs N >= 2");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(ErrorKind::BadGap, "gap gamma must be positive");
  for (std::size_t n = 1; n < instance.size(); ++n) {
    const double gap = instance.frequency(n) - instance.frequency(n - 1);
    if (!(gap >= gamma * (1.0 - 1e-12))) {
      throw Error(ErrorKind::BadGap, "gap " + std::to_string(gap) + " between frequencies " + std::to_string(n - 1) +
                                         " and " + std::to_string(n) + " is below gamma");
    }
  }
  VerificationReport r;
  r.check = "ingham";
  r.instance = summarize(instance) + " gamma=" + detail::short_double(gamma);
  r.engine = "quadrature";
  r.seed = cfg.seed;
  r.notes.push_back("checks the K = 1 consequence; Mordell's exact K is not used");
  const double T = std::numbers::pi / gamma;
  const auto avg = abs_average(instance, Window::centered(T), cfg.quadrature);
  r.lhs = *std::max_element(instance.amplitudes().begin(), instance.amplitudes().end());
  r.rhs = 2.0 * avg.value;
  r.margin = r.rhs - r.lhs;
  r.passed = inequality_holds(r.lhs, r.rhs, cfg);
  r.details = {{"T", T}, {"quadrature_error", 2.0 * avg.error_estimate}};
  return r;
}

/// Bohr-type coefficient bound for 0 < phi_1 < ... < phi_N and 1-based n:
///   a_n <= sup_{|t| <= R} |S(t)| / (prod_{j<n} cos(pi phi_j / 2 phi_n) prod_{j>n} cos(pi phi_n / 2 phi_j)),
///   R = (pi/2) (n / phi_n + sum_{j>n} 1 / phi_j).
/// The grid maximum never exceeds the true sup, so using it only makes the
/// check harder.
inline VerificationReport check_bohr_bound(const Instance& instance, std::size_t n, const VerifyConfig& cfg = {}) {
  const std::size_t N = instance.size();
  if (n < 1 || n > N) throw Error(ErrorKind::InvalidArgument, "index n must be in [1, N]");
  if (!(instance.frequency(0) > 0.0)) throw Error(ErrorKind::InvalidArgument, "Bohr bound needs phi_1 > 0");
  for (std::size_t j = 1; j < N; ++j)
    if (!(instance.frequency(j) > instance.frequency(j - 1))) {
      throw Error(ErrorKind::InvalidArgument, "Bohr bound needs strictly increasing frequencies");
    }
  const double phi_n = instance.frequency(n - 1);
  double product = 1.0;
  double radius = static_cast<double>(n) / phi_n;
  for (std::size_t j = 1; j <= N; ++j) {
    if (j == n) continue;
    const double phi_j = instance.frequency(j - 1);
    const double factor = j < n ? std::cos(std::numbers::pi * phi_j / (2.0 * phi_n))
                                : std::cos(std::numbers::pi * phi_n / (2.0 * phi_j));
    if (factor <= 1e-12) {
      throw Error(ErrorKind::DegenerateCosine, "cosine factor for j=" + std::to_string(j) + " is degenerate");
    }
    product *= factor;
    if (j > n) radius += 1.0 / phi_j;
  }
  radius *= std::numbers::pi / 2.0;
  const auto [sup, correction] = detail::grid_sup(instance, -radius, radius);
  VerificationReport r;
  r.check = "bohr";
  r.instance = summarize(instance) + " n=" + std::to_string(n);
  r.engine = "grid";
  r.seed = cfg.seed;
  r.notes.push_back("first cosine product read as j = 1..n-1 (the j = 0 factor is undefined)");
  r.lhs = instance.amplitude(n - 1);
  r.rhs = sup / product;
  r.margin = r.rhs - r.lhs;
  r.passed = inequality_holds(r.lhs, r.rhs, cfg);
  r.details = {{"cosine_product", product}, {"radius", radius}, {"grid_sup", sup}, {"grid_sup_correction", correction}};
  return r;
}

}  // namespace expmoment
