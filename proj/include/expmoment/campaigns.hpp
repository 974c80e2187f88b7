#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "expmoment/core.hpp"
#include "expmoment/detail/random.hpp"
#include "expmoment/verification.hpp"

namespace expmoment::campaigns {

// Seeded randomized runs of each check. Case i of a campaign is generated from
// CounterRng(seed, i), so any single case can be replayed on its own.

inline std::vector<double> random_amplitudes(detail::CounterRng& rng, std::size_t N) {
  std::vector<double> a(N);
  for (auto& x : a) x = rng.uniform();
  return a;
}

/// c_n = a_n u_n e^{i theta_n} with u_n uniform on [0, 1].
inline ComplexCoefficients random_dominated(detail::CounterRng& rng, const Instance& a) {
  std::vector<std::complex<double>> c(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    c[n] = std::polar(a.amplitude(n) * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform());
  }
  return ComplexCoefficients(std::move(c), a);
}

using Sink = std::function<void(const VerificationReport&)>;

struct Summary {
  std::uint64_t total = 0;
  std::uint64_t passed = 0;
  double worst_relative_margin = std::numeric_limits<double>::infinity();

  bool all_passed() const noexcept { return total == passed; }

  void add(const VerificationReport& r) {
    ++total;
    if (r.passed) ++passed;
    const double scale = std::max(std::abs(r.rhs), std::numeric_limits<double>::min());
    worst_relative_margin = std::min(worst_relative_margin, r.margin / scale);
  }
};

template <class MakeReport>
Summary run(std::uint64_t count, std::uint64_t seed, VerifyConfig cfg, const Sink& sink, MakeReport&& make) {
  cfg.seed = seed;
  Summary s;
  for (std::uint64_t i = 0; i < count; ++i) {
    detail::CounterRng rng(seed, i);
    const VerificationReport r = make(rng, cfg);
    s.add(r);
    if (sink) sink(r);
  }
  return s;
}

/// N <= 8, q <= 3, a in [0,1], phi in [-10,10], T log-uniform in [0.01, 100].
inline Summary lower_bound(std::uint64_t count, std::uint64_t seed, const VerifyConfig& cfg = {}, const Sink& sink = {}) {
  return run(count, seed, cfg, sink, [](detail::CounterRng& rng, const VerifyConfig& c) {
    const auto N = static_cast<std::size_t>(rng.integer(1, 8));
    const MomentOrder q(static_cast<int>(rng.integer(1, 3)));
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi(N);
    for (auto& x : phi) x = rng.uniform(-10.0, 10.0);
    const double T = rng.log_uniform(0.01, 100.0);
    return check_lower_bound(Instance(std::move(a), std::move(phi)), q, T, c);
  });
}

/// N <= 6, q <= 3, |c_n| <= a_n, T0 in [-1e3, 1e3], T log-uniform in [0.1, 50].
inline Summary covering_majorization(std::uint64_t count, std::uint64_t seed, const VerifyConfig& cfg = {}, const Sink& sink = {}) {
  return run(count, seed, cfg, sink, [](detail::CounterRng& rng, const VerifyConfig& c) {
    const auto N = static_cast<std::size_t>(rng.integer(1, 6));
    const MomentOrder q(static_cast<int>(rng.integer(1, 3)));
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi(N);
    for (auto& x : phi) x = rng.uniform(-10.0, 10.0);
    const Instance inst(std::move(a), std::move(phi));
    const auto coeffs = random_dominated(rng, inst);
    const double T0 = rng.uniform(-1e3, 1e3);
    const double T = rng.log_uniform(0.1, 50.0);
    return check_covering_majorization(coeffs, q, T, T0, c);
  });
}

/// Integer frequencies in [-10, 10] (repeats allowed), N <= 5, q <= 3,
/// H in [-100, 100], T log-uniform in [0.1, 50]; spectral engine with exact
/// omega merging.
inline Summary kernel_majorization(std::uint64_t count, std::uint64_t seed, VerifyConfig cfg = {}, const Sink& sink = {}) {
  cfg.engine = Engine::spectral;
  return run(count, seed, cfg, sink, [](detail::CounterRng& rng, const VerifyConfig& c) {
    const auto N = static_cast<std::size_t>(rng.integer(1, 5));
    const MomentOrder q(static_cast<int>(rng.integer(1, 3)));
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi(N);
    for (auto& x : phi) x = static_cast<double>(rng.integer(-10, 10));
    const Instance inst(std::move(a), std::move(phi));
    const auto coeffs = random_dominated(rng, inst);
    const double H = rng.uniform(-100.0, 100.0);
    const double T = rng.log_uniform(0.1, 50.0);
    return check_kernel_majorization(coeffs, q, T, H, c);
  });
}

/// Quadrature against the spectral closed form; N <= 6, q <= 3,
/// center in [-100, 100], T log-uniform in [0.1, 50]. Odd cases use complex
/// coefficients.
inline Summary engines(std::uint64_t count, std::uint64_t seed, const VerifyConfig& cfg = {}, const Sink& sink = {}) {
  std::uint64_t index = 0;
  return run(count, seed, cfg, sink, [&index](detail::CounterRng& rng, const VerifyConfig& c) {
    const bool complex_case = (index++ % 2) == 1;
    const auto N = static_cast<std::size_t>(rng.integer(1, 6));
    const MomentOrder q(static_cast<int>(rng.integer(1, 3)));
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi(N);
    for (auto& x : phi) x = rng.uniform(-10.0, 10.0);
    const Instance inst(std::move(a), std::move(phi));
    const Window window(rng.uniform(-100.0, 100.0), rng.log_uniform(0.1, 50.0));
    if (complex_case) return check_engine_agreement(random_dominated(rng, inst), q, window, c);
    return check_engine_agreement(inst, q, window, c);
  });
}

/// N <= 6 distinct frequencies in [-10, 10], averages at T = 10, 100, 1000.
inline Summary sup_chain(std::uint64_t count, std::uint64_t seed, const VerifyConfig& cfg = {}, const Sink& sink = {}) {
  return run(count, seed, cfg, sink, [](detail::CounterRng& rng, const VerifyConfig& c) {
    const auto N = static_cast<std::size_t>(rng.integer(1, 6));
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi;
    while (phi.size() < N) {
      const double x = rng.uniform(-10.0, 10.0);
      if (std::all_of(phi.begin(), phi.end(), [x](double y) { return std::abs(x - y) > 1e-3; })) phi.push_back(x);
    }
    return check_sup_chain(Instance(std::move(a), std::move(phi)), {10.0, 100.0, 1000.0}, c);
  });
}

/// 2 <= N <= 8, gamma log-uniform in [0.2, 2], gaps gamma * (1 + U[0, 1]).
inline Summary ingham(std::uint64_t count, std::uint64_t seed, const VerifyConfig& cfg = {}, const Sink& sink = {}) {
  return run(count, seed, cfg, sink, [](detail::CounterRng& rng, const VerifyConfig& c) {
    const auto N = static_cast<std::size_t>(rng.integer(2, 8));
    const double gamma = rng.log_uniform(0.2, 2.0);
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi(N);
    phi[0] = rng.uniform(-5.0, 5.0);
    for (std::size_t n = 1; n < N; ++n) phi[n] = phi[n - 1] + gamma * (1.0 + rng.uniform());
    return check_ingham_mordell(Instance(std::move(a), std::move(phi)), gamma, c);
  });
}

/// Lacunary frequencies: phi_1 in [0.5, 2], successive ratios in [2, 4].
inline Summary bohr(std::uint64_t count, std::uint64_t seed, const VerifyConfig& cfg = {}, const Sink& sink = {}) {
  return run(count, seed, cfg, sink, [](detail::CounterRng& rng, const VerifyConfig& c) {
    const auto N = static_cast<std::size_t>(rng.integer(1, 6));
    auto a = random_amplitudes(rng, N);
    std::vector<double> phi(N);
    phi[0] = rng.uniform(0.5, 2.0);
    for (std::size_t n = 1; n < N; ++n) phi[n] = phi[n - 1] * rng.uniform(2.0, 4.0);
    const auto index = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(N)));
    return check_bohr_bound(Instance(std::move(a), std::move(phi)), index, c);
  });
}

}  // namespace expmoment::campaigns
