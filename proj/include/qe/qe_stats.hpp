#pragma once

// Quantum-ergodicity statistics of an orthonormal basis:
//
//   QE(f) = E_{phi in B} | E_x[ f(x) |phi(x)|^2 ] - E f |
//
// and lower-bound searches for its supremum over ||f||_2 = 1.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "qe/basis.hpp"

namespace qe {

/// eta = 1 / (12 pi^2), the explicit concentration constant.
inline constexpr double kEta = 1.0 / (12.0 * std::numbers::pi * std::numbers::pi);

inline double qe_statistic(const EigenBasis& basis, const CVector& f) {
  const std::size_t n = basis.order();
  if (std::size_t(f.size()) != n)
    fail(ErrorCode::LengthMismatch, "function has length " + std::to_string(f.size()) + ", basis functions " +
                                        std::to_string(n));
  const cplx mean_f = f.mean();
  double total = 0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto phi = basis.function(i);
    cplx s = 0;
    for (std::size_t x = 0; x < n; ++x) s += f[Eigen::Index(x)] * std::norm(phi[Eigen::Index(x)]);
    total += std::abs(s / double(n) - mean_f);
  }
  return total / double(basis.size());
}

/// g_phi(x) = |phi(x)|^2 - 1, one row per basis function.
inline RMatrix mass_deviation(const EigenBasis& basis) {
  return basis.values.cwiseAbs2().transpose().array() - 1.0;
}

/// Normalized L2 norm sqrt(E_x |f|^2).
template <class V>
double l2_norm(const V& f) {
  return f.norm() / std::sqrt(double(f.size()));
}

struct SupRandom {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
};
struct SupAlternating {
  std::size_t restarts = 50;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 200;
};
struct SupBruteSign {};
using SupMode = std::variant<SupRandom, SupAlternating, SupBruteSign>;

inline constexpr std::size_t kBruteSignCap = 14;

/// Lower bound on sup_{||f||_2 = 1} QE(f) and the real witness achieving it.
/// Witnesses are real-valued in every mode, so the value bounds the real
/// supremum from below (and hence the complex one).
struct SupEstimate {
  double value = 0;
  RVector witness;
};

namespace detail {

// QE(f) for real f through the mass-deviation rows: mean_phi |E_x f g_phi|.
inline double real_statistic(const RMatrix& g, const RVector& f) {
  return (g * f).cwiseAbs().mean() / double(f.size());
}

inline RVector unit_or_constant(const RVector& h) {
  const double nrm = l2_norm(h);
  if (nrm <= 1e-300) return RVector::Ones(h.size());
  return h / nrm;
}

inline RVector signs_of(const RVector& v) {
  RVector s(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) s[i] = v[i] < 0 ? -1.0 : 1.0;
  return s;
}

}  // namespace detail

inline SupEstimate qe_sup_estimate(const EigenBasis& basis, const SupMode& mode) {
  const RMatrix g = mass_deviation(basis);
  const auto n = Eigen::Index(basis.order());
  SupEstimate best{0.0, RVector::Ones(n)};
  auto consider = [&](const RVector& f) {
    const double v = detail::real_statistic(g, f);
    if (v > best.value) best = {v, f};
  };

  if (const auto* m = std::get_if<SupRandom>(&mode)) {
    Stream rng(m->seed, "sup/random");
    for (std::size_t t = 0; t < m->samples; ++t) {
      RVector f(n);
      for (Eigen::Index x = 0; x < n; ++x) f[x] = rng.normal();
      consider(detail::unit_or_constant(f));
    }
  } else if (const auto* m = std::get_if<SupAlternating>(&mode)) {
    const Stream root(m->seed, "sup/alternating");
    for (std::size_t r = 0; r < m->restarts; ++r) {
      Stream rng = root.derive(r);
      RVector f(n);
      for (Eigen::Index x = 0; x < n; ++x) f[x] = rng.normal();
      f = detail::unit_or_constant(f);
      RVector signs = detail::signs_of(g * f);
      for (std::size_t it = 0; it < m->max_iterations; ++it) {
        f = detail::unit_or_constant(g.transpose() * signs);
        const RVector next = detail::signs_of(g * f);
        if (next == signs) break;
        signs = next;
      }
      consider(f);
    }
  } else {
    const std::size_t count = basis.size();
    if (count > kBruteSignCap)
      fail(ErrorCode::ModeUnavailable, "brute_sign enumerates 2^|B| patterns; |B| = " + std::to_string(count) +
                                           " exceeds cap " + std::to_string(kBruteSignCap));
    // for fixed signs s the optimal f is proportional to g^T s; s and -s agree
    const RMatrix gt = g.transpose();
    RVector s{Eigen::Index(count)};
    for (std::size_t mask = 0; mask < (std::size_t{1} << (count ? count - 1 : 0)); ++mask) {
      s[0] = 1.0;
      for (std::size_t i = 1; i < count; ++i) s[Eigen::Index(i)] = (mask >> (i - 1)) & 1 ? -1.0 : 1.0;
      const RVector h = gt * s;
      if (l2_norm(h) > 1e-300) consider(h / l2_norm(h));
    }
  }
  return best;
}

/// 5 / sqrt(eta) * sqrt(sum d_rho / n) = 10 pi sqrt(3) * sqrt(sum d_rho / n).
inline double predicted_epsilon(const IrrepSet& irreps) { return 5.0 / std::sqrt(kEta) * std::sqrt(total_dim_ratio(irreps)); }

/// Deterministic random complex test functions with ||f||_2 = 1.
inline std::vector<CVector> random_unit_functions(std::size_t n, std::size_t count, std::uint64_t seed,
                                                  std::string_view label = "test-functions") {
  const Stream root(seed, label);
  std::vector<CVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Stream rng = root.derive(i);
    CVector f{Eigen::Index(n)};
    for (Eigen::Index x = 0; x < f.size(); ++x) f[x] = rng.complex_normal();
    out.push_back(f / l2_norm(f));
  }
  return out;
}

struct QeReport {
  std::vector<double> deviations;  // QE(f_i) for each test function
  double mean_deviation = 0;
  double sup_estimate = 0;
  std::string sup_mode;            // mode that achieved sup_estimate
  CVector sup_witness;
  double predicted_bound = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0;
};

/// Evaluates test functions and sup searches. The reported sup estimate is
/// the largest value found by any mode, test functions included.
inline QeReport make_report(const EigenBasis& basis, const IrrepSet* irreps, const std::vector<CVector>& tests,
                            std::size_t restarts, std::size_t random_samples) {
  QeReport rep;
  rep.seed = basis.seed;
  for (const auto& f : tests) rep.deviations.push_back(qe_statistic(basis, f));
  if (!rep.deviations.empty()) {
    double s = 0;
    for (double v : rep.deviations) s += v;
    rep.mean_deviation = s / double(rep.deviations.size());
  }
  rep.sup_witness = CVector::Ones(Eigen::Index(basis.order()));
  rep.sup_mode = "none";
  auto take = [&](const SupEstimate& e, const char* name) {
    if (e.value > rep.sup_estimate || rep.sup_mode == "none") {
      rep.sup_estimate = e.value;
      rep.sup_witness = e.witness.cast<cplx>();
      rep.sup_mode = name;
    }
  };
  take(qe_sup_estimate(basis, SupAlternating{restarts, basis.seed}), "alternating");
  if (random_samples) take(qe_sup_estimate(basis, SupRandom{random_samples, basis.seed}), "random");
  if (basis.size() <= kBruteSignCap) take(qe_sup_estimate(basis, SupBruteSign{}), "brute_sign");
  for (std::size_t i = 0; i < tests.size(); ++i)
    if (rep.deviations[i] > rep.sup_estimate) {
      rep.sup_estimate = rep.deviations[i];
      rep.sup_mode = "test_function:" + std::to_string(i);
      rep.sup_witness = tests[i];
    }
  rep.predicted_bound = irreps ? predicted_epsilon(*irreps) : std::nan("");
  return rep;
}

}  // namespace qe
