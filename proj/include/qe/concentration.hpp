#pragma once

// Monte Carlo checks of the concentration estimates on products of unitary
// groups: the averaged rotated-diagonal tail bound and the Lipschitz bound
// for U -> sum_k |e_k* U* A U e_k|.

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "qe/parallel.hpp"
#include "qe/qe_stats.hpp"
#include "qe/unitary.hpp"

namespace qe {

inline constexpr double kTraceTol = 1e-10;

/// sqrt( (sum_s ||A_s||_HS^2 / d_s) / (sum_s d_s) ).
inline double alpha_of(std::span<const CMatrix> blocks) {
  if (blocks.empty()) fail(ErrorCode::EmptyBlocks, "alpha_of needs at least one block");
  double num = 0, den = 0;
  for (const auto& a : blocks) {
    const double h = hs_norm(a);
    num += h * h / double(a.rows());
    den += double(a.rows());
  }
  return std::sqrt(num / den);
}

struct TailExperiment {
  std::vector<CMatrix> blocks;
  double alpha = 0;
  std::vector<double> betas;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  /// Validates traces and computes alpha.
  static TailExperiment make(std::vector<CMatrix> blocks, std::vector<double> betas, std::size_t trials,
                             std::uint64_t seed) {
    if (blocks.empty()) fail(ErrorCode::EmptyBlocks, "tail experiment needs at least one block");
    for (std::size_t s = 0; s < blocks.size(); ++s) {
      if (blocks[s].rows() != blocks[s].cols() || blocks[s].rows() == 0)
        fail(ErrorCode::LengthMismatch, "block " + std::to_string(s) + " is not square");
      if (std::abs(blocks[s].trace()) > kTraceTol)
        fail(ErrorCode::NonZeroTrace, "block " + std::to_string(s) + " has trace of modulus " +
                                          std::to_string(std::abs(blocks[s].trace())));
    }
    if (trials == 0) fail(ErrorCode::ParamOutOfRange, "trials must be positive");
    TailExperiment e;
    e.alpha = alpha_of(blocks);
    e.blocks = std::move(blocks);
    e.betas = std::move(betas);
    e.trials = trials;
    e.seed = seed;
    return e;
  }

  std::size_t dim_sum() const {
    std::size_t s = 0;
    for (const auto& b : blocks) s += std::size_t(b.rows());
    return s;
  }
};

struct TailRow {
  double beta = 0;
  double frequency = 0;
  double bound = 0;           // exp(-eta beta^2 sum d_s)
  double standard_error = 0;  // binomial SE at the bound: sqrt(b (1 - b) / N), b = min(bound, 1)
  double empirical_se = 0;    // sqrt(p (1 - p) / N) at the observed frequency
  bool asserted = false;      // the bound is claimed only for beta >= 2
  bool within() const { return frequency <= bound + 3.0 * standard_error; }
};

struct TailResult {
  std::vector<TailRow> rows;
  double alpha = 0;
  std::size_t dim_sum = 0;
  std::size_t trials = 0;
  double mean_statistic = 0;
};

/// The statistic E_{(s,k) in T} |e_k* U_s* A_s U_s e_k| for one draw.
inline double tail_statistic(std::span<const CMatrix> blocks, std::span<const CMatrix> unitaries) {
  double total = 0;
  std::size_t count = 0;
  for (std::size_t s = 0; s < blocks.size(); ++s) {
    const CMatrix rotated = unitaries[s].adjoint() * blocks[s] * unitaries[s];
    for (Eigen::Index k = 0; k < rotated.rows(); ++k) total += std::abs(rotated(k, k));
    count += std::size_t(rotated.rows());
  }
  return total / double(count);
}

inline TailResult run_tail(const TailExperiment& e) {
  if (e.trials == 0) fail(ErrorCode::ParamOutOfRange, "trials must be positive");
  for (std::size_t s = 0; s < e.blocks.size(); ++s)
    if (std::abs(e.blocks[s].trace()) > kTraceTol)
      fail(ErrorCode::NonZeroTrace, "block " + std::to_string(s) + " is not traceless");
  std::vector<double> stats(e.trials);
  const Stream root(e.seed, "tail");
  parallel_for(e.trials, [&](std::size_t t) {
    Stream rng = root.derive(t);
    std::vector<CMatrix> us;
    us.reserve(e.blocks.size());
    for (const auto& a : e.blocks) us.push_back(haar_sample(std::size_t(a.rows()), rng));
    stats[t] = tail_statistic(e.blocks, us);
  });

  TailResult r;
  r.alpha = e.alpha;
  r.dim_sum = e.dim_sum();
  r.trials = e.trials;
  for (double v : stats) r.mean_statistic += v;
  r.mean_statistic /= double(e.trials);
  auto betas = e.betas;
  std::sort(betas.begin(), betas.end());
  const double n = double(e.trials);
  for (double beta : betas) {
    std::size_t hits = 0;
    for (double v : stats)
      if (v > beta * e.alpha) ++hits;  // strict: for A = 0 the statistic sits at the threshold
    TailRow row;
    row.beta = beta;
    row.frequency = double(hits) / n;
    row.bound = std::exp(-kEta * beta * beta * double(r.dim_sum));
    const double b = std::min(row.bound, 1.0);
    row.standard_error = std::sqrt(b * (1.0 - b) / n);
    row.empirical_se = std::sqrt(row.frequency * (1.0 - row.frequency) / n);
    row.asserted = beta >= 2.0;
    r.rows.push_back(row);
  }
  return r;
}

/// f(U) = sum_k |e_k* U* A U e_k|.
inline double rotated_abs_sum(const CMatrix& a, const CMatrix& u) {
  const CMatrix rotated = u.adjoint() * a * u;
  double s = 0;
  for (Eigen::Index k = 0; k < rotated.rows(); ++k) s += std::abs(rotated(k, k));
  return s;
}

struct LipschitzResult {
  double worst_ratio = 0;
  double bound = 0;  // 2 ||A||_HS
  std::size_t pairs = 0;
  bool within() const { return worst_ratio <= bound + 1e-8; }
};

/// Worst |f(U) - f(V)| / g(U, V) over sampled pairs. Even-indexed pairs are
/// independent Haar draws; odd-indexed pairs are V = U exp(i t H) with a
/// random Hermitian H and small t, probing the local Lipschitz constant.
inline LipschitzResult lipschitz_check(const CMatrix& a, std::size_t pairs, Stream& rng) {
  if (a.rows() != a.cols() || a.rows() == 0) fail(ErrorCode::LengthMismatch, "lipschitz_check needs a square matrix");
  const std::size_t d = std::size_t(a.rows());
  LipschitzResult out;
  out.bound = 2.0 * hs_norm(a);
  out.pairs = pairs;
  for (std::size_t p = 0; p < pairs; ++p) {
    const CMatrix u = haar_sample(d, rng);
    CMatrix v;
    if (p % 2 == 0) {
      v = haar_sample(d, rng);
    } else {
      CMatrix h{Eigen::Index(d), Eigen::Index(d)};
      for (Eigen::Index j = 0; j < h.cols(); ++j)
        for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, j) = rng.complex_normal();
      h = (h + h.adjoint()).eval() / 2.0;
      const double t = std::pow(10.0, -1.0 - 3.0 * rng.uniform());
      const CMatrix step = (cplx(0, t) * h).exp();
      v = u * step;
    }
    const double g = geodesic_distance(u, v);
    if (g <= 1e-12) continue;
    const double ratio = std::abs(rotated_abs_sum(a, u) - rotated_abs_sum(a, v)) / g;
    out.worst_ratio = std::max(out.worst_ratio, ratio);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shipped presets.

enum class PresetKind { SecondMoment, Tail };

struct Preset {
  std::string name;
  PresetKind kind;
  std::vector<CMatrix> matrices;  // second-moment test set, or tail blocks
  std::vector<double> betas;      // tail only
  std::size_t default_trials = 0;
};

namespace detail {

inline CMatrix alternating_diagonal(std::size_t d) {
  CMatrix a = CMatrix::Zero(Eigen::Index(d), Eigen::Index(d));
  for (std::size_t i = 0; i < d; ++i) a(Eigen::Index(i), Eigen::Index(i)) = (i % 2 == 0) ? 1.0 : -1.0;
  return a;
}

inline CMatrix random_complex(std::size_t d, Stream& rng) {
  CMatrix a{Eigen::Index(d), Eigen::Index(d)};
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = rng.complex_normal();
  return a;
}

inline CMatrix traceless(CMatrix a) {
  const cplx t = a.trace() / double(a.rows());
  a -= t * CMatrix::Identity(a.rows(), a.cols());
  return a;
}

}  // namespace detail

/// The four fixed matrices used for the second-moment identity at dimension d:
/// alternating diagonal, random Hermitian, random traceless, random general.
inline std::vector<CMatrix> second_moment_matrices(std::size_t d) {
  Stream rng(20240601, "preset/second-moment/d" + std::to_string(d));
  const CMatrix h = detail::random_complex(d, rng);
  std::vector<CMatrix> out;
  out.push_back(detail::alternating_diagonal(d));
  out.push_back((h + h.adjoint()) / 2.0);
  out.push_back(detail::traceless(detail::random_complex(d, rng)));
  out.push_back(detail::random_complex(d, rng));
  return out;
}

inline std::vector<std::string> preset_names() {
  return {"smA-d1", "smA-d2", "smA-d3", "smA-d5", "tail-d2", "tail-sum20", "tail-sum60"};
}

inline std::optional<Preset> find_preset(const std::string& name) {
  const std::vector<double> betas{1.0, 1.5, 2.0, 2.5, 3.0};
  for (std::size_t d : {1, 2, 3, 5})
    if (name == "smA-d" + std::to_string(d))
      return Preset{name, PresetKind::SecondMoment, second_moment_matrices(d), {}, 100000};
  if (name == "tail-d2") return Preset{name, PresetKind::Tail, {detail::alternating_diagonal(2)}, betas, 10000};
  if (name == "tail-sum20")
    return Preset{name, PresetKind::Tail, std::vector<CMatrix>(10, detail::alternating_diagonal(2)), betas, 10000};
  if (name == "tail-sum60") {
    // twenty 3x3 blocks: ten diag(1, 0, -1), ten fixed random traceless
    Stream rng(20240601, "preset/tail-sum60");
    std::vector<CMatrix> blocks;
    CMatrix diag = CMatrix::Zero(3, 3);
    diag(0, 0) = 1.0;
    diag(2, 2) = -1.0;
    for (int i = 0; i < 10; ++i) blocks.push_back(diag);
    for (int i = 0; i < 10; ++i) blocks.push_back(detail::traceless(detail::random_complex(3, rng)));
    return Preset{name, PresetKind::Tail, std::move(blocks), betas, 10000};
  }
  return std::nullopt;
}

}  // namespace qe
