#pragma once

// Products H x Z/p with generators S x {-1, 1}, their spectra, eigenspace
// delocalization ratios and the indicator-function lower witness for QE.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qe/basis.hpp"
#include "qe/catalog.hpp"
#include "qe/parallel.hpp"
#include "qe/qe_stats.hpp"

namespace qe {

inline constexpr double kCollisionTol = 1e-8;

inline bool is_prime(std::size_t p) {
  if (p < 2) return false;
  for (std::size_t q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

struct ProductInstance {
  CayleyGraph base;
  std::size_t p = 0;
  CayleyGraph graph;  // H x Z/p, element (h, z) stored at h * p + z

  std::size_t base_order() const { return base.order(); }
  Element element(Element h, std::size_t z) const { return Element(h * p + z); }
};

inline ProductInstance make_product(const FiniteGroup& h, const std::vector<Element>& gens, std::size_t p) {
  if (!is_prime(p)) fail(ErrorCode::NotPrime, "p = " + std::to_string(p) + " is not prime");
  if (p <= 3) fail(ErrorCode::PTooSmall, "p = " + std::to_string(p) + " must exceed 3");
  ProductInstance out;
  out.base = CayleyGraph{h, GenSet::make(h, gens)};
  out.p = p;
  const FiniteGroup g = product(h, cyclic(p));
  std::vector<Element> pg;
  for (Element s : out.base.gens.elements()) {
    pg.push_back(Element(s * p + 1));
    pg.push_back(Element(s * p + (p - 1)));
  }
  out.graph = CayleyGraph{g, GenSet::make(g, pg)};
  return out;
}

struct Eigenspace {
  double eigenvalue = 0;
  CMatrix basis;  // n x m, orthonormal for the normalized scalar product
  std::size_t dim() const { return std::size_t(basis.cols()); }
};

struct BaseSpectrum {
  std::size_t order = 0;
  std::vector<Eigenspace> spaces;  // nonzero eigenvalues, descending
  std::size_t kernel_dim = 0;
};

/// Groups the columns of an eigenbasis by eigenvalue. Eigenvalues closer
/// than tol (chained) form one eigenspace; those within tol of 0 form the kernel.
inline BaseSpectrum base_spectrum(const EigenBasis& basis, double tol = kCollisionTol) {
  const std::size_t n = basis.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return basis.eigenvalues[Eigen::Index(a)] > basis.eigenvalues[Eigen::Index(b)];
  });
  BaseSpectrum out;
  out.order = basis.order();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && basis.eigenvalues[Eigen::Index(idx[j - 1])] - basis.eigenvalues[Eigen::Index(idx[j])] < tol) ++j;
    double mean = 0;
    for (std::size_t t = i; t < j; ++t) mean += basis.eigenvalues[Eigen::Index(idx[t])];
    mean /= double(j - i);
    if (std::abs(mean) < tol) {
      out.kernel_dim += j - i;
    } else {
      Eigenspace e;
      e.eigenvalue = mean;
      e.basis.resize(basis.values.rows(), Eigen::Index(j - i));
      for (std::size_t t = i; t < j; ++t) e.basis.col(Eigen::Index(t - i)) = basis.function(idx[t]);
      out.spaces.push_back(std::move(e));
    }
    i = j;
  }
  return out;
}

/// Base spectrum from the representation basis when irreps are available,
/// else from dense diagonalization.
inline BaseSpectrum base_spectrum(const CayleyGraph& graph, double tol = kCollisionTol) {
  const FiniteGroup& g = graph.group;
  if (g.construction() || g.is_abelian()) return base_spectrum(build_basis(irreps_for(g), graph.gens, 0), tol);
  return base_spectrum(dense_eigenbasis(graph), tol);
}

struct ProductValue {
  std::size_t j = 0;  // index into the base eigenspaces
  std::size_t k = 0;  // cycle index, 0..(p-1)/2
  double value = 0;
  std::size_t multiplicity = 0;  // dim(Lambda_j) * dim(E_k)
};

struct Collision {
  std::size_t a = 0, b = 0;  // indices into SpectrumTable::products
  double difference = 0;
};

struct SpectrumTable {
  std::vector<double> base_eigenvalues;
  std::vector<std::size_t> base_dims;
  std::size_t kernel_dim = 0;
  std::size_t p = 0;
  std::vector<double> mu;  // 2 cos(2 pi k / p)
  std::vector<std::size_t> mu_dims;
  std::vector<ProductValue> products;
  std::vector<Collision> collisions;
  double tolerance = kCollisionTol;
  std::size_t accounted = 0;  // sum of multiplicities plus kernel_dim * p
  std::size_t order = 0;      // |H| p
  std::string advisory;

  bool bookkeeping_exact() const { return accounted == order; }

  /// All adjacency eigenvalues of the product with multiplicity, ascending.
  std::vector<double> multiset() const {
    std::vector<double> out(kernel_dim * p, 0.0);
    for (const auto& v : products) out.insert(out.end(), v.multiplicity, v.value);
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline SpectrumTable product_spectrum(const ProductInstance& inst, const BaseSpectrum& base,
                                      double tol = kCollisionTol) {
  SpectrumTable t;
  t.p = inst.p;
  t.tolerance = tol;
  t.kernel_dim = base.kernel_dim;
  t.order = inst.graph.order();
  for (const auto& e : base.spaces) {
    t.base_eigenvalues.push_back(e.eigenvalue);
    t.base_dims.push_back(e.dim());
  }
  for (std::size_t k = 0; k <= (inst.p - 1) / 2; ++k) {
    t.mu.push_back(2.0 * std::cos(2.0 * std::numbers::pi * double(k) / double(inst.p)));
    t.mu_dims.push_back(k == 0 ? 1 : 2);
  }
  for (std::size_t j = 0; j < t.base_eigenvalues.size(); ++j)
    for (std::size_t k = 0; k < t.mu.size(); ++k)
      t.products.push_back({j, k, t.base_eigenvalues[j] * t.mu[k], t.base_dims[j] * t.mu_dims[k]});
  for (std::size_t a = 0; a < t.products.size(); ++a)
    for (std::size_t b = a + 1; b < t.products.size(); ++b) {
      const double d = std::abs(t.products[a].value - t.products[b].value);
      if (d < tol) t.collisions.push_back({a, b, d});
    }
  t.accounted = t.kernel_dim * inst.p;
  for (const auto& v : t.products) t.accounted += v.multiplicity;
  if (!t.collisions.empty()) t.advisory = "collision may indicate p divides l or numerical degeneracy";
  return t;
}

// ---------------------------------------------------------------------------
// Delocalization ratio: heuristic minimum of ||psi||_inf / ||psi||_2 over an
// eigenspace. The result is an upper bound on the infimum.

struct DelocEntry {
  double eigenvalue = 0;
  std::size_t dim = 0;
  double ratio = 0;  // heuristic upper bound on the infimum
  std::size_t restarts = 0;
  CVector witness;   // function on G with ||witness||_2 = 1
};

inline double sup_ratio(const CVector& psi) {
  return psi.cwiseAbs().maxCoeff() / l2_norm(psi);
}

namespace detail {

// Log-sum-exp smoothing of max_x |psi_x|^2 at temperature t.
struct SmoothedMax {
  const CMatrix& q;
  double t;

  double value(const CVector& c) const {
    const RVector u = (q * c).cwiseAbs2();
    const double top = u.maxCoeff();
    return top + std::log((t * (u.array() - top)).exp().sum()) / t;
  }

  // Gradient in the real sense, packed as a complex vector.
  CVector gradient(const CVector& c) const {
    const CVector psi = q * c;
    const RVector u = psi.cwiseAbs2();
    RVector w = (t * (u.array() - u.maxCoeff())).exp();
    w /= w.sum();
    return 2.0 * q.adjoint() * (w.cast<cplx>().asDiagonal() * psi);
  }
};

inline CVector descend_stage(const SmoothedMax& f, CVector c, std::size_t max_iterations) {
  double step = 1.0 / f.q.rows();
  double fc = f.value(c);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    CVector g = f.gradient(c);
    g -= (c.dot(g)).real() * c;
    const double gn = g.squaredNorm();
    if (gn < 1e-24) break;
    step *= 2.0;
    bool moved = false;
    while (step > 1e-18) {
      CVector trial = c - step * g;
      trial.normalize();
      const double ft = f.value(trial);
      if (ft <= fc - 1e-4 * step * gn) {
        c = std::move(trial);
        fc = ft;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return c;
}

// One restart: continuation in the temperature, keeping the best true value.
inline CVector minimize_sup(const CMatrix& q, CVector c) {
  c.normalize();
  CVector best = c;
  double best_val = (q * c).cwiseAbs2().maxCoeff();
  for (double t = 1.0; t <= 4.2e6; t *= 4.0) {
    c = descend_stage(SmoothedMax{q, t}, c, 400);
    const double v = (q * c).cwiseAbs2().maxCoeff();
    if (v < best_val) {
      best_val = v;
      best = c;
    }
  }
  return best;
}

}  // namespace detail

/// `space` holds an orthonormal basis of the eigenspace as columns (n x m).
/// Restart 0 starts at the first basis vector; restart r > 0 at a random unit
/// coefficient vector from its own stream, so adding restarts never raises
/// the result. For m = 1 the ratio is exact.
inline DelocEntry deloc_ratio(const CMatrix& space, std::size_t restarts, const Stream& rng, double eigenvalue = 0) {
  if (space.cols() == 0 || space.rows() == 0) fail(ErrorCode::EmptySpace, "eigenspace has dimension 0");
  if (restarts == 0) fail(ErrorCode::ParamOutOfRange, "restarts must be positive");
  const auto m = space.cols();
  DelocEntry out;
  out.eigenvalue = eigenvalue;
  out.dim = std::size_t(m);
  out.restarts = restarts;
  if (m == 1) {
    out.witness = space.col(0) / l2_norm(CVector(space.col(0)));
    out.ratio = sup_ratio(out.witness);
    return out;
  }
  // normalized orthonormal columns: ||Q c||_2 = |c|
  std::vector<CVector> found(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    CVector c = CVector::Zero(m);
    if (r == 0) {
      c[0] = 1.0;
    } else {
      Stream s = rng.derive(r);
      for (Eigen::Index i = 0; i < m; ++i) c[i] = s.complex_normal();
    }
    const CVector best = detail::minimize_sup(space, c);
    const CVector psi = space * best;
    found[r] = psi / l2_norm(psi);
  });
  std::size_t arg = 0;
  double best = sup_ratio(found[0]);
  for (std::size_t r = 1; r < restarts; ++r) {
    const double v = sup_ratio(found[r]);
    if (v < best) {
      best = v;
      arg = r;
    }
  }
  out.ratio = best;
  out.witness = found[arg];
  return out;
}

struct DelocReport {
  std::vector<DelocEntry> entries;  // one per nonzero base eigenvalue
  std::size_t restarts = 0;
  double m_value = 0;  // max over entries of the ratio
  // Smallest epsilon compatible with epsilon-QE for the measured M under the
  // two stated forms of the threshold: M <= sqrt(2(1 + 2|H|^3 eps)) and
  // M <= sqrt(2(1 + |H|^3 eps)). Zero when M <= sqrt(2).
  double epsilon_floor_double = 0;
  double epsilon_floor_single = 0;
};

inline DelocReport deloc_report(const BaseSpectrum& base, std::size_t restarts, std::uint64_t seed) {
  DelocReport rep;
  rep.restarts = restarts;
  const Stream root(seed, "deloc");
  for (std::size_t j = 0; j < base.spaces.size(); ++j) {
    rep.entries.push_back(deloc_ratio(base.spaces[j].basis, restarts, root.derive(j), base.spaces[j].eigenvalue));
    rep.m_value = std::max(rep.m_value, rep.entries.back().ratio);
  }
  const double h3 = std::pow(double(base.order), 3);
  const double excess = std::max(0.0, rep.m_value * rep.m_value / 2.0 - 1.0);
  rep.epsilon_floor_double = excess / (2.0 * h3);
  rep.epsilon_floor_single = excess / h3;
  return rep;
}

/// E_phi | E_x[1_{h x Z/p}(x) |phi(x)|^2] - 1/|H| | for each h in H.
inline std::vector<double> indicator_profile(const EigenBasis& basis, const ProductInstance& inst) {
  const std::size_t n = inst.graph.order(), hn = inst.base_order(), p = inst.p;
  if (basis.order() != n || basis.size() != n)
    fail(ErrorCode::BasisMismatch, "basis has shape " + std::to_string(basis.order()) + "x" +
                                       std::to_string(basis.size()) + ", product order is " + std::to_string(n));
  std::vector<double> out(hn, 0.0);
  for (std::size_t h = 0; h < hn; ++h) {
    double total = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const auto phi = basis.function(i);
      double mass = 0;
      for (std::size_t z = 0; z < p; ++z) mass += std::norm(phi[Eigen::Index(h * p + z)]);
      total += std::abs(mass / double(n) - 1.0 / double(hn));
    }
    out[h] = total / double(basis.size());
  }
  return out;
}

inline double qe_lower_witness(const EigenBasis& basis, const ProductInstance& inst) {
  const auto prof = indicator_profile(basis, inst);
  return *std::max_element(prof.begin(), prof.end());
}

}  // namespace qe
