#pragma once

// Randomized eigenbases of Cayley graphs built from irreducible
// representations. For each irrep rho and each eigenvector b_j of the
// generator average, a Haar unitary U_{rho,j} rotates the matrix-coefficient
// functions:
//
//   phi_{rho,j,k}(x) = sqrt(d_rho) * e_k^* U_{rho,j}^* rho(x)^* b_{rho,j}
//
// with adjacency eigenvalue |S| * theta_{rho,j}.
//
// Conventions: functions on G use the uniform probability measure
// (<f,g> = E_x conj(f) g, ||f||_2^2 = E_x |f|^2). The vectors b live in C^d
// with the plain (unnormalized) scalar product.

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qe/irreps.hpp"
#include "qe/parallel.hpp"
#include "qe/unitary.hpp"

namespace qe {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kEigenTieTol = 1e-9;

struct FourierBlock {
  CMatrix average;      // E_{s in S} rho(s)
  RVector eigenvalues;  // descending
  CMatrix eigenvectors; // columns b_j, unit norm in C^d
};

namespace detail {

/// Phase so the first coordinate of magnitude > 1e-12 is real positive.
inline void fix_phase(CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > 1e-12) {
      v *= std::abs(v[i]) / v[i];
      return;
    }
}

inline bool lex_less(const CVector& a, const CVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].real() - b[i].real()) > 1e-12) return a[i].real() < b[i].real();
    if (std::abs(a[i].imag() - b[i].imag()) > 1e-12) return a[i].imag() < b[i].imag();
  }
  return false;
}

}  // namespace detail

/// Generator average of an irrep and its orthonormal eigendecomposition.
inline FourierBlock fourier_block(const Irrep& rho, const GenSet& gens) {
  const auto d = Eigen::Index(rho.dim);
  if (gens.size() == 0) fail(ErrorCode::NotGenerating, "empty generating set");
  CMatrix avg = CMatrix::Zero(d, d);
  for (Element s : gens.elements()) avg += rho.matrices[s];
  avg /= double(gens.size());
  const double herm = (avg - avg.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol)
    fail(ErrorCode::NotHermitian, "generator average of " + rho.label + " deviates from Hermitian by " +
                                      std::to_string(herm));
  const CMatrix h = (avg + avg.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  std::vector<std::pair<double, CVector>> cols;
  for (Eigen::Index j = 0; j < d; ++j) {
    CVector v = es.eigenvectors().col(j);
    detail::fix_phase(v);
    cols.emplace_back(es.eigenvalues()[j], std::move(v));
  }
  std::sort(cols.begin(), cols.end(), [](const auto& a, const auto& b) {
    if (std::abs(a.first - b.first) > kEigenTieTol) return a.first > b.first;
    return detail::lex_less(a.second, b.second);
  });
  FourierBlock out{avg, RVector(d), CMatrix(d, d)};
  for (Eigen::Index j = 0; j < d; ++j) {
    out.eigenvalues[j] = cols[std::size_t(j)].first;
    out.eigenvectors.col(j) = cols[std::size_t(j)].second;
  }
  return out;
}

struct BasisLabel {
  std::string rho;  // irrep label, or "dense" for a dense eigenbasis
  std::size_t irrep = 0;
  std::size_t j = 0;
  std::size_t k = 0;
};

/// An orthonormal eigenbasis: column i of `values` is phi_i as a function on G.
struct EigenBasis {
  std::string group;
  std::vector<Element> gens;
  std::uint64_t seed = 0;
  CMatrix values;             // n x |B|
  RVector eigenvalues;        // adjacency eigenvalue per column
  std::vector<BasisLabel> labels;

  std::size_t size() const { return std::size_t(values.cols()); }
  std::size_t order() const { return std::size_t(values.rows()); }
  auto function(std::size_t i) const { return values.col(Eigen::Index(i)); }
};

/// Builds B_U with U drawn from Haar measure on prod U(d_rho)^{d_rho}. Block
/// (rho, j) draws from its own stream derived from the root seed.
inline EigenBasis build_basis(const IrrepSet& irreps, const GenSet& gens, std::uint64_t seed) {
  const FiniteGroup& g = irreps.group();
  const std::size_t n = g.order();
  std::size_t sum_sq = 0;
  for (const auto& r : irreps.irreps()) sum_sq += r.dim * r.dim;
  if (sum_sq != n)
    fail(ErrorCode::IncompleteIrreps, "sum of squared dimensions " + std::to_string(sum_sq) + " != " +
                                          std::to_string(n));

  struct Job {
    std::size_t irrep, j, offset;
  };
  std::vector<FourierBlock> blocks;
  std::vector<Job> jobs;
  std::size_t offset = 0;
  for (std::size_t r = 0; r < irreps.size(); ++r) {
    blocks.push_back(fourier_block(irreps[r], gens));
    for (std::size_t j = 0; j < irreps[r].dim; ++j) {
      jobs.push_back({r, j, offset});
      offset += irreps[r].dim;
    }
  }

  EigenBasis out;
  out.group = g.name();
  out.gens.assign(gens.elements().begin(), gens.elements().end());
  out.seed = seed;
  out.values.resize(Eigen::Index(n), Eigen::Index(n));
  out.eigenvalues.resize(Eigen::Index(n));
  out.labels.resize(n);
  const Stream root(seed, "basis");
  const double deg = double(gens.size());

  parallel_for(jobs.size(), [&](std::size_t b) {
    const Job& job = jobs[b];
    const Irrep& rho = irreps[job.irrep];
    const auto d = Eigen::Index(rho.dim);
    Stream rng = root.derive(b);
    const CMatrix u = haar_sample(rho.dim, rng);
    const CVector bj = blocks[job.irrep].eigenvectors.col(Eigen::Index(job.j));
    const double scale = std::sqrt(double(rho.dim));
    for (std::size_t x = 0; x < n; ++x) {
      const CVector w = scale * (u.adjoint() * (rho.matrices[x].adjoint() * bj));
      for (Eigen::Index k = 0; k < d; ++k) out.values(Eigen::Index(x), Eigen::Index(job.offset) + k) = w[k];
    }
    for (Eigen::Index k = 0; k < d; ++k) {
      const std::size_t col = job.offset + std::size_t(k);
      out.eigenvalues[Eigen::Index(col)] = deg * blocks[job.irrep].eigenvalues[Eigen::Index(job.j)];
      out.labels[col] = BasisLabel{rho.label, job.irrep, job.j, std::size_t(k)};
    }
  });
  return out;
}

/// Eigenbasis from dense diagonalization of the adjacency matrix, for groups
/// without a representation route. Columns rescaled to unit normalized norm.
inline EigenBasis dense_eigenbasis(const CayleyGraph& graph) {
  const std::size_t n = graph.order();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(dense_adjacency(graph));
  EigenBasis out;
  out.group = graph.group.name();
  out.gens.assign(graph.gens.elements().begin(), graph.gens.elements().end());
  out.values = es.eigenvectors().cast<cplx>() * std::sqrt(double(n));
  out.eigenvalues = es.eigenvalues();
  for (std::size_t i = 0; i < n; ++i) out.labels.push_back(BasisLabel{"dense", 0, i, 0});
  return out;
}

struct BasisCheck {
  double gram_deviation = 0;  // max |<phi_a, phi_b> - delta_ab|
  double max_residual = 0;    // max ||A phi - lambda phi||_2 / ||phi||_2
};

inline BasisCheck check_basis(const CayleyGraph& graph, const EigenBasis& basis) {
  const std::size_t n = graph.order();
  if (basis.order() != n || basis.size() != n)
    fail(ErrorCode::BasisMismatch, "basis shape does not match group order " + std::to_string(n));
  BasisCheck c;
  const CMatrix gram = basis.values.adjoint() * basis.values / double(n);
  c.gram_deviation = (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const CVector phi = basis.function(i);
    const CVector r = adjacency_apply(graph, phi) - basis.eigenvalues[Eigen::Index(i)] * phi;
    const double res = r.norm() / phi.norm();
    c.max_residual = std::max(c.max_residual, res);
  }
  return c;
}

}  // namespace qe
