#include <gtest/gtest.h>

#include <numbers>

#include "qe/basis.hpp"
#include "qe/catalog.hpp"
#include "qe/qe_stats.hpp"
#include "support/oracles.hpp"

using namespace qe;

namespace {

struct Built {
  FiniteGroup group;
  IrrepSet irreps;
  GenSet gens;
  EigenBasis basis;
};

Built build(const std::string& spec, std::uint64_t seed, std::vector<Element> gens = {}) {
  auto g = parse_group_spec(spec);
  auto s = irreps_for(g);
  auto set = GenSet::make(g, gens.empty() ? default_generators(g) : gens);
  auto b = build_basis(s, set, seed);
  return {g, std::move(s), set, std::move(b)};
}

std::vector<double> oracle_spectrum(const FiniteGroup& g, const GenSet& gens) {
  const std::vector<std::uint32_t> mul(g.table().begin(), g.table().end());
  const std::vector<std::uint32_t> s(gens.elements().begin(), gens.elements().end());
  return oracle::jacobi_eigenvalues(oracle::adjacency(mul, g.order(), s), g.order());
}

// <phi, f phi> - E f, straight from matrix products
double qe_reference(const EigenBasis& b, const CVector& f) {
  const double n = double(b.order());
  const CMatrix weighted = f.asDiagonal() * b.values;
  const CMatrix m = b.values.adjoint() * weighted / n;
  double total = 0;
  for (Eigen::Index i = 0; i < m.cols(); ++i) total += std::abs(m(i, i) - f.mean());
  return total / double(m.cols());
}

}  // namespace

TEST(FourierBlock, TrivialIrrepIsOne) {
  const auto g = symmetric(3);
  const auto s = irreps_for(g);
  const auto gens = GenSet::make(g, default_generators(g));
  for (const auto& r : s.irreps())
    if (r.dim == 1 && std::abs(r.character(1) - 1.0) < 1e-12 && std::abs(r.character(2) - 1.0) < 1e-12) {
      const auto fb = fourier_block(r, gens);
      EXPECT_NEAR(fb.eigenvalues[0], 1.0, 1e-14);
    }
}

TEST(FourierBlock, CyclicEigenvalueIsCosine) {
  const std::size_t p = 11;
  const auto g = cyclic(p);
  const auto s = irreps_for(g);
  const auto gens = GenSet::make(g, {1, Element(p - 1)});
  for (std::size_t k = 0; k < p; ++k)
    EXPECT_NEAR(fourier_block(s[k], gens).eigenvalues[0], std::cos(2.0 * std::numbers::pi * double(k) / double(p)),
                1e-13);
}

TEST(FourierBlock, S3StandardBlockMatchesJacobi) {
  const auto g = symmetric(3);
  const auto s = irreps_for(g);
  const auto gens = GenSet::make(g, default_generators(g));
  for (const auto& r : s.irreps()) {
    if (r.dim != 2) continue;
    const auto fb = fourier_block(r, gens);
    // real 4x4 embedding of the Hermitian 2x2 average doubles each eigenvalue
    std::vector<double> emb(16);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const cplx z = fb.average(i, j);
        emb[std::size_t(i * 4 + j)] = z.real();
        emb[std::size_t((i + 2) * 4 + j + 2)] = z.real();
        emb[std::size_t((i + 2) * 4 + j)] = z.imag();
        emb[std::size_t(i * 4 + j + 2)] = -z.imag();
      }
    const auto ev = oracle::jacobi_eigenvalues(emb, 4);
    EXPECT_NEAR(fb.eigenvalues[0], ev[3], 1e-12);
    EXPECT_NEAR(fb.eigenvalues[1], ev[0], 1e-12);
    const CMatrix resid = fb.average * fb.eigenvectors - fb.eigenvectors * fb.eigenvalues.asDiagonal();
    EXPECT_LT(resid.cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(FourierBlock, NonHermitianAverageIsRejected) {
  const auto g = cyclic(5);
  const auto gens = GenSet::make(g, {1, 4});
  Irrep bad = irreps_for(g)[1];
  bad.matrices[4] *= cplx(0, 1);
  try {
    fourier_block(bad, gens);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotHermitian);
  }
}

TEST(BuildBasis, AbelianFunctionsHaveUnitModulus) {
  const auto b = build("abelian:3,4", 5).basis;
  EXPECT_LT((b.values.cwiseAbs().array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(BuildBasis, S3GramAndSpectrum) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = build("symmetric:3", seed);
    const auto c = check_basis(CayleyGraph{r.group, r.gens}, r.basis);
    EXPECT_LT(c.gram_deviation, 1e-12);
    EXPECT_LT(c.max_residual, 1e-12);
    std::vector<double> got(r.basis.eigenvalues.begin(), r.basis.eigenvalues.end());
    std::sort(got.begin(), got.end());
    const auto want = oracle_spectrum(r.group, r.gens);
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-10);
  }
}

TEST(BuildBasis, SpectralOracleAcrossGroups) {
  for (const char* spec : {"dihedral:4", "dicyclic:2", "symmetric:4", "product:symmetric:3,cyclic:5", "dihedral:9",
                           "dicyclic:5", "product:dihedral:3,dihedral:4"}) {
    const auto r = build(spec, 9);
    ASSERT_LE(r.group.order(), 200u);
    std::vector<double> got(r.basis.eigenvalues.begin(), r.basis.eigenvalues.end());
    std::sort(got.begin(), got.end());
    const auto want = oracle_spectrum(r.group, r.gens);
    for (std::size_t i = 0; i < got.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-8) << spec << " entry " << i;
    const auto c = check_basis(CayleyGraph{r.group, r.gens}, r.basis);
    EXPECT_LT(c.gram_deviation, 1e-9) << spec;
    EXPECT_LT(c.max_residual, 1e-9 * double(r.gens.size())) << spec;
  }
}

TEST(BuildBasis, DeterministicPerSeed) {
  const auto a = build("symmetric:4", 17).basis, b = build("symmetric:4", 17).basis, c = build("symmetric:4", 18).basis;
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
}

TEST(BuildBasis, DenseFallbackIsOrthonormal) {
  const auto g = symmetric(3);
  const auto gens = GenSet::make(g, default_generators(g));
  const CayleyGraph graph{g, gens};
  const auto c = check_basis(graph, dense_eigenbasis(graph));
  EXPECT_LT(c.gram_deviation, 1e-12);
  EXPECT_LT(c.max_residual, 1e-12);
}

TEST(QeStatistic, ConstantIsZero) {
  const auto b = build("symmetric:4", 3).basis;
  EXPECT_LT(qe_statistic(b, CVector::Constant(24, cplx(2.0, -1.0))), 1e-12);
}

TEST(QeStatistic, AbelianIsZero) {
  const auto b = build("cyclic:30", 1, {1, 29, 7, 23}).basis;
  for (const auto& f : random_unit_functions(30, 20, 4)) EXPECT_LT(qe_statistic(b, f), 1e-12);
}

TEST(QeStatistic, MatchesMatrixReference) {
  for (const char* spec : {"symmetric:3", "dicyclic:3", "product:symmetric:3,symmetric:3"}) {
    const auto b = build(spec, 21).basis;
    for (const auto& f : random_unit_functions(b.order(), 5, 6)) EXPECT_NEAR(qe_statistic(b, f), qe_reference(b, f), 1e-12);
  }
  const auto b = build("symmetric:3", 1).basis;
  EXPECT_THROW(qe_statistic(b, CVector::Ones(5)), Error);
}

TEST(SupEstimate, AbelianIsZero) {
  const auto b = build("abelian:2,2", 1).basis;
  EXPECT_LT(qe_sup_estimate(b, SupBruteSign{}).value, 1e-12);
  EXPECT_LT(qe_sup_estimate(b, SupAlternating{10, 1}).value, 1e-12);
  EXPECT_LT(qe_sup_estimate(b, SupRandom{100, 1}).value, 1e-12);
}

TEST(SupEstimate, BruteSignDominatesOtherModes) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto b = build("symmetric:3", seed).basis;
    const double brute = qe_sup_estimate(b, SupBruteSign{}).value;
    EXPECT_GE(brute + 1e-12, qe_sup_estimate(b, SupAlternating{20, seed}).value);
    EXPECT_GE(brute + 1e-12, qe_sup_estimate(b, SupRandom{2000, seed}).value);
    // reported witness reproduces the value
    const auto w = qe_sup_estimate(b, SupBruteSign{});
    EXPECT_NEAR(qe_statistic(b, w.witness.cast<cplx>()), w.value, 1e-12);
    EXPECT_NEAR(l2_norm(w.witness), 1.0, 1e-12);
  }
}

TEST(SupEstimate, BruteSignCapped) {
  const auto b = build("symmetric:4", 1).basis;
  try {
    qe_sup_estimate(b, SupBruteSign{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ModeUnavailable);
  }
}

TEST(PredictedEpsilon, Examples) {
  const double c = 10.0 * std::numbers::pi * std::sqrt(3.0);
  EXPECT_NEAR(predicted_epsilon(irreps_for(cyclic(9))), c, 1e-12);
  EXPECT_NEAR(predicted_epsilon(irreps_for(symmetric(3))), c * std::sqrt(4.0 / 6.0), 1e-12);
  EXPECT_NEAR(predicted_epsilon(irreps_for(power(symmetric(3), 2))), c * 4.0 / 6.0, 1e-12);
}

TEST(Report, MeanNeverExceedsSup) {
  for (const char* spec : {"symmetric:4", "dihedral:6", "product:symmetric:3,symmetric:3"}) {
    const auto r = build(spec, 2);
    const auto tests = random_unit_functions(r.group.order(), 20, 2);
    const auto rep = make_report(r.basis, &r.irreps, tests, 10, 200);
    EXPECT_LE(rep.mean_deviation, rep.sup_estimate + 1e-12) << spec;
    for (double d : rep.deviations) EXPECT_LE(d, rep.sup_estimate + 1e-12);
    EXPECT_NEAR(qe_statistic(r.basis, rep.sup_witness), rep.sup_estimate, 1e-10) << spec;
    EXPECT_NEAR(rep.predicted_bound, predicted_epsilon(r.irreps), 1e-15);
  }
}

TEST(Report, FixedFunctionRarelyExceedsScale) {
  // for a fixed f the statistic concentrates at scale sqrt(sum d / n)
  const auto g = power(symmetric(3), 2);
  const auto s = irreps_for(g);
  const auto gens = GenSet::make(g, default_generators(g));
  const double scale = std::sqrt(total_dim_ratio(s));
  const auto tests = random_unit_functions(g.order(), 10, 77);
  std::size_t over = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto b = build_basis(s, gens, seed);
    for (const auto& f : tests) {
      over += qe_statistic(b, f) >= 2.0 * scale;
      ++total;
    }
  }
  EXPECT_EQ(over, 0u) << total;
}
