#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "qe/catalog.hpp"
#include "qe/irreps.hpp"
#include "support/a5.hpp"

using namespace qe;

namespace {

std::multiset<std::size_t> dims_of(const IrrepSet& s) {
  std::multiset<std::size_t> d;
  for (const auto& r : s.irreps()) d.insert(r.dim);
  return d;
}

}  // namespace

TEST(Irreps, CyclicCharacters) {
  const auto s = irreps_for(cyclic(5));
  ASSERT_EQ(s.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t x = 0; x < 5; ++x) {
      const cplx want = std::polar(1.0, 2.0 * std::numbers::pi * double(k * x) / 5.0);
      EXPECT_LT(std::abs(s[k].matrices[x](0, 0) - want), 1e-12);
    }
}

TEST(Irreps, SymmetricDims) {
  EXPECT_EQ(dims_of(irreps_for(symmetric(3))), (std::multiset<std::size_t>{1, 1, 2}));
  EXPECT_EQ(dims_of(irreps_for(symmetric(4))), (std::multiset<std::size_t>{1, 1, 2, 3, 3}));
  EXPECT_EQ(dims_of(irreps_for(symmetric(5))), (std::multiset<std::size_t>{1, 1, 4, 4, 5, 5, 6}));
}

TEST(Irreps, ProductIsTensorOfFactors) {
  const auto s = irreps_for(product(symmetric(3), cyclic(7)));
  EXPECT_EQ(s.size(), 21u);
  std::size_t sq = 0;
  for (const auto& r : s.irreps()) sq += r.dim * r.dim;
  EXPECT_EQ(sq, 42u);
  EXPECT_EQ(dims_of(s).count(2), 7u);
}

TEST(Irreps, EveryCatalogFamilyValidates) {
  for (const char* spec : {"cyclic:1", "cyclic:12", "abelian:2,2,3", "abelian:4,6", "dihedral:2", "dihedral:3",
                           "dihedral:4", "dihedral:7", "dicyclic:1", "dicyclic:2", "dicyclic:3", "dicyclic:4",
                           "symmetric:1", "symmetric:2", "symmetric:4", "product:dicyclic:2,dihedral:3"}) {
    const auto g = parse_group_spec(spec);
    const auto s = irreps_for(g);
    const auto rep = validate_irreps(g, s.irreps());
    EXPECT_TRUE(rep.ok()) << spec << ": " << rep.summary();
    EXPECT_EQ(s.size(), conjugacy_classes(g).classes.size()) << spec;
  }
}

TEST(Validate, CorrectS3PassesWithSmallResiduals) {
  const auto g = symmetric(3);
  const auto rep = validate_irreps(g, irreps_for(g).irreps());
  EXPECT_TRUE(rep.ok());
  for (const char* name : {"unitarity", "homomorphism", "irreducibility", "inequivalence"})
    EXPECT_LT(rep.find(name)->worst, 1e-12) << name;
}

TEST(Validate, DuplicatedIrrepFailsCompleteness) {
  const auto g = symmetric(3);
  const auto base = irreps_for(g);
  auto list = std::vector<Irrep>(base.irreps().begin(), base.irreps().end());
  for (const auto& r : std::vector<Irrep>(list))
    if (r.dim == 2) list.push_back(r);
  const auto rep = validate_irreps(g, list);
  EXPECT_FALSE(rep.find("completeness")->passed);
  EXPECT_EQ(rep.find("completeness")->worst, 4.0);  // 10 vs 6
  EXPECT_THROW(IrrepSet::validated(g, list), Error);
}

TEST(Validate, ReducibleSumFailsIrreducibility) {
  const auto g = cyclic(2);
  Irrep sum{"chi0+chi1", 2, {}};
  sum.matrices.push_back(CMatrix::Identity(2, 2));
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  sum.matrices.push_back(m);
  const std::vector<Irrep> list{sum};
  const auto rep = validate_irreps(g, list);
  const auto* c = rep.find("irreducibility");
  EXPECT_FALSE(c->passed);
  EXPECT_NEAR(c->worst, 1.0, 1e-12);  // <chi, chi> = 2
}

TEST(Validate, IncompleteVersusInvalid) {
  const auto g = cyclic(4);
  const auto base = irreps_for(g);
  auto list = std::vector<Irrep>(base.irreps().begin(), base.irreps().end());
  list.pop_back();
  try {
    IrrepSet::validated(g, list);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompleteIrreps);
  }
  list = std::vector<Irrep>(base.irreps().begin(), base.irreps().end());
  list[1].matrices[1] *= 1.1;
  try {
    IrrepSet::validated(g, list);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidIrreps);
  }
}

TEST(Irreps, SchurOrthogonalitySpotChecks) {
  Stream rng(2, "test/schur");
  for (const char* spec : {"symmetric:4", "dihedral:5", "dicyclic:3", "product:symmetric:3,symmetric:3"}) {
    const auto g = parse_group_spec(spec);
    const auto s = irreps_for(g);
    for (const auto& r : s.irreps())
      for (int t = 0; t < 50; ++t) {
        const auto pick = [&] { return Eigen::Index(rng.next_u64() % r.dim); };
        const auto a = pick(), b = pick(), c = pick(), d = pick();
        cplx sum = 0;
        for (const auto& m : r.matrices) sum += m(a, b) * std::conj(m(c, d));
        const double want = (a == c && b == d) ? 1.0 : 0.0;
        ASSERT_LT(std::abs(double(r.dim) * sum / double(g.order()) - want), 1e-8) << spec << " " << r.label;
      }
  }
}

TEST(TotalDimRatio, Examples) {
  EXPECT_DOUBLE_EQ(total_dim_ratio(irreps_for(abelian({3, 4}))), 1.0);
  EXPECT_NEAR(total_dim_ratio(irreps_for(symmetric(3))), 4.0 / 6.0, 1e-15);
  for (std::size_t k = 1; k <= 3; ++k)
    EXPECT_NEAR(total_dim_ratio(irreps_for(power(symmetric(3), k))), std::pow(2.0 / 3.0, double(k)), 1e-12);
  const double a = total_dim_ratio(irreps_for(dihedral(5))), b = total_dim_ratio(irreps_for(dicyclic(3)));
  EXPECT_NEAR(total_dim_ratio(irreps_for(product(dihedral(5), dicyclic(3)))), a * b, 1e-12);
}

TEST(Irreps, AbelianTableWithoutConstructionIsDetected) {
  const auto cat = abelian({2, 4});
  const auto bare = make_group(std::vector<Element>(cat.table().begin(), cat.table().end()), 8, 0, "bare");
  const auto s = irreps_for(bare);
  EXPECT_EQ(s.size(), 8u);
  EXPECT_TRUE(validate_irreps(bare, s.irreps()).ok());
}

TEST(Irreps, NonAbelianTableNeedsBundle) {
  const auto a5 = fixture::alternating5();
  try {
    irreps_for(a5.group);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoConstructionRoute);
  }
  const auto s = IrrepSet::validated(a5.group, fixture::a5_irreps(a5));
  EXPECT_EQ(dims_of(s), (std::multiset<std::size_t>{1, 3, 3, 4, 5}));
  // the two 3-dim characters take the golden-ratio values on 5-cycles
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  for (const auto& r : s.irreps()) {
    if (r.dim != 3) continue;
    bool golden = false;
    for (Element x = 0; x < 60; ++x)
      if (a5.group.element_order(x) == 5) golden |= std::abs(r.character(x).real() - phi) < 1e-9;
    EXPECT_TRUE(golden) << r.label;
  }
}
