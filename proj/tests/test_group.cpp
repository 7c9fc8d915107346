#include <gtest/gtest.h>

#include <numbers>

#include "qe/catalog.hpp"
#include "qe/irreps.hpp"
#include "support/a5.hpp"
#include "support/oracles.hpp"

using namespace qe;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::IoError;
}

std::vector<std::uint32_t> flat(const FiniteGroup& g) { return {g.table().begin(), g.table().end()}; }

}  // namespace

TEST(GroupFromTable, Z2) {
  const auto g = group_from_table({{0, 1}, {1, 0}}, 0, "z2");
  EXPECT_EQ(g.order(), 2u);
  EXPECT_EQ(g.identity(), 0u);
  EXPECT_EQ(g.inv(1), 1u);
}

TEST(GroupFromTable, S3FromComposedPermutations) {
  const auto perms = oracle::all_perms(3);
  const auto t = oracle::table_of(perms);
  const auto g = make_group(t, 6, 0, "s3");
  EXPECT_EQ(g.order(), 6u);
  for (std::size_t a = 0; a < 6; ++a) {
    std::vector<int> seen(6);
    for (std::size_t b = 0; b < 6; ++b) ++seen[g.mul(Element(a), Element(b))];
    for (int s : seen) EXPECT_EQ(s, 1);
  }
  EXPECT_EQ(flat(symmetric(3)), t);
}

TEST(GroupFromTable, Rejections) {
  EXPECT_EQ(code_of([] { group_from_table({{0, 1}, {1, 1}}, 0); }), ErrorCode::NotInvertible);
  EXPECT_EQ(code_of([] { group_from_table({{1, 0}, {0, 1}}, 0); }), ErrorCode::NoIdentity);
  // a Latin square with identity that is a loop, not a group
  const std::vector<std::vector<Element>> loop = {
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  try {
    group_from_table(loop, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAssociative);
    EXPECT_NE(std::string(e.what()).find(")*"), std::string::npos);  // names the triple
  }
  EXPECT_EQ(code_of([] { group_from_table({{0, 1}, {1}}, 0); }), ErrorCode::LengthMismatch);
}

TEST(Catalog, Orders) {
  EXPECT_EQ(cyclic(7).order(), 7u);
  EXPECT_EQ(dihedral(4).order(), 8u);
  EXPECT_EQ(dicyclic(2).order(), 8u);
  EXPECT_EQ(abelian({2, 2, 3}).order(), 12u);
  EXPECT_EQ(symmetric(4).order(), 24u);
  EXPECT_EQ(code_of([] { symmetric(9); }), ErrorCode::ParamOutOfRange);
  EXPECT_EQ(code_of([] { parse_group_spec("klein:4"); }), ErrorCode::UnsupportedFamily);
  EXPECT_EQ(code_of([] { parse_group_spec("cyclic:"); }), ErrorCode::ParseError);
}

TEST(Catalog, ProductMatchesFactorTables) {
  const auto s3 = symmetric(3), c7 = cyclic(7);
  const auto g = product(s3, c7);
  ASSERT_EQ(g.order(), 42u);
  for (Element a = 0; a < 42; ++a)
    for (Element b = 0; b < 42; ++b) {
      const Element h = s3.mul(a / 7, b / 7), z = Element((a % 7 + b % 7) % 7);
      ASSERT_EQ(g.mul(a, b), h * 7 + z);
    }
  EXPECT_EQ(parse_group_spec("product:symmetric:3,cyclic:7").name(), g.name());
}

TEST(Catalog, DicyclicHasUniqueInvolution) {
  for (std::size_t m = 2; m <= 5; ++m) {
    const auto g = dicyclic(m);
    std::size_t involutions = 0;
    for (Element x = 0; x < g.order(); ++x) involutions += g.element_order(x) == 2;
    EXPECT_EQ(involutions, 1u) << m;
  }
}

TEST(Catalog, DefaultGeneratorsGenerate) {
  for (const char* spec : {"cyclic:12", "abelian:2,2,3", "dihedral:5", "dicyclic:3", "symmetric:4",
                           "product:dihedral:4,cyclic:5"}) {
    const auto g = parse_group_spec(spec);
    EXPECT_NO_THROW(GenSet::make(g, default_generators(g))) << spec;
  }
}

TEST(GenSet, Rejections) {
  const auto g = cyclic(12);
  EXPECT_EQ(code_of([&] { GenSet::make(g, {0, 1, 11}); }), ErrorCode::ContainsIdentity);
  EXPECT_EQ(code_of([&] { GenSet::make(g, {1}); }), ErrorCode::NotSymmetric);
  EXPECT_EQ(code_of([&] { GenSet::make(g, {2, 10}); }), ErrorCode::NotGenerating);
  EXPECT_EQ(code_of([&] { GenSet::make(g, {12}); }), ErrorCode::ParamOutOfRange);
  const auto s = GenSet::make(g, {11, 1, 1});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.contains(11));
}

TEST(Adjacency, ConstantIsDegreeEigenfunction) {
  const auto g = symmetric(4);
  const CayleyGraph graph{g, GenSet::make(g, default_generators(g))};
  const CVector one = CVector::Ones(24);
  EXPECT_LT((adjacency_apply(graph, one) - double(graph.degree()) * one).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Adjacency, CyclicCharacter) {
  const auto g = cyclic(7);
  const CayleyGraph graph{g, GenSet::make(g, {1, 6})};
  CVector chi(7);
  for (int x = 0; x < 7; ++x) chi[x] = std::polar(1.0, 2.0 * std::numbers::pi * x / 7.0);
  const CVector got = adjacency_apply(graph, chi);
  EXPECT_LT((got - 2.0 * std::cos(2.0 * std::numbers::pi / 7.0) * chi).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(code_of([&] { adjacency_apply(graph, CVector::Ones(6)); }), ErrorCode::LengthMismatch);
}

TEST(Adjacency, MatchesBruteForceAssembly) {
  const auto g = symmetric(3);
  std::vector<Element> transpositions;
  for (Element x = 0; x < 6; ++x)
    if (g.element_order(x) == 2) transpositions.push_back(x);
  const CayleyGraph graph{g, GenSet::make(g, transpositions)};
  const auto a = oracle::adjacency(flat(g), 6, transpositions);
  Stream rng(3, "test/adjacency");
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    CVector f(6);
    for (int x = 0; x < 6; ++x) f[x] = rng.complex_normal();
    const CVector got = adjacency_apply(graph, f);
    for (int x = 0; x < 6; ++x) {
      cplx ref = 0;
      for (int y = 0; y < 6; ++y) ref += a[std::size_t(x * 6 + y)] * f[y];
      worst = std::max(worst, std::abs(ref - got[x]));
    }
  }
  EXPECT_LE(worst, 1e-12 * 6 * 3);
  const RMatrix dense = dense_adjacency(graph);
  EXPECT_EQ(dense, dense.transpose());
}

TEST(ConjugacyClasses, Abelian) {
  const auto cc = conjugacy_classes(cyclic(9));
  EXPECT_EQ(cc.classes.size(), 9u);
  for (const auto& c : cc.classes) EXPECT_EQ(c.size(), 1u);
}

TEST(ConjugacyClasses, S3AndA5) {
  const auto cc = conjugacy_classes(symmetric(3));
  std::vector<std::size_t> sizes;
  for (const auto& c : cc.classes) sizes.push_back(c.size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 3, 2}));
  EXPECT_EQ(cc.classes[0], std::vector<Element>{0});

  const auto a5 = fixture::alternating5();
  const auto c5 = conjugacy_classes(a5.group);
  EXPECT_EQ(c5.classes.size(), 5u);
  std::size_t total = 0;
  for (const auto& c : c5.classes) total += c.size();
  EXPECT_EQ(total, 60u);
  Stream rng(5, "test/conjugation");
  for (int t = 0; t < 1000; ++t) {
    const auto x = Element(rng.next_u64() % 60), h = Element(rng.next_u64() % 60);
    const Element y = a5.group.mul(a5.group.mul(h, x), a5.group.inv(h));
    ASSERT_EQ(c5.class_of[x], c5.class_of[y]);
  }
}

TEST(QuasirandomDegree, Examples) {
  EXPECT_EQ(quasirandom_degree(irreps_for(abelian({2, 6}))).degree, 1u);
  const auto s3 = quasirandom_degree(irreps_for(symmetric(3)));
  EXPECT_EQ(s3.degree, 1u);
  EXPECT_TRUE(s3.bound_holds);
  const auto a5 = fixture::alternating5();
  const auto q = quasirandom_degree(IrrepSet::validated(a5.group, fixture::a5_irreps(a5)));
  EXPECT_EQ(q.degree, 3u);
  EXPECT_TRUE(q.bound_holds);
  EXPECT_EQ(code_of([] { quasirandom_degree(irreps_for(cyclic(1))); }), ErrorCode::TrivialGroup);
}
