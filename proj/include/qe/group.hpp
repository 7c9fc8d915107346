#pragma once

// Finite groups given by multiplication tables, symmetric generating sets and
// the Cayley graph adjacency action.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qe/error.hpp"
#include "qe/rng.hpp"

namespace qe {

using Element = std::uint32_t;
using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

class FiniteGroup;

enum class Family { Cyclic, Abelian, Dihedral, Dicyclic, Symmetric, Product };

/// How a catalog group was built. Representation routes dispatch on this.
struct Construction {
  Family family;
  std::vector<std::size_t> params;
  std::vector<FiniteGroup> factors;  // Product only: left, right
};

namespace detail {

struct GroupData {
  std::size_t order = 0;
  std::vector<Element> mul;  // row-major: mul[a * n + b] = a * b
  std::vector<Element> inv;
  Element identity = 0;
  std::string name;
  std::shared_ptr<const Construction> construction;
};

}  // namespace detail

/// Immutable finite group. Copies share the underlying table.
class FiniteGroup {
 public:
  FiniteGroup() = default;

  std::size_t order() const { return data_->order; }
  Element mul(Element a, Element b) const { return data_->mul[std::size_t(a) * data_->order + b]; }
  Element inv(Element a) const { return data_->inv[a]; }
  Element identity() const { return data_->identity; }
  const std::string& name() const { return data_->name; }
  std::span<const Element> table() const { return data_->mul; }
  const Construction* construction() const { return data_->construction.get(); }

  bool is_abelian() const {
    const std::size_t n = order();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (mul(Element(a), Element(b)) != mul(Element(b), Element(a))) return false;
    return true;
  }

  /// Order of the element g (smallest k >= 1 with g^k = e).
  std::size_t element_order(Element g) const {
    std::size_t k = 1;
    for (Element x = g; x != identity(); x = mul(x, g)) ++k;
    return k;
  }

  bool same_table(const FiniteGroup& other) const {
    return data_ == other.data_ || (order() == other.order() && data_->mul == other.data_->mul &&
                                    identity() == other.identity());
  }

 private:
  explicit FiniteGroup(std::shared_ptr<const detail::GroupData> d) : data_(std::move(d)) {}
  friend FiniteGroup make_group(std::vector<Element>, std::size_t, Element, std::string,
                                std::shared_ptr<const Construction>);

  std::shared_ptr<const detail::GroupData> data_;
};

/// Validates a row-major table and builds the group. Associativity is checked
/// exhaustively up to order 512 and on 10 n^2 sampled triples above that.
inline FiniteGroup make_group(std::vector<Element> table, std::size_t n, Element identity, std::string name,
                              std::shared_ptr<const Construction> construction = nullptr) {
  if (n == 0) fail(ErrorCode::ParamOutOfRange, "empty table");
  if (table.size() != n * n)
    fail(ErrorCode::LengthMismatch, "table has " + std::to_string(table.size()) + " entries, expected " +
                                        std::to_string(n * n));
  if (identity >= n) fail(ErrorCode::NoIdentity, "identity index " + std::to_string(identity) + " out of range");
  for (std::size_t i = 0; i < table.size(); ++i)
    if (table[i] >= n)
      fail(ErrorCode::ParamOutOfRange, "entry (" + std::to_string(i / n) + "," + std::to_string(i % n) +
                                           ") = " + std::to_string(table[i]) + " outside 0.." +
                                           std::to_string(n - 1));
  auto at = [&](std::size_t a, std::size_t b) { return table[a * n + b]; };

  for (std::size_t g = 0; g < n; ++g)
    if (at(identity, g) != g || at(g, identity) != g)
      fail(ErrorCode::NoIdentity, "element " + std::to_string(identity) + " is not a two-sided identity (fails at " +
                                      std::to_string(g) + ")");

  std::vector<char> seen(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t b = 0; b < n; ++b) {
      if (seen[at(a, b)]) fail(ErrorCode::NotInvertible, "row " + std::to_string(a) + " is not a permutation");
      seen[at(a, b)] = 1;
    }
  }
  for (std::size_t b = 0; b < n; ++b) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t a = 0; a < n; ++a) {
      if (seen[at(a, b)]) fail(ErrorCode::NotInvertible, "column " + std::to_string(b) + " is not a permutation");
      seen[at(a, b)] = 1;
    }
  }

  auto check_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
    if (at(at(a, b), c) != at(a, at(b, c)))
      fail(ErrorCode::NotAssociative, "(" + std::to_string(a) + "*" + std::to_string(b) + ")*" + std::to_string(c) +
                                          " != " + std::to_string(a) + "*(" + std::to_string(b) + "*" +
                                          std::to_string(c) + ")");
  };
  if (n <= 512) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const std::size_t ab = at(a, b);
        for (std::size_t c = 0; c < n; ++c)
          if (at(ab, c) != at(a, at(b, c))) check_triple(a, b, c);
      }
  } else {
    Stream rng(0, "group/associativity");
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t t = 0; t < 10 * n * n; ++t) {
      const std::size_t a = pick(rng.engine()), b = pick(rng.engine()), c = pick(rng.engine());
      check_triple(a, b, c);
    }
  }

  auto data = std::make_shared<detail::GroupData>();
  data->order = n;
  data->identity = identity;
  data->name = std::move(name);
  data->construction = std::move(construction);
  data->inv.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (at(a, b) == identity) {
        if (at(b, a) != identity)
          fail(ErrorCode::NotInvertible, "element " + std::to_string(a) + " has no two-sided inverse");
        data->inv[a] = Element(b);
      }
  data->mul = std::move(table);
  return FiniteGroup(std::move(data));
}

/// Builds a validated group from a square table given as rows.
inline FiniteGroup group_from_table(const std::vector<std::vector<Element>>& rows, Element identity,
                                    std::string name = "table") {
  const std::size_t n = rows.size();
  std::vector<Element> flat;
  flat.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n)
      fail(ErrorCode::LengthMismatch, "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                          " entries, table is not square (" + std::to_string(n) + " rows)");
    flat.insert(flat.end(), rows[r].begin(), rows[r].end());
  }
  return make_group(std::move(flat), n, identity, std::move(name));
}

/// Elements reachable from `seeds` by repeated multiplication (the generated subgroup).
inline std::vector<Element> closure(const FiniteGroup& g, std::span<const Element> seeds) {
  std::vector<char> in(g.order());
  std::vector<Element> out{g.identity()};
  in[g.identity()] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (Element s : seeds) {
      const Element y = g.mul(s, out[i]);
      if (!in[y]) {
        in[y] = 1;
        out.push_back(y);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Symmetric generating set without the identity, sorted and de-duplicated.
class GenSet {
 public:
  GenSet() = default;

  static GenSet make(const FiniteGroup& g, std::vector<Element> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    for (Element s : elements) {
      if (s >= g.order())
        fail(ErrorCode::ParamOutOfRange, "generator " + std::to_string(s) + " is not an element of " + g.name());
      if (s == g.identity()) fail(ErrorCode::ContainsIdentity, "the identity may not be a generator");
    }
    for (Element s : elements)
      if (!std::binary_search(elements.begin(), elements.end(), g.inv(s)))
        fail(ErrorCode::NotSymmetric, "inverse " + std::to_string(g.inv(s)) + " of generator " + std::to_string(s) +
                                          " is missing");
    const std::size_t reached = closure(g, elements).size();
    if (reached != g.order())
      fail(ErrorCode::NotGenerating, "generators reach " + std::to_string(reached) + " of " +
                                         std::to_string(g.order()) + " elements");
    GenSet out;
    out.elements_ = std::move(elements);
    return out;
  }

  std::span<const Element> elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(Element s) const { return std::binary_search(elements_.begin(), elements_.end(), s); }

 private:
  std::vector<Element> elements_;
};

struct CayleyGraph {
  FiniteGroup group;
  GenSet gens;

  std::size_t order() const { return group.order(); }
  std::size_t degree() const { return gens.size(); }
};

/// (A f)(x) = sum over generators s of f(s x).
inline CVector adjacency_apply(const CayleyGraph& graph, const CVector& f) {
  const std::size_t n = graph.order();
  if (std::size_t(f.size()) != n)
    fail(ErrorCode::LengthMismatch, "function has length " + std::to_string(f.size()) + ", group order " +
                                        std::to_string(n));
  CVector out = CVector::Zero(Eigen::Index(n));
  for (std::size_t x = 0; x < n; ++x)
    for (Element s : graph.gens.elements()) out[Eigen::Index(x)] += f[graph.group.mul(s, Element(x))];
  return out;
}

/// Dense adjacency: A(x, s x) = 1 for each generator s.
inline RMatrix dense_adjacency(const CayleyGraph& graph) {
  const std::size_t n = graph.order();
  RMatrix a = RMatrix::Zero(Eigen::Index(n), Eigen::Index(n));
  for (std::size_t x = 0; x < n; ++x)
    for (Element s : graph.gens.elements()) a(Eigen::Index(x), graph.group.mul(s, Element(x))) += 1.0;
  return a;
}

struct ConjugacyClasses {
  std::vector<std::vector<Element>> classes;  // ordered by smallest member
  std::vector<std::size_t> class_of;
};

inline ConjugacyClasses conjugacy_classes(const FiniteGroup& g) {
  const std::size_t n = g.order();
  constexpr std::size_t unset = ~std::size_t{0};
  ConjugacyClasses out;
  out.class_of.assign(n, unset);
  for (std::size_t x = 0; x < n; ++x) {
    if (out.class_of[x] != unset) continue;
    const std::size_t label = out.classes.size();
    std::vector<Element> cls;
    for (std::size_t h = 0; h < n; ++h) {
      const Element y = g.mul(g.mul(Element(h), Element(x)), g.inv(Element(h)));
      if (out.class_of[y] == unset) {
        out.class_of[y] = label;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    out.classes.push_back(std::move(cls));
  }
  return out;
}

}  // namespace qe
