#pragma once

// Irreducible unitary representations: construction routes per catalog
// family, abelian detection for plain tables, and validation of any
// candidate list (including imported ones).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "qe/catalog.hpp"
#include "qe/young.hpp"

namespace qe {

struct Irrep {
  std::string label;
  std::size_t dim = 0;
  std::vector<CMatrix> matrices;  // one per group element, in element order

  cplx character(Element g) const { return matrices[g].trace(); }
};

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHomomorphismTol = 1e-10;
inline constexpr double kCharacterTol = 1e-8;

struct ValidationCheck {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  const ValidationCheck* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks)
      if (!c.passed) os << c.name << " failed (worst " << c.worst << ")" << (c.detail.empty() ? "" : ": ") << c.detail
                        << "; ";
    return os.str();
  }
};

namespace detail {

inline double max_abs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline cplx inner_characters(const FiniteGroup& g, const Irrep& a, const Irrep& b) {
  cplx s = 0;
  for (std::size_t x = 0; x < g.order(); ++x) s += a.character(Element(x)) * std::conj(b.character(Element(x)));
  return s / double(g.order());
}

}  // namespace detail

/// Checks shape, unitarity, homomorphism, irreducibility, completeness and
/// pairwise inequivalence. Never throws; failures are in the report.
inline ValidationReport validate_irreps(const FiniteGroup& g, std::span<const Irrep> irreps) {
  const std::size_t n = g.order();
  ValidationReport rep;

  ValidationCheck shape{"shape", true, 0.0, {}};
  for (std::size_t i = 0; i < irreps.size() && shape.passed; ++i) {
    const Irrep& r = irreps[i];
    if (r.dim == 0 || r.matrices.size() != n) {
      shape.passed = false;
      shape.detail = "irrep " + r.label + ": expected " + std::to_string(n) + " matrices of positive dimension";
    }
    for (const auto& m : r.matrices)
      if (shape.passed && (std::size_t(m.rows()) != r.dim || std::size_t(m.cols()) != r.dim)) {
        shape.passed = false;
        shape.detail = "irrep " + r.label + ": matrix shape differs from dim " + std::to_string(r.dim);
      }
  }
  rep.checks.push_back(shape);
  if (!shape.passed) return rep;

  ValidationCheck unitary{"unitarity", true, 0.0, {}};
  ValidationCheck hom{"homomorphism", true, 0.0, {}};
  ValidationCheck irred{"irreducibility", true, 0.0, {}};
  Stream rng(0, "irreps/homomorphism");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (const Irrep& r : irreps) {
    const CMatrix id = CMatrix::Identity(Eigen::Index(r.dim), Eigen::Index(r.dim));
    for (std::size_t x = 0; x < n; ++x) {
      const double dev = detail::max_abs(r.matrices[x] * r.matrices[x].adjoint() - id);
      if (dev > unitary.worst) unitary.worst = dev;
    }
    auto hom_pair = [&](std::size_t a, std::size_t b) {
      const CMatrix& lhs = r.matrices[g.mul(Element(a), Element(b))];
      const double dev = detail::max_abs(lhs - r.matrices[a] * r.matrices[b]);
      if (dev > hom.worst) {
        hom.worst = dev;
        if (dev > kHomomorphismTol)
          hom.detail = "irrep " + r.label + " at (" + std::to_string(a) + "," + std::to_string(b) + ")";
      }
    };
    if (n <= 128) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) hom_pair(a, b);
    } else {
      for (std::size_t t = 0; t < 10 * n; ++t) hom_pair(pick(rng.engine()), pick(rng.engine()));
    }
    const double norm = std::abs(detail::inner_characters(g, r, r) - 1.0);
    if (norm > irred.worst) {
      irred.worst = norm;
      if (norm > kCharacterTol) irred.detail = "irrep " + r.label + " has <chi,chi> != 1";
    }
  }
  unitary.passed = unitary.worst <= kUnitaryTol;
  hom.passed = hom.worst <= kHomomorphismTol;
  irred.passed = irred.worst <= kCharacterTol;
  rep.checks.push_back(unitary);
  rep.checks.push_back(hom);
  rep.checks.push_back(irred);

  ValidationCheck complete{"completeness", true, 0.0, {}};
  std::size_t sum_sq = 0;
  for (const Irrep& r : irreps) sum_sq += r.dim * r.dim;
  complete.passed = sum_sq == n;
  complete.worst = std::abs(double(sum_sq) - double(n));
  complete.detail = "sum of squared dimensions " + std::to_string(sum_sq) + ", group order " + std::to_string(n);
  rep.checks.push_back(complete);

  ValidationCheck ineq{"inequivalence", true, 0.0, {}};
  for (std::size_t a = 0; a < irreps.size(); ++a)
    for (std::size_t b = a + 1; b < irreps.size(); ++b) {
      const double v = std::abs(detail::inner_characters(g, irreps[a], irreps[b]));
      if (v > ineq.worst) {
        ineq.worst = v;
        if (v > kCharacterTol) ineq.detail = irreps[a].label + " ~ " + irreps[b].label;
      }
    }
  ineq.passed = ineq.worst <= kCharacterTol;
  rep.checks.push_back(ineq);
  return rep;
}

/// A complete, validated list of irreducible unitary representations.
class IrrepSet {
 public:
  static IrrepSet validated(const FiniteGroup& g, std::vector<Irrep> irreps) {
    const ValidationReport rep = validate_irreps(g, irreps);
    if (!rep.ok()) {
      const auto* c = rep.find("completeness");
      const bool only_completeness =
          c && !c->passed &&
          std::count_if(rep.checks.begin(), rep.checks.end(), [](const auto& k) { return !k.passed; }) == 1;
      fail(only_completeness ? ErrorCode::IncompleteIrreps : ErrorCode::InvalidIrreps,
           "irreps for " + g.name() + ": " + rep.summary());
    }
    IrrepSet s;
    s.group_ = g;
    s.irreps_ = std::move(irreps);
    return s;
  }

  const FiniteGroup& group() const { return group_; }
  std::span<const Irrep> irreps() const { return irreps_; }
  std::size_t size() const { return irreps_.size(); }
  const Irrep& operator[](std::size_t i) const { return irreps_[i]; }

  std::size_t dim_sum() const {
    std::size_t s = 0;
    for (const auto& r : irreps_) s += r.dim;
    return s;
  }

 private:
  FiniteGroup group_;
  std::vector<Irrep> irreps_;
};

namespace detail {

inline CMatrix scalar(cplx z) {
  CMatrix m(1, 1);
  m(0, 0) = z;
  return m;
}

inline cplx root_of_unity(double numerator, double denominator) {
  return std::polar(1.0, 2.0 * std::numbers::pi * numerator / denominator);
}

inline std::vector<Irrep> cyclic_irreps(std::size_t m) {
  std::vector<Irrep> out;
  for (std::size_t k = 0; k < m; ++k) {
    Irrep r{"chi" + std::to_string(k), 1, {}};
    for (std::size_t x = 0; x < m; ++x) r.matrices.push_back(scalar(root_of_unity(double((k * x) % m), double(m))));
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<Irrep> abelian_irreps(const std::vector<std::size_t>& mod) {
  std::size_t n = 1;
  for (auto m : mod) n *= m;
  const std::size_t r = mod.size();
  auto digits = [&](std::size_t x) {
    std::vector<std::size_t> d(r);
    for (std::size_t i = r; i-- > 0;) {
      d[i] = x % mod[i];
      x /= mod[i];
    }
    return d;
  };
  std::vector<Irrep> out;
  for (std::size_t k = 0; k < n; ++k) {
    const auto dk = digits(k);
    std::string label = "chi(";
    for (std::size_t i = 0; i < r; ++i) label += (i ? "," : "") + std::to_string(dk[i]);
    Irrep rep{label + ")", 1, {}};
    for (std::size_t x = 0; x < n; ++x) {
      const auto dx = digits(x);
      double turns = 0;
      for (std::size_t i = 0; i < r; ++i) turns += double((dk[i] * dx[i]) % mod[i]) / double(mod[i]);
      rep.matrices.push_back(scalar(std::polar(1.0, 2.0 * std::numbers::pi * turns)));
    }
    out.push_back(std::move(rep));
  }
  return out;
}

// rho(r^k s^e) = R^k S^e
inline std::vector<Irrep> dihedral_irreps(std::size_t m) {
  const std::size_t n = 2 * m;
  std::vector<Irrep> out;
  std::vector<std::pair<int, int>> ones{{1, 1}, {1, -1}};
  if (m % 2 == 0) {
    ones.emplace_back(-1, 1);
    ones.emplace_back(-1, -1);
  }
  for (auto [zr, zs] : ones) {
    Irrep r{"one(r=" + std::to_string(zr) + ",s=" + std::to_string(zs) + ")", 1, {}};
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t e = x / m, k = x % m;
      r.matrices.push_back(scalar(double((k % 2 && zr < 0) ? -1 : 1) * double((e && zs < 0) ? -1 : 1)));
    }
    out.push_back(std::move(r));
  }
  for (std::size_t h = 1; 2 * h < m; ++h) {
    Irrep r{"two(h=" + std::to_string(h) + ")", 2, {}};
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t e = x / m, k = x % m;
      const cplx w = root_of_unity(double((h * k) % m), double(m));
      CMatrix a = CMatrix::Zero(2, 2);
      if (e == 0) {
        a(0, 0) = w;
        a(1, 1) = std::conj(w);
      } else {
        a(0, 1) = w;
        a(1, 0) = std::conj(w);
      }
      r.matrices.push_back(std::move(a));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// rho(a^k x^e) = A^k X^e with A = diag(z^h, z^-h), z = exp(i pi / m), X = [[0, (-1)^h], [1, 0]]
inline std::vector<Irrep> dicyclic_irreps(std::size_t m) {
  const std::size_t h2 = 2 * m, n = 4 * m;
  std::vector<Irrep> out;
  std::vector<std::pair<cplx, cplx>> ones;
  if (m % 2 == 0)
    ones = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  else
    ones = {{1, 1}, {1, -1}, {-1, cplx(0, 1)}, {-1, cplx(0, -1)}};
  for (std::size_t i = 0; i < ones.size(); ++i) {
    const auto [za, zx] = ones[i];
    Irrep r{"one" + std::to_string(i), 1, {}};
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t e = x / h2, k = x % h2;
      r.matrices.push_back(scalar((k % 2 ? za : cplx(1)) * (e ? zx : cplx(1))));
    }
    out.push_back(std::move(r));
  }
  for (std::size_t h = 1; h < m; ++h) {
    Irrep r{"two(h=" + std::to_string(h) + ")", 2, {}};
    const double c = (h % 2) ? -1.0 : 1.0;
    for (std::size_t x = 0; x < n; ++x) {
      const std::size_t e = x / h2, k = x % h2;
      const cplx w = root_of_unity(double((h * k) % h2), double(h2));
      CMatrix a = CMatrix::Zero(2, 2);
      if (e == 0) {
        a(0, 0) = w;
        a(1, 1) = std::conj(w);
      } else {  // diag(w, w^-1) * [[0, c], [1, 0]]
        a(0, 1) = w * c;
        a(1, 0) = std::conj(w);
      }
      r.matrices.push_back(std::move(a));
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Extends images of generators to the whole group by breadth-first search:
/// rho(s g) = rho(s) rho(g).
inline std::vector<CMatrix> extend_from_generators(const FiniteGroup& g, std::span<const Element> gens,
                                                   std::span<const CMatrix> images) {
  const std::size_t n = g.order();
  const Eigen::Index d = images.front().rows();
  std::vector<CMatrix> out(n);
  std::vector<char> done(n);
  std::vector<Element> queue{g.identity()};
  out[g.identity()] = CMatrix::Identity(d, d);
  done[g.identity()] = 1;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (std::size_t s = 0; s < gens.size(); ++s) {
      const Element y = g.mul(gens[s], queue[i]);
      if (!done[y]) {
        done[y] = 1;
        out[y] = images[s] * out[queue[i]];
        queue.push_back(y);
      }
    }
  return out;
}

inline std::vector<Irrep> symmetric_irreps(const FiniteGroup& g, std::size_t m) {
  std::vector<Irrep> out;
  if (m == 1) {
    out.push_back(Irrep{"[1]", 1, {scalar(1)}});
    return out;
  }
  const std::vector<Element> gens = default_generators(g);  // s_0 .. s_{m-2} in lexicographic element order
  // lexicographic order of permutations lists (i i+1) with larger i first
  std::vector<Element> by_position(m - 1);
  const auto perms = permutations(m);
  for (Element s : gens)
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (perms[s][i] == i + 1) by_position[i] = s;
  for (const auto& shape : young::partitions(m)) {
    const auto real = young::adjacent_transpositions(shape);
    std::vector<CMatrix> images;
    for (const auto& s : real) images.push_back(s.cast<cplx>());
    Irrep r{young::label(shape), std::size_t(real.front().rows()), {}};
    r.matrices = extend_from_generators(g, by_position, images);
    out.push_back(std::move(r));
  }
  return out;
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline std::vector<Irrep> product_irreps(const IrrepSet& left, const IrrepSet& right) {
  const std::size_t n1 = left.group().order(), n2 = right.group().order();
  std::vector<Irrep> out;
  for (const Irrep& a : left.irreps())
    for (const Irrep& b : right.irreps()) {
      Irrep r{a.label + "x" + b.label, a.dim * b.dim, {}};
      r.matrices.reserve(n1 * n2);
      for (std::size_t x = 0; x < n1; ++x)
        for (std::size_t y = 0; y < n2; ++y) r.matrices.push_back(kron(a.matrices[x], b.matrices[y]));
      out.push_back(std::move(r));
    }
  return out;
}

/// Characters of an abelian group from its table alone: extend the
/// characters of a subgroup H to H<g> one element at a time, using the k-th
/// roots of chi(g^k) where k is the order of g modulo H.
inline std::vector<Irrep> detected_abelian_irreps(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<char> in_h(n);
  std::vector<Element> members{g.identity()};
  in_h[g.identity()] = 1;
  std::vector<std::vector<cplx>> chars{std::vector<cplx>(n, cplx(0))};
  chars[0][g.identity()] = 1;
  for (Element next = 0; next < n; ++next) {
    if (in_h[next]) continue;
    std::size_t k = 1;
    Element power = next;
    while (!in_h[power]) {
      power = g.mul(power, next);
      ++k;
    }
    std::vector<Element> powers{g.identity()};
    for (std::size_t j = 1; j < k; ++j) powers.push_back(g.mul(powers.back(), next));
    std::vector<std::vector<cplx>> extended;
    for (const auto& chi : chars) {
      const double base = std::arg(chi[power]) / double(k);
      for (std::size_t t = 0; t < k; ++t) {
        const double angle = base + 2.0 * std::numbers::pi * double(t) / double(k);
        std::vector<cplx> ext(n, cplx(0));
        for (Element h : members)
          for (std::size_t j = 0; j < k; ++j) ext[g.mul(h, powers[j])] = chi[h] * std::polar(1.0, angle * double(j));
        extended.push_back(std::move(ext));
      }
    }
    chars = std::move(extended);
    std::vector<Element> grown;
    for (Element h : members)
      for (std::size_t j = 0; j < k; ++j) grown.push_back(g.mul(h, powers[j]));
    members = std::move(grown);
    for (Element x : members) in_h[x] = 1;
  }
  std::vector<Irrep> out;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    Irrep r{"chi" + std::to_string(i), 1, {}};
    for (std::size_t x = 0; x < n; ++x) r.matrices.push_back(scalar(chars[i][x]));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace detail

/// Complete validated irreps for catalog groups and abelian tables.
inline IrrepSet irreps_for(const FiniteGroup& g) {
  const Construction* c = g.construction();
  if (!c) {
    if (g.is_abelian()) return IrrepSet::validated(g, detail::detected_abelian_irreps(g));
    fail(ErrorCode::NoConstructionRoute,
         "no representation route for non-abelian group " + g.name() + "; supply an irrep bundle");
  }
  switch (c->family) {
    case Family::Cyclic: return IrrepSet::validated(g, detail::cyclic_irreps(c->params[0]));
    case Family::Abelian: return IrrepSet::validated(g, detail::abelian_irreps(c->params));
    case Family::Dihedral: return IrrepSet::validated(g, detail::dihedral_irreps(c->params[0]));
    case Family::Dicyclic: return IrrepSet::validated(g, detail::dicyclic_irreps(c->params[0]));
    case Family::Symmetric: return IrrepSet::validated(g, detail::symmetric_irreps(g, c->params[0]));
    case Family::Product: {
      const IrrepSet l = irreps_for(c->factors[0]);
      const IrrepSet r = irreps_for(c->factors[1]);
      return IrrepSet::validated(g, detail::product_irreps(l, r));
    }
  }
  fail(ErrorCode::NoConstructionRoute, "unknown family");
}

/// (sum of d_rho) / |G|.
inline double total_dim_ratio(const IrrepSet& irreps) {
  return double(irreps.dim_sum()) / double(irreps.group().order());
}

struct QuasirandomDegree {
  std::size_t degree = 0;        // min dimension over nontrivial irreps
  std::size_t num_irreps = 0;    // |G^| = number of conjugacy classes
  double class_bound = 0.0;      // 1 + (|G| - 1) / D^2
  bool bound_holds = false;      // |G^| <= class_bound
};

inline QuasirandomDegree quasirandom_degree(const IrrepSet& irreps) {
  const std::size_t n = irreps.group().order();
  if (n <= 1) fail(ErrorCode::TrivialGroup, "the trivial group has no nontrivial irrep");
  // the trivial irrep is the unique 1-dim one with all characters equal to 1
  auto is_trivial = [&](const Irrep& r) {
    if (r.dim != 1) return false;
    for (const auto& m : r.matrices)
      if (std::abs(m(0, 0) - 1.0) > kCharacterTol) return false;
    return true;
  };
  QuasirandomDegree q;
  q.num_irreps = irreps.size();
  q.degree = ~std::size_t{0};
  for (const Irrep& r : irreps.irreps())
    if (!is_trivial(r)) q.degree = std::min(q.degree, r.dim);
  const double d2 = double(q.degree) * double(q.degree);
  q.class_bound = 1.0 + double(n - 1) / d2;
  q.bound_holds = double(q.num_irreps) <= q.class_bound + 1e-12;
  return q;
}

}  // namespace qe
