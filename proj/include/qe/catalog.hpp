#pragma once

// Catalog families with canonical element enumeration:
//   cyclic(m)         x in 0..m-1
//   abelian(m1..mr)   mixed radix tuples, first coordinate most significant
//   dihedral(m)       r^k s^e  -> e*m + k           (order 2m)
//   dicyclic(m)       a^k x^e  -> e*2m + k          (order 4m, x^2 = a^m, x a x^-1 = a^-1)
//   symmetric(m)      permutations of 0..m-1 in lexicographic order, (p q)(i) = p(q(i))
//   product(G, H)     (g, h)   -> g*|H| + h

#include <array>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "qe/group.hpp"

namespace qe {

inline constexpr std::size_t kMaxCatalogOrder = 4096;
inline constexpr std::size_t kMaxSymmetricDegree = 5;

namespace detail {

inline void check_order(std::size_t order, const std::string& what) {
  if (order == 0 || order > kMaxCatalogOrder)
    fail(ErrorCode::ParamOutOfRange, what + " has order " + std::to_string(order) + ", catalog cap is " +
                                         std::to_string(kMaxCatalogOrder));
}

inline std::shared_ptr<const Construction> construction_of(Family f, std::vector<std::size_t> params,
                                                           std::vector<FiniteGroup> factors = {}) {
  return std::make_shared<const Construction>(Construction{f, std::move(params), std::move(factors)});
}

inline std::string join_params(const std::vector<std::size_t>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s;
}

using Permutation = std::vector<std::uint8_t>;

inline std::vector<Permutation> permutations(std::size_t m) {
  Permutation p(m);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  std::vector<Permutation> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace detail

inline FiniteGroup cyclic(std::size_t m) {
  detail::check_order(m, "cyclic(" + std::to_string(m) + ")");
  std::vector<Element> t(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) t[a * m + b] = Element((a + b) % m);
  return make_group(std::move(t), m, 0, "cyclic:" + std::to_string(m), detail::construction_of(Family::Cyclic, {m}));
}

inline FiniteGroup abelian(std::vector<std::size_t> moduli) {
  if (moduli.empty()) fail(ErrorCode::ParamOutOfRange, "abelian() needs at least one modulus");
  std::size_t n = 1;
  for (std::size_t m : moduli) {
    if (m == 0) fail(ErrorCode::ParamOutOfRange, "abelian modulus must be positive");
    n *= m;
    detail::check_order(n, "abelian(" + detail::join_params(moduli) + ")");
  }
  const std::size_t r = moduli.size();
  auto digits = [&](std::size_t x) {
    std::vector<std::size_t> d(r);
    for (std::size_t i = r; i-- > 0;) {
      d[i] = x % moduli[i];
      x /= moduli[i];
    }
    return d;
  };
  std::vector<Element> t(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto da = digits(a);
    for (std::size_t b = 0; b < n; ++b) {
      const auto db = digits(b);
      std::size_t c = 0;
      for (std::size_t i = 0; i < r; ++i) c = c * moduli[i] + (da[i] + db[i]) % moduli[i];
      t[a * n + b] = Element(c);
    }
  }
  const std::string name = "abelian:" + detail::join_params(moduli);
  return make_group(std::move(t), n, 0, name, detail::construction_of(Family::Abelian, std::move(moduli)));
}

inline FiniteGroup dihedral(std::size_t m) {
  if (m < 2) fail(ErrorCode::ParamOutOfRange, "dihedral(m) needs m >= 2");
  const std::size_t n = 2 * m;
  detail::check_order(n, "dihedral(" + std::to_string(m) + ")");
  std::vector<Element> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ea = a / m, ka = a % m, eb = b / m, kb = b % m;
      // r^ka s^ea r^kb s^eb = r^(ka + (-1)^ea kb) s^(ea+eb)
      const std::size_t k = ea ? (ka + m - kb) % m : (ka + kb) % m;
      t[a * n + b] = Element(((ea + eb) % 2) * m + k);
    }
  return make_group(std::move(t), n, 0, "dihedral:" + std::to_string(m),
                    detail::construction_of(Family::Dihedral, {m}));
}

inline FiniteGroup dicyclic(std::size_t m) {
  if (m < 1) fail(ErrorCode::ParamOutOfRange, "dicyclic(m) needs m >= 1");
  const std::size_t n = 4 * m, h = 2 * m;
  detail::check_order(n, "dicyclic(" + std::to_string(m) + ")");
  std::vector<Element> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t ea = a / h, ka = a % h, eb = b / h, kb = b % h;
      std::size_t k, e;
      if (ea == 0) {
        k = (ka + kb) % h;
        e = eb;
      } else if (eb == 0) {  // a^ka x a^kb = a^(ka-kb) x
        k = (ka + h - kb) % h;
        e = 1;
      } else {  // a^ka x a^kb x = a^(ka-kb) x^2 = a^(ka-kb+m)
        k = (ka + h - kb + m) % h;
        e = 0;
      }
      t[a * n + b] = Element(e * h + k);
    }
  return make_group(std::move(t), n, 0, "dicyclic:" + std::to_string(m),
                    detail::construction_of(Family::Dicyclic, {m}));
}

inline FiniteGroup symmetric(std::size_t m) {
  if (m < 1 || m > kMaxSymmetricDegree)
    fail(ErrorCode::ParamOutOfRange, "symmetric(" + std::to_string(m) + ") outside 1.." +
                                         std::to_string(kMaxSymmetricDegree));
  const auto perms = detail::permutations(m);
  const std::size_t n = perms.size();
  std::map<detail::Permutation, Element> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(perms[i], Element(i));
  std::vector<Element> t(n * n);
  detail::Permutation c(m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t i = 0; i < m; ++i) c[i] = perms[a][perms[b][i]];
      t[a * n + b] = index.at(c);
    }
  return make_group(std::move(t), n, 0, "symmetric:" + std::to_string(m),
                    detail::construction_of(Family::Symmetric, {m}));
}

inline FiniteGroup product(const FiniteGroup& left, const FiniteGroup& right) {
  const std::size_t n1 = left.order(), n2 = right.order(), n = n1 * n2;
  detail::check_order(n, "product(" + left.name() + "," + right.name() + ")");
  std::vector<Element> t(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      t[a * n + b] = Element(left.mul(Element(a / n2), Element(b / n2)) * n2 +
                             right.mul(Element(a % n2), Element(b % n2)));
  const Element e = Element(left.identity() * n2 + right.identity());
  return make_group(std::move(t), n, e, "product:" + left.name() + "," + right.name(),
                    detail::construction_of(Family::Product, {}, {left, right}));
}

/// G x G x ... x G (k factors), nested to the right.
inline FiniteGroup power(const FiniteGroup& g, std::size_t k) {
  if (k == 0) fail(ErrorCode::ParamOutOfRange, "power needs k >= 1");
  return k == 1 ? g : product(g, power(g, k - 1));
}

inline FiniteGroup catalog_group(Family family, const std::vector<std::size_t>& params,
                                 const std::vector<FiniteGroup>& factors = {}) {
  auto one = [&](const char* what) {
    if (params.size() != 1) fail(ErrorCode::ParamOutOfRange, std::string(what) + " takes exactly one parameter");
    return params[0];
  };
  switch (family) {
    case Family::Cyclic: return cyclic(one("cyclic"));
    case Family::Abelian: return abelian(params);
    case Family::Dihedral: return dihedral(one("dihedral"));
    case Family::Dicyclic: return dicyclic(one("dicyclic"));
    case Family::Symmetric: return symmetric(one("symmetric"));
    case Family::Product:
      if (factors.size() != 2) fail(ErrorCode::ParamOutOfRange, "product takes exactly two factors");
      return product(factors[0], factors[1]);
  }
  fail(ErrorCode::UnsupportedFamily, "unknown family");
}

/// Family-default symmetric generating set.
inline std::vector<Element> default_generators(const FiniteGroup& g) {
  const Construction* c = g.construction();
  if (!c) fail(ErrorCode::NotGenerating, "group " + g.name() + " has no default generating set; pass generators");
  std::vector<Element> out;
  switch (c->family) {
    case Family::Cyclic: {
      const std::size_t m = c->params[0];
      if (m > 1) out = {1, Element(m - 1)};
      break;
    }
    case Family::Abelian: {
      const auto& mod = c->params;
      std::size_t stride = 1;
      for (std::size_t i = mod.size(); i-- > 0;) {
        if (mod[i] > 1) {
          out.push_back(Element(stride));
          out.push_back(Element(stride * (mod[i] - 1)));
        }
        stride *= mod[i];
      }
      break;
    }
    case Family::Dihedral: {
      const std::size_t m = c->params[0];
      out = {1, Element(m - 1), Element(m)};
      break;
    }
    case Family::Dicyclic: {
      const std::size_t m = c->params[0];
      out = {1, Element(2 * m - 1), Element(2 * m), Element(3 * m)};
      break;
    }
    case Family::Symmetric: {
      const std::size_t m = c->params[0];
      const auto perms = detail::permutations(m);
      for (std::size_t i = 0; i < perms.size(); ++i) {
        const auto& p = perms[i];
        std::size_t moved = 0, first = 0;
        for (std::size_t k = 0; k < m; ++k)
          if (p[k] != k) {
            if (!moved) first = k;
            ++moved;
          }
        if (moved == 2 && p[first] == first + 1) out.push_back(Element(i));
      }
      break;
    }
    case Family::Product: {
      const FiniteGroup& l = c->factors[0];
      const FiniteGroup& r = c->factors[1];
      const std::size_t n2 = r.order();
      for (Element s : default_generators(l)) out.push_back(Element(s * n2 + r.identity()));
      for (Element t : default_generators(r)) out.push_back(Element(l.identity() * n2 + t));
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

class SpecParser {
 public:
  explicit SpecParser(std::string_view s) : s_(s) {}

  FiniteGroup parse_all() {
    FiniteGroup g = parse();
    if (pos_ != s_.size()) error("unexpected trailing text");
    return g;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "group spec '" + std::string(s_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  bool peek_digit() const { return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])); }

  std::size_t number() {
    if (!peek_digit()) error("expected a number");
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc()) error("number out of range");
    pos_ = std::size_t(ptr - s_.data());
    return v;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) error(std::string("expected '") + c + "'");
    ++pos_;
  }

  FiniteGroup parse() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string_view family = s_.substr(start, pos_ - start);
    expect(':');
    if (family == "product") {
      FiniteGroup l = parse();
      expect(',');
      FiniteGroup r = parse();
      return product(l, r);
    }
    std::vector<std::size_t> params{number()};
    if (family == "abelian")
      while (pos_ + 1 < s_.size() && s_[pos_] == ',' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        params.push_back(number());
      }
    if (family == "cyclic") return cyclic(params[0]);
    if (family == "abelian") return abelian(params);
    if (family == "dihedral") return dihedral(params[0]);
    if (family == "dicyclic") return dicyclic(params[0]);
    if (family == "symmetric") return symmetric(params[0]);
    fail(ErrorCode::UnsupportedFamily, "unknown group family '" + std::string(family) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses "cyclic:12", "abelian:2,2,3", "dihedral:4", "dicyclic:2", "symmetric:3",
/// "product:<spec>,<spec>" (nestable).
inline FiniteGroup parse_group_spec(std::string_view spec) { return detail::SpecParser(spec).parse_all(); }

}  // namespace qe
