#pragma once

// Young's orthogonal form for the irreducible representations of S_m.
//
// Basis: standard Young tableaux of shape lambda. For the adjacent
// transposition s_i = (i i+1) and a tableau T with axial distance
// r = content(i+1) - content(i):
//   s_i T = (1/r) T + sqrt(1 - 1/r^2) T'      (T' = T with i, i+1 swapped)
// and T' is standard whenever |r| > 1. The matrices are real orthogonal.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qe::young {

using Partition = std::vector<std::size_t>;

/// Partitions of m in decreasing lexicographic order: (m), (m-1,1), ..., (1,...,1).
inline std::vector<Partition> partitions(std::size_t m) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, std::size_t remaining, std::size_t max_part) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (std::size_t p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      self(self, remaining - p, p);
      cur.pop_back();
    }
  };
  rec(rec, m, m);
  return out;
}

/// Row and column of every entry 0..m-1.
struct Tableau {
  std::vector<std::uint8_t> row;
  std::vector<std::uint8_t> col;

  int content(std::size_t i) const { return int(col[i]) - int(row[i]); }
  bool operator<(const Tableau& o) const { return row < o.row; }
};

inline std::vector<Tableau> standard_tableaux(const Partition& shape) {
  std::size_t m = 0;
  for (auto p : shape) m += p;
  std::vector<Tableau> out;
  std::vector<std::size_t> fill(shape.size(), 0);
  Tableau cur{std::vector<std::uint8_t>(m), std::vector<std::uint8_t>(m)};
  auto rec = [&](auto&& self, std::size_t next) -> void {
    if (next == m) {
      out.push_back(cur);
      return;
    }
    for (std::size_t r = 0; r < shape.size(); ++r) {
      if (fill[r] >= shape[r]) continue;
      if (r > 0 && fill[r - 1] <= fill[r]) continue;
      cur.row[next] = std::uint8_t(r);
      cur.col[next] = std::uint8_t(fill[r]);
      ++fill[r];
      self(self, next + 1);
      --fill[r];
    }
  };
  rec(rec, 0);
  return out;
}

/// Matrices of s_0 .. s_{m-2} in Young's orthogonal form.
inline std::vector<Eigen::MatrixXd> adjacent_transpositions(const Partition& shape) {
  const auto tabs = standard_tableaux(shape);
  const std::size_t d = tabs.size();
  const std::size_t m = tabs.front().row.size();
  std::map<std::vector<std::uint8_t>, std::size_t> index;
  for (std::size_t t = 0; t < d; ++t) index.emplace(tabs[t].row, t);

  std::vector<Eigen::MatrixXd> out;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(Eigen::Index(d), Eigen::Index(d));
    for (std::size_t t = 0; t < d; ++t) {
      const Tableau& T = tabs[t];
      const int r = T.content(i + 1) - T.content(i);
      s(Eigen::Index(t), Eigen::Index(t)) = 1.0 / r;
      if (r != 1 && r != -1) {
        auto swapped = T.row;
        std::swap(swapped[i], swapped[i + 1]);
        const std::size_t u = index.at(swapped);
        s(Eigen::Index(u), Eigen::Index(t)) = std::sqrt(1.0 - 1.0 / double(r * r));
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string label(const Partition& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + "]";
}

}  // namespace qe::young
