#pragma once

// JSON and CSV serialization. Doubles are written in shortest round-trip
// form; files are written to a temporary sibling and renamed into place.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#include "qe/concentration.hpp"
#include "qe/deloc.hpp"

namespace qe::io {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) fail(ErrorCode::IoError, "read failed for " + path.string());
  return ss.str();
}

inline void write_atomic(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorCode::IoError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) fail(ErrorCode::IoError, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    fail(ErrorCode::IoError, "cannot rename into " + path.string());
  }
}

inline void write_json(const fs::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

/// Parses JSON text; syntax errors carry line and column.
inline Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::ParseError, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline Json load_json(const fs::path& path) { return parse_json(read_file(path), path.string()); }

namespace detail {

inline const Json& field(const Json& obj, const char* name, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::ParseError, where + ": expected an object");
  auto it = obj.find(name);
  if (it == obj.end()) fail(ErrorCode::ParseError, where + ": missing field '" + name + "'");
  return *it;
}

inline std::uint64_t as_index(const Json& v, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0))
    fail(ErrorCode::ParseError, where + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline double as_double(const Json& v, const std::string& where) {
  if (!v.is_number()) fail(ErrorCode::ParseError, where + ": expected a number");
  return v.get<double>();
}

inline cplx as_complex(const Json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (!v.is_array() || v.size() != 2) fail(ErrorCode::ParseError, where + ": expected [re, im]");
  return {as_double(v[0], where + "[0]"), as_double(v[1], where + "[1]")};
}

}  // namespace detail

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const CVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
  return out;
}

inline Json matrix_json(const CMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline CMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(ErrorCode::ParseError, where + ": expected a non-empty array of rows");
  const auto rows = Eigen::Index(j.size());
  if (!j[0].is_array() || j[0].empty()) fail(ErrorCode::ParseError, where + "[0]: expected a non-empty row");
  const auto cols = Eigen::Index(j[0].size());
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::string wr = where + "[" + std::to_string(r) + "]";
    if (!j[std::size_t(r)].is_array() || Eigen::Index(j[std::size_t(r)].size()) != cols)
      fail(ErrorCode::ParseError, wr + ": expected a row of length " + std::to_string(cols));
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = detail::as_complex(j[std::size_t(r)][std::size_t(c)], wr + "[" + std::to_string(c) + "]");
  }
  return m;
}

// ---------------------------------------------------------------------------
// Groups: {name, order, mul, identity, generators}. `mul` is row-major, flat
// or nested; mul[a][b] is the index of a*b.

struct GroupFile {
  FiniteGroup group;
  std::vector<Element> generators;  // empty when absent
};

inline GroupFile group_from_json(const Json& j, const std::string& where = "group") {
  const auto order = detail::as_index(detail::field(j, "order", where), where + ".order");
  if (order == 0) fail(ErrorCode::ParseError, where + ".order: must be positive");
  const Json& mul = detail::field(j, "mul", where);
  if (!mul.is_array()) fail(ErrorCode::ParseError, where + ".mul: expected an array");
  std::vector<Element> flat;
  flat.reserve(order * order);
  if (mul.size() == order && !mul.empty() && mul[0].is_array()) {
    for (std::size_t r = 0; r < order; ++r) {
      const std::string wr = where + ".mul[" + std::to_string(r) + "]";
      if (!mul[r].is_array() || mul[r].size() != order)
        fail(ErrorCode::ParseError, wr + ": expected a row of length " + std::to_string(order));
      for (std::size_t c = 0; c < order; ++c)
        flat.push_back(Element(detail::as_index(mul[r][c], wr + "[" + std::to_string(c) + "]")));
    }
  } else {
    if (mul.size() != order * order)
      fail(ErrorCode::LengthMismatch, where + ".mul: expected " + std::to_string(order * order) + " entries, got " +
                                          std::to_string(mul.size()));
    for (std::size_t i = 0; i < mul.size(); ++i)
      flat.push_back(Element(detail::as_index(mul[i], where + ".mul[" + std::to_string(i) + "]")));
  }
  const auto identity = Element(detail::as_index(detail::field(j, "identity", where), where + ".identity"));
  std::string name = "imported";
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) fail(ErrorCode::ParseError, where + ".name: expected a string");
    name = it->get<std::string>();
  }
  GroupFile out{make_group(std::move(flat), order, identity, name, nullptr), {}};
  if (auto it = j.find("generators"); it != j.end()) {
    if (!it->is_array()) fail(ErrorCode::ParseError, where + ".generators: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i)
      out.generators.push_back(
          Element(detail::as_index((*it)[i], where + ".generators[" + std::to_string(i) + "]")));
  }
  return out;
}

inline Json group_json(const FiniteGroup& g, std::span<const Element> gens = {}) {
  Json j;
  j["name"] = g.name();
  j["order"] = g.order();
  j["mul"] = std::vector<Element>(g.table().begin(), g.table().end());
  j["identity"] = g.identity();
  if (!gens.empty()) j["generators"] = std::vector<Element>(gens.begin(), gens.end());
  return j;
}

inline GroupFile load_group(const fs::path& path) { return group_from_json(load_json(path), path.string()); }

// ---------------------------------------------------------------------------
// Irrep bundles: {group_name, irreps: [{label, dim, matrices}]} with
// matrices[g][r][c] = [re, im].

inline Json irreps_json(const FiniteGroup& g, std::span<const Irrep> irreps) {
  Json j;
  j["group_name"] = g.name();
  Json list = Json::array();
  for (const auto& r : irreps) {
    Json e;
    e["label"] = r.label;
    e["dim"] = r.dim;
    Json ms = Json::array();
    for (const auto& m : r.matrices) ms.push_back(matrix_json(m));
    e["matrices"] = std::move(ms);
    list.push_back(std::move(e));
  }
  j["irreps"] = std::move(list);
  return j;
}

inline IrrepSet irreps_from_json(const FiniteGroup& g, const Json& j, const std::string& where = "irreps") {
  const Json& list = detail::field(j, "irreps", where);
  if (!list.is_array()) fail(ErrorCode::ParseError, where + ".irreps: expected an array");
  std::vector<Irrep> irreps;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string wi = where + ".irreps[" + std::to_string(i) + "]";
    Irrep r;
    const Json& label = detail::field(list[i], "label", wi);
    if (!label.is_string()) fail(ErrorCode::ParseError, wi + ".label: expected a string");
    r.label = label.get<std::string>();
    r.dim = detail::as_index(detail::field(list[i], "dim", wi), wi + ".dim");
    const Json& ms = detail::field(list[i], "matrices", wi);
    if (!ms.is_array()) fail(ErrorCode::ParseError, wi + ".matrices: expected an array");
    for (std::size_t x = 0; x < ms.size(); ++x)
      r.matrices.push_back(matrix_from_json(ms[x], wi + ".matrices[" + std::to_string(x) + "]"));
    irreps.push_back(std::move(r));
  }
  return IrrepSet::validated(g, std::move(irreps));
}

inline IrrepSet load_irreps(const FiniteGroup& g, const fs::path& path) {
  return irreps_from_json(g, load_json(path), path.string());
}

// ---------------------------------------------------------------------------
// Reports.

inline Json basis_json(const EigenBasis& b) {
  Json j;
  j["group"] = b.group;
  j["gens"] = b.gens;
  j["seed"] = b.seed;
  Json entries = Json::array();
  for (std::size_t i = 0; i < b.size(); ++i) {
    Json e;
    e["rho_label"] = b.labels[i].rho;
    e["j"] = b.labels[i].j;
    e["k"] = b.labels[i].k;
    e["eigenvalue"] = b.eigenvalues[Eigen::Index(i)];
    e["values"] = vector_json(b.function(i));
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

inline std::string report_csv(const QeReport& r) {
  std::string s = "function_id,deviation\n";
  for (std::size_t i = 0; i < r.deviations.size(); ++i) s += std::to_string(i) + "," + fmt(r.deviations[i]) + "\n";
  return s;
}

inline Json report_json(const QeReport& r) {
  Json j;
  j["mean_deviation"] = r.mean_deviation;
  j["sup_estimate"] = r.sup_estimate;
  j["sup_estimate_kind"] = "heuristic lower bound on the supremum";
  j["sup_mode"] = r.sup_mode;
  j["predicted_bound"] = std::isnan(r.predicted_bound) ? Json(nullptr) : Json(r.predicted_bound);
  j["seed"] = r.seed;
  j["deviations"] = r.deviations;
  j["sup_witness"] = vector_json(r.sup_witness);
  return j;
}

inline std::string tail_csv(const TailResult& r) {
  std::string s = "beta,frequency,bound,stderr,empirical_se,asserted\n";
  for (const auto& row : r.rows)
    s += fmt(row.beta) + "," + fmt(row.frequency) + "," + fmt(row.bound) + "," + fmt(row.standard_error) + "," +
         fmt(row.empirical_se) + "," + (row.asserted ? "true" : "false") + "\n";
  return s;
}

inline Json tail_json(const TailResult& r) {
  Json j;
  j["alpha"] = r.alpha;
  j["dim_sum"] = r.dim_sum;
  j["trials"] = r.trials;
  j["eta"] = kEta;
  j["mean_statistic"] = r.mean_statistic;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"beta", row.beta},
                    {"frequency", row.frequency},
                    {"bound", row.bound},
                    {"stderr", row.standard_error},
                    {"empirical_se", row.empirical_se},
                    {"asserted", row.asserted},
                    {"within_3se", row.within()}});
  j["rows"] = std::move(rows);
  return j;
}

inline Json spectrum_json(const SpectrumTable& t) {
  Json j;
  j["p"] = t.p;
  j["order"] = t.order;
  j["tolerance"] = t.tolerance;
  j["kernel_dim"] = t.kernel_dim;
  Json base = Json::array();
  for (std::size_t i = 0; i < t.base_eigenvalues.size(); ++i)
    base.push_back({{"eigenvalue", t.base_eigenvalues[i]}, {"dim", t.base_dims[i]}});
  j["base"] = std::move(base);
  Json mu = Json::array();
  for (std::size_t k = 0; k < t.mu.size(); ++k) mu.push_back({{"k", k}, {"mu", t.mu[k]}, {"dim", t.mu_dims[k]}});
  j["mu"] = std::move(mu);
  Json prods = Json::array();
  for (const auto& v : t.products)
    prods.push_back({{"j", v.j}, {"k", v.k}, {"value", v.value}, {"multiplicity", v.multiplicity}});
  j["products"] = std::move(prods);
  Json cols = Json::array();
  for (const auto& c : t.collisions) cols.push_back({{"a", c.a}, {"b", c.b}, {"difference", c.difference}});
  j["collisions"] = std::move(cols);
  j["accounted"] = t.accounted;
  j["bookkeeping_exact"] = t.bookkeeping_exact();
  if (!t.advisory.empty()) j["advisory"] = t.advisory;
  return j;
}

inline Json deloc_json(const DelocReport& r) {
  Json j;
  j["ratio_kind"] = "heuristic upper bound on the infimum of sup/L2 over the eigenspace";
  j["restarts"] = r.restarts;
  j["M"] = r.m_value;
  j["epsilon_floor_double"] = r.epsilon_floor_double;
  j["epsilon_floor_single"] = r.epsilon_floor_single;
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"eigenvalue", e.eigenvalue},
                       {"dim", e.dim},
                       {"ratio_bound", e.ratio},
                       {"witness", vector_json(e.witness)}});
  j["entries"] = std::move(entries);
  return j;
}

inline std::string deloc_csv(const DelocReport& r) {
  std::string s = "eigenvalue,multiplicity,ratio_bound\n";
  for (const auto& e : r.entries) s += fmt(e.eigenvalue) + "," + std::to_string(e.dim) + "," + fmt(e.ratio) + "\n";
  return s;
}

}  // namespace qe::io
