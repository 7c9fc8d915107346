#pragma once

// Reproducible experiment runs. Every command writes its outputs plus a
// manifest holding the full configuration (seed included), so a manifest can
// be replayed into byte-identical outputs.

#include <chrono>
#include <ctime>
#include <optional>
#include <random>

#include "qe/io.hpp"

namespace qe {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentConfig {
  std::string command;  // build | concentration | deloc | export
  std::string group;    // catalog spec or path to a group JSON file
  std::string gens;     // comma-separated element indices; empty means default
  std::string irreps;   // optional irrep bundle path
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::vector<double> betas;
  std::optional<std::size_t> p;
  std::string preset;
  std::string out = ".";
  std::optional<double> tolerance;
  std::size_t restarts = 50;         // alternating sup-search restarts (build)
  std::size_t random_samples = 1000; // random sup-search samples (build)
  std::size_t lipschitz_pairs = 10000;
};

inline io::Json config_json(const ExperimentConfig& c) {
  io::Json j;
  j["command"] = c.command;
  j["group"] = c.group;
  j["gens"] = c.gens;
  j["irreps"] = c.irreps;
  j["seed"] = c.seed ? io::Json(*c.seed) : io::Json(nullptr);
  j["trials"] = c.trials ? io::Json(*c.trials) : io::Json(nullptr);
  j["betas"] = c.betas;
  j["p"] = c.p ? io::Json(*c.p) : io::Json(nullptr);
  j["preset"] = c.preset;
  j["out"] = c.out;
  j["tolerance"] = c.tolerance ? io::Json(*c.tolerance) : io::Json(nullptr);
  j["restarts"] = c.restarts;
  j["random_samples"] = c.random_samples;
  j["lipschitz_pairs"] = c.lipschitz_pairs;
  return j;
}

inline ExperimentConfig config_from_json(const io::Json& j) {
  if (!j.is_object()) fail(ErrorCode::ParseError, "config: expected an object");
  ExperimentConfig c;
  try {
    auto str = [&](const char* k, std::string& dst) {
      if (auto it = j.find(k); it != j.end() && !it->is_null()) dst = it->get<std::string>();
    };
    str("command", c.command);
    str("group", c.group);
    str("gens", c.gens);
    str("irreps", c.irreps);
    str("preset", c.preset);
    str("out", c.out);
    if (auto it = j.find("seed"); it != j.end() && !it->is_null()) c.seed = it->get<std::uint64_t>();
    if (auto it = j.find("trials"); it != j.end() && !it->is_null()) c.trials = it->get<std::size_t>();
    if (auto it = j.find("p"); it != j.end() && !it->is_null()) c.p = it->get<std::size_t>();
    if (auto it = j.find("tolerance"); it != j.end() && !it->is_null()) c.tolerance = it->get<double>();
    if (auto it = j.find("betas"); it != j.end() && !it->is_null()) c.betas = it->get<std::vector<double>>();
    if (auto it = j.find("restarts"); it != j.end()) c.restarts = it->get<std::size_t>();
    if (auto it = j.find("random_samples"); it != j.end()) c.random_samples = it->get<std::size_t>();
    if (auto it = j.find("lipschitz_pairs"); it != j.end()) c.lipschitz_pairs = it->get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  return c;
}

/// "1,11" -> {1, 11}.
inline std::vector<Element> parse_element_list(std::string_view text) {
  std::vector<Element> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] != ',') ++j;
    const std::string_view tok = text.substr(i, j - i);
    unsigned long v = 0;
    const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || r.ec != std::errc() || r.ptr != tok.data() + tok.size())
      fail(ErrorCode::ParseError, "bad element '" + std::string(tok) + "' in list '" + std::string(text) + "'");
    out.push_back(Element(v));
    i = j + 1;
    if (j + 1 == text.size()) fail(ErrorCode::ParseError, "trailing comma in '" + std::string(text) + "'");
  }
  return out;
}

inline std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] != ',') ++j;
    const std::string tok(text.substr(i, j - i));
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (...) {
      used = 0;
    }
    if (tok.empty() || used != tok.size())
      fail(ErrorCode::ParseError, "bad number '" + tok + "' in list '" + std::string(text) + "'");
    out.push_back(v);
    i = j + 1;
  }
  return out;
}

struct ResolvedGroup {
  FiniteGroup group;
  std::vector<Element> generators;
};

/// A path to an existing file is loaded as group JSON; anything else is a catalog spec.
inline ResolvedGroup resolve_group(const ExperimentConfig& c) {
  if (c.group.empty()) fail(ErrorCode::ParamOutOfRange, "no group given (use --group)");
  ResolvedGroup r;
  std::error_code ec;
  if (io::fs::is_regular_file(c.group, ec)) {
    auto f = io::load_group(c.group);
    r.group = f.group;
    r.generators = std::move(f.generators);
  } else {
    r.group = parse_group_spec(c.group);
  }
  if (!c.gens.empty()) r.generators = parse_element_list(c.gens);
  else if (r.generators.empty()) r.generators = default_generators(r.group);
  return r;
}

inline IrrepSet resolve_irreps(const ExperimentConfig& c, const FiniteGroup& g) {
  if (!c.irreps.empty()) return io::load_irreps(g, c.irreps);
  return irreps_for(g);
}

inline bool has_irrep_route(const FiniteGroup& g) { return g.construction() || g.is_abelian(); }

struct RunResult {
  std::vector<std::string> outputs;  // file names inside the output directory
  io::Json summary;
};

namespace detail {

struct Outputs {
  io::fs::path dir;
  RunResult result;

  void text(const std::string& name, const std::string& content) {
    io::write_atomic(dir / name, content);
    result.outputs.push_back(name);
  }
  void json(const std::string& name, const io::Json& j) { text(name, j.dump(2) + "\n"); }
};

inline std::string second_moment_csv(const std::vector<SecondMoment>& rows) {
  std::string s = "matrix_id,empirical,exact,stderr,within_3se\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool ok = std::abs(r.empirical - r.exact) <= 3.0 * r.standard_error + 1e-12;
    s += std::to_string(i) + "," + io::fmt(r.empirical) + "," + io::fmt(r.exact) + "," + io::fmt(r.standard_error) +
         "," + (ok ? "true" : "false") + "\n";
  }
  return s;
}

inline std::string lipschitz_csv(const std::vector<LipschitzResult>& rows) {
  std::string s = "matrix_id,worst_ratio,bound,pairs,within\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    s += std::to_string(i) + "," + io::fmt(rows[i].worst_ratio) + "," + io::fmt(rows[i].bound) + "," +
         std::to_string(rows[i].pairs) + "," + (rows[i].within() ? "true" : "false") + "\n";
  return s;
}

inline Preset load_preset(const std::string& name) {
  if (auto p = find_preset(name)) return *p;
  std::error_code ec;
  if (!io::fs::is_regular_file(name, ec)) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    fail(ErrorCode::ParamOutOfRange, "unknown preset '" + name + "' (known: " + known + ")");
  }
  const io::Json j = io::load_json(name);
  Preset p;
  p.name = j.value("name", name);
  const std::string kind = j.value("kind", "tail");
  if (kind == "tail") p.kind = PresetKind::Tail;
  else if (kind == "second_moment") p.kind = PresetKind::SecondMoment;
  else fail(ErrorCode::ParseError, name + ".kind: expected 'tail' or 'second_moment'");
  const io::Json& ms = io::detail::field(j, "matrices", name);
  if (!ms.is_array() || ms.empty()) fail(ErrorCode::ParseError, name + ".matrices: expected a non-empty array");
  for (std::size_t i = 0; i < ms.size(); ++i)
    p.matrices.push_back(io::matrix_from_json(ms[i], name + ".matrices[" + std::to_string(i) + "]"));
  if (auto it = j.find("betas"); it != j.end()) p.betas = it->get<std::vector<double>>();
  else p.betas = {1.0, 1.5, 2.0, 2.5, 3.0};
  p.default_trials = j.value("trials", std::size_t{10000});
  return p;
}

inline void run_build(const ExperimentConfig& c, Outputs& out) {
  const auto rg = resolve_group(c);
  const GenSet gens = GenSet::make(rg.group, rg.generators);
  const IrrepSet irreps = resolve_irreps(c, rg.group);
  const std::uint64_t seed = *c.seed;
  const EigenBasis basis = build_basis(irreps, gens, seed);
  const double tol = c.tolerance.value_or(1e-9);
  const BasisCheck chk = check_basis(CayleyGraph{rg.group, gens}, basis);
  if (chk.gram_deviation > tol)
    fail(ErrorCode::ValidationFailed, "invariant gram_deviation: " + io::fmt(chk.gram_deviation) + " > " + io::fmt(tol));
  if (chk.max_residual > tol * double(gens.size()))
    fail(ErrorCode::ValidationFailed, "invariant eigen_residual: " + io::fmt(chk.max_residual) + " > " +
                                          io::fmt(tol * double(gens.size())));
  const std::size_t count = c.trials.value_or(20);
  const auto tests = random_unit_functions(rg.group.order(), count, seed);
  const QeReport rep = make_report(basis, &irreps, tests, c.restarts, c.random_samples);

  out.json("basis.json", io::basis_json(basis));
  out.text("report.csv", io::report_csv(rep));
  io::Json j = io::report_json(rep);
  j["group"] = rg.group.name();
  j["order"] = rg.group.order();
  j["dim_sum"] = irreps.dim_sum();
  j["gram_deviation"] = chk.gram_deviation;
  j["max_residual"] = chk.max_residual;
  out.json("report.json", j);
  out.result.summary = {{"mean_deviation", rep.mean_deviation},
                        {"sup_estimate", rep.sup_estimate},
                        {"predicted_bound", rep.predicted_bound}};
}

inline void run_concentration(const ExperimentConfig& c, Outputs& out) {
  if (c.preset.empty()) fail(ErrorCode::ParamOutOfRange, "concentration needs --preset");
  const Preset preset = load_preset(c.preset);
  const std::size_t trials = c.trials.value_or(preset.default_trials);
  if (trials == 0) fail(ErrorCode::ParamOutOfRange, "trials must be positive");
  const std::uint64_t seed = *c.seed;
  io::Json j;
  j["preset"] = preset.name;
  j["trials"] = trials;
  if (preset.kind == PresetKind::SecondMoment) {
    const Stream root(seed, "second-moment");
    std::vector<SecondMoment> rows;
    for (std::size_t i = 0; i < preset.matrices.size(); ++i) {
      Stream rng = root.derive(i);
      rows.push_back(second_moment_check(preset.matrices[i], trials, rng));
    }
    out.text("second_moment.csv", second_moment_csv(rows));
    io::Json arr = io::Json::array();
    for (const auto& r : rows)
      arr.push_back({{"empirical", r.empirical}, {"exact", r.exact}, {"stderr", r.standard_error}});
    j["second_moment"] = std::move(arr);
  } else {
    const auto betas = c.betas.empty() ? preset.betas : c.betas;
    const TailExperiment e = TailExperiment::make(preset.matrices, betas, trials, seed);
    const TailResult r = run_tail(e);
    out.text("tail.csv", io::tail_csv(r));
    j["tail"] = io::tail_json(r);
  }
  const Stream lroot(seed, "lipschitz");
  std::vector<LipschitzResult> lip;
  for (std::size_t i = 0; i < preset.matrices.size(); ++i) {
    Stream rng = lroot.derive(i);
    lip.push_back(lipschitz_check(preset.matrices[i], c.lipschitz_pairs, rng));
  }
  out.text("lipschitz.csv", lipschitz_csv(lip));
  io::Json arr = io::Json::array();
  for (const auto& l : lip) arr.push_back({{"worst_ratio", l.worst_ratio}, {"bound", l.bound}, {"pairs", l.pairs}});
  j["lipschitz"] = std::move(arr);
  out.json("concentration.json", j);
  out.result.summary = j;
}

inline void run_deloc(const ExperimentConfig& c, Outputs& out) {
  if (!c.p) fail(ErrorCode::ParamOutOfRange, "deloc needs --p");
  const auto rg = resolve_group(c);
  const ProductInstance inst = make_product(rg.group, rg.generators, *c.p);
  const double tol = c.tolerance.value_or(kCollisionTol);
  const std::uint64_t seed = *c.seed;

  std::optional<IrrepSet> base_irreps;
  if (!c.irreps.empty() || has_irrep_route(rg.group)) base_irreps = resolve_irreps(c, rg.group);
  const BaseSpectrum base = base_irreps ? base_spectrum(build_basis(*base_irreps, inst.base.gens, seed), tol)
                                        : base_spectrum(dense_eigenbasis(inst.base), tol);
  const SpectrumTable table = product_spectrum(inst, base, tol);
  if (!table.bookkeeping_exact())
    fail(ErrorCode::ValidationFailed, "invariant dimension_bookkeeping: accounted " + std::to_string(table.accounted) +
                                          " of " + std::to_string(table.order));
  const DelocReport rep = deloc_report(base, c.trials.value_or(16), seed);

  EigenBasis product_basis;
  std::string basis_source;
  if (base_irreps) {
    const IrrepSet cyc = irreps_for(cyclic(inst.p));
    const IrrepSet prod = IrrepSet::validated(inst.graph.group, product_irreps(*base_irreps, cyc));
    product_basis = build_basis(prod, inst.graph.gens, seed);
    basis_source = "representations";
  } else {
    product_basis = dense_eigenbasis(inst.graph);
    basis_source = "dense";
  }
  const double witness = qe_lower_witness(product_basis, inst);
  const double h3 = std::pow(double(inst.base_order()), 3);

  out.json("spectrum.json", io::spectrum_json(table));
  io::Json dj = io::deloc_json(rep);
  dj["qe_lower_witness"] = witness;
  dj["witness_basis"] = basis_source;
  dj["implied_lower_bound"] = (rep.m_value * rep.m_value / 2.0 - 1.0) / h3;
  out.json("deloc.json", dj);
  out.text("deloc.csv", io::deloc_csv(rep));
  out.result.summary = {{"collisions", table.collisions.size()}, {"M", rep.m_value}, {"qe_lower_witness", witness}};
}

inline void run_export(const ExperimentConfig& c, Outputs& out) {
  const auto rg = resolve_group(c);
  const IrrepSet irreps = resolve_irreps(c, rg.group);
  out.json("group.json", io::group_json(rg.group, rg.generators));
  out.json("irreps.json", io::irreps_json(rg.group, irreps.irreps()));
}

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace detail

/// Runs one command and writes its manifest. A missing seed is drawn from
/// system entropy and recorded.
inline RunResult execute(ExperimentConfig c) {
  if (!c.seed) {
    std::random_device rd;
    c.seed = (std::uint64_t(rd()) << 32) | rd();
  }
  for (std::string* path : {&c.irreps}) {
    std::error_code ec;
    if (!path->empty()) *path = io::fs::absolute(*path, ec).string();
  }
  {
    std::error_code ec;
    if (!c.group.empty() && io::fs::is_regular_file(c.group, ec)) c.group = io::fs::absolute(c.group, ec).string();
    if (!c.preset.empty() && !find_preset(c.preset) && io::fs::is_regular_file(c.preset, ec))
      c.preset = io::fs::absolute(c.preset, ec).string();
  }
  const std::string started = detail::utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  detail::Outputs out{c.out, {}};
  if (c.command == "build") detail::run_build(c, out);
  else if (c.command == "concentration") detail::run_concentration(c, out);
  else if (c.command == "deloc") detail::run_deloc(c, out);
  else if (c.command == "export") detail::run_export(c, out);
  else fail(ErrorCode::ParamOutOfRange, "unknown command '" + c.command + "'");
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  io::Json m;
  m["version"] = kToolVersion;
  m["command"] = c.command;
  m["config"] = config_json(c);
  m["seed"] = *c.seed;
  m["started_at"] = started;
  m["elapsed_ms"] = ms;
  m["outputs"] = out.result.outputs;
  io::write_json(out.dir / "manifest.json", m);
  return out.result;
}

/// Re-runs the configuration stored in a manifest, optionally into another directory.
inline RunResult replay(const io::fs::path& manifest, const std::string& out_dir = "") {
  const io::Json m = io::load_json(manifest);
  ExperimentConfig c = config_from_json(io::detail::field(m, "config", manifest.string()));
  if (!c.seed) fail(ErrorCode::ParseError, manifest.string() + ": config has no seed");
  c.out = out_dir.empty() ? manifest.parent_path().string() : out_dir;
  if (c.out.empty()) c.out = ".";
  return execute(c);
}

/// Maps an error to the stable exit-code contract: 3 for I/O, 2 otherwise.
inline int exit_code_for(const Error& e) { return e.code() == ErrorCode::IoError ? 3 : 2; }

}  // namespace qe
