#include "chtheta/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorKind::ConfigParse, what); }

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) fail("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(where + "." + key + ": " + e.what());
  }
}

template <class T>
T require(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) fail("missing key '" + std::string(key) + "' in " + where);
  T out{};
  read(obj, key, out, where);
  return out;
}

Preset preset_of(const std::string& s) {
  if (s == "smooth") return Preset::smooth;
  if (s == "cusped") return Preset::cusped;
  fail("preset must be 'smooth' or 'cusped', got '" + s + "'");
}

NodeKind node_kind_of(const std::string& s) {
  if (s == "uniform") return NodeKind::uniform;
  if (s == "chebyshev") return NodeKind::chebyshev;
  fail("node_kind must be 'uniform' or 'chebyshev', got '" + s + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(name + ": " + e.what());
  }
  only_keys(root,
            {"branch_points", "a", "e_index", "d", "k", "zeta_re", "preset", "grid",
             "truncation_eps", "degeneracy_threshold", "quad", "outputs", "checks"},
            "config");

  RunConfig cfg;
  cfg.name = name;
  cfg.branch_points = require<std::vector<double>>(root, "branch_points", "config");

  const json& a = root.contains("a") ? root.at("a") : json();
  if (a.is_null()) fail("missing key 'a' in config");
  only_keys(a, {"lambda", "sheet"}, "a");
  cfg.a_lambda = require<double>(a, "lambda", "a");
  read(a, "sheet", cfg.a_sheet, "a");
  if (cfg.a_sheet != 1 && cfg.a_sheet != 2) fail("a.sheet must be 1 or 2");

  cfg.e_index = require<int>(root, "e_index", "config");

  if (root.contains("d")) {
    const json& d = root.at("d");
    only_keys(d, {"characteristics", "vector"}, "d");
    if (d.contains("characteristics") == d.contains("vector")) {
      fail("d needs exactly one of 'characteristics' or 'vector'");
    }
    if (d.contains("characteristics")) {
      auto rows = require<std::vector<std::vector<int>>>(d, "characteristics", "d");
      if (rows.size() != 2) fail("d.characteristics must have two rows");
      cfg.d_characteristics = rows;
    } else {
      auto pairs = require<std::vector<std::vector<double>>>(d, "vector", "d");
      std::vector<cplx> v;
      for (const auto& p : pairs) {
        if (p.size() != 2) fail("d.vector entries must be [re, im] pairs");
        v.emplace_back(p[0], p[1]);
      }
      cfg.d_vector = v;
    }
  }

  read(root, "k", cfg.k, "config");
  read(root, "zeta_re", cfg.zeta_re, "config");
  if (root.contains("preset")) cfg.preset = preset_of(require<std::string>(root, "preset", "config"));

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    only_keys(g, {"y0", "y1", "Ny", "t0", "t1", "Nt", "node_kind"}, "grid");
    read(g, "y0", cfg.grid.y0, "grid");
    read(g, "y1", cfg.grid.y1, "grid");
    read(g, "Ny", cfg.grid.ny, "grid");
    read(g, "t0", cfg.grid.t0, "grid");
    read(g, "t1", cfg.grid.t1, "grid");
    read(g, "Nt", cfg.grid.nt, "grid");
    if (g.contains("node_kind")) cfg.grid.node_kind = node_kind_of(require<std::string>(g, "node_kind", "grid"));
  }
  if (cfg.grid.ny < 2 || cfg.grid.nt < 1 || !(cfg.grid.y0 < cfg.grid.y1)) {
    fail("grid needs Ny >= 2, Nt >= 1 and y0 < y1");
  }

  read(root, "truncation_eps", cfg.truncation_eps, "config");
  read(root, "degeneracy_threshold", cfg.degeneracy_threshold, "config");

  if (root.contains("quad")) {
    const json& q = root.at("quad");
    only_keys(q, {"tol", "max_nodes"}, "quad");
    read(q, "tol", cfg.quad.tol, "quad");
    read(q, "max_nodes", cfg.quad.max_nodes, "quad");
  }

  cfg.csv_path = name + ".csv";
  cfg.meta_path = name + ".meta.json";
  if (root.contains("outputs")) {
    const json& o = root.at("outputs");
    only_keys(o, {"csv_path", "meta_path"}, "outputs");
    read(o, "csv_path", cfg.csv_path, "outputs");
    read(o, "meta_path", cfg.meta_path, "outputs");
  }

  if (root.contains("checks")) {
    const json& c = root.at("checks");
    only_keys(c, {"fay", "pde", "samples"}, "checks");
    read(c, "fay", cfg.checks.fay, "checks");
    read(c, "pde", cfg.checks.pde, "checks");
    read(c, "samples", cfg.checks.samples, "checks");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.stem().string());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["branch_points"] = cfg.branch_points;
  j["a"] = {{"lambda", cfg.a_lambda}, {"sheet", cfg.a_sheet}};
  j["e_index"] = cfg.e_index;
  if (cfg.d_characteristics) {
    j["d"] = {{"characteristics", *cfg.d_characteristics}};
  } else if (cfg.d_vector) {
    json v = json::array();
    for (const cplx& c : *cfg.d_vector) v.push_back({c.real(), c.imag()});
    j["d"] = {{"vector", v}};
  }
  j["k"] = cfg.k;
  j["zeta_re"] = cfg.zeta_re;
  j["preset"] = std::string(to_string(cfg.preset));
  j["grid"] = {{"y0", cfg.grid.y0},
               {"y1", cfg.grid.y1},
               {"Ny", cfg.grid.ny},
               {"t0", cfg.grid.t0},
               {"t1", cfg.grid.t1},
               {"Nt", cfg.grid.nt},
               {"node_kind", std::string(to_string(cfg.grid.node_kind))}};
  j["truncation_eps"] = cfg.truncation_eps;
  j["degeneracy_threshold"] = cfg.degeneracy_threshold;
  j["quad"] = {{"tol", cfg.quad.tol}, {"max_nodes", cfg.quad.max_nodes}};
  j["outputs"] = {{"csv_path", cfg.csv_path}, {"meta_path", cfg.meta_path}};
  j["checks"] = {{"fay", cfg.checks.fay}, {"pde", cfg.checks.pde}, {"samples", cfg.checks.samples}};
  return j.dump(2);
}

DSpec d_spec_of(const RunConfig& cfg) {
  DSpec spec;
  if (cfg.d_characteristics) {
    spec.characteristic =
        Characteristic::from_bits((*cfg.d_characteristics)[0], (*cfg.d_characteristics)[1]);
  } else if (cfg.d_vector) {
    CVector v(cfg.d_vector->size());
    for (std::size_t i = 0; i < cfg.d_vector->size(); ++i) v(i) = (*cfg.d_vector)[i];
    spec.vector = v;
  }
  return spec;
}

}  // namespace chtheta
