#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "chtheta/ch.hpp"

namespace chtheta {

struct GridConfig {
  double y0 = -4.0;
  double y1 = 4.0;
  int ny = 64;
  double t0 = -1.0;
  double t1 = 1.0;
  int nt = 64;
  NodeKind node_kind = NodeKind::chebyshev;
};

struct ChecksConfig {
  bool fay = true;
  bool pde = true;
  int samples = 100;
};

/// Strict JSON run configuration. Unknown keys are rejected.
///
///   branch_points   list of reals (required)
///   a               {"lambda": real, "sheet": 1|2} (required)
///   e_index         1-based index of e among the sorted branch points (required)
///   d               {"characteristics": [[top bits], [bottom bits]]}
///                   or {"vector": [[re, im], ...]}; default from the preset
///   k, zeta_re      reals, defaults 1 and 0
///   preset          "smooth" | "cusped"
///   grid            {y0, y1, Ny, t0, t1, Nt, node_kind}
///   truncation_eps  theta tail tolerance
///   degeneracy_threshold
///   quad            {tol, max_nodes}
///   outputs         {csv_path, meta_path}
///   checks          {fay, pde, samples}
struct RunConfig {
  std::string name;
  std::vector<double> branch_points;
  double a_lambda = 0.0;
  int a_sheet = 1;
  int e_index = 1;
  std::optional<std::vector<std::vector<int>>> d_characteristics;
  std::optional<std::vector<cplx>> d_vector;
  double k = 1.0;
  double zeta_re = 0.0;
  Preset preset = Preset::smooth;
  GridConfig grid;
  double truncation_eps = 1e-12;
  double degeneracy_threshold = kDefaultDegeneracyThreshold;
  QuadConfig quad;
  std::string csv_path;
  std::string meta_path;
  ChecksConfig checks;
};

/// Throws ConfigParse.
RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig load_config(const std::filesystem::path& path);

/// JSON text of the config with every default filled in.
std::string config_to_json(const RunConfig& cfg);

DSpec d_spec_of(const RunConfig& cfg);

}  // namespace chtheta
