#include "chtheta/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const CMatrix& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    out.push_back(row);
  }
  return out;
}

json to_json(const Characteristic& ch) {
  json top = json::array(), bottom = json::array();
  for (Eigen::Index i = 0; i < ch.d1.size(); ++i) {
    top.push_back(static_cast<int>(std::lround(2.0 * ch.d1(i))));
    bottom.push_back(static_cast<int>(std::lround(2.0 * ch.d2(i))));
  }
  return json::array({top, bottom});
}

json to_json(const ResidualStats& s) {
  return {{"max", s.max}, {"median", s.median}, {"scored", s.samples}};
}

json to_json(const FayStats& s) {
  return {{"fay1", to_json(s.fay1)},
          {"fay2", to_json(s.fay2)},
          {"cor1", to_json(s.ch1)},
          {"cor2", to_json(s.ch2)},
          {"max", s.max()},
          {"points", s.points},
          {"resampled", s.resampled},
          {"unresolved", s.unresolved}};
}

json to_json(const FieldImag& im) {
  return {{"x", im.x}, {"u", im.u}, {"ux", im.ux}, {"uxx", im.uxx}, {"m", im.m}, {"max", im.max()}};
}

ResidualStats stats_of(std::vector<double> v) {
  ResidualStats s;
  s.samples = static_cast<int>(v.size());
  if (v.empty()) return s;
  s.max = *std::max_element(v.begin(), v.end());
  const auto mid = v.begin() + v.size() / 2;
  std::nth_element(v.begin(), mid, v.end());
  s.median = *mid;
  if (v.size() % 2 == 0) s.median = 0.5 * (s.median + *std::max_element(v.begin(), mid));
  return s;
}

json warning(const std::string& check, double value) {
  return {{"check", check}, {"value", value}, {"threshold", kWarnThreshold}};
}

fs::path resolve(const std::string& path, const std::optional<fs::path>& out_dir) {
  fs::path p(path);
  if (out_dir && p.is_relative()) p = *out_dir / p;
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  f << text;
}

json params_json(const CHParams& p) {
  const FayScalars& s = p.fay;
  return {{"odd_characteristic", to_json(p.ctx->odd())},
          {"d", to_json(p.d)},
          {"alpha1", to_json(p.alpha1)},
          {"alpha2", to_json(p.alpha2)},
          {"zeta", to_json(p.zeta)},
          {"r", to_json(p.r)},
          {"vb", to_json(p.vb)},
          {"ve", to_json(p.ve)},
          {"ve_sign", p.ve_sign},
          {"B", to_json(p.periods().riemann)},
          {"scalars",
           {{"p1", to_json(s.p1)},
            {"p2", to_json(s.p2)},
            {"p1_tilde", to_json(s.p1_tilde)},
            {"p2_tilde", to_json(s.p2_tilde)},
            {"q2_tilde", to_json(s.q2_tilde)},
            {"identity_residual", s.identity_residual()}}},
          {"setup_warnings", p.warnings}};
}

int cmd_periods(const RunConfig& cfg, std::ostream& out) {
  const Curve curve = build_curve(cfg.branch_points, cfg.degeneracy_threshold,
                                  cplx(cfg.a_lambda, 0.0));
  const PeriodData periods = riemann_matrix(curve, cfg.quad);
  out << periods_json(periods) << "\n";
  return 0;
}

int cmd_check_fay(const RunConfig& cfg, std::ostream& out) {
  const CHParams p = setup_from_config(cfg);
  const FayStats s = fay_statistics(p, cfg, cfg.checks.samples);
  json report = to_json(s);
  report["odd_characteristic"] = to_json(p.ctx->odd());
  report["identity_residual"] = p.fay.identity_residual();
  json warnings = json::array();
  if (s.max() > kWarnThreshold) warnings.push_back(warning("fay", s.max()));
  report["warnings"] = warnings;
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_check_pde(const RunConfig& cfg, std::ostream& out) {
  const CHParams p = setup_from_config(cfg);
  const SolutionField f = solve_from_config(p, cfg);
  const PdeReport r = pde_check(f);
  json report = {{"residual", r.residual},
                 {"m_mismatch", r.m_mismatch},
                 {"Ny", cfg.grid.ny},
                 {"Nt", cfg.grid.nt}};
  json warnings = json::array();
  if (r.residual > kWarnThreshold) warnings.push_back(warning("pde", r.residual));
  report["warnings"] = warnings;
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_solve(const RunConfig& cfg, const std::optional<fs::path>& out_dir, std::ostream& out) {
  const CHParams p = setup_from_config(cfg);
  const SolutionField f = solve_from_config(p, cfg);

  json meta;
  meta["config"] = json::parse(config_to_json(cfg));
  meta["params"] = params_json(p);
  meta["truncation_eps"] = f.eps;
  meta["reality"] = to_json(f.imag);
  meta["cusp_count"] = f.cusp.sum();
  json warnings = json::array();
  for (const std::string& w : p.warnings) warnings.push_back({{"check", "setup"}, {"message", w}});

  double v = 0.0;
  if (f.t.size() >= 2) v = -xcorr_velocity(f, 0, static_cast<int>(f.t.size()) - 1);
  meta["comoving_v"] = v;

  json checks;
  if (cfg.checks.fay) {
    const FayStats s = fay_statistics(p, cfg, cfg.checks.samples);
    checks["fay"] = to_json(s);
    if (s.max() > kWarnThreshold) warnings.push_back(warning("fay", s.max()));
  } else {
    checks["fay"] = "disabled";
  }
  if (!cfg.checks.pde) {
    checks["pde"] = "disabled";
  } else if (cfg.preset == Preset::cusped || f.cusp.any()) {
    checks["pde"] = "skipped: cusped field";
  } else if (f.node_kind != NodeKind::chebyshev || f.t.size() < 3) {
    checks["pde"] = "skipped: needs a Chebyshev grid with Nt >= 3";
  } else {
    const PdeReport r = pde_check(f);
    checks["pde"] = {{"residual", r.residual}, {"m_mismatch", r.m_mismatch}};
    if (r.residual > kWarnThreshold) warnings.push_back(warning("pde", r.residual));
  }
  meta["checks"] = checks;
  meta["warnings"] = warnings;

  const fs::path csv = resolve(cfg.csv_path, out_dir);
  const fs::path meta_path = resolve(cfg.meta_path, out_dir);
  write_file(csv, field_csv(f));
  write_file(meta_path, meta.dump(2) + "\n");

  json summary = {{"csv", csv.string()},
                  {"meta", meta_path.string()},
                  {"cusp_count", meta["cusp_count"]},
                  {"comoving_v", v},
                  {"warnings", warnings.size()}};
  out << summary.dump(2) << "\n";
  return 0;
}

}  // namespace

double FayStats::max() const { return std::max({fay1.max, fay2.max, ch1.max, ch2.max}); }

CHParams setup_from_config(const RunConfig& cfg) {
  const Curve curve =
      build_curve(cfg.branch_points, cfg.degeneracy_threshold, cplx(cfg.a_lambda, 0.0));
  const int count = static_cast<int>(curve.branch_points().size());
  if (cfg.e_index < 1 || cfg.e_index > count) {
    throw Error(ErrorKind::EIndexOutOfRange, "e_index must lie in 1.." + std::to_string(count));
  }
  CHSetupOptions opts;
  opts.eps = cfg.truncation_eps;
  opts.quad = cfg.quad;
  return ch_setup(curve, SurfacePoint::on_sheet(cfg.a_lambda, cfg.a_sheet), cfg.e_index - 1,
                  d_spec_of(cfg), cfg.k, cfg.zeta_re, cfg.preset, opts);
}

SolutionField solve_from_config(const CHParams& params, const RunConfig& cfg) {
  const GridConfig& g = cfg.grid;
  return solve_grid(params, g.y0, g.y1, g.ny, g.t0, g.t1, g.nt, g.node_kind);
}

std::string field_csv(const SolutionField& f) {
  std::string out = "t,y,x,u,ux,uxx,m,cusp\n";
  char buf[512];
  for (std::size_t i = 0; i < f.t.size(); ++i) {
    for (std::size_t j = 0; j < f.y.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(i);
      const auto c = static_cast<Eigen::Index>(j);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", f.t[i],
                    f.y[j], f.x(r, c), f.u(r, c), f.ux(r, c), f.uxx(r, c), f.m(r, c),
                    f.cusp(r, c));
      out += buf;
    }
  }
  return out;
}

FayStats fay_statistics(const CHParams& p, const RunConfig& cfg, int samples,
                        std::uint64_t seed) {
  const FayChecker checker(p.a, p.b, p.e, *p.ctx);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ydist(cfg.grid.y0, cfg.grid.y1);
  std::uniform_real_distribution<double> tdist(std::min(cfg.grid.t0, cfg.grid.t1),
                                               std::max(cfg.grid.t0, cfg.grid.t1));
  std::vector<double> f1, f2, c1, c2;
  int resampled = 0;
  int drawn = 0;
  int unresolved = 0;
  const int max_draws = 20 * std::max(samples, 1);
  for (int draw = 0; drawn < samples && draw < max_draws; ++draw) {
    const double y = ydist(rng);
    const double t = tdist(rng);
    const CVector z = p.ve * y + p.vb * t - p.d;
    try {
      const FayResiduals r = checker.at(z);
      ++drawn;
      unresolved += r.unresolved;
      if (r.scored[0]) f1.push_back(r.fay1);
      if (r.scored[1]) f2.push_back(r.fay2);
      if (r.scored[2]) c1.push_back(r.ch1);
      if (r.scored[3]) c2.push_back(r.ch2);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::VanishingDenominator) throw;
      ++resampled;
    }
  }
  FayStats s{stats_of(f1), stats_of(f2), stats_of(c1), stats_of(c2)};
  s.resampled = resampled;
  s.unresolved = unresolved;
  s.points = drawn;
  return s;
}

std::string periods_json(const PeriodData& pd) {
  const CMatrix& b = pd.riemann;
  const int g = static_cast<int>(b.rows());
  constexpr double pi = std::numbers::pi;

  const double symmetry = (b - b.transpose()).norm() / b.norm();
  const Eigen::MatrixXd re = 0.5 * (b.real() + b.real().transpose());
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(re).eigenvalues();
  const CMatrix normalized_a = pd.normalization * pd.a_raw.transpose();
  const CMatrix target = cplx(0.0, 2.0 * pi) * CMatrix::Identity(g, g);
  const double a_residual = (normalized_a - target).cwiseAbs().maxCoeff() / (2.0 * pi);
  double im_pi = 0.0;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      const double q = b(i, j).imag() / pi;
      im_pi = std::max(im_pi, std::abs(q - std::round(q)));
    }
  }
  const HalfPeriodReport hp = halfperiod_check(pd);

  json quad = json::array();
  for (const QuadEntry& e : pd.quadrature_report) {
    quad.push_back({{"label", e.label},
                    {"nodes", e.nodes},
                    {"last_delta", e.last_delta},
                    {"method", e.method}});
  }
  json degenerate = json::array();
  for (const auto& [i, j] : pd.curve.degenerate_pairs()) degenerate.push_back({i, j});

  json out = {{"genus", g},
              {"branch_points", pd.curve.branch_points()},
              {"degenerate_pairs", degenerate},
              {"B", to_json(b)},
              {"C", to_json(pd.normalization)},
              {"b_orientation", pd.b_orientation},
              {"a_condition", pd.a_condition},
              {"invariants",
               {{"symmetry", symmetry},
                {"re_B_eigenvalues", std::vector<double>(eig.data(), eig.data() + eig.size())},
                {"a_normalization", a_residual},
                {"im_B_over_pi", im_pi},
                {"halfperiod", {{"worst", hp.worst}, {"i", hp.worst_i + 1}, {"j", hp.worst_j + 1}}}}},
              {"quadrature", quad}};
  return out.dump(2);
}

int run(const std::string& subcommand, const fs::path& config_path,
        const std::optional<fs::path>& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = load_config(config_path);
    if (subcommand == "solve") return cmd_solve(cfg, out_dir, out);
    if (subcommand == "periods") return cmd_periods(cfg, out);
    if (subcommand == "check-fay") return cmd_check_fay(cfg, out);
    if (subcommand == "check-pde") return cmd_check_pde(cfg, out);
    err << "error: unknown subcommand '" << subcommand << "'\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chtheta
