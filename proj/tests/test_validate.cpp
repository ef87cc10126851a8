#include <doctest.h>

#include <cmath>
#include <string>

#include "chtheta/errors.hpp"
#include "chtheta/run.hpp"
#include "chtheta/validate.hpp"

using namespace chtheta;

namespace {

RunConfig config(const std::string& name) {
  return load_config(std::string(CHTHETA_CONFIG_DIR) + "/" + name + ".json");
}

}  // namespace

TEST_CASE("Chebyshev differentiation is exact on polynomials") {
  const ChebOperator op = cheb_operator(9, -2.0, 3.0);  // 10 nodes
  CHECK(op.nodes(0) == doctest::Approx(-2.0));
  CHECK(op.nodes(9) == doctest::Approx(3.0));
  const Eigen::VectorXd x = op.nodes;
  const Eigen::VectorXd p = x.array().pow(5) - 2.0 * x.array().square() + 1.0;
  const Eigen::VectorXd dp = 5.0 * x.array().pow(4) - 4.0 * x.array();
  CHECK((op.d * p - dp).cwiseAbs().maxCoeff() < 1e-11 * dp.cwiseAbs().maxCoeff());
  // constants are annihilated
  CHECK((op.d * Eigen::VectorXd::Ones(10)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("smooth genus-2 field solves the equation") {
  const RunConfig cfg = config("fig2_smooth");
  const CHParams p = setup_from_config(cfg);
  SolutionField f = solve_from_config(p, cfg);
  const PdeReport r = pde_check(f);
  CHECK(r.residual < 1e-6);
  CHECK(r.m_mismatch < 1e-6);
  CHECK(reality_report(f).max() < 1e-8);

  // a small perturbation of u is visible
  for (Eigen::Index i = 0; i < f.u.rows(); ++i) {
    for (Eigen::Index j = 0; j < f.u.cols(); ++j) {
      f.u(i, j) += 1e-4 * std::sin(f.y[j]) * std::cos(f.t[i]);
    }
  }
  CHECK(pde_residual(f) > 1e-5);
}

TEST_CASE("cusped fields and uniform grids are rejected") {
  const RunConfig cfg = config("fig4_cusped");
  const CHParams p = setup_from_config(cfg);
  const SolutionField f = solve_grid(p, -6, 6, 17, -1, 1, 5, NodeKind::chebyshev);
  try {
    pde_check(f);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::CuspedFieldRejected);
  }
  const CHParams smooth = setup_from_config(config("fig2_smooth"));
  const SolutionField u = solve_grid(smooth, -4, 4, 16, -1, 1, 4, NodeKind::uniform);
  CHECK_THROWS_AS(pde_check(u), Error);
}

TEST_CASE("twice the Abel map between branch points is a lattice vector") {
  for (const char* name : {"fig2_smooth", "fig2_smooth_degenerate", "fig3_smooth",
                           "fig3_smooth_degenerate", "genus1_travelling"}) {
    const RunConfig cfg = config(name);
    const Curve c = build_curve(cfg.branch_points, cfg.degeneracy_threshold, cplx(cfg.a_lambda, 0));
    CAPTURE(name);
    CHECK(halfperiod_check(c).worst < 1e-8);
  }
}
