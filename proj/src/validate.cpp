#include "chtheta/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chtheta/errors.hpp"

namespace chtheta {

ChebOperator cheb_operator(int n, double lo, double hi) {
  if (n < 2 || !(lo < hi)) {
    throw Error(ErrorKind::InvalidArgument, "cheb_operator needs n >= 2 and lo < hi");
  }
  constexpr double pi = std::numbers::pi;
  const double half = 0.5 * (hi - lo);
  ChebOperator op;
  op.nodes.resize(n + 1);
  op.d.resize(n + 1, n + 1);
  Eigen::VectorXd theta(n + 1);
  for (int j = 0; j <= n; ++j) {
    theta(j) = pi * j / n;
    // -cos(pi j / n) written symmetrically
    const double xi = std::sin(pi * (2.0 * j - n) / (2.0 * n));
    op.nodes(j) = 0.5 * (lo + hi) + half * xi;
  }
  op.nodes(0) = lo;
  op.nodes(n) = hi;
  for (int i = 0; i <= n; ++i) {
    const double ci = (i == 0 || i == n) ? 2.0 : 1.0;
    double row = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      const double diff =
          2.0 * std::sin(0.5 * (theta(i) + theta(j))) * std::sin(0.5 * (theta(i) - theta(j)));
      op.d(i, j) = (ci / cj) * sign / diff;
      row += op.d(i, j);
    }
    op.d(i, i) = -row;
  }
  op.d /= half;
  return op;
}

PdeReport pde_check(const SolutionField& f) {
  if (f.preset == Preset::cusped || f.cusp.any()) {
    throw Error(ErrorKind::CuspedFieldRejected, "spectral PDE check needs a smooth field");
  }
  if (f.node_kind != NodeKind::chebyshev || f.y.size() < 3 || f.t.size() < 3) {
    throw Error(ErrorKind::InvalidArgument, "PDE check needs Chebyshev nodes in y and t");
  }
  const int ny = static_cast<int>(f.y.size());
  const int nt = static_cast<int>(f.t.size());
  const Eigen::MatrixXd dy = cheb_operator(ny - 1, f.y.front(), f.y.back()).d;
  const Eigen::MatrixXd dt = cheb_operator(nt - 1, f.t.front(), f.t.back()).d;

  auto by_y = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return m * dy.transpose(); };
  auto by_t = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return dt * m; };

  const Eigen::MatrixXd& x = f.x;
  const Eigen::MatrixXd& u = f.u;
  const Eigen::MatrixXd xy = by_y(x);
  const Eigen::MatrixXd xt = by_t(x);
  const bool increasing = (xy.array() > 0.0).all();
  const bool decreasing = (xy.array() < 0.0).all();
  if (!increasing && !decreasing) {
    throw Error(ErrorKind::NonMonotoneX, "x is not monotone in y on every t-slice");
  }
  auto by_x = [&](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
    return by_y(m).cwiseQuotient(xy);
  };

  const Eigen::MatrixXd ux = by_x(u);
  const Eigen::MatrixXd uxx = by_x(ux);
  const Eigen::MatrixXd m = u - uxx + Eigen::MatrixXd::Constant(nt, ny, f.k);
  const Eigen::MatrixXd mx = by_x(m);
  const Eigen::MatrixXd mt = by_t(m) - xt.cwiseProduct(mx);

  const Eigen::MatrixXd t1 = u.cwiseProduct(mx);
  const Eigen::MatrixXd t2 = 2.0 * m.cwiseProduct(ux);
  const Eigen::MatrixXd res = mt + t1 + t2;
  const double scale = std::max({mt.cwiseAbs().maxCoeff(), t1.cwiseAbs().maxCoeff(),
                                 t2.cwiseAbs().maxCoeff(), 1e-300});
  PdeReport out;
  out.residual = res.cwiseAbs().maxCoeff() / scale;
  if (f.m.size() == m.size()) {
    out.m_mismatch = (m - f.m).cwiseAbs().maxCoeff() / std::max(f.m.cwiseAbs().maxCoeff(), 1e-300);
  }
  return out;
}

double pde_residual(const SolutionField& field) { return pde_check(field).residual; }

FieldImag reality_report(const SolutionField& field) { return field.imag; }

HalfPeriodReport halfperiod_check(const PeriodData& periods) {
  const Curve& curve = periods.curve;
  const int count = static_cast<int>(curve.branch_points().size());
  const int g = curve.genus();
  HalfPeriodReport out;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      const CVector v = 2.0 * abel_map(periods, curve.branch_point(j), curve.branch_point(i));
      const LatticeCoordinates lc = lattice_coordinates(periods.riemann, v);
      double worst = 0.0;
      for (int k = 0; k < g; ++k) {
        worst = std::max(worst, std::abs(lc.n(k) - std::round(lc.n(k))));
        if (!curve.cut_is_degenerate(k + 1)) {
          worst = std::max(worst, std::abs(lc.m(k) - std::round(lc.m(k))));
        }
      }
      if (worst >= out.worst) out = {worst, i, j};
    }
  }
  return out;
}

HalfPeriodReport halfperiod_check(const Curve& curve, const QuadConfig& quad) {
  return halfperiod_check(riemann_matrix(curve, quad));
}

}  // namespace chtheta
