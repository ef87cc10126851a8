#pragma once

#include <vector>

#include "chtheta/ch.hpp"

namespace chtheta {

/// Chebyshev-Gauss-Lobatto nodes on [lo, hi] in ascending order and the
/// dense differentiation matrix acting on values at those nodes.
struct ChebOperator {
  Eigen::VectorXd nodes;
  Eigen::MatrixXd d;
};

ChebOperator cheb_operator(int n, double lo, double hi);

struct PdeReport {
  /// max |m_t + u m_x + 2 m u_x| / max(|m_t|, |u m_x|, |2 m u_x|)
  double residual = 0.0;
  /// max |m - m_closed| / max |m_closed|, m from spectral derivatives of u.
  double m_mismatch = 0.0;
};

/// Spectral check of the CH equation using only x and u of the field.
/// Derivatives are taken in (y, t) and converted with
///   d/dx = (1 / x_y) d/dy,   d/dt|_x = d/dt|_y - x_t d/dx.
PdeReport pde_check(const SolutionField& field);
double pde_residual(const SolutionField& field);

FieldImag reality_report(const SolutionField& field);

struct HalfPeriodReport {
  double worst = 0.0;
  int worst_i = 0;
  int worst_j = 0;
};

/// For every pair of branch points, distance of the lattice coordinates of
/// 2 * (Abel map between them) to integers. B-coordinates along degenerate
/// cuts are left out.
HalfPeriodReport halfperiod_check(const Curve& curve, const QuadConfig& quad = {});
HalfPeriodReport halfperiod_check(const PeriodData& periods);

}  // namespace chtheta
