#pragma once

#include <string>
#include <vector>

#include "chtheta/curve.hpp"
#include "chtheta/quadrature.hpp"

namespace chtheta {

struct QuadEntry {
  std::string label;
  int nodes = 0;
  double last_delta = 0.0;
  std::string method;
};

/// Periods of the cut/gap homology basis and the normalized differentials
/// omega_i = sum_j normalization(i, j) lambda^j dlambda / mu.
struct PeriodData {
  Curve curve;
  QuadConfig quad;
  /// a_raw(k, j): A_k-period of lambda^j dlambda / mu (A_k encircles cut k+1).
  CMatrix a_raw;
  /// b_raw(k, j): B_k-period of lambda^j dlambda / mu before normalization.
  CMatrix b_raw;
  CMatrix normalization;
  CMatrix riemann;
  /// +1 if the gap orientation already gave a negative definite Re B, else -1.
  int b_orientation = 1;
  double a_condition = 0.0;
  std::vector<QuadEntry> quadrature_report;
};

enum class LocalParamKind { nonbranch, branch };

/// Leading coefficient of omega in a local parameter at `at`.
///   nonbranch: k = lambda - lambda(p) on p's sheet.
///   branch:    lambda = lambda_j + s k^2 with s = sign prod_{i != j}(lambda_j - lambda_i),
///              and k > 0 on the sheet where mu = +k sqrt|prod_{i != j}|.
struct DirectionVector {
  CVector v;
  SurfacePoint at;
  LocalParamKind local_param_kind;
};

CMatrix a_periods(const Curve& curve, const QuadConfig& quad = {});

PeriodData riemann_matrix(const Curve& curve, const QuadConfig& quad = {});

/// Integral of (1, lambda, ..., lambda^(g-1)) dlambda / mu from base to p.
/// Points on one sheet are joined along the real axis at +i0 (or -i0 when the
/// endpoint lies in the lower half plane), closed by a vertical leg for
/// non-real endpoints. Points on different sheets, or branch points, are
/// joined through the branch point nearest to base. Branch-to-branch legs run
/// on sheet 1.
CVector raw_abel_map(const Curve& curve, const SurfacePoint& p, const SurfacePoint& base,
                     const QuadConfig& quad = {});

/// Normalized Abel integral from base to p.
CVector abel_map(const PeriodData& periods, const SurfacePoint& p, const SurfacePoint& base);

/// r = 2 * integral from e to b = sigma(a); equals the image of the contour
/// a -> e -> b.
CVector vector_r(const PeriodData& periods, const SurfacePoint& a, const SurfacePoint& e);

DirectionVector direction_vector(const Curve& curve, const SurfacePoint& p,
                                 const CMatrix& normalization);

/// The surface point with branch local parameter k near branch point j.
SurfacePoint branch_parameter_point(const Curve& curve, int j, double k);

/// Coordinates (N, M) of v = 2 pi i N + B M, as reals.
struct LatticeCoordinates {
  Eigen::VectorXd n;
  Eigen::VectorXd m;
};
LatticeCoordinates lattice_coordinates(const CMatrix& riemann, const CVector& v);

}  // namespace chtheta
