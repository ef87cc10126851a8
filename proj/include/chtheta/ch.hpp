#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chtheta/fay.hpp"

namespace chtheta {

enum class Preset { smooth, cusped };
enum class NodeKind { uniform, chebyshev };

std::string_view to_string(Preset p);
std::string_view to_string(NodeKind k);

/// d given either by half-integer characteristics or explicitly.
struct DSpec {
  std::optional<Characteristic> characteristic;
  std::optional<CVector> vector;
};

/// Frozen constants of the solution
///   x + alpha1 y + alpha2 t + zeta = ln Theta(Z - d + r/2) / Theta(Z - d - r/2),
///   Z = V_e y + V_b t,  u = D_b ln(...) - alpha2.
struct CHParams {
  std::shared_ptr<const FayContext> ctx;
  SurfacePoint a = SurfacePoint::on_sheet(0.0, 1);
  SurfacePoint b = SurfacePoint::on_sheet(0.0, 2);
  SurfacePoint e = SurfacePoint::branch(0, 0.0);
  CVector d;
  double k = 1.0;
  cplx zeta;
  CVector r;
  CVector vb;
  CVector ve;
  cplx alpha1;
  cplx alpha2;
  FayScalars fay;
  /// +1 or -1: sign applied to V_e so that p2 > 0 (x increasing in y).
  double ve_sign = 1.0;
  /// Constant phase of Theta(Z - d), fixed at y = t = 0.
  cplx theta0_phase = 1.0;
  Preset preset = Preset::smooth;
  std::vector<std::string> warnings;

  const Curve& curve() const { return ctx->periods().curve; }
  const PeriodData& periods() const { return ctx->periods(); }
  const ThetaSeries& series() const { return ctx->series(); }
};

struct CHSetupOptions {
  double eps = 1e-12;
  QuadConfig quad;
};

CHParams ch_setup(const Curve& curve, const SurfacePoint& a, int e_index, const DSpec& d_spec,
                  double k, double zeta_re, Preset preset, const CHSetupOptions& opts = {});

/// Complex values at one (y, t) before any reality check.
struct PointValue {
  cplx x;
  cplx u;
  cplx ux;
  cplx uxx;
  cplx m;
  /// dx/dy = p2 / (g1 g2)
  cplx xy;
  /// Theta(Z - d) with its constant phase removed; changes sign at cusps.
  double theta0_signed = 0.0;
  /// |Theta(Z - d)| / sqrt|Theta(Z - d + r/2) Theta(Z - d - r/2)|
  double theta0_ratio = 0.0;
};

PointValue evaluate(const CHParams& params, double y, double t);

/// Throws NonRealX if |Im x| >= 1e-8.
double x_of(const CHParams& params, double y, double t);

struct UValues {
  double u;
  double ux;
  double uxx;
  double m;
};
/// Throws CuspAtPoint where Theta(Z - d) vanishes.
UValues u_of(const CHParams& params, double y, double t);

inline constexpr double kRealityTolerance = 1e-8;
inline constexpr double kCuspThreshold = 1e-6;

/// Largest |Im x| and, for the other fields, |Im f| / max(1, |f|) over the grid.
struct FieldImag {
  double x = 0.0;
  double u = 0.0;
  double ux = 0.0;
  double uxx = 0.0;
  double m = 0.0;
  double max() const;
};

/// Grid fields, rows indexed by t and columns by y.
struct SolutionField {
  std::vector<double> y;
  std::vector<double> t;
  NodeKind node_kind = NodeKind::uniform;
  Preset preset = Preset::smooth;
  double k = 1.0;
  Eigen::MatrixXd x, u, ux, uxx, m, xy, theta0;
  Eigen::MatrixXi cusp;
  FieldImag imag;
  double eps = 0.0;
};

/// Ascending nodes on [lo, hi]; Chebyshev nodes are Gauss-Lobatto points.
std::vector<double> grid_nodes(double lo, double hi, int n, NodeKind kind);

/// strict: throw NonRealX when an imaginary part reaches kRealityTolerance.
SolutionField solve_grid(const CHParams& params, double y0, double y1, int ny, double t0,
                         double t1, int nt, NodeKind kind, bool strict = true);

/// Root of x(y, t) = x_target in [y_lo, y_hi].
double invert_x(const CHParams& params, double t, double x_target, double y_lo, double y_hi);

struct Cusp {
  double y0;
  double x0;
  double u0;
  double exponent;
  /// u - u0 has the same sign on both sides: u_y changes sign at y0.
  bool uy_sign_change;
};

std::vector<Cusp> detect_cusps(const CHParams& params, double t, double y_lo, double y_hi,
                               int ny);

/// Largest interior maximum of u(., t) over [y_lo, y_hi]: (y, x).
std::pair<double, double> crest(const CHParams& params, double t, double y_lo, double y_hi);

/// Cross-correlation of two t-slices resampled on a uniform x grid.
double xcorr_velocity(const SolutionField& field, int row0, int row1);

/// Genus-1 travelling-wave velocity: cross-correlation estimate refined by
/// aligning the crests of u(., t0) and u(., t1).
double travelling_velocity(const CHParams& params, double t0, double t1, double y_lo,
                           double y_hi, int ny = 256);

}  // namespace chtheta
