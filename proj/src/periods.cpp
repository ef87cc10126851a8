#include "chtheta/periods.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// Interval m lies between branch points m and m+1; m = -1 and m = 2g+1 are
// the two outer rays.
bool interval_is_cut(const Curve& curve, int m) {
  return m >= 0 && m < static_cast<int>(curve.branch_points().size()) - 1 && m % 2 == 0;
}

// sheet-1 mu(x + i0) / sqrt|prod (x - lambda_k)| on interval m.
cplx interval_phase(const Curve& curve, int m) {
  const int pairs = curve.genus() + 1;
  const int first_right = (m + 2) / 2;  // ceil((m + 1) / 2) for m >= -1
  const int right = pairs - std::clamp(first_right, 0, pairs);
  cplx phase = curve.sheet_sign() * ((right % 2 == 0) ? 1.0 : -1.0);
  if (interval_is_cut(curve, m)) phase *= kI;
  return phase;
}

int interval_of(const Curve& curve, double x) {
  const auto& pts = curve.branch_points();
  return static_cast<int>(std::lower_bound(pts.begin(), pts.end(), x) - pts.begin()) - 1;
}

CVector monomials(double x, int g) {
  CVector out(g);
  double p = 1.0;
  for (int j = 0; j < g; ++j) {
    out(j) = p;
    p *= x;
  }
  return out;
}

// Integral over the whole interval m between two consecutive branch points,
// x = mid - h cos(theta), which removes both endpoint square roots.
QuadResult full_interval(const Curve& curve, int m, const QuadConfig& quad) {
  const auto& pts = curve.branch_points();
  const int g = curve.genus();
  const double lo = pts[m];
  const double hi = pts[m + 1];
  const double h = 0.5 * (hi - lo);
  const cplx phase = interval_phase(curve, m);

  auto f = [&](double tl, double tr) -> CVector {
    const double sl = std::sin(0.5 * tl);
    const double sr = std::sin(0.5 * tr);
    const double dl = 2.0 * h * sl * sl;
    const double dr = 2.0 * h * sr * sr;
    double rest = 1.0;
    for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
      if (k < m) rest *= (lo - pts[k]) + dl;
      else if (k > m + 1) rest *= (pts[k] - hi) + dr;
    }
    const double x = (dl < dr) ? lo + dl : hi - dr;
    return monomials(x, g) / (phase * std::sqrt(rest));
  };

  double nearest = std::numeric_limits<double>::infinity();
  if (m > 0) nearest = std::min(nearest, lo - pts[m - 1]);
  if (m + 2 < static_cast<int>(pts.size())) nearest = std::min(nearest, pts[m + 2] - hi);
  const bool crowded = h > 0.0 && nearest < 2e-2 * h;
  return crowded ? tanh_sinh(f, kPi, quad) : gauss_chebyshev_theta(f, quad);
}

// Integral over [u0, u1] inside the closure of interval m where at least one
// end is an ordinary point.
QuadResult partial_interval(const Curve& curve, int m, double u0, double u1,
                            const QuadConfig& quad) {
  const auto& pts = curve.branch_points();
  const int g = curve.genus();
  const cplx phase = interval_phase(curve, m);
  auto f = [&](double dl, double dr) -> CVector {
    double prod = 1.0;
    for (double lk : pts) {
      const double a = u0 - lk;
      const double b = u1 - lk;
      prod *= std::abs(std::abs(a) <= std::abs(b) ? a + dl : b - dr);
    }
    const double x = (dl < dr) ? u0 + dl : u1 - dr;
    return monomials(x, g) / (phase * std::sqrt(prod));
  };
  return tanh_sinh(f, u1 - u0, quad);
}

struct RealEnd {
  double x;
  std::optional<int> branch;
};

// Sheet-1 integral along the real axis from a to b; lower_side selects x - i0.
CVector real_path(const Curve& curve, RealEnd a, RealEnd b, bool lower_side,
                  const QuadConfig& quad) {
  const int g = curve.genus();
  if (a.x > b.x || (a.x == b.x && a.branch && b.branch && *a.branch > *b.branch)) {
    return -real_path(curve, b, a, lower_side, quad);
  }
  CVector total = CVector::Zero(g);
  if (a.x == b.x && a.branch == b.branch) return total;

  const auto& pts = curve.branch_points();
  std::vector<RealEnd> stops{a};
  for (int k = 0; k < static_cast<int>(pts.size()); ++k) {
    const bool after_a = a.branch ? k > *a.branch : pts[k] > a.x;
    const bool before_b = b.branch ? k < *b.branch : pts[k] < b.x;
    if (after_a && before_b) stops.push_back({pts[k], k});
  }
  stops.push_back(b);

  for (std::size_t s = 0; s + 1 < stops.size(); ++s) {
    const RealEnd& u = stops[s];
    const RealEnd& w = stops[s + 1];
    int m = 0;
    CVector piece;
    if (u.branch && w.branch && *w.branch == *u.branch + 1) {
      m = *u.branch;
      piece = full_interval(curve, m, quad).value;
    } else {
      if (w.x == u.x) continue;
      m = u.branch ? *u.branch : (w.branch ? *w.branch - 1 : interval_of(curve, 0.5 * (u.x + w.x)));
      piece = partial_interval(curve, m, u.x, w.x, quad).value;
    }
    if (lower_side && interval_is_cut(curve, m)) piece = -piece;
    total += piece;
  }
  return total;
}

// Sheet-1 integral from the real point x0 straight up (or down) to lambda.
CVector vertical_leg(const Curve& curve, double x0, cplx lambda, const QuadConfig& quad) {
  const int g = curve.genus();
  const double height = std::abs(lambda.imag());
  const double dir = lambda.imag() > 0 ? 1.0 : -1.0;
  auto f = [&](double dl, double dr) -> CVector {
    const double s = (dl < dr) ? dl : height - dr;
    const cplx z(x0, dir * s);
    CVector out(g);
    cplx p = 1.0;
    for (int j = 0; j < g; ++j) {
      out(j) = p;
      p *= z;
    }
    return out * (cplx(0.0, dir) / curve.sheet1_mu(z));
  };
  return tanh_sinh(f, height, quad).value;
}

RealEnd real_end_of(const Curve& curve, const SurfacePoint& p) {
  if (p.is_branch()) return {curve.branch_points()[p.branch_index()], p.branch_index()};
  return {p.lambda().real(), std::nullopt};
}

// Sheet-1 integral from a real start to a point with arbitrary lambda.
CVector sheet1_leg(const Curve& curve, RealEnd start, const SurfacePoint& p,
                   const QuadConfig& quad) {
  if (p.is_branch() || p.lambda().imag() == 0.0) {
    return real_path(curve, start, real_end_of(curve, p), false, quad);
  }
  const double x = p.lambda().real();
  const bool lower = p.lambda().imag() < 0.0;
  return real_path(curve, start, {x, curve.branch_index_of(x)}, lower, quad) +
         vertical_leg(curve, x, p.lambda(), quad);
}

double sheet_factor(const SurfacePoint& p) {
  return (p.sheet() && *p.sheet() == 2) ? -1.0 : 1.0;
}

int nearest_branch(const Curve& curve, cplx lambda) {
  const auto& pts = curve.branch_points();
  int best = 0;
  for (int k = 1; k < static_cast<int>(pts.size()); ++k) {
    if (std::abs(lambda - pts[k]) < std::abs(lambda - pts[best])) best = k;
  }
  return best;
}

}  // namespace

CMatrix a_periods(const Curve& curve, const QuadConfig& quad) {
  const int g = curve.genus();
  CMatrix a(g, g);
  for (int k = 0; k < g; ++k) {
    a.row(k) = 2.0 * full_interval(curve, 2 * (k + 1), quad).value.transpose();
  }
  return a;
}

PeriodData riemann_matrix(const Curve& curve, const QuadConfig& quad) {
  const int g = curve.genus();
  PeriodData out{curve, quad, CMatrix(g, g), CMatrix(g, g), {}, {}, 1, 0.0, {}};

  for (int k = 0; k < g; ++k) {
    const QuadResult r = full_interval(curve, 2 * (k + 1), quad);
    out.a_raw.row(k) = 2.0 * r.value.transpose();
    out.quadrature_report.push_back({"A" + std::to_string(k + 1), r.nodes, r.last_delta, r.method});
  }
  CVector running = CVector::Zero(g);
  for (int k = 0; k < g; ++k) {
    const QuadResult r = full_interval(curve, 2 * k + 1, quad);
    running += 2.0 * r.value;
    out.b_raw.row(k) = running.transpose();
    out.quadrature_report.push_back({"gap" + std::to_string(k + 1), r.nodes, r.last_delta, r.method});
  }

  Eigen::JacobiSVD<CMatrix> svd(out.a_raw);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (!(smin > 0.0) || !std::isfinite(sv(0)) || smin < 1e-14 * sv(0)) {
    throw Error(ErrorKind::SingularAPeriodMatrix, "A-period matrix is numerically singular");
  }
  out.a_condition = sv(0) / smin;

  // omega_i = C_ij nu_j with A_k(omega_i) = sum_j C_ij a_raw(k, j) = 2 pi i delta_ik
  const CMatrix at = out.a_raw.transpose();
  out.normalization = cplx(0.0, 2.0 * kPi) * at.partialPivLu().inverse();
  out.riemann = out.b_raw * out.normalization.transpose();

  const Eigen::MatrixXd re = 0.5 * (out.riemann.real() + out.riemann.real().transpose());
  if (Eigen::LLT<Eigen::MatrixXd>(-re).info() != Eigen::Success) {
    if (Eigen::LLT<Eigen::MatrixXd>(re).info() == Eigen::Success) {
      out.riemann = -out.riemann;
      out.b_raw = -out.b_raw;
      out.b_orientation = -1;
    } else {
      throw Error(ErrorKind::NotNegativeDefinite, "real part of the Riemann matrix is indefinite");
    }
  }
  return out;
}

CVector raw_abel_map(const Curve& curve, const SurfacePoint& p, const SurfacePoint& base,
                     const QuadConfig& quad) {
  const int g = curve.genus();
  for (const SurfacePoint* q : {&p, &base}) {
    if (!q->is_branch() && curve.branch_index_of(q->lambda())) {
      throw Error(ErrorKind::UntaggedBranchPoint, "Abel map endpoint sits on a branch point");
    }
  }
  const bool same_sheet = !p.is_branch() && !base.is_branch() && *p.sheet() == *base.sheet();
  if (same_sheet) {
    if (p.lambda() == base.lambda()) return CVector::Zero(g);
    const double x0 = base.lambda().real();
    const RealEnd start{x0, std::nullopt};
    const bool base_off_axis = base.lambda().imag() != 0.0;
    const bool opposite = base_off_axis && p.lambda().imag() != 0.0 &&
                          (base.lambda().imag() > 0) != (p.lambda().imag() > 0);
    if (opposite && interval_is_cut(curve, interval_of(curve, x0))) {
      throw Error(ErrorKind::InvalidArgument,
                  "endpoints in opposite half planes above a cut; pass a branch point between them");
    }
    CVector leg = sheet1_leg(curve, start, p, quad);
    if (base_off_axis) leg -= vertical_leg(curve, x0, base.lambda(), quad);
    return sheet_factor(p) * leg;
  }
  const int hub = base.is_branch() ? base.branch_index() : nearest_branch(curve, base.lambda());
  const RealEnd hub_end{curve.branch_points()[hub], hub};
  CVector to_p = sheet_factor(p) * sheet1_leg(curve, hub_end, p, quad);
  CVector to_base = base.is_branch() && base.branch_index() == hub
                        ? CVector::Zero(g)
                        : CVector(sheet_factor(base) * sheet1_leg(curve, hub_end, base, quad));
  return to_p - to_base;
}

CVector abel_map(const PeriodData& periods, const SurfacePoint& p, const SurfacePoint& base) {
  return periods.normalization * raw_abel_map(periods.curve, p, base, periods.quad);
}

CVector vector_r(const PeriodData& periods, const SurfacePoint& a, const SurfacePoint& e) {
  if (!e.is_branch()) {
    throw Error(ErrorKind::ENotBranchPoint, "the contour point e must be a branch point");
  }
  return 2.0 * abel_map(periods, a.swapped(), e);
}

DirectionVector direction_vector(const Curve& curve, const SurfacePoint& p,
                                 const CMatrix& normalization) {
  if (!p.is_branch()) {
    return {normalization * holo_basis(curve, p), p, LocalParamKind::nonbranch};
  }
  const auto& pts = curve.branch_points();
  const int j = p.branch_index();
  const double lj = pts[j];
  double prod = 1.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (i != j) prod *= (lj - pts[i]);
  }
  const double s = prod < 0.0 ? -1.0 : 1.0;
  const double root = std::sqrt(std::abs(prod));
  CVector w(curve.genus());
  double power = 1.0;
  for (int m = 0; m < curve.genus(); ++m) {
    w(m) = 2.0 * s * power / root;
    power *= lj;
  }
  return {normalization * w, p, LocalParamKind::branch};
}

SurfacePoint branch_parameter_point(const Curve& curve, int j, double k) {
  const auto& pts = curve.branch_points();
  double prod = 1.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    if (i != j) prod *= (pts[j] - pts[i]);
  }
  const double s = prod < 0.0 ? -1.0 : 1.0;
  const double lambda = pts[j] + s * k * k;
  const double mu1 = curve.sheet1_mu(lambda).real();
  const int sheet = ((mu1 > 0.0) == (k > 0.0)) ? 1 : 2;
  return SurfacePoint::on_sheet(lambda, sheet);
}

LatticeCoordinates lattice_coordinates(const CMatrix& riemann, const CVector& v) {
  const Eigen::MatrixXd re = riemann.real();
  const Eigen::MatrixXd im = riemann.imag();
  LatticeCoordinates out;
  out.m = re.partialPivLu().solve(v.real());
  out.n = (v.imag() - im * out.m) / (2.0 * kPi);
  return out;
}

}  // namespace chtheta
