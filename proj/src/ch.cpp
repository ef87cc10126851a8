#include "chtheta/ch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

constexpr double kPi = std::numbers::pi;

struct Jets {
  ThetaJet plus, minus, zero;
};

Jets jets_at(const CHParams& p, double y, double t, int order) {
  const CVector w = p.ve * y + p.vb * t - p.d;
  const CVector half = 0.5 * p.r;
  const std::array<CVector, 2> dirs{p.vb, p.ve};
  const ThetaSeries& s = p.series();
  const Characteristic zero = Characteristic::zero(s.genus());
  return {s.jet(w + half, zero, dirs, order), s.jet(w - half, zero, dirs, order),
          s.jet(w, zero, dirs, order)};
}

// ln(Theta(w + r/2) / Theta(w - r/2)) with Im reduced to (-pi, pi]
cplx log_h(const Jets& j) {
  const cplx v = j.plus.log_value() - j.minus.log_value();
  return {v.real(), std::remainder(v.imag(), 2.0 * kPi)};
}

std::pair<double, double> toms748(auto f, double lo, double hi) {
  boost::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(a - b) <= 1e-14 * (1.0 + std::abs(a)); };
  return boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
}

}  // namespace

std::string_view to_string(Preset p) { return p == Preset::smooth ? "smooth" : "cusped"; }

std::string_view to_string(NodeKind k) {
  return k == NodeKind::uniform ? "uniform" : "chebyshev";
}

CHParams ch_setup(const Curve& curve, const SurfacePoint& a, int e_index, const DSpec& d_spec,
                  double k, double zeta_re, Preset preset, const CHSetupOptions& opts) {
  if (a.is_branch() || a.lambda().imag() != 0.0) {
    throw Error(ErrorKind::NotMCurve, "presets need a real point a off the branch points");
  }
  if (curve.branch_index_of(a.lambda())) {
    throw Error(ErrorKind::UntaggedBranchPoint, "a sits on a branch point");
  }
  const SurfacePoint e = curve.branch_point(e_index);
  const SurfacePoint b = a.swapped();
  const int g = curve.genus();

  auto ctx = std::make_shared<FayContext>(riemann_matrix(curve, opts.quad), e, opts.eps,
                                          std::vector<SurfacePoint>{a, b, e});
  CHParams p;
  p.a = a;
  p.b = b;
  p.e = e;
  p.k = k;
  p.preset = preset;

  p.fay = ch_scalars(a, b, e, *ctx);
  if (p.fay.p2.real() < 0.0) {
    ctx->set_branch_sign(-1.0);
    p.ve_sign = -1.0;
    p.fay = ch_scalars(a, b, e, *ctx);
  }
  p.vb = ctx->direction(b);
  p.ve = ctx->direction(e);
  p.r = 2.0 * ctx->integral(e, b);
  p.alpha1 = p.fay.p1;
  p.alpha2 = 2.0 * p.fay.p1_tilde + k;
  p.ctx = ctx;

  if (d_spec.vector) {
    if (d_spec.vector->size() != g) {
      throw Error(ErrorKind::InvalidArgument, "d has the wrong length");
    }
    p.d = *d_spec.vector;
  } else if (d_spec.characteristic) {
    p.d = char_to_shift(*d_spec.characteristic, ctx->periods().riemann);
  } else {
    const std::vector<int> ones(g, 1);
    const std::vector<int> bottom(g, preset == Preset::cusped ? 1 : 0);
    p.d = char_to_shift(Characteristic::from_bits(ones, bottom), ctx->periods().riemann);
  }

  const Jets j = jets_at(p, 0.0, 0.0, 0);
  for (const ThetaJet* t : {&j.plus, &j.minus}) {
    if (std::abs(t->value) < 1e-13) {
      throw Error(ErrorKind::SingularDenominatorOnProbe, "Theta(d +- r/2) vanishes");
    }
  }
  // Im zeta is the argument of h(0, 0) so that x is real
  p.zeta = cplx(zeta_re, log_h(j).imag());
  p.theta0_phase = j.zero.value / std::abs(j.zero.value);

  if (std::abs(p.alpha1.imag()) > kRealityTolerance ||
      std::abs(p.alpha2.imag()) > kRealityTolerance) {
    p.warnings.push_back("alpha1 or alpha2 has an imaginary part above 1e-8");
  }
  if (p.fay.identity_residual() > 1e-8) {
    p.warnings.push_back("q2~ = -p2~ p2 violated beyond 1e-8");
  }
  return p;
}

PointValue evaluate(const CHParams& p, double y, double t) {
  const Jets j = jets_at(p, y, t, 1);
  const cplx lh = log_h(j);
  PointValue out;
  cplx xi = lh - p.alpha1 * y - p.alpha2 * t - p.zeta;
  out.x = {xi.real(), std::remainder(xi.imag(), 2.0 * kPi)};

  const cplx dq = j.plus.dlog(0) - j.minus.dlog(0);  // D_b ln(g1/g2)
  const cplx g1g2 = std::exp(j.plus.log_value() + j.minus.log_value() - 2.0 * j.zero.log_value());
  out.u = dq - p.alpha2;
  out.ux = -(j.plus.dlog(0) + j.minus.dlog(0) - 2.0 * j.zero.dlog(0));
  const cplx tail = 2.0 * p.fay.p2_tilde * g1g2 * g1g2;
  out.uxx = (dq - 2.0 * p.fay.p1_tilde) - tail;
  out.m = tail;
  out.xy = p.fay.p2 / g1g2;

  const cplx aligned = j.zero.value * std::conj(p.theta0_phase);
  out.theta0_signed = aligned.real();
  const double logr = std::log(std::abs(j.zero.value)) + j.zero.log_scale -
                      0.5 * (std::log(std::abs(j.plus.value)) + j.plus.log_scale +
                             std::log(std::abs(j.minus.value)) + j.minus.log_scale);
  out.theta0_ratio = std::exp(logr);
  return out;
}

double x_of(const CHParams& p, double y, double t) {
  const Jets j = jets_at(p, y, t, 0);
  const cplx xi = log_h(j) - p.alpha1 * y - p.alpha2 * t - p.zeta;
  const double im = std::remainder(xi.imag(), 2.0 * kPi);
  if (std::abs(im) >= kRealityTolerance) {
    throw Error(ErrorKind::NonRealX, "Im x = " + std::to_string(im) + " at y = " +
                                         std::to_string(y) + ", t = " + std::to_string(t));
  }
  return xi.real();
}

UValues u_of(const CHParams& p, double y, double t) {
  const PointValue v = evaluate(p, y, t);
  if (v.theta0_ratio < kCuspThreshold) {
    throw Error(ErrorKind::CuspAtPoint, "Theta(Z - d) vanishes at y = " + std::to_string(y));
  }
  return {v.u.real(), v.ux.real(), v.uxx.real(), v.m.real()};
}

double FieldImag::max() const { return std::max({x, u, ux, uxx, m}); }

std::vector<double> grid_nodes(double lo, double hi, int n, NodeKind kind) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "a grid needs at least 2 nodes");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    if (kind == NodeKind::uniform) {
      out[i] = lo + (hi - lo) * i / (n - 1);
    } else {
      out[i] = 0.5 * (lo + hi) - 0.5 * (hi - lo) * std::cos(kPi * i / (n - 1));
    }
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

namespace {
double imag_part(cplx z) { return std::abs(z.imag()) / std::max(1.0, std::abs(z)); }
}  // namespace

SolutionField solve_grid(const CHParams& p, double y0, double y1, int ny, double t0, double t1,
                         int nt, NodeKind kind, bool strict) {
  SolutionField f;
  f.y = grid_nodes(y0, y1, ny, kind);
  f.t = nt == 1 ? std::vector<double>{t0} : grid_nodes(t0, t1, nt, kind);
  nt = static_cast<int>(f.t.size());
  f.node_kind = kind;
  f.preset = p.preset;
  f.k = p.k;
  f.eps = p.series().eps();
  for (Eigen::MatrixXd* m : {&f.x, &f.u, &f.ux, &f.uxx, &f.m, &f.xy, &f.theta0}) {
    m->resize(nt, ny);
  }
  f.cusp = Eigen::MatrixXi::Zero(nt, ny);

  for (int it = 0; it < nt; ++it) {
    for (int iy = 0; iy < ny; ++iy) {
      const PointValue v = evaluate(p, f.y[iy], f.t[it]);
      f.x(it, iy) = v.x.real();
      f.u(it, iy) = v.u.real();
      f.ux(it, iy) = v.ux.real();
      f.uxx(it, iy) = v.uxx.real();
      f.m(it, iy) = v.m.real();
      f.xy(it, iy) = v.xy.real();
      f.theta0(it, iy) = v.theta0_signed;
      f.imag.x = std::max(f.imag.x, std::abs(v.x.imag()));
      f.imag.u = std::max(f.imag.u, imag_part(v.u));
      f.imag.ux = std::max(f.imag.ux, imag_part(v.ux));
      f.imag.uxx = std::max(f.imag.uxx, imag_part(v.uxx));
      f.imag.m = std::max(f.imag.m, imag_part(v.m));
      if (v.theta0_ratio < kCuspThreshold) f.cusp(it, iy) = 1;
    }
    for (int iy = 0; iy + 1 < ny; ++iy) {
      if ((f.theta0(it, iy) > 0.0) != (f.theta0(it, iy + 1) > 0.0)) {
        const int at = std::abs(f.theta0(it, iy)) <= std::abs(f.theta0(it, iy + 1)) ? iy : iy + 1;
        f.cusp(it, at) = 1;
      }
    }
  }
  if (strict && f.imag.x >= kRealityTolerance) {
    throw Error(ErrorKind::NonRealX,
                "max |Im x| on the grid is " + std::to_string(f.imag.x));
  }
  return f;
}

double invert_x(const CHParams& p, double t, double x_target, double y_lo, double y_hi) {
  if (p.preset == Preset::cusped) {
    throw Error(ErrorKind::NonMonotone, "x(y) is not strictly monotone for cusped solutions");
  }
  auto f = [&](double y) { return x_of(p, y, t) - x_target; };
  const double flo = f(y_lo);
  const double fhi = f(y_hi);
  if (flo == 0.0) return y_lo;
  if (fhi == 0.0) return y_hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorKind::NotBracketed, "x_target is not bracketed by [y_lo, y_hi]");
  }
  const auto [lo, hi] = toms748(f, y_lo, y_hi);
  return 0.5 * (lo + hi);
}

std::vector<Cusp> detect_cusps(const CHParams& p, double t, double y_lo, double y_hi, int ny) {
  std::vector<Cusp> out;
  const std::vector<double> ys = grid_nodes(y_lo, y_hi, ny, NodeKind::uniform);
  auto theta0 = [&](double y) { return evaluate(p, y, t).theta0_signed; };
  std::vector<double> s(ny);
  for (int i = 0; i < ny; ++i) s[i] = theta0(ys[i]);

  for (int i = 0; i + 1 < ny; ++i) {
    if ((s[i] > 0.0) == (s[i + 1] > 0.0)) continue;
    const auto [lo, hi] = toms748(theta0, ys[i], ys[i + 1]);
    const double y0 = 0.5 * (lo + hi);
    const PointValue c = evaluate(p, y0, t);
    Cusp cusp{y0, c.x.real(), c.u.real(), 0.0, false};

    // log-log fit of |u - u0| against |x - x0| over one decade of |y - y0|
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    std::array<double, 2> side_sign{};
    for (int side : {-1, 1}) {
      for (int q = 0; q <= 10; ++q) {
        const double dy = side * 2e-4 * std::pow(10.0, q / 10.0);
        const PointValue v = evaluate(p, y0 + dy, t);
        const double du = v.u.real() - cusp.u0;
        const double dx = v.x.real() - cusp.x0;
        if (q == 0) side_sign[(side + 1) / 2] = du;
        if (du == 0.0 || dx == 0.0) continue;
        const double lx = std::log(std::abs(dx));
        const double lu = std::log(std::abs(du));
        sx += lx;
        sy += lu;
        sxx += lx * lx;
        sxy += lx * lu;
        ++n;
      }
    }
    if (n >= 2) cusp.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    cusp.uy_sign_change = (side_sign[0] > 0.0) == (side_sign[1] > 0.0);
    out.push_back(cusp);
  }
  return out;
}

std::pair<double, double> crest(const CHParams& p, double t, double y_lo, double y_hi) {
  constexpr int n = 129;
  const std::vector<double> ys = grid_nodes(y_lo, y_hi, n, NodeKind::uniform);
  int best = 0;
  double best_u = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double u = evaluate(p, ys[i], t).u.real();
    if (u > best_u) {
      best_u = u;
      best = i;
    }
  }
  if (best == 0 || best == n - 1) {
    throw Error(ErrorKind::NotBracketed, "u has no interior maximum on the y interval");
  }
  auto ux = [&](double y) { return evaluate(p, y, t).ux.real(); };
  double lo = ys[best - 1];
  double hi = ys[best + 1];
  if ((ux(lo) > 0.0) == (ux(hi) > 0.0)) {
    throw Error(ErrorKind::NotBracketed, "u_x does not change sign around the crest");
  }
  const auto [a, b] = toms748(ux, lo, hi);
  const double y = 0.5 * (a + b);
  return {y, evaluate(p, y, t).x.real()};
}

double xcorr_velocity(const SolutionField& f, int row0, int row1) {
  const int ny = static_cast<int>(f.y.size());
  const double lo = std::max(f.x(row0, 0), f.x(row1, 0));
  const double hi = std::min(f.x(row0, ny - 1), f.x(row1, ny - 1));
  if (!(hi > lo)) return 0.0;
  const int nx = 2 * ny;
  const double dx = (hi - lo) / (nx - 1);

  auto resample = [&](int row) {
    std::vector<double> out(nx);
    int j = 0;
    for (int i = 0; i < nx; ++i) {
      const double xv = lo + i * dx;
      while (j + 2 < ny && f.x(row, j + 1) < xv) ++j;
      const double x0 = f.x(row, j);
      const double x1 = f.x(row, j + 1);
      const double w = x1 > x0 ? std::clamp((xv - x0) / (x1 - x0), 0.0, 1.0) : 0.0;
      out[i] = (1.0 - w) * f.u(row, j) + w * f.u(row, j + 1);
    }
    double mean = 0.0;
    for (double v : out) mean += v;
    mean /= nx;
    for (double& v : out) v -= mean;
    return out;
  };
  const std::vector<double> u0 = resample(row0);
  const std::vector<double> u1 = resample(row1);

  const int max_shift = nx / 2;
  std::vector<double> corr(2 * max_shift + 1);
  for (int s = -max_shift; s <= max_shift; ++s) {
    double acc = 0.0;
    for (int i = 0; i < nx; ++i) {
      const int k = i - s;
      if (k >= 0 && k < nx) acc += u1[i] * u0[k];
    }
    corr[s + max_shift] = acc;
  }
  const int arg = static_cast<int>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  double shift = arg - max_shift;
  if (arg > 0 && arg + 1 < static_cast<int>(corr.size())) {
    const double cm = corr[arg - 1], c0 = corr[arg], cp = corr[arg + 1];
    const double den = cm - 2.0 * c0 + cp;
    if (den != 0.0) shift += 0.5 * (cm - cp) / den;
  }
  return shift * dx / (f.t[row1] - f.t[row0]);
}

double travelling_velocity(const CHParams& p, double t0, double t1, double y_lo, double y_hi,
                           int ny) {
  const SolutionField f = solve_grid(p, y_lo, y_hi, ny, t0, t1, 2, NodeKind::uniform);
  const double v0 = xcorr_velocity(f, 0, 1);
  const double dt = t1 - t0;
  const double span = y_hi - y_lo;
  const double mid = 0.5 * (y_lo + y_hi);
  const auto [yc0, xc0] = crest(p, t0, mid - 0.25 * span, mid + 0.25 * span);
  const double y_guess = invert_x(p, t1, xc0 + v0 * dt, y_lo, y_hi);
  const double window = 0.125 * span;
  const auto [yc1, xc1] = crest(p, t1, y_guess - window, y_guess + window);
  (void)yc0;
  (void)yc1;
  return (xc1 - xc0) / dt;
}

}  // namespace chtheta
