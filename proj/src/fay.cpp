#include "chtheta/fay.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

// Mantissas this small relative to the dominant lattice term are treated as
// zeros of theta.
constexpr double kZeroMantissa = 1e-13;

cplx log_theta(const ThetaSeries& s, const CVector& z, const Characteristic& ch,
               const char* what) {
  const ScaledComplex v = s.value(z, ch);
  if (std::abs(v.mantissa) < kZeroMantissa) {
    throw Error(ErrorKind::VanishingDenominator, std::string("theta vanishes at ") + what);
  }
  return std::log(v.mantissa) + v.log_scale;
}

ThetaJet checked_jet(const ThetaSeries& s, const CVector& z, const Characteristic& ch,
                     std::span<const CVector> dirs, int order, const char* what) {
  ThetaJet j = s.jet(z, ch, dirs, order, true);
  if (std::abs(j.value) < kZeroMantissa) {
    throw Error(ErrorKind::VanishingDenominator, std::string("theta vanishes at ") + what);
  }
  return j;
}

// D_v Theta[delta](0), unscaled
cplx odd_gradient(const FayContext& ctx, const CVector& v) {
  const CVector zero = CVector::Zero(ctx.series().genus());
  const std::array<CVector, 1> dirs{v};
  const ThetaJet j = ctx.series().jet(zero, ctx.odd(), dirs, 1);
  return j.d1[0] * std::exp(j.log_scale);
}

}  // namespace

double relative_residual(cplx l, cplx r) {
  return std::abs(l - r) / (std::abs(l) + std::abs(r) + 1e-300);
}

double relative_residual(cplx l, cplx r, double scale) {
  return std::abs(l - r) / (scale + 1e-300);
}

static std::vector<CVector> pairwise_integrals(const PeriodData& periods, const SurfacePoint& base,
                                        const std::vector<SurfacePoint>& points) {
  std::vector<CVector> images;
  for (const SurfacePoint& p : points) images.push_back(abel_map(periods, p, base));
  std::vector<CVector> out;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) out.push_back(images[j] - images[i]);
  }
  return out;
}

FayContext::FayContext(PeriodData periods, SurfacePoint base, double eps,
                       const std::vector<SurfacePoint>& points,
                       std::optional<Characteristic> odd)
    : periods_(std::move(periods)),
      series_(periods_.riemann, eps),
      base_(std::move(base)),
      odd_(odd ? *odd
               : select_odd_characteristic(series_,
                                           pairwise_integrals(periods_, base_, points))) {
  if (!odd_.is_odd() || odd_.genus() != series_.genus()) {
    throw Error(ErrorKind::SingularCharacteristics, "characteristic is not odd");
  }
}

CVector FayContext::abel(const SurfacePoint& p) const { return abel_map(periods_, p, base_); }

CVector FayContext::integral(const SurfacePoint& from, const SurfacePoint& to) const {
  return abel(to) - abel(from);
}

CVector FayContext::direction(const SurfacePoint& p) const {
  CVector v = direction_vector(periods_.curve, p, periods_.normalization).v;
  if (p.is_branch()) v *= branch_sign_;
  return v;
}

Characteristic select_odd_characteristic(const ThetaSeries& series,
                                         const std::vector<CVector>& probes, double tol) {
  const int g = series.genus();
  // screening only ranks candidates, so a coarse truncation suffices
  const ThetaSeries coarse(series.riemann(), std::max(series.eps(), 1e-6));
  std::vector<CVector> axes;
  for (int i = 0; i < g; ++i) axes.push_back(CVector::Unit(g, i));
  const CVector zero = CVector::Zero(g);

  std::vector<std::pair<double, Characteristic>> ranked;
  for (const Characteristic& ch : all_characteristics(g)) {
    if (!ch.is_odd()) continue;
    const ThetaJet j = coarse.jet(zero, ch, axes, 1);
    double norm2 = 0.0;
    for (const cplx& d : j.d1) norm2 += std::norm(d);
    ranked.emplace_back(std::sqrt(norm2) * std::exp(j.log_scale), ch);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });

  std::optional<Characteristic> best;
  double best_score = -1.0;
  for (const auto& [grad, ch] : ranked) {
    if (grad <= best_score) break;
    double score = grad;
    for (const CVector& v : probes) {
      score = std::min(score, std::abs(coarse.value(v, ch).mantissa));
      if (score <= best_score) break;
    }
    if (score > best_score) {
      best_score = score;
      best = ch;
    }
  }
  if (!best || best_score < tol) {
    throw Error(ErrorKind::SingularCharacteristics,
                "no odd characteristic stays away from zero on the probes");
  }
  return *best;
}

FayP fay_p(const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& c,
           const FayContext& ctx) {
  const ThetaSeries& s = ctx.series();
  const Characteristic& d = ctx.odd();
  const CVector vb = ctx.direction(b);
  const std::array<CVector, 1> dirs{vb};
  const CVector ab = ctx.integral(a, b);
  const CVector cb = ctx.integral(c, b);
  const CVector ca = ctx.integral(c, a);

  const ThetaJet jab = checked_jet(s, ab, d, dirs, 1, "int_a^b");
  const ThetaJet jcb = checked_jet(s, cb, d, dirs, 1, "int_c^b");
  FayP out;
  out.p1 = -(jab.dlog(0) - jcb.dlog(0));
  // int_b^a = -int_a^b and int_b^c = -int_c^b
  const cplx log_ratio = log_theta(s, ca, d, "int_c^a") - log_theta(s, -ab, d, "int_b^a") -
                         log_theta(s, -cb, d, "int_b^c");
  out.p2 = std::exp(log_ratio) * odd_gradient(ctx, vb);
  return out;
}

FayQ fay_q(const SurfacePoint& a, const SurfacePoint& b, const FayContext& ctx) {
  const ThetaSeries& s = ctx.series();
  const Characteristic& d = ctx.odd();
  const CVector va = ctx.direction(a);
  const CVector vb = ctx.direction(b);
  const std::array<CVector, 2> dirs{va, vb};
  const CVector ab = ctx.integral(a, b);
  const ThetaJet j = checked_jet(s, ab, d, dirs, 2, "int_a^b");
  FayQ out;
  out.q1 = j.ddlog(0, 1);
  const cplx lt = std::log(j.value) + j.log_scale;
  out.q2 = odd_gradient(ctx, va) * odd_gradient(ctx, vb) * std::exp(-2.0 * lt);
  return out;
}

double FayScalars::identity_residual() const {
  return relative_residual(q2_tilde, -p2_tilde * p2);
}

FayScalars ch_scalars(const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& e,
                      const FayContext& ctx) {
  const FayP pbea = fay_p(b, e, a, ctx);
  const FayP peba = fay_p(e, b, a, ctx);
  const FayQ qbe = fay_q(b, e, ctx);
  return {pbea.p1, pbea.p2, peba.p1, peba.p2, qbe.q2};
}

double FayResiduals::max() const { return std::max({fay1, fay2, ch1, ch2}); }

FayChecker::FayChecker(const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& e,
                       const FayContext& ctx)
    : ctx_(ctx) {
  const std::array<std::array<const SurfacePoint*, 3>, 3> triples{
      {{&a, &b, &e}, {&b, &e, &a}, {&e, &b, &a}}};
  for (const auto& t : triples) {
    const SurfacePoint& ta = *t[0];
    const SurfacePoint& tb = *t[1];
    const SurfacePoint& tc = *t[2];
    triples_.push_back({ctx.direction(tb), ctx.integral(tc, ta), ctx.integral(tb, ta),
                        ctx.integral(tc, tb), fay_p(ta, tb, tc, ctx)});
  }
  const std::array<std::array<const SurfacePoint*, 2>, 2> pairs{{{&a, &b}, {&b, &e}}};
  for (const auto& pr : pairs) {
    pairs_.push_back({ctx.direction(*pr[0]), ctx.direction(*pr[1]),
                      ctx.integral(*pr[0], *pr[1]), fay_q(*pr[0], *pr[1], ctx)});
  }
  vb_ = ctx.direction(b);
  ve_ = ctx.direction(e);
  r_ = 2.0 * ctx.integral(e, b);
  s_ = ch_scalars(a, b, e, ctx);
}

namespace {
/// Sizes of D_0 ln Theta and D_0 D_1 ln Theta: magnitudes of the lattice terms
/// they are summed from.
double dlog_size(const ThetaJet& j) { return j.d1_size[0] / std::abs(j.value); }
double ddlog_size(const ThetaJet& j) {
  const double v = std::abs(j.value);
  return j.d2_size(0, 1) / v + j.d1_size[0] * j.d1_size[1] / (v * v);
}

/// Bounds on the dropped lattice tail of the same quantities.
struct Tail {
  double reach;
  double d1(const ThetaJet& j, const CVector& v) const {
    return reach * v.cwiseAbs().sum() * j.value_size / std::abs(j.value);
  }
  double d2(const ThetaJet& j, const CVector& v, const CVector& w) const {
    return reach * reach / eps * v.cwiseAbs().sum() * w.cwiseAbs().sum() * j.value_size /
           std::abs(j.value);
  }
  double eps;
};

/// Terms of an identity that all sit below `kFloorRatio` times their truncation
/// bound cannot be compared; such samples are counted, not scored.
constexpr double kFloorRatio = 1e6;

void score(cplx l, cplx r, double scale, double floor, FayResiduals& out, int which) {
  if (scale < kFloorRatio * floor) {
    ++out.unresolved;
    return;
  }
  double& slot = which == 0 ? out.fay1 : which == 1 ? out.fay2 : which == 2 ? out.ch1 : out.ch2;
  slot = std::max(slot, relative_residual(l, r, scale));
  out.scored[which] = true;
}
}  // namespace

FayResiduals FayChecker::at(const CVector& z) const {
  const ThetaSeries& s = ctx_.series();
  const Characteristic zero = Characteristic::zero(s.genus());
  FayResiduals out;
  const Tail tail{s.eps() * (s.box_radius().maxCoeff() + 1.0), s.eps()};

  for (const Triple& t : triples_) {
    const std::array<CVector, 1> dirs{t.vb};
    const ThetaJet jz = checked_jet(s, z, zero, dirs, 1, "z");
    const ThetaJet jca = checked_jet(s, z + t.ca, zero, dirs, 1, "z + int_c^a");
    const cplx lhs = jca.dlog(0) - jz.dlog(0);
    const cplx log_ratio = log_theta(s, z + t.ba, zero, "z + int_b^a") +
                           log_theta(s, z + t.cb, zero, "z + int_c^b") - jca.log_value() -
                           jz.log_value();
    const cplx extra = t.p.p2 * std::exp(log_ratio);
    const cplx rhs = t.p.p1 + extra;
    const double scale = dlog_size(jca) + dlog_size(jz) + std::abs(t.p.p1) + std::abs(extra);
    const double floor = tail.d1(jca, t.vb) + tail.d1(jz, t.vb);
    score(lhs, rhs, scale, floor, out, 0);
  }

  for (const Pair& p : pairs_) {
    const std::array<CVector, 2> dirs{p.va, p.vb};
    const ThetaJet jz = checked_jet(s, z, zero, dirs, 2, "z");
    const cplx lhs = jz.ddlog(0, 1);
    const cplx log_ratio = log_theta(s, z + p.ab, zero, "z + int_a^b") +
                           log_theta(s, z - p.ab, zero, "z - int_a^b") - 2.0 * jz.log_value();
    const cplx extra = p.q.q2 * std::exp(log_ratio);
    const cplx rhs = p.q.q1 + extra;
    const double scale = ddlog_size(jz) + std::abs(p.q.q1) + std::abs(extra);
    score(lhs, rhs, scale, tail.d2(jz, p.va, p.vb), out, 1);
  }

  const std::array<CVector, 2> dirs{vb_, ve_};
  const ThetaJet jp = checked_jet(s, z + 0.5 * r_, zero, dirs, 2, "z + r/2");
  const ThetaJet jm = checked_jet(s, z - 0.5 * r_, zero, dirs, 2, "z - r/2");
  const ThetaJet j0 = checked_jet(s, z, zero, dirs, 2, "z");
  const cplx g1g2 = std::exp(jp.log_value() + jm.log_value() - 2.0 * j0.log_value());
  const cplx db_log_prod = jp.dlog(0) + jm.dlog(0) - 2.0 * j0.dlog(0);
  const cplx db_log_quot = jp.dlog(0) - jm.dlog(0);
  const double d1_floor = tail.d1(jp, vb_) + tail.d1(jm, vb_) + 2.0 * tail.d1(j0, vb_);
  const double d2_floor = tail.d2(jp, vb_, ve_) + tail.d2(jm, vb_, ve_);

  const cplx lhs1 = jp.ddlog(0, 1) - jm.ddlog(0, 1);
  const cplx rhs1 = -(s_.p2 / g1g2) * db_log_prod;
  const double dlog_sum = dlog_size(jp) + dlog_size(jm) + 2.0 * dlog_size(j0);
  const double scale1 = ddlog_size(jp) + ddlog_size(jm) + std::abs(s_.p2 / g1g2) * dlog_sum;
  const double floor1 = d2_floor + std::abs(s_.p2 / g1g2) * d1_floor;
  score(lhs1, rhs1, scale1, floor1, out, 2);

  const cplx lhs2 = jp.ddlog(0, 1) + jm.ddlog(0, 1) - 2.0 * j0.ddlog(0, 1);
  const cplx coef = (s_.q2_tilde / s_.p2_tilde) / g1g2;
  const cplx rhs2 = coef * (db_log_quot - 2.0 * s_.p1_tilde) - 2.0 * s_.q2_tilde * g1g2;
  const double scale2 =
      ddlog_size(jp) + ddlog_size(jm) + 2.0 * ddlog_size(j0) +
      std::abs(coef) * (dlog_size(jp) + dlog_size(jm) + 2.0 * std::abs(s_.p1_tilde)) +
      2.0 * std::abs(s_.q2_tilde * g1g2);
  const double floor2 = d2_floor + 2.0 * tail.d2(j0, vb_, ve_) + std::abs(coef) * d1_floor;
  score(lhs2, rhs2, scale2, floor2, out, 3);
  return out;
}

FayResiduals fay_residuals(const CVector& z, const SurfacePoint& a, const SurfacePoint& b,
                           const SurfacePoint& e, const FayContext& ctx) {
  return FayChecker(a, b, e, ctx).at(z);
}

}  // namespace chtheta
