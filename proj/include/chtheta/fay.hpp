#pragma once

#include <array>
#include <optional>
#include <vector>

#include "chtheta/periods.hpp"
#include "chtheta/theta.hpp"

namespace chtheta {

/// Periods, a theta series and an odd characteristic shared by all Fay
/// computations. Abel integrals are differences of the Abel map from one base
/// point, so int_a^c = int_a^b + int_b^c holds exactly.
/// Without an explicit characteristic, the odd one is chosen so that
/// Theta[delta] stays away from zero on the integrals between `points`.
class FayContext {
 public:
  FayContext(PeriodData periods, SurfacePoint base, double eps = 1e-12,
             const std::vector<SurfacePoint>& points = {},
             std::optional<Characteristic> odd = std::nullopt);

  const PeriodData& periods() const { return periods_; }
  const ThetaSeries& series() const { return series_; }
  const Characteristic& odd() const { return odd_; }
  const SurfacePoint& base() const { return base_; }

  /// Abel map from the base point.
  CVector abel(const SurfacePoint& p) const;
  /// int_from^to
  CVector integral(const SurfacePoint& from, const SurfacePoint& to) const;

  /// Direction vectors at branch points are multiplied by this sign.
  void set_branch_sign(double s) { branch_sign_ = s; }
  CVector direction(const SurfacePoint& p) const;

 private:
  PeriodData periods_;
  ThetaSeries series_;
  SurfacePoint base_;
  Characteristic odd_;
  double branch_sign_ = 1.0;
};

/// Odd characteristic maximizing min(|grad Theta[delta](0)|, |Theta[delta](v)|
/// over the probes v), both measured against the dominant lattice term.
/// Throws SingularCharacteristics if the best score is below tol.
Characteristic select_odd_characteristic(const ThetaSeries& series,
                                         const std::vector<CVector>& probes = {},
                                         double tol = 1e-8);

struct FayP {
  cplx p1;
  cplx p2;
};
struct FayQ {
  cplx q1;
  cplx q2;
};

FayP fay_p(const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& c,
           const FayContext& ctx);
FayQ fay_q(const SurfacePoint& a, const SurfacePoint& b, const FayContext& ctx);

/// Scalars entering the CH construction:
/// p2 = p2(b,e,a), p~i = pi(e,b,a), q~2 = q2(b,e).
struct FayScalars {
  cplx p1;  // p1(b,e,a)
  cplx p2;
  cplx p1_tilde;
  cplx p2_tilde;
  cplx q2_tilde;
  /// |q~2 + p~2 p2| / (|q~2| + |p~2 p2|)
  double identity_residual() const;
};
FayScalars ch_scalars(const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& e,
                      const FayContext& ctx);

/// Each residual is |L - R| divided by the summed magnitudes of the terms of
/// L and R. Logarithmic derivatives of theta count with the magnitudes of the
/// lattice terms they are summed from. An identity whose terms are all within
/// 1e6 times the truncation bound is not scored; `unresolved` counts those.
struct FayResiduals {
  double fay1 = 0.0;
  double fay2 = 0.0;
  double ch1 = 0.0;
  double ch2 = 0.0;
  /// fay1, fay2, ch1, ch2 received at least one score.
  std::array<bool, 4> scored{};
  int unresolved = 0;
  double max() const;
};

/// Precomputed scalars and integrals for repeated residual evaluation.
/// fay1 runs over the triples (a,b,e), (b,e,a), (e,b,a); fay2 over the pairs
/// (a,b), (b,e).
class FayChecker {
 public:
  FayChecker(const SurfacePoint& a, const SurfacePoint& b, const SurfacePoint& e,
             const FayContext& ctx);
  FayResiduals at(const CVector& z) const;

 private:
  struct Triple {
    CVector vb;
    CVector ca, ba, cb;  // int_c^a, int_b^a, int_c^b
    FayP p;
  };
  struct Pair {
    CVector va, vb;
    CVector ab;  // int_a^b
    FayQ q;
  };
  const FayContext& ctx_;
  std::vector<Triple> triples_;
  std::vector<Pair> pairs_;
  CVector vb_, ve_, r_;
  FayScalars s_;
};

FayResiduals fay_residuals(const CVector& z, const SurfacePoint& a, const SurfacePoint& b,
                           const SurfacePoint& e, const FayContext& ctx);

/// |l - r| / (|l| + |r| + 1e-300)
double relative_residual(cplx l, cplx r);
/// |l - r| / (scale + 1e-300), scale being the summed magnitudes of the terms
/// on both sides.
double relative_residual(cplx l, cplx r, double scale);

}  // namespace chtheta
