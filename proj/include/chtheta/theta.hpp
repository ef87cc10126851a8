#pragma once

#include <span>
#include <vector>

#include "chtheta/curve.hpp"

namespace chtheta {

/// Half-integer characteristics [delta1; delta2], entries 0 or 1/2.
struct Characteristic {
  Eigen::VectorXd d1;
  Eigen::VectorXd d2;

  static Characteristic zero(int g);
  /// Builds from bit vectors: entry = bit / 2.
  static Characteristic from_bits(const std::vector<int>& top, const std::vector<int>& bottom);
  int genus() const { return static_cast<int>(d1.size()); }
  /// 4 <delta1, delta2> odd.
  bool is_odd() const;
};

/// All 4^g characteristics in a fixed order.
std::vector<Characteristic> all_characteristics(int g);

struct ThetaArg {
  CVector z;
  Characteristic ch;
};

struct TruncationSpec {
  double eps = 1e-12;
  /// Per-axis half widths of the bounding box of the last ellipsoid used.
  Eigen::VectorXi radius;
};

/// value = mantissa * exp(log_scale).
struct ScaledComplex {
  cplx mantissa;
  double log_scale = 0.0;
  cplx value() const { return mantissa * std::exp(log_scale); }
};

/// Theta value with directional derivatives, all sharing one log scale.
/// d1[i] = D_i Theta, d2(i, j) = D_i D_j Theta.
struct ThetaJet {
  cplx value;
  std::vector<cplx> d1;
  CMatrix d2;
  double log_scale = 0.0;
  int terms = 0;
  /// Sums of term magnitudes behind value, d1 and d2; filled on request.
  double value_size = 0.0;
  std::vector<double> d1_size;
  Eigen::MatrixXd d2_size;

  cplx log_value() const { return std::log(value) + log_scale; }
  /// D_i ln Theta
  cplx dlog(int i) const { return d1[i] / value; }
  /// D_i D_j ln Theta
  cplx ddlog(int i, int j) const { return d2(i, j) / value - d1[i] * d1[j] / (value * value); }
};

/// Truncated lattice sum over the ellipsoid (n - c)^T Q (n - c) <= d0^2 + R^2
/// with Q = -Re B, c the maximizer of the real part of the exponent and d0
/// the distance of the nearest-plane lattice point to c. R^2 leaves the
/// discarded terms below eps times the largest one.
class ThetaSeries {
 public:
  explicit ThetaSeries(const CMatrix& riemann, double eps = 1e-12);

  int genus() const { return static_cast<int>(b_.rows()); }
  const CMatrix& riemann() const { return b_; }
  double eps() const { return eps_; }
  double radius_squared() const { return r2_; }

  /// order 0, 1 or 2; derivatives along dirs. With `sizes`, the term
  /// magnitude sums are accumulated as well.
  ThetaJet jet(const CVector& z, const Characteristic& ch, std::span<const CVector> dirs,
               int order, bool sizes = false) const;
  ScaledComplex value(const CVector& z, const Characteristic& ch) const;
  ScaledComplex value(const CVector& z) const;

  /// Bounding box half widths of the ellipsoid.
  Eigen::VectorXi box_radius() const;

 private:
  CMatrix b_;
  Eigen::MatrixXd re_inv_;
  Eigen::MatrixXd u_;  // Q = U^T U, U upper triangular
  double eps_;
  double r2_;
};

cplx theta(const ThetaArg& arg, const CMatrix& riemann, TruncationSpec& trunc);

/// One or two directions.
cplx theta_deriv(const ThetaArg& arg, const CMatrix& riemann, TruncationSpec& trunc,
                 std::span<const CVector> dirs);

double quasi_periodicity_residual(const ThetaArg& arg, const CMatrix& riemann,
                                  TruncationSpec& trunc, const Eigen::VectorXi& n,
                                  const Eigen::VectorXi& m);

/// 2 pi i delta2 + B delta1
CVector char_to_shift(const Characteristic& ch, const CMatrix& riemann);

}  // namespace chtheta
