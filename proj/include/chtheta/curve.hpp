#pragma once

#include <complex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace chtheta {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// A point of the two-sheeted surface: either (lambda, sheet) with sheet 1 or
/// 2, or the ramification point above branch point `branch_index` (0-based
/// into the sorted branch points).
class SurfacePoint {
 public:
  static SurfacePoint on_sheet(cplx lambda, int sheet);
  static SurfacePoint branch(int index, double lambda);

  bool is_branch() const noexcept { return branch_index_.has_value(); }
  int branch_index() const { return branch_index_.value(); }
  /// 1 or 2 for ordinary points; empty for branch points.
  std::optional<int> sheet() const noexcept { return sheet_; }
  cplx lambda() const noexcept { return lambda_; }

  /// Hyperelliptic involution: swaps sheets, fixes branch points.
  SurfacePoint swapped() const;

 private:
  SurfacePoint() = default;
  cplx lambda_{};
  std::optional<int> sheet_;
  std::optional<int> branch_index_;
};

/// Real hyperelliptic M-curve mu^2 = prod (lambda - lambda_i).
///
/// Cuts join consecutive pairs (lambda_1, lambda_2), (lambda_3, lambda_4), ...
/// A-cycles encircle cuts 2..g+1 and B-cycle k runs through the gaps between
/// cut 1 and cut k+1 (upper half on sheet 1, lower half on sheet 2).
///
/// The sheet-1 root is the branch of prod_i sqrt(l - l_{2i-1}) sqrt(l - l_{2i})
/// (analytic off the cuts), multiplied by +-1 so that it equals the principal
/// square root of the product at the reference point.
class Curve {
 public:
  const std::vector<double>& branch_points() const noexcept { return points_; }
  int genus() const noexcept { return genus_; }
  /// 1-based index pairs (2i-1, 2i) of cuts narrower than the threshold.
  const std::vector<std::pair<int, int>>& degenerate_pairs() const noexcept {
    return degenerate_;
  }
  bool cut_is_degenerate(int cut) const;
  /// Branch-point pairs bounding each cut, in order.
  std::vector<std::pair<double, double>> pairing() const;
  cplx reference_lambda() const noexcept { return reference_; }
  double degeneracy_threshold() const noexcept { return threshold_; }
  /// +1 or -1: factor turning the raw product of pair roots into sheet 1.
  double sheet_sign() const noexcept { return sheet_sign_; }

  /// Sheet-1 root at lambda. Real lambda on a cut is read as lambda + i0.
  cplx sheet1_mu(cplx lambda) const;

  /// Index of the branch point equal to lambda, if any.
  std::optional<int> branch_index_of(cplx lambda) const;

  SurfacePoint branch_point(int index) const;

 private:
  friend Curve build_curve(std::span<const double>, double, std::optional<cplx>);

  std::vector<double> points_;
  int genus_ = 0;
  std::vector<std::pair<int, int>> degenerate_;
  double threshold_ = 1e-10;
  cplx reference_{};
  double sheet_sign_ = 1.0;
};

inline constexpr double kDefaultDegeneracyThreshold = 1e-10;

/// Sorts and validates the branch points. `reference` fixes which root is
/// sheet 1; by default a point to the right of all branch points.
Curve build_curve(std::span<const double> branch_points,
                  double degeneracy_threshold = kDefaultDegeneracyThreshold,
                  std::optional<cplx> reference = std::nullopt);

cplx mu_value(const Curve& curve, const SurfacePoint& p);

/// Unnormalized integrand coefficients lambda^(j-1)/mu, j = 1..g.
CVector holo_basis(const Curve& curve, const SurfacePoint& p);

}  // namespace chtheta
