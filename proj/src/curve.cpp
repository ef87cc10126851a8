#include "chtheta/curve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chtheta/errors.hpp"

namespace chtheta {

SurfacePoint SurfacePoint::on_sheet(cplx lambda, int sheet) {
  if (sheet != 1 && sheet != 2) {
    throw Error(ErrorKind::InvalidArgument, "sheet must be 1 or 2");
  }
  SurfacePoint p;
  p.lambda_ = lambda;
  p.sheet_ = sheet;
  return p;
}

SurfacePoint SurfacePoint::branch(int index, double lambda) {
  SurfacePoint p;
  p.branch_index_ = index;
  p.lambda_ = lambda;
  return p;
}

SurfacePoint SurfacePoint::swapped() const {
  SurfacePoint p = *this;
  if (sheet_) p.sheet_ = 3 - *sheet_;
  return p;
}

bool Curve::cut_is_degenerate(int cut) const {
  return std::any_of(degenerate_.begin(), degenerate_.end(),
                     [cut](const auto& pr) { return pr.first == 2 * cut + 1; });
}

std::vector<std::pair<double, double>> Curve::pairing() const {
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < points_.size(); i += 2) {
    out.emplace_back(points_[i], points_[i + 1]);
  }
  return out;
}

cplx Curve::sheet1_mu(cplx lambda) const {
  cplx prod = 1.0;
  for (std::size_t i = 0; i + 1 < points_.size(); i += 2) {
    prod *= std::sqrt(lambda - points_[i]) * std::sqrt(lambda - points_[i + 1]);
  }
  return sheet_sign_ * prod;
}

std::optional<int> Curve::branch_index_of(cplx lambda) const {
  if (lambda.imag() != 0.0) return std::nullopt;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i] == lambda.real()) return static_cast<int>(i);
  }
  return std::nullopt;
}

SurfacePoint Curve::branch_point(int index) const {
  if (index < 0 || index >= static_cast<int>(points_.size())) {
    throw Error(ErrorKind::EIndexOutOfRange,
                "branch index " + std::to_string(index) + " outside [0, " +
                    std::to_string(points_.size()) + ")");
  }
  return SurfacePoint::branch(index, points_[index]);
}

Curve build_curve(std::span<const double> branch_points, double degeneracy_threshold,
                  std::optional<cplx> reference) {
  const std::size_t n = branch_points.size();
  if (n % 2 != 0) {
    throw Error(ErrorKind::OddBranchCount,
                "got " + std::to_string(n) + " branch points, need an even count");
  }
  if (n < 4) {
    throw Error(ErrorKind::TooFewPoints,
                "got " + std::to_string(n) + " branch points, need at least 4");
  }
  Curve c;
  c.points_.assign(branch_points.begin(), branch_points.end());
  for (double v : c.points_) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteBranchPoint, "branch points must be finite");
  }
  std::sort(c.points_.begin(), c.points_.end());
  c.genus_ = static_cast<int>(n / 2) - 1;
  c.threshold_ = degeneracy_threshold;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double gap = c.points_[i + 1] - c.points_[i];
    const bool cut_pair = (i % 2 == 0);
    if (cut_pair && gap < degeneracy_threshold) {
      c.degenerate_.emplace_back(static_cast<int>(i) + 1, static_cast<int>(i) + 2);
      continue;
    }
    if (gap == 0.0) {
      std::ostringstream os;
      os << "branch point " << c.points_[i] << " repeated outside a degenerate pair";
      throw Error(ErrorKind::DuplicatePoint, os.str());
    }
  }

  c.reference_ = reference.value_or(cplx(c.points_.back() + 1.0, 0.0));
  if (c.branch_index_of(c.reference_)) {
    throw Error(ErrorKind::InvalidArgument, "reference point coincides with a branch point");
  }
  cplx prod = 1.0;
  for (double v : c.points_) prod *= (c.reference_ - v);
  const cplx principal = std::sqrt(prod);
  c.sheet_sign_ = 1.0;
  const cplx raw = c.sheet1_mu(c.reference_);
  c.sheet_sign_ = (std::real(principal / raw) >= 0.0) ? 1.0 : -1.0;
  return c;
}

cplx mu_value(const Curve& curve, const SurfacePoint& p) {
  if (p.is_branch()) return 0.0;
  if (auto idx = curve.branch_index_of(p.lambda())) {
    throw Error(ErrorKind::UntaggedBranchPoint,
                "lambda equals branch point " + std::to_string(*idx + 1) +
                    " but the point carries a sheet tag");
  }
  const cplx mu = curve.sheet1_mu(p.lambda());
  return *p.sheet() == 1 ? mu : -mu;
}

CVector holo_basis(const Curve& curve, const SurfacePoint& p) {
  if (p.is_branch() || curve.branch_index_of(p.lambda())) {
    throw Error(ErrorKind::BranchPointEvaluation,
                "holomorphic differentials have no dlambda coefficient at a branch point");
  }
  const cplx mu = mu_value(curve, p);
  CVector out(curve.genus());
  cplx power = 1.0;
  for (int j = 0; j < curve.genus(); ++j) {
    out(j) = power / mu;
    power *= p.lambda();
  }
  return out;
}

}  // namespace chtheta
