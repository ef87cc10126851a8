#include "chtheta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "chtheta/errors.hpp"

namespace chtheta {
namespace {

double relative_change(const CVector& next, const CVector& prev) {
  const double scale = std::max(next.norm(), 1e-300);
  return (next - prev).norm() / scale;
}

}  // namespace

QuadResult gauss_chebyshev_theta(const EndpointIntegrand& f, const QuadConfig& cfg) {
  constexpr double pi = std::numbers::pi;
  auto rule = [&](int n) {
    CVector acc;
    for (int k = 0; k < n; ++k) {
      const double theta = (2.0 * k + 1.0) * pi / (2.0 * n);
      // distance to pi computed from the mirrored index to keep full precision
      const double theta_r = (2.0 * (n - 1 - k) + 1.0) * pi / (2.0 * n);
      CVector v = f(theta, theta_r);
      if (k == 0) acc = v; else acc += v;
    }
    return CVector(acc * (pi / n));
  };

  int n = 64;
  CVector prev = rule(n);
  double delta = 0.0;
  while (2 * n <= cfg.max_nodes) {
    n *= 2;
    CVector next = rule(n);
    delta = relative_change(next, prev);
    prev = std::move(next);
    if (delta < cfg.tol) return {prev, n, delta, "gauss-chebyshev"};
  }
  throw Error(ErrorKind::QuadratureNotConverged,
              "Gauss-Chebyshev rule reached " + std::to_string(n) +
                  " nodes with relative change " + std::to_string(delta));
}

QuadResult tanh_sinh(const EndpointIntegrand& f, double length, const QuadConfig& cfg) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double t_max = 4.5;
  // Level k samples t = j / 2^k; the first level uses step 1/8.
  constexpr int first_level = 3;
  const int max_level =
      std::clamp(static_cast<int>(std::log2(std::max(cfg.max_nodes, 64))), first_level + 2, 10);

  auto sample = [&](double t) -> CVector {
    const double y = half_pi * std::sinh(t);
    const double ep = std::exp(y);
    const double em = std::exp(-y);
    const double dl = length / (1.0 + em * em);
    const double dr = length / (1.0 + ep * ep);
    const double sech = 2.0 / (ep + em);
    const double w = 0.5 * length * half_pi * std::cosh(t) * sech * sech;
    if (dl <= 0.0 || dr <= 0.0 || w == 0.0) return CVector();
    return w * f(dl, dr);
  };

  CVector sum = sample(0.0);
  int nodes = 1;
  {
    const double h = std::ldexp(1.0, -first_level);
    for (int j = 1; j * h <= t_max; ++j) {
      for (double t : {j * h, -j * h}) {
        CVector v = sample(t);
        if (v.size()) sum += v;
        ++nodes;
      }
    }
  }
  CVector prev = sum * std::ldexp(1.0, -first_level);
  double delta = 0.0;
  for (int level = first_level + 1; level <= max_level; ++level) {
    const double h = std::ldexp(1.0, -level);
    for (int j = 1; j * h <= t_max; j += 2) {
      for (double t : {j * h, -j * h}) {
        CVector v = sample(t);
        if (v.size()) sum += v;
        ++nodes;
      }
    }
    CVector next = sum * h;
    delta = relative_change(next, prev);
    prev = std::move(next);
    if (delta < cfg.tol && level >= first_level + 2) return {prev, nodes, delta, "tanh-sinh"};
  }
  throw Error(ErrorKind::QuadratureNotConverged,
              "tanh-sinh rule reached " + std::to_string(nodes) +
                  " nodes with relative change " + std::to_string(delta));
}

}  // namespace chtheta
