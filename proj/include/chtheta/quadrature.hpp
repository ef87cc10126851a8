#pragma once

#include <functional>
#include <string>

#include "chtheta/curve.hpp"

namespace chtheta {

struct QuadConfig {
  double tol = 1e-12;
  int max_nodes = 4096;
};

struct QuadResult {
  CVector value;
  int nodes = 0;
  double last_delta = 0.0;
  std::string method;
};

/// Integrand sampled at a node, given its distances to the left and right
/// endpoints of the integration interval. Passing both distances lets callers
/// form x - lambda_k without cancellation next to nearly coincident branch
/// points.
using EndpointIntegrand = std::function<CVector(double dist_left, double dist_right)>;

/// Midpoint (Gauss-Chebyshev) rule on theta in [0, pi], doubling from 64 nodes
/// until the relative change drops below cfg.tol.
QuadResult gauss_chebyshev_theta(const EndpointIntegrand& f, const QuadConfig& cfg);

/// Nested tanh-sinh rule on an interval of the given length. Handles
/// integrable endpoint singularities and near-singularities just outside an
/// endpoint.
QuadResult tanh_sinh(const EndpointIntegrand& f, double length, const QuadConfig& cfg);

}  // namespace chtheta
