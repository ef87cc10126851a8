#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "chtheta/curve.hpp"
#include "chtheta/errors.hpp"

using namespace chtheta;

namespace {

ErrorKind kind_of(const std::vector<double>& bp) {
  try {
    build_curve(bp);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error");
  return ErrorKind::InvalidArgument;
}

cplx product(const Curve& c, cplx l) {
  cplx p = 1.0;
  for (double b : c.branch_points()) p *= l - b;
  return p;
}

}  // namespace

TEST_CASE("branch points are sorted and paired into cuts") {
  const Curve c = build_curve(std::vector<double>{2, -3, 3, 0, -2, 1});
  CHECK(c.genus() == 2);
  CHECK(c.branch_points() == std::vector<double>{-3, -2, 0, 1, 2, 3});
  const auto cuts = c.pairing();
  REQUIRE(cuts.size() == 3);
  CHECK(cuts[0] == std::pair<double, double>{-3, -2});
  CHECK(cuts[2] == std::pair<double, double>{2, 3});
  CHECK(c.degenerate_pairs().empty());
}

TEST_CASE("malformed branch point sets") {
  CHECK(kind_of({-3, -2, 0, 1, 2}) == ErrorKind::OddBranchCount);
  CHECK(kind_of({0, 1}) == ErrorKind::TooFewPoints);
  CHECK(kind_of({0, 1, 1, 2}) == ErrorKind::DuplicatePoint);
  CHECK(kind_of({0, 1, std::numeric_limits<double>::quiet_NaN(), 2}) ==
        ErrorKind::NonFiniteBranchPoint);
}

TEST_CASE("near-colliding pairs are flagged") {
  const Curve c = build_curve(std::vector<double>{-3, -2, 0, 1e-14, 2, 2.00000000000001});
  const auto& d = c.degenerate_pairs();
  REQUIRE(d.size() == 2);
  CHECK(d[0] == std::pair<int, int>{3, 4});
  CHECK(d[1] == std::pair<int, int>{5, 6});
  CHECK_FALSE(c.cut_is_degenerate(0));
  CHECK(c.cut_is_degenerate(1));
  CHECK(c.cut_is_degenerate(2));
}

TEST_CASE("sheet-1 root squares to the product and follows the reference") {
  const std::vector<double> bp{-3, -2, 0, 1, 2, 3};
  const Curve c = build_curve(bp, kDefaultDegeneracyThreshold, cplx(-4.0, 0.0));
  for (cplx l : {cplx(-4.0, 0.0), cplx(0.5, 0.3), cplx(-2.5, -1.0), cplx(5.0, 2.0)}) {
    const cplx mu = c.sheet1_mu(l);
    CHECK(std::abs(mu * mu - product(c, l)) < 1e-12 * std::abs(product(c, l)));
  }
  // principal root at the reference point
  CHECK(c.sheet1_mu(-4.0).real() > 0.0);
  CHECK(std::abs(c.sheet1_mu(-4.0) - std::sqrt(product(c, -4.0))) < 1e-12);

  // continuity across a gap above the real axis
  const cplx left = c.sheet1_mu(cplx(-1.0, 1e-9));
  const cplx right = c.sheet1_mu(cplx(-1.0, 1e-7));
  CHECK(std::abs(left - right) < 1e-6);

  const Curve d = build_curve(bp);
  CHECK(d.sheet1_mu(10.0).real() > 0.0);
}

TEST_CASE("sheets and involution") {
  const Curve c = build_curve(std::vector<double>{0, 1, 2, 3});
  const SurfacePoint p1 = SurfacePoint::on_sheet(-1.0, 1);
  const SurfacePoint p2 = p1.swapped();
  CHECK(p2.sheet() == 2);
  CHECK(std::abs(mu_value(c, p1) + mu_value(c, p2)) < 1e-15);
  const SurfacePoint e = c.branch_point(2);
  CHECK(e.is_branch());
  CHECK(e.lambda() == cplx(2.0, 0.0));
  CHECK(c.branch_index_of(cplx(2.0, 0.0)) == 2);
  CHECK_FALSE(c.branch_index_of(cplx(2.5, 0.0)).has_value());
  CHECK_THROWS_AS(SurfacePoint::on_sheet(0.5, 3), Error);
}

TEST_CASE("holomorphic basis coefficients") {
  const Curve c = build_curve(std::vector<double>{-3, -2, 0, 1, 2, 3});
  const SurfacePoint p = SurfacePoint::on_sheet(cplx(0.5, 0.5), 1);
  const CVector h = holo_basis(c, p);
  REQUIRE(h.size() == 2);
  const cplx mu = mu_value(c, p);
  CHECK(std::abs(h(0) - 1.0 / mu) < 1e-14);
  CHECK(std::abs(h(1) - p.lambda() / mu) < 1e-14);
}
