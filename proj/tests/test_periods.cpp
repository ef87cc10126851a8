#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "chtheta/errors.hpp"
#include "chtheta/periods.hpp"

using namespace chtheta;

namespace {

constexpr double pi = std::numbers::pi;

const std::vector<double> kFig2{-3, -2, 0, 1, 2, 3};
const std::vector<double> kGenus6{-7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6};
const std::vector<double> kFig2Degenerate{-3, -2, 0, 1e-14, 2, 2.00000000000001};

// Boost tanh-sinh integral of lambda^j / mu over (lo, hi), mu the sheet-1
// root on the upper rim. The constant phase of mu on the interval is read off
// at the midpoint; the modulus comes from the product.
cplx boost_interval(const Curve& c, double lo, double hi, int j) {
  const auto& bp = c.branch_points();
  const cplx mid_mu = c.sheet1_mu(cplx(0.5 * (lo + hi), 0.0));
  const cplx phase = mid_mu / std::abs(mid_mu);
  auto f = [&](double x, double xc) {
    double mod = 1.0;
    for (double b : bp) {
      double d = x - b;
      if (b == lo && xc != 0.0 && x - lo < 0.5 * (hi - lo)) d = -xc;
      if (b == hi && xc != 0.0 && hi - x < 0.5 * (hi - lo)) d = -xc;
      mod *= std::abs(d);
    }
    return std::pow(x, j) / std::sqrt(mod);
  };
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(f, lo, hi) / phase;
}

// Riemann matrix assembled from independently integrated raw periods.
CMatrix oracle_riemann(const Curve& c) {
  const int g = c.genus();
  const auto cuts = c.pairing();
  CMatrix a(g, g), b(g, g);
  for (int j = 0; j < g; ++j) {
    cplx acc = 0.0;
    for (int k = 0; k < g; ++k) {
      a(k, j) = 2.0 * boost_interval(c, cuts[k + 1].first, cuts[k + 1].second, j);
      acc += 2.0 * boost_interval(c, cuts[k].second, cuts[k + 1].first, j);
      b(k, j) = acc;
    }
  }
  const CMatrix norm = cplx(0.0, 2.0 * pi) * a.transpose().inverse();
  CMatrix riemann = b * norm.transpose();
  if (riemann.real().trace() > 0.0) riemann = -riemann;
  return riemann;
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("gauss-chebyshev and tanh-sinh rules against closed forms") {
  QuadConfig cfg;
  // int_0^pi cos^2 = pi / 2
  const QuadResult gc = gauss_chebyshev_theta(
      [](double t, double) {
        CVector v(1);
        v(0) = std::cos(t) * std::cos(t);
        return v;
      },
      cfg);
  CHECK(std::abs(gc.value(0) - pi / 2) < 1e-14);

  // int_0^1 dx / sqrt(x (1 - x)) = pi
  const QuadResult ts = tanh_sinh(
      [](double dl, double dr) {
        CVector v(1);
        v(0) = 1.0 / std::sqrt(dl * dr);
        return v;
      },
      1.0, cfg);
  CHECK(std::abs(ts.value(0) - pi) < 1e-12);

  // int_0^2 ln(x) dx = 2 ln 2 - 2
  const QuadResult lg = tanh_sinh(
      [](double dl, double) {
        CVector v(1);
        v(0) = std::log(dl);
        return v;
      },
      2.0, cfg);
  CHECK(std::abs(lg.value(0) - (2.0 * std::log(2.0) - 2.0)) < 1e-12);
}

TEST_CASE("quadrature that cannot converge is reported") {
  QuadConfig cfg;
  cfg.max_nodes = 128;
  cfg.tol = 1e-15;
  auto wild = [](double t, double) {
    CVector v(1);
    v(0) = std::sin(1000.0 * t) / (t + 1e-3);
    return v;
  };
  CHECK_THROWS_AS(gauss_chebyshev_theta(wild, cfg), Error);
}

TEST_CASE("Riemann matrix matches independently integrated periods") {
  for (const auto& bp : {kFig2, kGenus6, std::vector<double>{0, 1, 2, 3}}) {
    const Curve c = build_curve(bp);
    const PeriodData pd = riemann_matrix(c);
    const CMatrix oracle = oracle_riemann(c);
    CAPTURE(bp.size());
    CHECK(max_abs(pd.riemann - oracle) < 1e-10 * max_abs(oracle));
  }
}

TEST_CASE("genus-1 Riemann matrix against complete elliptic integrals") {
  // branch points 0 < 1 < 2 < 3: A around [2, 3], B through [1, 2]
  // the cut and gap integrals are 2 K(k) / sqrt(...) with cross ratios
  const Curve c = build_curve(std::vector<double>{0, 1, 2, 3});
  const PeriodData pd = riemann_matrix(c);
  auto integral = [&](double lo, double hi) {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    // substitution x = lo + (hi - lo) sin^2(s) removes both endpoint singularities
    auto f = [&](double s) {
      const double x = lo + (hi - lo) * std::sin(s) * std::sin(s);
      double mod = 1.0;
      for (double b : c.branch_points()) {
        if (b != lo && b != hi) mod *= std::abs(x - b);
      }
      return 2.0 / std::sqrt(mod);
    };
    return gk.integrate(f, 0.0, pi / 2, 15, 1e-15);
  };
  const double cut = integral(2.0, 3.0);
  const double gap = integral(1.0, 2.0);
  CHECK(pd.riemann(0, 0).real() < 0.0);
  CHECK(std::abs(std::abs(pd.riemann(0, 0)) - 2.0 * pi * gap / cut) < 1e-12);
}

TEST_CASE("period invariants") {
  for (const auto& bp : {kFig2, kGenus6, kFig2Degenerate}) {
    const Curve c = build_curve(bp);
    const PeriodData pd = riemann_matrix(c);
    const int g = c.genus();
    const CMatrix& b = pd.riemann;
    CHECK((b - b.transpose()).norm() / b.norm() < 1e-10);
    const Eigen::VectorXd eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(0.5 * (b.real() + b.real().transpose()))
            .eigenvalues();
    CHECK(eig.maxCoeff() < 0.0);
    const CMatrix na = pd.normalization * pd.a_raw.transpose();
    CHECK(max_abs(na - cplx(0.0, 2.0 * pi) * CMatrix::Identity(g, g)) < 1e-10);
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) {
        const double q = b(i, j).imag() / pi;
        CHECK(std::abs(q - std::round(q)) < 1e-8);
      }
    }
    CHECK_FALSE(pd.quadrature_report.empty());
  }
}

TEST_CASE("degenerate B diagonal grows like 2 ln(1/eps)") {
  const Curve c1 = build_curve(std::vector<double>{-3, -2, 0, 1e-10, 2, 2 + 1e-10});
  const Curve c2 = build_curve(kFig2Degenerate);
  const CMatrix b1 = riemann_matrix(c1).riemann;
  const CMatrix b2 = riemann_matrix(c2).riemann;
  // widths as stored, not as written
  for (int i = 0; i < 2; ++i) {
    const int hi = 2 * i + 3;
    const double w1 = c1.branch_points()[hi] - c1.branch_points()[hi - 1];
    const double w2 = c2.branch_points()[hi] - c2.branch_points()[hi - 1];
    CHECK(std::abs((b1(i, i) - b2(i, i)).real() - 2.0 * std::log(w1 / w2)) < 1e-6);
  }
}

TEST_CASE("Abel map is additive modulo the lattice") {
  const Curve c = build_curve(kFig2);
  const PeriodData pd = riemann_matrix(c);
  const SurfacePoint p = SurfacePoint::on_sheet(cplx(0.5, 0.7), 1);
  const SurfacePoint q = SurfacePoint::on_sheet(cplx(-2.5, -0.4), 2);
  for (const SurfacePoint& base :
       {c.branch_point(0), c.branch_point(3), SurfacePoint::on_sheet(-4.0, 1)}) {
    const CVector direct = abel_map(pd, p, q);
    const CVector via = abel_map(pd, p, base) - abel_map(pd, q, base);
    const LatticeCoordinates lc = lattice_coordinates(pd.riemann, direct - via);
    for (int k = 0; k < c.genus(); ++k) {
      CHECK(std::abs(lc.n(k) - std::round(lc.n(k))) < 1e-8);
      CHECK(std::abs(lc.m(k) - std::round(lc.m(k))) < 1e-8);
    }
  }
}

TEST_CASE("r = 2 int_e^b equals minus 2 int_e^a") {
  const Curve c = build_curve(kFig2);
  const PeriodData pd = riemann_matrix(c);
  const SurfacePoint a = SurfacePoint::on_sheet(-4.0, 1);
  const SurfacePoint e = c.branch_point(0);
  const CVector r = vector_r(pd, a, e);
  CHECK((r - 2.0 * abel_map(pd, a.swapped(), e)).norm() < 1e-12);
  CHECK((r + 2.0 * abel_map(pd, a, e)).norm() < 1e-12);
  // M-curve, a real: r is real up to multiples of i pi
  for (int k = 0; k < c.genus(); ++k) {
    const double q = r(k).imag() / pi;
    CHECK(std::abs(q - std::round(q)) < 1e-10);
  }
}

TEST_CASE("direction vectors are derivatives of the Abel map") {
  const Curve c = build_curve(kFig2);
  const PeriodData pd = riemann_matrix(c);
  const SurfacePoint base = c.branch_point(0);

  const cplx l0(-4.0, 0.0);
  const double h = 1e-3;
  auto at = [&](cplx l) { return abel_map(pd, SurfacePoint::on_sheet(l, 2), base); };
  // fourth-order central difference
  const CVector fd = (8.0 * (at(l0 + h) - at(l0 - h)) - (at(l0 + 2 * h) - at(l0 - 2 * h))) / (12 * h);
  const DirectionVector v = direction_vector(c, SurfacePoint::on_sheet(l0, 2), pd.normalization);
  CHECK(v.local_param_kind == LocalParamKind::nonbranch);
  CHECK((fd - v.v).norm() < 1e-9 * v.v.norm());

  // branch point: Pi(k) = V k + O(k^3) in the local parameter
  for (int j : {0, 1, 4}) {
    const SurfacePoint e = c.branch_point(j);
    const DirectionVector ve = direction_vector(c, e, pd.normalization);
    CHECK(ve.local_param_kind == LocalParamKind::branch);
    CHECK(ve.v.imag().norm() < 1e-12 * ve.v.norm());
    const double k1 = 1e-2, k2 = 5e-3;
    const CVector d1 = abel_map(pd, branch_parameter_point(c, j, k1), e) / k1;
    const CVector d2 = abel_map(pd, branch_parameter_point(c, j, k2), e) / k2;
    const CVector rich = (4.0 * d2 - d1) / 3.0;
    CAPTURE(j);
    CHECK((rich - ve.v).norm() < 1e-8 * ve.v.norm());
  }
}
