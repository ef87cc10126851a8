#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "chtheta/errors.hpp"
#include "chtheta/fay.hpp"
#include "chtheta/run.hpp"

using namespace chtheta;

namespace {

CHParams fixture(const std::string& name) {
  return setup_from_config(load_config(std::string(CHTHETA_CONFIG_DIR) + "/" + name + ".json"));
}

}  // namespace

TEST_CASE("four Fay residuals at random real z") {
  for (const char* name : {"fig2_smooth", "genus1_travelling", "fig3_smooth"}) {
    const CHParams p = fixture(name);
    const int g = p.curve().genus();
    const FayChecker checker(p.a, p.b, p.e, *p.ctx);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    FayResiduals worst;
    for (int s = 0; s < 100; ++s) {
      CVector z(g);
      for (int i = 0; i < g; ++i) z(i) = u(rng);
      const FayResiduals r = checker.at(z);
      CHECK(r.unresolved == 0);
      for (bool sc : r.scored) CHECK(sc);
      worst.fay1 = std::max(worst.fay1, r.fay1);
      worst.fay2 = std::max(worst.fay2, r.fay2);
      worst.ch1 = std::max(worst.ch1, r.ch1);
      worst.ch2 = std::max(worst.ch2, r.ch2);
    }
    CAPTURE(name);
    CHECK(worst.max() < 1e-6);
  }
}

TEST_CASE("Fay residuals detect a wrong scalar") {
  const CHParams p = fixture("fig2_smooth");
  CVector z(2);
  z << 0.3, -0.7;
  const FayResiduals good = fay_residuals(z, p.a, p.b, p.e, *p.ctx);
  CHECK(good.max() < 1e-6);
  // the same identities with b moved off the involution image of a
  const SurfacePoint b_wrong = SurfacePoint::on_sheet(-4.5, 2);
  const FayResiduals bad = fay_residuals(z, p.a, b_wrong, p.e, *p.ctx);
  CHECK(bad.ch1 + bad.ch2 > 1e-4);
}

TEST_CASE("q2~ = -p2~ p2 on every fixture") {
  for (const char* name :
       {"fig2_smooth", "fig2_smooth_degenerate", "fig3_smooth", "fig3_smooth_degenerate",
        "fig4_cusped", "fig4_cusped_degenerate", "fig5_cusped", "fig5_cusped_degenerate",
        "genus1_travelling"}) {
    const CHParams p = fixture(name);
    CAPTURE(name);
    CHECK(p.fay.identity_residual() < 1e-8);
    CHECK(std::abs(p.alpha1.imag()) < 1e-8);
    CHECK(std::abs(p.alpha2.imag()) < 1e-8);
  }
}

TEST_CASE("scalars do not depend on the odd characteristic") {
  const CHParams p = fixture("fig2_smooth");
  int compared = 0;
  for (const Characteristic& ch : all_characteristics(2)) {
    if (!ch.is_odd()) continue;
    FayContext ctx(p.periods(), p.e, 1e-12, {}, ch);
    ctx.set_branch_sign(p.ve_sign);
    FayScalars s;
    try {
      s = ch_scalars(p.a, p.b, p.e, ctx);
    } catch (const Error& e) {
      // e among the zeros of this Theta[delta]
      CHECK(e.kind() == ErrorKind::VanishingDenominator);
      continue;
    }
    ++compared;
    CHECK(std::abs(s.p1 - p.fay.p1) < 1e-9 * std::abs(p.fay.p1));
    CHECK(std::abs(s.p2 - p.fay.p2) < 1e-9 * std::abs(p.fay.p2));
    CHECK(std::abs(s.p1_tilde - p.fay.p1_tilde) < 1e-9 * std::abs(p.fay.p1_tilde));
    CHECK(std::abs(s.p2_tilde - p.fay.p2_tilde) < 1e-9 * std::abs(p.fay.p2_tilde));
    CHECK(std::abs(s.q2_tilde - p.fay.q2_tilde) < 1e-9 * std::abs(p.fay.q2_tilde));
  }
  CHECK(compared >= 2);
}

TEST_CASE("selected odd characteristic is odd and non-singular") {
  const CHParams p = fixture("fig3_smooth");
  CHECK(p.ctx->odd().is_odd());
  const Characteristic even = Characteristic::zero(6);
  CHECK_THROWS_AS(FayContext(p.periods(), p.e, 1e-12, {}, even), Error);
}
