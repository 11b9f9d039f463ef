#include <cmath>
#include <numbers>

#include "doctest.h"
#include "isothermic/catalog.hpp"
#include "isothermic/sequence.hpp"
#include "isothermic/surface.hpp"
#include "oracle.hpp"

using namespace isothermic;

namespace {

const double pi = std::numbers::pi;
const double s6 = std::sqrt(6.0);

ProfilePair inside() { return ProfilePair(build_family(4.0 * s6, 3.0, NormalizedCoeffs{4.0, 1.0})); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("cylinder frame is orthonormal with the inner normal") {
  for (double u2 : {0.0, 0.7, 2.0, -3.1}) {
    const CylinderFrame fr = cylinder_frame(1.5, u2);
    CHECK(fr.X.z() == 1.5);
    CHECK(std::abs(fr.X1.dot(fr.X2)) <= 1e-15);
    CHECK(std::abs(fr.X1.dot(fr.N)) <= 1e-15);
    CHECK(std::abs(fr.X2.dot(fr.N)) <= 1e-15);
    CHECK(std::abs(fr.N.norm() - 1.0) <= 1e-15);
    CHECK((fr.N + Vec3(fr.X.x(), fr.X.y(), 0.0)).norm() <= 1e-15);
  }
}

TEST_CASE("two-bubble family at the origin matches exact values") {
  const SurfacePoint p = eval_surface_point(inside(), 0.0, 0.0);
  REQUIRE(p.flags.ok());
  const double M = 6.0 + s6;
  CHECK(std::abs(p.M - M) <= 1e-12);
  CHECK(std::abs(p.fg_sum - (2.0 - s6 / 3.0)) <= 1e-12);
  CHECK(std::abs(p.position.x() - (1.0 - 2.0 * s6 / M)) <= 1e-12);
  CHECK(std::abs(p.position.y() + 4.0 / M) <= 1e-12);
  CHECK(p.position.z() == 0.0);
  CHECK(p.position.x() == doctest::Approx(0.420204).epsilon(1e-6));
  CHECK(p.position.y() == doctest::Approx(-0.473402).epsilon(1e-6));
  CHECK(std::abs(p.H + (13.0 + 8.0 * s6) / 10.0) <= 1e-12);
  CHECK(std::abs(p.lambda1 + (72.0 + 42.0 * s6) / 25.0) <= 1e-12);
  CHECK(std::abs(p.lambda2 - (7.0 + 2.0 * s6) / 25.0) <= 1e-12);
  CHECK(std::abs(p.Hskew + (79.0 + 44.0 * s6) / 25.0) <= 1e-12);
  CHECK(std::abs(p.K - p.lambda1 * p.lambda2) <= 1e-12);
  CHECK(std::abs(p.normal.norm() - 1.0) <= 1e-14);
}

TEST_CASE("surface evaluation agrees with an independent formula set") {
  struct Case {
    ProfilePair pair;
    oracle::Jet (*f)(double);
    oracle::Jet (*g)(double);
  };
  const Case cases[] = {
      {inside(), oracle::inside_f, oracle::inside_g},
      {ProfilePair(build_family(0.0, 3.0, SingularCoeffs{})), oracle::planar3_f, oracle::planar3_g},
      {ProfilePair(build_family(2.0, -1.0, NormalizedCoeffs{1.0, 0.0, 0.0, -0.75})), oracle::negone_f,
       oracle::negone_g},
  };
  for (const auto& cs : cases) {
    const double b = cs.pair.params().b(), c = cs.pair.params().c();
    HaltonSequence seq({-1.5, 1.5, -pi, pi});
    int compared = 0;
    for (int k = 0; k < 300; ++k) {
      const ParamPoint u = seq.next();
      const SurfacePoint p = eval_surface_point(cs.pair, u.u1, u.u2);
      if (!p.flags.ok() || std::abs(p.M) < 1e-3 || std::abs(p.fg_sum) < 1e-3) continue;
      const oracle::Surface o = oracle::surface(b, c, cs.f(u.u1), cs.g(u.u2), u.u1, u.u2);
      const double scale = 1.0 / std::min(std::abs(o.M), std::abs(p.fg_sum));
      for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(p.position[i] - o.X[i]) <= 1e-12 * scale * scale);
        CHECK(std::abs(p.normal[i] - o.N[i]) <= 1e-12 * scale * scale);
      }
      CHECK(rel(p.psi, o.psi) <= 1e-12 * scale);
      CHECK(rel(p.lambda1, o.lambda1) <= 1e-12 * scale * scale);
      CHECK(rel(p.lambda2, o.lambda2) <= 1e-12 * scale * scale);
      CHECK(rel(p.H, o.H) <= 1e-12 * scale);
      ++compared;
    }
    CHECK(compared > 200);
  }
}

TEST_CASE("mean and skew curvature are the half sum and difference of the principal ones") {
  for (const auto& entry : catalog()) {
    const ProfilePair pair(build_family(entry));
    HaltonSequence seq(entry.audit_window);
    for (int k = 0; k < 200; ++k) {
      const ParamPoint u = seq.next();
      const SurfacePoint p = eval_surface_point(pair, u.u1, u.u2);
      if (!p.flags.ok()) continue;
      const double scale = std::max({1.0, std::abs(p.lambda1), std::abs(p.lambda2)});
      CHECK(std::abs(p.H - 0.5 * (p.lambda1 + p.lambda2)) <= 1e-10 * scale);
      CHECK(std::abs(p.Hskew - (p.lambda1 - p.lambda2)) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("b = 0 gives constant mean curvature -1/2") {
  const ProfilePair pair(build_family(0.0, 3.0, NormalizedCoeffs{4.0, 3.0}));
  HaltonSequence seq({-5.0, 5.0, -5.0, 5.0});
  for (int k = 0; k < 1000; ++k) {
    const ParamPoint u = seq.next();
    const SurfacePoint p = eval_surface_point(pair, u.u1, u.u2);
    if (p.flags.ok()) CHECK(std::abs(p.H + 0.5) <= 1e-14);
  }
}

TEST_CASE("general Ribaucour route reproduces the direct formulas") {
  SUBCASE("intermediates at the origin") {
    const RibaucourEvaluation r = eval_via_general_ribaucour(inside(), 0.0, 0.0);
    CHECK(std::abs(r.inter.S - 10.0) <= 1e-12);
    CHECK(std::abs(r.inter.T1 - 12.0) <= 1e-12);
    CHECK(std::abs(r.inter.T2 - 2.0 * (0.0 + s6)) <= 1e-12);
  }
  SUBCASE("positions and curvatures") {
    for (const auto& entry : catalog()) {
      const ProfilePair pair(build_family(entry));
      HaltonSequence seq(entry.audit_window);
      for (int k = 0; k < 100; ++k) {
        const ParamPoint u = seq.next();
        const SurfacePoint p = eval_surface_point(pair, u.u1, u.u2);
        const RibaucourEvaluation r = eval_via_general_ribaucour(pair, u.u1, u.u2);
        CHECK(p.flags.ok() == r.flags.ok());
        if (!p.flags.ok()) continue;
        const double scale = std::max({1.0, std::abs(p.lambda1), std::abs(p.lambda2)});
        CHECK((p.position - r.position).norm() <= 1e-10 * std::max(1.0, p.position.norm()));
        CHECK(std::abs(p.lambda1 - r.lambda1) <= 1e-10 * scale);
        CHECK(std::abs(p.lambda2 - r.lambda2) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("masking keeps M and f + g and clears the rest") {
  SUBCASE("domain boundary") {
    const SurfacePoint p = eval_surface_point(inside(), 0.0, 0.0, {2.0, 1e-8});
    CHECK(p.flags.near_domain_boundary);
    CHECK_FALSE(p.flags.near_singular);
    CHECK(std::abs(p.M - (6.0 + s6)) <= 1e-12);
    CHECK(std::isnan(p.position.x()));
    CHECK(std::isnan(p.normal.z()));
    CHECK(std::isnan(p.H));
    CHECK(std::isnan(p.K));
  }
  SUBCASE("singular point") {
    const ProfilePair pair(build_family(0.0, 3.0, SingularCoeffs{}));
    const SurfacePoint p = eval_surface_point(pair, 0.0, pi / 4.0);
    CHECK(p.flags.near_singular);
    CHECK(std::abs(p.M) <= 1e-12);
    CHECK(std::isnan(p.psi));
    const SurfacePoint q = eval_surface_point(pair, 0.0, pi / 4.0 + 0.1);
    CHECK(q.flags.ok());
  }
  SUBCASE("point_flags thresholds") {
    CHECK(point_flags(1.0, 1.0, {}).ok());
    CHECK(point_flags(1e-9, 1.0, {}).near_singular);
    CHECK(point_flags(1.0, -1e-9, {}).near_domain_boundary);
    CHECK(point_flags(std::nan(""), 1.0, {}).near_singular);
  }
}
