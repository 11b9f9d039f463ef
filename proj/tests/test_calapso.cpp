#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "isothermic/calapso.hpp"
#include "isothermic/catalog.hpp"
#include "isothermic/errors.hpp"
#include "isothermic/sequence.hpp"
#include "isothermic/verify.hpp"
#include "oracle.hpp"

using namespace isothermic;

namespace {

const double s2 = std::sqrt(2.0);
const double s6 = std::sqrt(6.0);

ProfilePair inside() { return ProfilePair(build_family(4.0 * s6, 3.0, NormalizedCoeffs{4.0, 1.0})); }

const std::vector<double> steps = {0.04, 0.02, 0.01};

}  // namespace

TEST_CASE("closed-form fields at the origin") {
  const ProfilePair pair = inside();
  const CalapsoField w = make_field(pair, FieldKind::Omega);
  const CalapsoField W = make_field(pair, FieldKind::CapitalOmega);
  CHECK(w.kind() == FieldKind::Omega);
  CHECK(w.epsilon() == 1);
  REQUIRE(w.params().has_value());

  const double expected_w = s2 / 2.0 * (6.0 + 7.0 * s6) / (6.0 + s6);
  const double expected_W = s2 / 2.0 * (2.0 - 7.0 * s6 / 3.0) / (2.0 - s6 / 3.0);
  CHECK(std::abs(w(0.0, 0.0) - expected_w) <= 1e-14);
  CHECK(std::abs(W(0.0, 0.0) - expected_W) <= 1e-14);
  CHECK(w(0.0, 0.0) == doctest::Approx(1.9370396128453432).epsilon(1e-14));
  CHECK(W(0.0, 0.0) == doctest::Approx(-2.2198823253199623).epsilon(1e-14));

  const ProfilePair negone(build_family(2.0, -1.0, NormalizedCoeffs{1.0, 0.0, 0.0, -0.75}));
  const CalapsoField wn = make_field(negone, FieldKind::Omega);
  CHECK(wn.epsilon() == -1);
  CHECK(std::abs(wn(0.0, 0.0) + 1.1 * s2) <= 1e-14);

  CHECK_THROWS_AS(make_field(pair, FieldKind::Custom), ValidationError);
}

TEST_CASE("scaled and custom fields report Custom") {
  const CalapsoField w = make_field(inside(), FieldKind::Omega);
  const CalapsoField w2 = w.scaled(2.0);
  CHECK(w2.kind() == FieldKind::Custom);
  CHECK(w2(0.3, 0.4) == 2.0 * w(0.3, 0.4));
  const CalapsoField c = CalapsoField::custom([](double a, double b) { return a * b; });
  CHECK(c.kind() == FieldKind::Custom);
  CHECK_FALSE(c.params().has_value());
  CHECK(c(2.0, 3.0) == 6.0);
}

TEST_CASE("surface curvatures recover the closed-form fields up to sign") {
  for (const char* key : {"pos-inside", "mid-nested", "low-outside", "negone", "pos-planar"}) {
    const CatalogEntry& entry = *find_preset(key);
    const ProfilePair pair(build_family(entry));
    const CalapsoField w = make_field(pair, FieldKind::Omega);
    const CalapsoField W = make_field(pair, FieldKind::CapitalOmega);
    const CalapsoField mean = field_from_surface(pair, SurfaceCurvature::Mean);
    const CalapsoField skew = field_from_surface(pair, SurfaceCurvature::Skew);
    HaltonSequence seq(entry.audit_window);
    for (int k = 0; k < 200; ++k) {
      const ParamPoint u = seq.next();
      const SurfacePoint p = eval_surface_point(pair, u.u1, u.u2);
      if (!p.flags.ok()) continue;
      CHECK(std::abs(std::abs(mean(u.u1, u.u2)) - std::abs(w(u.u1, u.u2))) <=
            1e-10 * std::max(1.0, std::abs(w(u.u1, u.u2))));
      CHECK(std::abs(std::abs(skew(u.u1, u.u2)) - std::abs(W(u.u1, u.u2))) <=
            1e-10 * std::max(1.0, std::abs(W(u.u1, u.u2))));
    }
  }
}

TEST_CASE("residual grid layout") {
  const CalapsoField one = CalapsoField::custom([](double, double) { return 1.0; });
  const ResidualReport r = calapso_residual(one, {0.0, 1.0, 2.0, 2.5}, 0.25);
  CHECK(r.n1 == 5);
  CHECK(r.n2 == 3);
  CHECK(r.residual.size() == 15);
  CHECK(r.max_abs == 0.0);
  CHECK(r.l2 == 0.0);
}

TEST_CASE("trivial exact solutions give zero residual") {
  const CalapsoField one = CalapsoField::custom([](double, double) { return 1.0; });
  const ConvergenceResult cr = residual_convergence(one, {0.0, 1.0, 0.0, 1.0}, steps);
  for (double m : cr.max_abs) CHECK(m == 0.0);
  CHECK(cr.order == std::numeric_limits<double>::infinity());

  const CalapsoField lin = CalapsoField::custom([](double a, double) { return 2.0 + a; });
  CHECK(calapso_residual(lin, {0.0, 1.0, 0.0, 1.0}, 0.05).max_abs <= 1e-9);
}

TEST_CASE("residual matches an independent pointwise stencil") {
  const CalapsoField w = make_field(inside(), FieldKind::Omega);
  const ParamRect patch{0.5, 1.5, 0.5, 1.5};
  const double h = 0.04;
  const ResidualReport r = calapso_residual(w, patch, h);
  auto fn = [&](double a, double b) { return w(a, b); };
  for (int i : {0, 7, r.n1 - 1}) {
    for (int j : {0, 11, r.n2 - 1}) {
      const double x = patch.u1_min + i * h, y = patch.u2_min + j * h;
      const double ref = oracle::calapso_residual_at(fn, x, y, h);
      CHECK(std::abs(r.residual[static_cast<size_t>(i) * r.n2 + j] - ref) <=
            1e-6 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("closed-form fields converge at second order") {
  const ProfilePair pair = inside();
  const CalapsoField w = make_field(pair, FieldKind::Omega);
  const CalapsoField W = make_field(pair, FieldKind::CapitalOmega);
  for (const auto& h : {steps, std::vector<double>{0.1, 0.05, 0.025}}) {
    const double order = residual_convergence_order(w, {0.5, 1.5, 0.5, 1.5}, h);
    CHECK(order >= 1.7);
    CHECK(order <= 2.3);
  }
  const double order_W = residual_convergence_order(W, {-0.5, 0.5, 0.5, 1.5}, steps);
  CHECK(order_W >= 1.7);
  CHECK(order_W <= 2.3);

  const ProfilePair nested(build_family(*find_preset("mid-nested")));
  const double order_nested =
      residual_convergence_order(make_field(nested, FieldKind::Omega), {1.5, 2.5, 4.0, 5.0}, steps);
  CHECK(order_nested >= 1.7);
  CHECK(order_nested <= 2.3);
}

TEST_CASE("non-solutions do not converge") {
  const CalapsoField w = make_field(inside(), FieldKind::Omega);
  const ParamRect patch{0.5, 1.5, 0.5, 1.5};
  CHECK(residual_convergence_order(w.scaled(2.0), patch, steps) <= 0.5);

  const CalapsoField wrong =
      CalapsoField::custom([w](double a, double b) { return w(a, b) + 0.1 * a * b; });
  CHECK(std::abs(residual_convergence_order(wrong, patch, steps)) <= 0.5);

  const CalapsoField sum = CalapsoField::custom([](double a, double b) { return 3.0 + a + b; });
  const ResidualReport r = calapso_residual(sum, {0.0, 1.0, 0.0, 1.0}, 0.05);
  CHECK(r.max_abs == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("residual is invariant under a global sign change") {
  const CalapsoField w = make_field(inside(), FieldKind::Omega);
  const ParamRect patch{0.5, 1.0, 0.5, 1.0};
  const ResidualReport a = calapso_residual(w, patch, 0.02);
  const ResidualReport b = calapso_residual(w.scaled(-1.0), patch, 0.02);
  REQUIRE(a.residual.size() == b.residual.size());
  for (size_t k = 0; k < a.residual.size(); ++k) CHECK(a.residual[k] == b.residual[k]);
}

TEST_CASE("residual refuses fields that vanish or are undefined on the stencil") {
  const CalapsoField zero_line = CalapsoField::custom([](double a, double) { return a - 0.5; });
  CHECK_THROWS_AS(calapso_residual(zero_line, {0.0, 1.0, 0.0, 1.0}, 0.1), DomainError);
  const CalapsoField hole = CalapsoField::custom(
      [](double a, double b) { return a * a + b * b < 0.01 ? std::nan("") : 1.0; });
  CHECK_THROWS_AS(calapso_residual(hole, {-1.0, 1.0, -1.0, 1.0}, 0.1), DomainError);

  const ProfilePair planar(build_family(0.0, 3.0, SingularCoeffs{}));
  const CalapsoField w = make_field(planar, FieldKind::Omega);
  CHECK(std::isnan(w(0.0, std::numbers::pi / 4.0)));
  const double q = std::numbers::pi / 4.0;
  CHECK_THROWS_WITH_AS(calapso_residual(w, {-0.5, 0.5, q - 0.5, q + 0.5}, 0.05),
                       doctest::Contains("field undefined at (0, 0.785398"), DomainError);
}

TEST_CASE("select_patch finds a well-conditioned square") {
  const ProfilePair pair(build_family(0.0, 3.0, SingularCoeffs{}));
  const CalapsoField w = make_field(pair, FieldKind::Omega);
  const ParamRect window{-2.0, 2.0, 0.0, std::numbers::pi};
  const auto patch = select_patch(w, pair, window);
  REQUIRE(patch.has_value());
  CHECK(patch->width() == doctest::Approx(1.0));
  CHECK(patch->height() == doctest::Approx(1.0));
  CHECK(window.contains({patch->u1_min, patch->u2_min}));
  CHECK(window.contains({patch->u1_max, patch->u2_max}));
  const double order = residual_convergence_order(w, *patch, steps);
  CHECK(order >= 1.7);
  CHECK(order <= 2.3);

  CHECK_FALSE(select_patch(w, pair, {0.0, 0.5, 0.0, 0.5}).has_value());
}

TEST_CASE("check helpers apply the documented bands") {
  const CalapsoField w = make_field(inside(), FieldKind::Omega);
  const CalapsoCheck ok = check_solution("omega", w, ParamRect{0.5, 1.5, 0.5, 1.5});
  CHECK(ok.passed);
  CHECK(ok.order_low == 1.7);
  CHECK(ok.order_high == 2.3);
  CHECK(check_non_solution("omega_times_2", w.scaled(2.0), ParamRect{0.5, 1.5, 0.5, 1.5}).passed);
  CHECK_FALSE(check_solution("omega_times_2", w.scaled(2.0), ParamRect{0.5, 1.5, 0.5, 1.5}).passed);
  const CalapsoCheck missing = check_solution("omega", w, std::nullopt);
  CHECK_FALSE(missing.passed);
  CHECK_FALSE(missing.error.empty());
}
