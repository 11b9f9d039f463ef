#include "isothermic/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "isothermic/errors.hpp"
#include "isothermic/quadrature.hpp"
#include "isothermic/sequence.hpp"

namespace isothermic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Central-difference tangents and normal derivatives at one point.
struct Stencil {
  Vec3 X1, X2;
  Vec3 N1, N2;
};

Stencil central_stencil(const SurfaceEvaluator& surface, ParamPoint at, double h) {
  const SurfaceSample p1 = surface(at.u1 + h, at.u2);
  const SurfaceSample m1 = surface(at.u1 - h, at.u2);
  const SurfaceSample p2 = surface(at.u1, at.u2 + h);
  const SurfaceSample m2 = surface(at.u1, at.u2 - h);
  if (!(p1.ok && m1.ok && p2.ok && m2.ok)) {
    throw DomainError("finite-difference stencil touches a masked point");
  }
  const double inv = 1.0 / (2.0 * h);
  return {(p1.position - m1.position) * inv, (p2.position - m2.position) * inv,
          (p1.normal - m1.normal) * inv, (p2.normal - m2.normal) * inv};
}

ShapeOperatorFD shape_operator_with_sign(const SurfaceEvaluator& surface, ParamPoint at, double h,
                                         int sign) {
  const Stencil s = central_stencil(surface, at, h);
  ShapeOperatorFD out;
  FundamentalForms& ff = out.forms;
  ff.at = at;
  ff.h = h;
  ff.E = s.X1.squaredNorm();
  ff.F = s.X1.dot(s.X2);
  ff.G = s.X2.squaredNorm();
  ff.e = -sign * s.N1.dot(s.X1);
  ff.f = -sign * 0.5 * (s.N1.dot(s.X2) + s.N2.dot(s.X1));
  ff.g2 = -sign * s.N2.dot(s.X2);
  out.k1 = ff.e / ff.E;
  out.k2 = ff.g2 / ff.G;
  out.offdiag = std::abs(ff.f) / std::sqrt(ff.E * ff.G);
  return out;
}

double rel(double err, std::initializer_list<double> scales) {
  double s = 1.0;
  for (double x : scales) s = std::max(s, std::abs(x));
  return err / s;
}

struct Tracker {
  CheckResult result;

  Tracker(std::string name, double tol) {
    result.name = std::move(name);
    result.tolerance = tol;
  }

  void add(double scaled, double absolute, ParamPoint at) {
    if (!std::isfinite(scaled)) scaled = std::numeric_limits<double>::infinity();
    if (!result.worst || scaled > result.value) {
      result.value = scaled;
      result.worst = at;
    }
    result.max_abs = std::max(result.max_abs, std::abs(absolute));
  }

  CheckResult finish() {
    result.passed = result.worst.has_value() && result.value <= result.tolerance;
    return result;
  }
};

bool well_conditioned(const SurfacePoint& sp) {
  return sp.flags.ok() && std::abs(sp.M) >= 0.1 && std::abs(sp.fg_sum) >= 0.1 &&
         std::max(std::abs(sp.lambda1), std::abs(sp.lambda2)) <= 10.0;
}

struct MetricAccumulator {
  AuditMetric metric;

  MetricAccumulator(std::string name, double bound) {
    metric.name = std::move(name);
    metric.bound = bound;
  }

  void add(double coarse, double fine) {
    metric.gap_coarse = std::max(metric.gap_coarse, coarse);
    metric.gap_fine = std::max(metric.gap_fine, fine);
  }

  AuditMetric finish() {
    // Gaps already at rounding level carry no convergence information.
    constexpr double floor = 1e-12;
    metric.ratio = metric.gap_fine > 0.0 ? metric.gap_coarse / metric.gap_fine
                                         : std::numeric_limits<double>::infinity();
    const bool converging =
        metric.gap_coarse <= floor || (metric.ratio >= kRatioLow && metric.ratio <= kRatioHigh);
    metric.passed = metric.gap_coarse <= metric.bound && converging;
    return metric;
  }
};

// Draws Halton points until `count` of them are well conditioned and have
// unmasked stencils at both step sizes; fn receives each accepted point.
template <class Fn>
int for_audit_points(const ProfilePair& pair, const ParamRect& window, int count,
                     const MaskTolerances& tol, double h, Fn&& fn) {
  HaltonSequence seq(window);
  const SurfaceEvaluator surface = family_evaluator(pair, tol);
  int accepted = 0;
  for (long attempt = 0; accepted < count && attempt < 200L * count; ++attempt) {
    const ParamPoint p = seq.next();
    const SurfacePoint sp = eval_surface_point(pair, p.u1, p.u2, tol);
    if (!well_conditioned(sp)) continue;
    try {
      central_stencil(surface, p, h);
    } catch (const DomainError&) {
      continue;
    }
    fn(p, sp, surface);
    ++accepted;
  }
  return accepted;
}

}  // namespace

SurfaceEvaluator cylinder_evaluator() {
  return [](double u1, double u2) {
    const CylinderFrame fr = cylinder_frame(u1, u2);
    return SurfaceSample{fr.X, fr.N, true};
  };
}

SurfaceEvaluator family_evaluator(const ProfilePair& pair, const MaskTolerances& tol) {
  return [pair, tol](double u1, double u2) {
    const SurfacePoint sp = eval_surface_point(pair, u1, u2, tol);
    return SurfaceSample{sp.position, sp.normal, sp.flags.ok()};
  };
}

FundamentalForms fd_first_fundamental(const SurfaceEvaluator& surface, ParamPoint at, double h) {
  const Stencil s = central_stencil(surface, at, h);
  FundamentalForms ff;
  ff.at = at;
  ff.h = h;
  ff.E = s.X1.squaredNorm();
  ff.F = s.X1.dot(s.X2);
  ff.G = s.X2.squaredNorm();
  ff.e = ff.f = ff.g2 = kNaN;
  return ff;
}

const SignCalibration& curvature_sign_calibration() {
  static const SignCalibration cal = [] {
    const ShapeOperatorFD raw = shape_operator_with_sign(cylinder_evaluator(), {0.0, 0.0}, 1e-3, 1);
    SignCalibration c;
    c.sign = raw.k2 > 0.0 ? -1 : 1;
    c.k1 = c.sign * raw.k1;
    c.k2 = c.sign * raw.k2;
    if (std::abs(c.k1) > 1e-6 || std::abs(c.k2 + 1.0) > 1e-6) {
      throw std::logic_error("cylinder curvature calibration failed");
    }
    return c;
  }();
  return cal;
}

ShapeOperatorFD fd_shape_operator(const SurfaceEvaluator& surface, ParamPoint at, double h) {
  return shape_operator_with_sign(surface, at, h, curvature_sign_calibration().sign);
}

LengthProbe length_probe(const ProfilePair& pair, ParamPoint p0, std::array<double, 2> direction,
                         std::vector<double> epsilons, double delta) {
  const FamilyParams& params = pair.params();
  if (!params.is_singular()) {
    throw ValidationError("length probes need a family with planar ends (no singular points)");
  }
  const ProfileValues v0 = pair(p0.u1, p0.u2);
  const double M0 = 2.0 * params.b() + params.c() * (v0.f - v0.g);
  if (!(std::abs(M0) <= 1e-9)) throw ValidationError("probe target is not a singular point");
  const double norm = std::hypot(direction[0], direction[1]);
  if (!(norm > 0.0)) throw ValidationError("probe direction must be non-zero");
  direction = {direction[0] / norm, direction[1] / norm};
  if (epsilons.size() < 2) throw ValidationError("length probe needs at least two epsilons");
  for (size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || !(epsilons[i] < delta) ||
        (i > 0 && !(epsilons[i] < epsilons[i - 1]))) {
      throw ValidationError("epsilons must be positive, below delta and decreasing");
    }
  }

  LengthProbe probe;
  probe.p0 = p0;
  probe.direction = direction;
  probe.delta = delta;
  probe.epsilons = epsilons;
  probe.c_expected = 4.0 / std::abs(params.c());

  auto psi_along = [&](double t) {
    return eval_surface_point(pair, p0.u1 + t * direction[0], p0.u2 + t * direction[1]).psi;
  };
  for (double eps : epsilons) probe.lengths.push_back(adaptive_simpson(psi_along, eps, delta).value);

  probe.increasing = true;
  for (size_t i = 1; i < probe.lengths.size(); ++i) {
    probe.increasing = probe.increasing && probe.lengths[i] > probe.lengths[i - 1];
  }
  const size_t n = probe.lengths.size();
  const double ea = epsilons[n - 1], eb = epsilons[n - 2];
  probe.c_fit = (probe.lengths[n - 1] - probe.lengths[n - 2]) / (1.0 / ea - 1.0 / eb);
  probe.halving_ratio = probe.lengths[n - 1] / probe.lengths[n - 2];
  probe.passed =
      probe.increasing && std::abs(probe.c_fit - probe.c_expected) <= 0.2 * probe.c_expected;
  return probe;
}

std::optional<ProbeSetup> default_probe(const FamilyParams& params) {
  const auto points = singular_points(params, {-8.0, 8.0, -8.0, 8.0});
  if (points.empty()) return std::nullopt;
  const auto nearest = std::min_element(points.begin(), points.end(), [](auto& a, auto& b) {
    return std::hypot(a.u1, a.u2) < std::hypot(b.u1, b.u2);
  });
  std::array<double, 2> dir{1.0, 0.0};
  switch (params.tag()) {
    case CaseTag::PosC: dir = {0.0, -1.0}; break;
    case CaseTag::LowC: dir = {0.0, 1.0}; break;
    case CaseTag::MidC:
    case CaseTag::NegOne: dir = {1.0, 0.0}; break;
  }
  return ProbeSetup{*nearest, dir};
}

BubbleCount count_bubbles(const ProfilePair& pair, const GridSpec& grid) {
  const SampleTable table = sample_grid(pair, grid);
  if (table.masked_count() > 0) throw DomainError("bubble grid contains masked vertices");
  BubbleCount out;
  for (int i = 1; i + 1 < grid.n1(); ++i) {
    for (int j = 1; j + 1 < grid.n2(); ++j) {
      const double k = table.at(i, j).K;
      bool is_max = true, is_min = true;
      for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const double other = table.at(i + di, j + dj).K;
          is_max = is_max && k > other;
          is_min = is_min && k < other;
        }
      }
      out.n_max += is_max;
      out.n_min += is_min;
    }
  }
  return out;
}

bool IdentityReport::passed() const {
  return points > 0 && std::all_of(checks.begin(), checks.end(), [](auto& c) { return c.passed; });
}

const CheckResult* IdentityReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

IdentityReport identity_suite(const ProfilePair& pair, int points, ParamRect window,
                              const MaskTolerances& tol) {
  const FamilyParams& params = pair.params();
  const double b = params.b();
  IdentityReport rep;
  rep.window = window;
  rep.sequence_offset = kHaltonOffset;

  Tracker first_integral_t("first_integral", 1e-9);
  Tracker s_identity("S_identity", 1e-10);
  Tracker mean("mean_curvature", 1e-10);
  Tracker skew("skew_curvature", 1e-10);
  Tracker sphere("sphere_congruence", 1e-10);
  Tracker unit("unit_normal", 1e-12);
  Tracker ribaucour("general_ribaucour", 1e-10);
  Tracker cmc("cmc_mean_curvature", 1e-14);

  HaltonSequence seq(window);
  for (long attempt = 0; rep.points < points && attempt < 100L * points; ++attempt) {
    const ParamPoint p = seq.next();
    const SurfacePoint sp = eval_surface_point(pair, p.u1, p.u2, tol);
    if (!sp.flags.ok()) {
      ++rep.skipped_masked;
      continue;
    }
    ++rep.points;
    const ProfileValues v = pair(p.u1, p.u2);

    const double E = first_integral(pair, p.u1, p.u2);
    first_integral_t.add(std::abs(E) / first_integral_scale(pair, p.u1, p.u2), E, p);

    const RibaucourEvaluation gr = eval_via_general_ribaucour(pair, p.u1, p.u2, tol);
    const double fgM = sp.fg_sum * sp.M;
    const double s_gap = gr.inter.S - fgM;
    s_identity.add(rel(std::abs(s_gap), {gr.inter.S, fgM}), s_gap, p);

    const double lam = std::max(std::abs(sp.lambda1), std::abs(sp.lambda2));
    const double h_gap = sp.H - 0.5 * (sp.lambda1 + sp.lambda2);
    mean.add(rel(std::abs(h_gap), {sp.H, lam}), h_gap, p);
    const double k_gap = sp.Hskew - (sp.lambda1 - sp.lambda2);
    skew.add(rel(std::abs(k_gap), {sp.Hskew, lam}), k_gap, p);

    const double n_scale =
        4.0 * v.g * v.g * gr.inter.S / (sp.M * sp.M * sp.fg_sum * sp.fg_sum);
    const double n_gap = sp.normal.norm() - 1.0;
    unit.add(rel(std::abs(n_gap), {n_scale}), n_gap, p);

    const double r_gap = std::max({(gr.position - sp.position).cwiseAbs().maxCoeff(),
                                   std::abs(gr.lambda1 - sp.lambda1),
                                   std::abs(gr.lambda2 - sp.lambda2)});
    ribaucour.add(rel(r_gap, {sp.position.cwiseAbs().maxCoeff(), lam}), r_gap, p);

    if (std::abs(v.g) >= tol.domain) {
      const double h = sp.fg_sum / v.g;
      const CylinderFrame fr = cylinder_frame(p.u1, p.u2);
      const Vec3 lhs = fr.X + h * fr.N;
      const Vec3 rhs = sp.position + h * sp.normal;
      const double gap = (lhs - rhs).cwiseAbs().maxCoeff();
      sphere.add(rel(gap, {lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()}), gap, p);
    }
    if (b == 0.0) {
      const double gap = std::abs(sp.H + 0.5);
      cmc.add(gap, gap, p);
    }
  }

  rep.checks = {first_integral_t.finish(), s_identity.finish(), mean.finish(), skew.finish(),
                sphere.finish(), unit.finish(), ribaucour.finish()};
  if (b == 0.0) rep.checks.push_back(cmc.finish());
  return rep;
}

bool FdAudit::passed() const {
  return points > 0 && std::all_of(metrics.begin(), metrics.end(), [](auto& m) { return m.passed; });
}

FdAudit conformality_audit(const ProfilePair& pair, ParamRect window, int points,
                           const MaskTolerances& tol) {
  FdAudit audit;
  audit.name = "conformality";
  audit.window = window;
  audit.sequence_offset = kHaltonOffset;
  MetricAccumulator e_minus_g("E_minus_G", 1e-4);
  MetricAccumulator f_over_e("F_over_E", 1e-4);
  MetricAccumulator e_vs_psi("E_vs_psi2", 1e-4);
  MetricAccumulator tangency("normal_tangency", 1e-4);

  audit.points = for_audit_points(
      pair, window, points, tol, audit.h_coarse,
      [&](ParamPoint p, const SurfacePoint& sp, const SurfaceEvaluator& surface) {
        double gaps[2][4];
        const double steps[2] = {audit.h_coarse, audit.h_fine};
        for (int k = 0; k < 2; ++k) {
          const Stencil s = central_stencil(surface, p, steps[k]);
          const double E = s.X1.squaredNorm();
          const double F = s.X1.dot(s.X2);
          const double G = s.X2.squaredNorm();
          const double psi2 = sp.psi * sp.psi;
          gaps[k][0] = std::abs(E - G) / std::max(E, G);
          gaps[k][1] = std::abs(F) / E;
          gaps[k][2] = std::abs(E - psi2) / psi2;
          gaps[k][3] = std::max(std::abs(sp.normal.dot(s.X1)) / std::sqrt(E),
                                std::abs(sp.normal.dot(s.X2)) / std::sqrt(G));
        }
        e_minus_g.add(gaps[0][0], gaps[1][0]);
        f_over_e.add(gaps[0][1], gaps[1][1]);
        e_vs_psi.add(gaps[0][2], gaps[1][2]);
        tangency.add(gaps[0][3], gaps[1][3]);
      });
  audit.metrics = {e_minus_g.finish(), f_over_e.finish(), e_vs_psi.finish(), tangency.finish()};
  return audit;
}

FdAudit curvature_audit(const ProfilePair& pair, ParamRect window, int points,
                        const MaskTolerances& tol) {
  FdAudit audit;
  audit.name = "curvature";
  audit.window = window;
  audit.sequence_offset = kHaltonOffset;
  MetricAccumulator lambda1("lambda1", 1e-3);
  MetricAccumulator lambda2("lambda2", 1e-3);
  MetricAccumulator offdiag("offdiag", 1e-5);

  audit.points = for_audit_points(
      pair, window, points, tol, audit.h_coarse,
      [&](ParamPoint p, const SurfacePoint& sp, const SurfaceEvaluator& surface) {
        const ShapeOperatorFD a = fd_shape_operator(surface, p, audit.h_coarse);
        const ShapeOperatorFD b = fd_shape_operator(surface, p, audit.h_fine);
        lambda1.add(std::abs(a.k1 - sp.lambda1), std::abs(b.k1 - sp.lambda1));
        lambda2.add(std::abs(a.k2 - sp.lambda2), std::abs(b.k2 - sp.lambda2));
        offdiag.add(a.offdiag, b.offdiag);
      });
  audit.metrics = {lambda1.finish(), lambda2.finish(), offdiag.finish()};
  return audit;
}

namespace {

CalapsoCheck run_residual_check(const std::string& name, const CalapsoField& field,
                                std::optional<ParamRect> patch, const std::vector<double>& h,
                                double low, double high) {
  CalapsoCheck check;
  check.field = name;
  check.patch = patch;
  check.order_low = low;
  check.order_high = high;
  if (!patch) {
    check.error = "no admissible patch in the scan window";
    return check;
  }
  try {
    const ConvergenceResult conv = residual_convergence(field, *patch, h);
    check.h = conv.h;
    check.max_abs = conv.max_abs;
    check.order = conv.order;
    check.passed = check.order >= low && check.order <= high;
  } catch (const std::exception& ex) {
    check.error = ex.what();
  }
  return check;
}

}  // namespace

CalapsoCheck check_solution(const std::string& name, const CalapsoField& field,
                            std::optional<ParamRect> patch, const std::vector<double>& h) {
  return run_residual_check(name, field, patch, h, 1.7, 2.3);
}

CalapsoCheck check_non_solution(const std::string& name, const CalapsoField& field,
                                std::optional<ParamRect> patch, const std::vector<double>& h) {
  return run_residual_check(name, field, patch, h, -std::numeric_limits<double>::infinity(), 0.5);
}

bool VerifyReport::passed() const { return failures().empty(); }

std::vector<std::string> VerifyReport::failures() const {
  std::vector<std::string> out;
  if (identities.points == 0) out.push_back("identity:no_unmasked_points");
  for (const auto& c : identities.checks) {
    if (!c.passed) out.push_back("identity:" + c.name);
  }
  for (const FdAudit* audit : {&conformality, &curvature}) {
    if (audit->points == 0) out.push_back(audit->name + ":no_admissible_points");
    for (const auto& m : audit->metrics) {
      if (!m.passed) out.push_back(audit->name + ":" + m.name);
    }
  }
  for (const auto& c : calapso) {
    if (!c.passed) out.push_back("calapso:" + c.field);
  }
  if (!probe_error.empty() || (probe && !probe->passed)) out.push_back("length_probe");
  return out;
}

VerifyReport run_verification(const ProfilePair& pair, const VerifyOptions& options) {
  const FamilyParams& params = pair.params();
  VerifyReport rep{identity_suite(pair, 1000, {-5.0, 5.0, -5.0, 5.0}, options.tol),
                   conformality_audit(pair, options.audit_window, 100, options.tol),
                   curvature_audit(pair, options.audit_window, 100, options.tol),
                   curvature_sign_calibration(),
                   {},
                   std::nullopt,
                   {},
                   std::nullopt};

  const CalapsoField omega = make_field(pair, FieldKind::Omega, options.tol);
  const CalapsoField capital = make_field(pair, FieldKind::CapitalOmega, options.tol);
  const auto omega_patch = options.omega_patch
                               ? options.omega_patch
                               : select_patch(omega, pair, options.patch_window, 1.0, options.tol);
  const auto capital_patch =
      options.capital_omega_patch
          ? options.capital_omega_patch
          : select_patch(capital, pair, options.patch_window, 1.0, options.tol);
  rep.calapso.push_back(check_solution("omega", omega, omega_patch));
  rep.calapso.push_back(check_solution("Omega", capital, capital_patch));
  rep.calapso.push_back(check_non_solution("omega_times_2", omega.scaled(2.0), omega_patch));
  rep.calapso.push_back(check_non_solution("Omega_times_2", capital.scaled(2.0), capital_patch));

  if (params.is_singular()) {
    const auto setup = options.probe ? options.probe : default_probe(params);
    if (!setup) {
      rep.probe_error = "no singular point found for the probe";
    } else {
      try {
        rep.probe = length_probe(pair, setup->p0, setup->direction);
      } catch (const std::exception& ex) {
        rep.probe_error = ex.what();
      }
    }
  }

  const GeometryClass geo = classify_geometry(params);
  const auto period = u2_period(params);
  if (period && geo.bubbles) {
    const double span = *period * static_cast<double>(*geo.end_index);
    constexpr int n2 = 200;
    BubbleReport bubbles{GridSpec({-2.0, 2.0, 0.0, span - span / n2}, 201, n2, options.tol),
                         geo.bubbles, std::nullopt, {}};
    try {
      bubbles.count = count_bubbles(pair, bubbles.grid);
    } catch (const std::exception& ex) {
      bubbles.error = ex.what();
    }
    rep.bubbles = bubbles;
  }
  return rep;
}

}  // namespace isothermic
