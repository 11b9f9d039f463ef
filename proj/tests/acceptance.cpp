// Acceptance run: one line per criterion, exit status = number of failures
// outside the known-red list.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "isothermic/catalog.hpp"
#include "isothermic/cli.hpp"
#include "isothermic/export.hpp"
#include "isothermic/sequence.hpp"
#include "isothermic/verify.hpp"

using namespace isothermic;

namespace {

constexpr double pi = std::numbers::pi;

constexpr int kPoints = 1000;
constexpr double kFirstIntegralTol = 1e-9;
constexpr double kIdentityTol = 1e-10;
constexpr double kFdBound = 1e-4;
constexpr double kCurvatureBound = 1e-3;
constexpr double kCalibrationTol = 1e-6;
constexpr double kCmcTol = 1e-14;
constexpr double kExactTol = 1e-12;
constexpr double kProbeRelTol = 0.2;
constexpr long kBubblesPerPeriod = 2;

// Counting strict maxima of K finds four per period for "pos-inside": two on
// the symmetry axis u1 = 0 and two at u1 = +-0.651 (all with negative definite
// Hessians), so the two-bubble count is not reproduced there.
const std::set<int> kKnownRed = {8};

struct Line {
  int id;
  std::string title;
  bool passed;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct FamilyRun {
  const CatalogEntry* entry;
  ProfilePair pair;
  VerifyReport report;
};

std::vector<FamilyRun> run_catalog() {
  std::vector<FamilyRun> out;
  for (const auto& e : catalog()) {
    ProfilePair pair(build_family(e));
    VerifyReport r = run_verification(pair, verify_options(e));
    out.push_back({&e, std::move(pair), std::move(r)});
  }
  return out;
}

Line first_integral(const std::vector<FamilyRun>& runs) {
  double worst_scaled = 0.0, worst_abs = 0.0;
  std::string failing;
  for (const auto& r : runs) {
    const CheckResult* c = r.report.identities.find("first_integral");
    worst_scaled = std::max(worst_scaled, c->value);
    worst_abs = std::max(worst_abs, c->max_abs);
    if (c->value > kFirstIntegralTol) failing += " " + r.entry->key;
  }
  return {1, "constraint / first integral", failing.empty(),
          std::to_string(runs.size()) + " families, " + std::to_string(kPoints) +
              " points each, max |E|/scale = " + num(worst_scaled) + " (max |E| = " +
              num(worst_abs) + ") <= " + num(kFirstIntegralTol) + failing};
}

Line identities(const std::vector<FamilyRun>& runs) {
  const char* names[] = {"S_identity", "mean_curvature", "skew_curvature", "sphere_congruence",
                         "general_ribaucour", "unit_normal"};
  double worst = 0.0;
  int min_points = kPoints;
  std::string failing;
  for (const auto& r : runs) {
    const IdentityReport& id = r.report.identities;
    min_points = std::min(min_points, id.points - id.skipped_masked);
    for (const char* n : names) {
      const CheckResult* c = id.find(n);
      worst = std::max(worst, c->value);
      if (!c->passed || c->value > kIdentityTol) failing += " " + r.entry->key + ":" + n;
    }
  }
  return {2, "identity suite", failing.empty() && min_points > 0,
          "worst relative gap " + num(worst) + " <= " + num(kIdentityTol) +
              ", fewest unmasked points " + std::to_string(min_points) + failing};
}

std::string audit_summary(const std::vector<FamilyRun>& runs, FdAudit VerifyReport::*which,
                          std::string& failing) {
  double worst = 0.0, rmin = 1e300, rmax = 0.0;
  for (const auto& r : runs) {
    const FdAudit& a = r.report.*which;
    for (const auto& m : a.metrics) {
      worst = std::max(worst, m.gap_coarse / m.bound);
      if (m.gap_coarse > 1e-12) {
        rmin = std::min(rmin, m.ratio);
        rmax = std::max(rmax, m.ratio);
      }
      if (!m.passed) failing += " " + r.entry->key + ":" + m.name;
    }
    if (a.points == 0) failing += " " + r.entry->key + ":no-points";
  }
  return "worst gap/bound " + num(worst) + " at h = 1e-3, h-halving ratio in [" +
         num(rmin) + ", " + num(rmax) + "]";
}

Line conformality(const std::vector<FamilyRun>& runs) {
  std::string failing;
  const std::string s = audit_summary(runs, &VerifyReport::conformality, failing);
  return {3, "isothermic (FD first fundamental form)", failing.empty(),
          "100 points per family, bound " + num(kFdBound) + ", " + s + failing};
}

Line curvature(const std::vector<FamilyRun>& runs) {
  std::string failing;
  const std::string s = audit_summary(runs, &VerifyReport::curvature, failing);
  const SignCalibration& cal = curvature_sign_calibration();
  const double cal_err = std::max(std::abs(cal.k1), std::abs(cal.k2 + 1.0));
  if (cal_err > kCalibrationTol) failing += " cylinder";
  return {4, "curvature audit (FD shape operator)", failing.empty(),
          "principal curvature bound " + num(kCurvatureBound) + ", " + s +
              ", cylinder (0, -1) error " + num(cal_err) + failing};
}

Line calapso(const std::vector<FamilyRun>& runs) {
  double omin = 1e300, omax = 0.0, neg = 0.0;
  int solutions = 0;
  std::string failing;
  for (const auto& r : runs) {
    for (const auto& c : r.report.calapso) {
      const bool control = c.field.find("_times_2") != std::string::npos;
      if (!c.passed) failing += " " + r.entry->key + ":" + c.field;
      if (!c.error.empty()) continue;
      if (control) {
        neg = std::max(neg, c.order);
      } else {
        ++solutions;
        omin = std::min(omin, c.order);
        omax = std::max(omax, c.order);
      }
    }
  }
  return {5, "Calapso residual convergence", failing.empty(),
          std::to_string(solutions) + " fields, order in [" + num(omin) + ", " + num(omax) +
              "] within [1.7, 2.3]; negative controls order <= " + num(neg) + " (<= 0.5)" +
              failing};
}

Line mean_curvature() {
  const FamilyParams families[] = {
      build_family(0.0, 3.0, NormalizedCoeffs{4.0, 3.0}),
      build_family(0.0, 3.0, NormalizedCoeffs{1.0, 0.75}),
      build_family(0.0, -5.0, NormalizedCoeffs{4.0, 5.0}),
  };
  double worst = 0.0;
  for (const auto& params : families) {
    const ProfilePair pair(params);
    HaltonSequence seq({-5.0, 5.0, -5.0, 5.0});
    for (int k = 0; k < kPoints; ++k) {
      const ParamPoint u = seq.next();
      const SurfacePoint p = eval_surface_point(pair, u.u1, u.u2);
      if (p.flags.ok()) worst = std::max(worst, std::abs(p.H + 0.5));
    }
  }
  const ProfilePair ex(build_family(*find_preset("pos-inside")));
  const double H00 = eval_surface_point(ex, 0.0, 0.0).H;
  const double exact = -(13.0 + 8.0 * std::sqrt(6.0)) / 10.0;
  const double err = std::abs(H00 - exact);
  return {6, "mean curvature", worst <= kCmcTol && err <= kExactTol,
          "b = 0: max |H + 1/2| = " + num(worst) + " <= " + num(kCmcTol) +
              "; H(0,0) error " + num(err) + " <= " + num(kExactTol)};
}

Line singular(const std::vector<FamilyRun>& runs) {
  const FamilyParams planar = build_family(*find_preset("pos-planar"));
  const ParamRect window{-1.0, 1.0, -2.0 * pi, 2.0 * pi};
  const auto pts = singular_points(planar, window);
  std::vector<ParamPoint> expected;
  for (int k = -3; k <= 3; ++k) {
    const ParamPoint p{0.0, (4 * k + 1) * pi / 4.0};
    if (window.contains(p)) expected.push_back(p);
  }
  double lattice_err = pts.size() == expected.size() ? 0.0 : INFINITY;
  for (size_t i = 0; i < std::min(pts.size(), expected.size()); ++i) {
    lattice_err = std::max({lattice_err, std::abs(pts[i].u1 - expected[i].u1),
                            std::abs(pts[i].u2 - expected[i].u2)});
  }
  std::string probes;
  bool probes_ok = true;
  int n = 0;
  for (const auto& r : runs) {
    if (!r.pair.params().is_singular()) continue;
    ++n;
    const auto& p = r.report.probe;
    const bool ok = p && p->increasing &&
                    std::abs(p->c_fit - p->c_expected) <= kProbeRelTol * p->c_expected;
    probes_ok = probes_ok && ok;
    probes += " " + r.entry->key + (p ? " " + num(p->c_fit) + "/" + num(p->c_expected) : " -");
  }
  return {7, "singular points and planar ends", lattice_err <= kExactTol && probes_ok && n > 0,
          std::to_string(pts.size()) + " lattice points, error " + num(lattice_err) +
              "; L(eps) eps -> c_fit/(4/|c|):" + probes};
}

Line bubbles() {
  bool ok = true;
  std::string detail;
  for (const char* key : {"pos-inside", "pos-outside"}) {
    const FamilyParams params = build_family(*find_preset(key));
    const double span = *u2_period(params);
    const GridSpec grid({-2.0, 2.0, 0.0, span - span / 200.0}, 201, 200);
    const BubbleCount c = count_bubbles(ProfilePair(params), grid);
    ok = ok && c.n_max == kBubblesPerPeriod;
    detail += std::string(detail.empty() ? "" : ", ") + key + " n_max = " + std::to_string(c.n_max);
  }
  return {8, "bubble counts", ok,
          detail + " per u2-period (expected " + std::to_string(kBubblesPerPeriod) + ")"};
}

Line determinism() {
  const std::vector<std::string> args = {"verify", "--preset", "pos-inside", "--json"};
  std::ostringstream a, b, ea, eb;
  const int ca = run_cli(args, a, ea);
  const int cb = run_cli(args, b, eb);
  const bool json_same = ca == cb && a.str() == b.str() && !a.str().empty();

  const ProfilePair pair(build_family(*find_preset("mid-nested")));
  const GridSpec grid({0.0, 2.0 * pi, 0.0, 2.0 * pi}, 97, 89);
  std::ostringstream serial, parallel;
  write_csv(sample_grid(pair, grid, 1), serial);
  write_csv(sample_grid(pair, grid, 8), parallel);
  const bool csv_same = serial.str() == parallel.str();
  return {9, "determinism", json_same && csv_same,
          std::string("verify --json runs ") + (json_same ? "identical" : "differ") + " (" +
              std::to_string(a.str().size()) + " bytes), serial/parallel CSV " +
              (csv_same ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<FamilyRun> runs = run_catalog();
  const Line lines[] = {first_integral(runs), identities(runs), conformality(runs),
                        curvature(runs),      calapso(runs),    mean_curvature(),
                        singular(runs),       bubbles(),        determinism()};
  int unexpected = 0, passed = 0;
  for (const auto& l : lines) {
    const bool known = kKnownRed.count(l.id) > 0;
    std::printf("[%s] %d %s: %s%s\n", l.passed ? "PASS" : "FAIL", l.id, l.title.c_str(),
                l.detail.c_str(), !l.passed && known ? " [known]" : "");
    if (l.passed) ++passed;
    if (!l.passed && !known) ++unexpected;
    if (l.passed && known) {
      std::printf("    note: criterion %d is listed as known-red but passed\n", l.id);
    }
  }
  std::printf("%d/%zu criteria pass, %d unexpected failure(s)\n", passed, std::size(lines),
              unexpected);
  return unexpected;
}
