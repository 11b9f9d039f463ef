#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "isothermic/calapso.hpp"
#include "isothermic/grid.hpp"
#include "isothermic/profile.hpp"
#include "isothermic/surface.hpp"

namespace isothermic {

struct SurfaceSample {
  Vec3 position;
  Vec3 normal;
  bool ok = true;
};

using SurfaceEvaluator = std::function<SurfaceSample(double, double)>;

SurfaceEvaluator cylinder_evaluator();
SurfaceEvaluator family_evaluator(const ProfilePair& pair, const MaskTolerances& tol = {});

// Central differences with step h. The second-form entries are sign-calibrated
// so that e / E and g2 / G are the principal curvatures lambda1, lambda2.
struct FundamentalForms {
  double E = 0.0;
  double F = 0.0;
  double G = 0.0;
  double e = 0.0;
  double f = 0.0;
  double g2 = 0.0;
  ParamPoint at;
  double h = 0.0;
};

// Second-form entries are left NaN. Throws DomainError if the stencil is masked.
FundamentalForms fd_first_fundamental(const SurfaceEvaluator& surface, ParamPoint at, double h);

struct ShapeOperatorFD {
  double k1 = 0.0;
  double k2 = 0.0;
  double offdiag = 0.0;  // |f| / sqrt(E G)
  FundamentalForms forms;
};

ShapeOperatorFD fd_shape_operator(const SurfaceEvaluator& surface, ParamPoint at, double h);

struct SignCalibration {
  int sign = 0;
  double k1 = 0.0;  // cylinder, expected 0
  double k2 = 0.0;  // cylinder, expected -1
};

// Computed on first use and cached for the process; throws std::logic_error if
// the cylinder does not reproduce (0, -1) to 1e-6.
const SignCalibration& curvature_sign_calibration();

struct LengthProbe {
  ParamPoint p0;
  std::array<double, 2> direction{};
  double delta = 0.0;
  std::vector<double> epsilons;
  std::vector<double> lengths;
  double c_fit = 0.0;       // from the two smallest epsilons
  double c_expected = 0.0;  // 4 / |c|
  double halving_ratio = 0.0;
  bool increasing = false;
  bool passed = false;
};

// L(eps) = integral of psi over the segment p0 + t dir, t in [eps, delta].
// Throws ValidationError unless the family has planar ends and M(p0) = 0.
LengthProbe length_probe(const ProfilePair& pair, ParamPoint p0, std::array<double, 2> direction,
                         std::vector<double> epsilons = {4e-3, 2e-3, 1e-3, 5e-4},
                         double delta = 0.1);

struct ProbeSetup {
  ParamPoint p0;
  std::array<double, 2> direction;
};

// Singular point nearest the origin with a direction along which the segment
// stays inside the domain. Empty for families without planar ends.
std::optional<ProbeSetup> default_probe(const FamilyParams& params);

struct BubbleCount {
  int n_max = 0;
  int n_min = 0;
};

// Strict local extrema of K over interior vertices (8 neighbours).
// Throws DomainError if any grid vertex is masked.
BubbleCount count_bubbles(const ProfilePair& pair, const GridSpec& grid);

struct CheckResult {
  std::string name;
  double value = 0.0;    // worst scaled error, compared with tolerance
  double max_abs = 0.0;  // worst unscaled error
  double tolerance = 0.0;
  bool passed = false;
  std::optional<ParamPoint> worst;
};

struct IdentityReport {
  ParamRect window;
  std::uint64_t sequence_offset = 0;
  int points = 0;
  int skipped_masked = 0;
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

IdentityReport identity_suite(const ProfilePair& pair, int points = 1000,
                              ParamRect window = {-5.0, 5.0, -5.0, 5.0},
                              const MaskTolerances& tol = {});

struct AuditMetric {
  std::string name;
  double gap_coarse = 0.0;  // max over points at h_coarse
  double gap_fine = 0.0;
  double ratio = 0.0;
  double bound = 0.0;
  bool passed = false;
};

struct FdAudit {
  std::string name;
  ParamRect window;
  std::uint64_t sequence_offset = 0;
  int points = 0;
  double h_coarse = 1e-3;
  double h_fine = 5e-4;
  std::vector<AuditMetric> metrics;

  bool passed() const;
};

inline constexpr double kRatioLow = 3.5;
inline constexpr double kRatioHigh = 4.5;

// Both audits use well-conditioned points only: |M| >= 0.1, |f + g| >= 0.1 and
// max |lambda_i| <= 10, with an unmasked stencil.
FdAudit conformality_audit(const ProfilePair& pair, ParamRect window, int points = 100,
                           const MaskTolerances& tol = {});
FdAudit curvature_audit(const ProfilePair& pair, ParamRect window, int points = 100,
                        const MaskTolerances& tol = {});

struct CalapsoCheck {
  std::string field;
  std::optional<ParamRect> patch;
  std::vector<double> h;
  std::vector<double> max_abs;
  double order = 0.0;
  double order_low = 0.0;
  double order_high = 0.0;
  bool passed = false;
  std::string error;
};

inline const std::vector<double> kResidualSteps = {0.04, 0.02, 0.01};

// Closed-form fields must converge at order in [1.7, 2.3]; negative controls
// must stay at order <= 0.5.
CalapsoCheck check_solution(const std::string& name, const CalapsoField& field,
                            std::optional<ParamRect> patch,
                            const std::vector<double>& h = kResidualSteps);
CalapsoCheck check_non_solution(const std::string& name, const CalapsoField& field,
                                std::optional<ParamRect> patch,
                                const std::vector<double>& h = kResidualSteps);

struct BubbleReport {
  GridSpec grid;
  std::optional<long> expected;
  std::optional<BubbleCount> count;
  std::string error;
};

struct VerifyOptions {
  ParamRect audit_window{-1.0, 1.0, 0.0, 6.283185307179586};
  ParamRect patch_window{-2.0, 2.0, 0.0, 3.141592653589793};
  std::optional<ParamRect> omega_patch;  // scanned when absent
  std::optional<ParamRect> capital_omega_patch;
  std::optional<ProbeSetup> probe;  // default_probe when absent
  MaskTolerances tol;
};

struct VerifyReport {
  IdentityReport identities;
  FdAudit conformality;
  FdAudit curvature;
  SignCalibration calibration;
  std::vector<CalapsoCheck> calapso;
  std::optional<LengthProbe> probe;
  std::string probe_error;
  std::optional<BubbleReport> bubbles;  // informational, never gates

  bool passed() const;
  // Names of failing checks in report order.
  std::vector<std::string> failures() const;
};

VerifyReport run_verification(const ProfilePair& pair, const VerifyOptions& options);

}  // namespace isothermic
