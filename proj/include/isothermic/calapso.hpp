#pragma once

// Scalar solutions of the Calapso equation
//
//     (w_12 / w)_11 + (w_12 / w)_22 + (w^2)_12 = 0
//
// induced by a family member, and a finite-difference residual used to
// audit them.

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "isothermic/profile.hpp"
#include "isothermic/surface.hpp"

namespace isothermic {

enum class FieldKind { Omega, CapitalOmega, Custom };

std::string_view to_string(FieldKind kind);

enum class SurfaceCurvature { Mean, Skew };

class CalapsoField {
 public:
  // fn must return NaN at points where the field is undefined.
  using Fn = std::function<double(double, double)>;

  static CalapsoField custom(Fn fn);

  FieldKind kind() const noexcept { return kind_; }
  int epsilon() const noexcept { return epsilon_; }
  const std::optional<FamilyParams>& params() const noexcept { return params_; }

  double operator()(double u1, double u2) const { return fn_(u1, u2); }

  // factor * field, always reported as Custom.
  CalapsoField scaled(double factor) const;

 private:
  friend CalapsoField make_field(const ProfilePair&, FieldKind, const MaskTolerances&);
  friend CalapsoField field_from_surface(const ProfilePair&, SurfaceCurvature,
                                         const MaskTolerances&);

  CalapsoField(FieldKind kind, Fn fn, std::optional<FamilyParams> params, int epsilon)
      : kind_(kind), fn_(std::move(fn)), params_(std::move(params)), epsilon_(epsilon) {}

  FieldKind kind_;
  Fn fn_;
  std::optional<FamilyParams> params_;
  int epsilon_;
};

// omega = e sqrt2 (M + 2 c g) / (2 M), Omega = e sqrt2 (f - g) / (2 (f + g)),
// e = sign(c). Throws ValidationError for FieldKind::Custom.
CalapsoField make_field(const ProfilePair& pair, FieldKind kind, const MaskTolerances& tol = {});

// sqrt2 psi H for Mean and sqrt2 psi Hskew / 2 for Skew; both equal the
// closed-form fields up to a global sign.
CalapsoField field_from_surface(const ProfilePair& pair, SurfaceCurvature which,
                                const MaskTolerances& tol = {});

struct ResidualReport {
  ParamRect patch;
  double h = 0.0;
  int n1 = 0;
  int n2 = 0;
  std::vector<double> residual;  // n1 * n2, u1-major
  double max_abs = 0.0;
  double l2 = 0.0;  // sqrt(h^2 sum r^2)
};

// Report nodes are u = min + i h for i = 0 .. round(width / h); the field is
// sampled two cells beyond them on every side. Throws DomainError naming the
// first point where the field is undefined or |w| < 1e-12.
ResidualReport calapso_residual(const CalapsoField& field, const ParamRect& patch, double h);

struct ConvergenceResult {
  std::vector<double> h;
  std::vector<double> max_abs;
  double order = 0.0;  // +inf when every residual is exactly zero
};

ConvergenceResult residual_convergence(const CalapsoField& field, const ParamRect& patch,
                                       const std::vector<double>& h_list);

double residual_convergence_order(const CalapsoField& field, const ParamRect& patch,
                                  const std::vector<double>& h_list);

// Slides a side x side square over the window in steps of side/4 and returns
// the one whose padded neighbourhood maximizes min(|w|, |M|, |f+g|), subject
// to |M|, |f+g| > 10 tol and |w| >= 1e-3 everywhere on a 21 x 21 sample.
std::optional<ParamRect> select_patch(const CalapsoField& field, const ProfilePair& pair,
                                      const ParamRect& window, double side = 1.0,
                                      const MaskTolerances& tol = {});

}  // namespace isothermic
