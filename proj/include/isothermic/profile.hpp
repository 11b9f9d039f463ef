#pragma once

// Surface-family parameters and the closed-form profile pair (f, g).
//
// Every member of the family is fixed by real constants b, c (c != 0) and a
// solution pair of
//
//     f'' - c f = b,        g'' + (1 + c) g = b,
//
// tied together by the first integral
//
//     E = f'^2 - c f^2 - 2 b f + g'^2 + (1 + c) g^2 - 2 b g = 0.
//
// Coefficients can be given in the general four-constant form, the
// normalized form (rigid motions removed) or the one-parameter form whose
// surfaces have planar ends.

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

namespace isothermic {

inline constexpr double kConstraintTolerance = 1e-9;

enum class CaseTag {
  PosC,    // c > 0
  MidC,    // -1 < c < 0
  NegOne,  // c == -1
  LowC,    // c < -1
};

std::string_view to_string(CaseTag tag);

// Throws ValidationError for c == 0 ("degenerate transform") or non-finite c.
CaseTag classify_case(double c);

// f = a1 C(sqrt|c| u1) + b1 S(sqrt|c| u1) - b/c, g likewise in u2 with
// sqrt|1+c|; for c == -1, g = b/2 u2^2 + a2 u2 + b2.
struct GeneralCoeffs {
  double a1 = 0.0;
  double b1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
};

// Normalized form. A1, B1 are the squared amplitudes. For c == -1 only A1 is
// an amplitude; g keeps its linear and constant terms a2, b2.
struct NormalizedCoeffs {
  double A1 = 0.0;
  double B1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
};

// Planar-end family. b is forced (-1 for c > 0, +1 for c < -1, epsilon1 for
// -1 <= c < 0); epsilon1 is ignored outside -1 <= c < 0.
struct SingularCoeffs {
  int epsilon1 = 1;
};

using CoeffSpec = std::variant<GeneralCoeffs, NormalizedCoeffs, SingularCoeffs>;

struct ParamPoint {
  double u1 = 0.0;
  double u2 = 0.0;
};

struct ParamRect {
  double u1_min = 0.0;
  double u1_max = 0.0;
  double u2_min = 0.0;
  double u2_max = 0.0;

  bool contains(ParamPoint p) const noexcept {
    return p.u1 >= u1_min && p.u1 <= u1_max && p.u2 >= u2_min && p.u2 <= u2_max;
  }
  double width() const noexcept { return u1_max - u1_min; }
  double height() const noexcept { return u2_max - u2_min; }
};

// value(x) = p C(k x) + q S(k x) + r with (C, S) = (cosh, sinh) or (cos, sin),
// or p x^2 + q x + r.
class Profile1D {
 public:
  enum class Kind { Hyperbolic, Trigonometric, Quadratic };

  struct Jet {
    double value;
    double d1;
    double d2;
  };

  Profile1D(Kind kind, double p, double q, double k, double r)
      : kind_(kind), p_(p), q_(q), k_(k), r_(r) {}

  Jet operator()(double x) const noexcept;

  Kind kind() const noexcept { return kind_; }
  double frequency() const noexcept { return k_; }
  double offset() const noexcept { return r_; }

 private:
  Kind kind_;
  double p_;
  double q_;
  double k_;
  double r_;
};

enum class ConstraintPolicy {
  Enforce,  // build_family throws ConstraintError on violation
  Report,   // violation recorded in constraint_residual() only
};

class FamilyParams {
 public:
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  CaseTag tag() const noexcept { return tag_; }

  // Coefficients as supplied by the caller.
  const CoeffSpec& coeffs() const noexcept { return coeffs_; }
  // Equivalent general-form coefficients used for evaluation.
  const GeneralCoeffs& expanded() const noexcept { return expanded_; }

  bool is_singular() const noexcept {
    return std::holds_alternative<SingularCoeffs>(coeffs_);
  }
  // +-1 for the planar-end family when -1 <= c < 0, otherwise 0.
  int epsilon1() const noexcept { return epsilon1_; }

  // Relation LHS - RHS; equals the (constant) first integral E.
  double constraint_residual() const noexcept { return residual_; }
  // Largest term of the relation, the scale tol_constraint is relative to.
  double constraint_scale() const noexcept { return scale_; }
  bool satisfies_constraint() const noexcept;

 private:
  friend FamilyParams build_family(double b, double c, const CoeffSpec& coeffs,
                                   ConstraintPolicy policy);
  FamilyParams() = default;

  double b_ = 0.0;
  double c_ = 1.0;
  CaseTag tag_ = CaseTag::PosC;
  CoeffSpec coeffs_;
  GeneralCoeffs expanded_;
  int epsilon1_ = 0;
  double residual_ = 0.0;
  double scale_ = 0.0;
};

// Validates and normalizes a family description. For SingularCoeffs the
// supplied b is replaced by the forced value.
FamilyParams build_family(double b, double c, const CoeffSpec& coeffs,
                          ConstraintPolicy policy = ConstraintPolicy::Enforce);

struct ProfileValues {
  double f;
  double df;
  double d2f;
  double g;
  double dg;
  double d2g;
};

class ProfilePair {
 public:
  explicit ProfilePair(FamilyParams params);

  const FamilyParams& params() const noexcept { return params_; }
  const Profile1D& f_profile() const noexcept { return f_; }
  const Profile1D& g_profile() const noexcept { return g_; }

  ProfileValues operator()(double u1, double u2) const noexcept;

 private:
  FamilyParams params_;
  Profile1D f_;
  Profile1D g_;
};

inline ProfileValues eval_profiles(const ProfilePair& pair, double u1, double u2) {
  return pair(u1, u2);
}

double first_integral(const ProfilePair& pair, double u1, double u2);

// max(1, |individual terms of E|) at (u1, u2); E is audited relative to it.
double first_integral_scale(const ProfilePair& pair, double u1, double u2);

// Zeros of M = 2b + c(f - g) inside the closed window, sorted by (u1, u2).
// Empty unless params is the planar-end family.
std::vector<ParamPoint> singular_points(const FamilyParams& params, const ParamRect& window);

struct RationalApprox {
  double value = 0.0;
  bool rational = false;
  long numerator = 0;
  long denominator = 1;
};

// Continued-fraction search for p/q with q <= max_denominator and
// |x - p/q| <= tol * max(1, |x|).
RationalApprox rational_approximation(double x, long max_denominator = 64, double tol = 1e-9);

enum class BubbleSide { Inside, Outside, Nested, None };

std::string_view to_string(BubbleSide side);

struct GeometryClass {
  CaseTag tag;
  RationalApprox sqrt_abs_one_plus_c;
  std::optional<RationalApprox> sqrt_neg_c;  // c < 0 only
  std::optional<long> bubbles;               // n when sqrt|1+c| = n/m, n > 0
  std::optional<long> end_index;             // m
  BubbleSide side;
  bool cmc;
  bool planar_ends;
};

GeometryClass classify_geometry(const FamilyParams& params);

// Period of f in u1 (c < 0) and of g in u2 (c > -1).
std::optional<double> u1_period(const FamilyParams& params);
std::optional<double> u2_period(const FamilyParams& params);

}  // namespace isothermic
