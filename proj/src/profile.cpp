#include "isothermic/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "isothermic/errors.hpp"

namespace isothermic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double x) { return std::isfinite(x); });
}

struct Relation {
  double residual;
  double scale;
};

// LHS - RHS of the case relation, written as the first integral it encodes.
Relation relation_residual(double b, double c, CaseTag tag, const GeneralCoeffs& k) {
  const double s1 = k.a1 * k.a1 + k.b1 * k.b1;
  const double s2 = k.a2 * k.a2 + k.b2 * k.b2;
  if (tag == CaseTag::NegOne) {
    const double tail = (b + k.b2) * (b + k.b2);
    const double res = s1 + k.a2 * k.a2 + k.b2 * k.b2 - tail;
    return {res, std::max({s1, k.a2 * k.a2, k.b2 * k.b2, tail})};
  }
  const double lhs = b * b / (c * (1.0 + c));
  double f_part = 0.0;
  double g_part = 0.0;
  switch (tag) {
    case CaseTag::PosC:
      f_part = k.a1 * k.a1 - k.b1 * k.b1;
      g_part = s2;
      break;
    case CaseTag::MidC:
      f_part = s1;
      g_part = s2;
      break;
    case CaseTag::LowC:
      f_part = s1;
      g_part = k.a2 * k.a2 - k.b2 * k.b2;
      break;
    case CaseTag::NegOne:
      break;
  }
  const double rhs = c * f_part - (1.0 + c) * g_part;
  return {lhs - rhs, std::max({std::abs(lhs), std::abs(c) * s1, std::abs(1.0 + c) * s2})};
}

[[noreturn]] void positivity_error(const char* what) {
  throw ValidationError(std::string("positivity violation: ") + what);
}

GeneralCoeffs expand_normalized(CaseTag tag, const NormalizedCoeffs& n) {
  if (!finite_all({n.A1, n.B1, n.a2, n.b2})) {
    throw ValidationError("non-finite coefficient");
  }
  switch (tag) {
    case CaseTag::PosC:
      if (!(n.B1 > 0.0)) positivity_error("B1 must be > 0 for c > 0");
      if (n.A1 < 0.0) positivity_error("A1 must be >= 0");
      return {std::sqrt(n.A1), 0.0, 0.0, std::sqrt(n.B1)};
    case CaseTag::MidC:
      if (!(n.A1 > 0.0) || !(n.B1 > 0.0)) positivity_error("A1 and B1 must be > 0 for -1 < c < 0");
      return {0.0, std::sqrt(n.A1), 0.0, std::sqrt(n.B1)};
    case CaseTag::LowC:
      if (!(n.A1 > 0.0)) positivity_error("A1 must be > 0 for c < -1");
      if (n.B1 < 0.0) positivity_error("B1 must be >= 0");
      return {0.0, std::sqrt(n.A1), std::sqrt(n.B1), 0.0};
    case CaseTag::NegOne:
      if (!(n.A1 > 0.0)) positivity_error("A1 must be > 0 for c = -1");
      return {0.0, std::sqrt(n.A1), n.a2, n.b2};
  }
  return {};
}

}  // namespace

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::PosC: return "PosC";
    case CaseTag::MidC: return "MidC";
    case CaseTag::NegOne: return "NegOne";
    case CaseTag::LowC: return "LowC";
  }
  return "?";
}

std::string_view to_string(BubbleSide side) {
  switch (side) {
    case BubbleSide::Inside: return "inside";
    case BubbleSide::Outside: return "outside";
    case BubbleSide::Nested: return "nested";
    case BubbleSide::None: return "none";
  }
  return "?";
}

CaseTag classify_case(double c) {
  if (!std::isfinite(c)) throw ValidationError("non-finite c");
  if (c == 0.0) throw ValidationError("degenerate transform: c = 0");
  if (c > 0.0) return CaseTag::PosC;
  if (c > -1.0) return CaseTag::MidC;
  if (c == -1.0) return CaseTag::NegOne;
  return CaseTag::LowC;
}

Profile1D::Jet Profile1D::operator()(double x) const noexcept {
  switch (kind_) {
    case Kind::Hyperbolic: {
      const double ch = std::cosh(k_ * x);
      const double sh = std::sinh(k_ * x);
      const double core = p_ * ch + q_ * sh;
      return {core + r_, k_ * (p_ * sh + q_ * ch), k_ * k_ * core};
    }
    case Kind::Trigonometric: {
      const double cs = std::cos(k_ * x);
      const double sn = std::sin(k_ * x);
      const double core = p_ * cs + q_ * sn;
      return {core + r_, k_ * (q_ * cs - p_ * sn), -k_ * k_ * core};
    }
    case Kind::Quadratic:
      return {(p_ * x + q_) * x + r_, 2.0 * p_ * x + q_, 2.0 * p_};
  }
  return {0.0, 0.0, 0.0};
}

bool FamilyParams::satisfies_constraint() const noexcept {
  return std::abs(residual_) <= kConstraintTolerance * scale_;
}

FamilyParams build_family(double b, double c, const CoeffSpec& coeffs, ConstraintPolicy policy) {
  if (!std::isfinite(b)) throw ValidationError("non-finite b");
  FamilyParams out;
  out.tag_ = classify_case(c);
  out.c_ = c;
  out.coeffs_ = coeffs;

  if (const auto* s = std::get_if<SingularCoeffs>(&coeffs)) {
    if (s->epsilon1 != 1 && s->epsilon1 != -1) {
      throw ValidationError("epsilon1 must be +1 or -1");
    }
    switch (out.tag_) {
      case CaseTag::PosC:
        b = -1.0;
        out.expanded_ = {1.0 / c, 0.0, 0.0, 1.0 / (1.0 + c)};
        break;
      case CaseTag::MidC:
        b = s->epsilon1;
        out.epsilon1_ = s->epsilon1;
        out.expanded_ = {0.0, -1.0 / c, 0.0, 1.0 / (1.0 + c)};
        break;
      case CaseTag::NegOne:
        b = s->epsilon1;
        out.epsilon1_ = s->epsilon1;
        out.expanded_ = {0.0, 1.0, 0.0, 0.0};
        break;
      case CaseTag::LowC:
        b = 1.0;
        out.expanded_ = {0.0, -1.0 / c, -1.0 / (1.0 + c), 0.0};
        break;
    }
  } else if (const auto* n = std::get_if<NormalizedCoeffs>(&coeffs)) {
    out.expanded_ = expand_normalized(out.tag_, *n);
  } else {
    const auto& g = std::get<GeneralCoeffs>(coeffs);
    if (!finite_all({g.a1, g.b1, g.a2, g.b2})) throw ValidationError("non-finite coefficient");
    out.expanded_ = g;
  }
  out.b_ = b;

  Relation rel = relation_residual(b, c, out.tag_, out.expanded_);
  if (const auto* n = std::get_if<NormalizedCoeffs>(&coeffs)) {
    // Same relation in the squared amplitudes, avoiding the round trip through sqrt.
    if (out.tag_ == CaseTag::NegOne) {
      const double tail = (b + n->b2) * (b + n->b2);
      rel = {n->A1 + n->a2 * n->a2 + n->b2 * n->b2 - tail,
             std::max({n->A1, n->a2 * n->a2, n->b2 * n->b2, tail})};
    } else {
      const double lhs = b * b / (c * (1.0 + c));
      rel = {lhs - (c * n->A1 - (1.0 + c) * n->B1),
             std::max({std::abs(lhs), std::abs(c) * n->A1, std::abs(1.0 + c) * n->B1})};
    }
  }
  out.residual_ = rel.residual;
  out.scale_ = rel.scale;
  if (rel.scale == 0.0) {
    throw ValidationError("profiles vanish identically: f + g = 0 everywhere");
  }
  if (policy == ConstraintPolicy::Enforce && !out.satisfies_constraint()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "constraint violation: residual = " << rel.residual << " (tolerance "
        << kConstraintTolerance * rel.scale << ")";
    throw ConstraintError(msg.str(), rel.residual);
  }
  return out;
}

namespace {

std::pair<Profile1D, Profile1D> make_profiles(const FamilyParams& p) {
  using K = Profile1D::Kind;
  const double b = p.b();
  const double c = p.c();
  const GeneralCoeffs& k = p.expanded();
  switch (p.tag()) {
    case CaseTag::PosC:
      return {Profile1D(K::Hyperbolic, k.a1, k.b1, std::sqrt(c), -b / c),
              Profile1D(K::Trigonometric, k.a2, k.b2, std::sqrt(1.0 + c), b / (1.0 + c))};
    case CaseTag::MidC:
      return {Profile1D(K::Trigonometric, k.a1, k.b1, std::sqrt(-c), -b / c),
              Profile1D(K::Trigonometric, k.a2, k.b2, std::sqrt(1.0 + c), b / (1.0 + c))};
    case CaseTag::NegOne:
      return {Profile1D(K::Trigonometric, k.a1, k.b1, 1.0, b),
              Profile1D(K::Quadratic, 0.5 * b, k.a2, 0.0, k.b2)};
    case CaseTag::LowC:
      return {Profile1D(K::Trigonometric, k.a1, k.b1, std::sqrt(-c), -b / c),
              Profile1D(K::Hyperbolic, k.a2, k.b2, std::sqrt(-1.0 - c), b / (1.0 + c))};
  }
  return {Profile1D(K::Quadratic, 0, 0, 0, 0), Profile1D(K::Quadratic, 0, 0, 0, 0)};
}

}  // namespace

ProfilePair::ProfilePair(FamilyParams params)
    : params_(std::move(params)),
      f_(make_profiles(params_).first),
      g_(make_profiles(params_).second) {}

ProfileValues ProfilePair::operator()(double u1, double u2) const noexcept {
  const auto f = f_(u1);
  const auto g = g_(u2);
  return {f.value, f.d1, f.d2, g.value, g.d1, g.d2};
}

double first_integral(const ProfilePair& pair, double u1, double u2) {
  const double b = pair.params().b();
  const double c = pair.params().c();
  const auto v = pair(u1, u2);
  return v.df * v.df - c * v.f * v.f - 2.0 * b * v.f + v.dg * v.dg + (1.0 + c) * v.g * v.g -
         2.0 * b * v.g;
}

double first_integral_scale(const ProfilePair& pair, double u1, double u2) {
  const double b = pair.params().b();
  const double c = pair.params().c();
  const auto v = pair(u1, u2);
  return std::max({1.0, v.df * v.df, std::abs(c) * v.f * v.f, std::abs(2.0 * b * v.f),
                   v.dg * v.dg, std::abs(1.0 + c) * v.g * v.g, std::abs(2.0 * b * v.g)});
}

namespace {

// Values (phase + 2 pi k) / freq that fall in [lo, hi].
std::vector<double> lattice_1d(double phase, double freq, double lo, double hi) {
  std::vector<double> out;
  const double k_lo = std::floor((lo * freq - phase) / kTwoPi) - 1.0;
  const double k_hi = std::ceil((hi * freq - phase) / kTwoPi) + 1.0;
  for (double k = k_lo; k <= k_hi; k += 1.0) {
    const double x = (phase + kTwoPi * k) / freq;
    if (x >= lo && x <= hi) out.push_back(x);
  }
  return out;
}

}  // namespace

std::vector<ParamPoint> singular_points(const FamilyParams& params, const ParamRect& window) {
  std::vector<ParamPoint> out;
  if (!params.is_singular()) return out;
  const double c = params.c();
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<double> u1s;
  std::vector<double> u2s;
  switch (params.tag()) {
    case CaseTag::PosC:
      u1s = {0.0};
      u2s = lattice_1d(half_pi, std::sqrt(1.0 + c), window.u2_min, window.u2_max);
      break;
    case CaseTag::MidC: {
      const double e = params.epsilon1();
      u1s = lattice_1d(e * half_pi, std::sqrt(-c), window.u1_min, window.u1_max);
      u2s = lattice_1d(-e * half_pi, std::sqrt(1.0 + c), window.u2_min, window.u2_max);
      break;
    }
    case CaseTag::NegOne:
      u1s = lattice_1d(params.epsilon1() * half_pi, 1.0, window.u1_min, window.u1_max);
      u2s = {0.0};
      break;
    case CaseTag::LowC:
      u1s = lattice_1d(half_pi, std::sqrt(-c), window.u1_min, window.u1_max);
      u2s = {0.0};
      break;
  }
  for (double u1 : u1s) {
    for (double u2 : u2s) {
      const ParamPoint p{u1, u2};
      if (window.contains(p)) out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end(), [](const ParamPoint& a, const ParamPoint& b) {
    return a.u1 < b.u1 || (a.u1 == b.u1 && a.u2 < b.u2);
  });
  return out;
}

RationalApprox rational_approximation(double x, long max_denominator, double tol) {
  RationalApprox out;
  out.value = x;
  if (!std::isfinite(x)) return out;
  const double target = std::abs(x);
  const double allowed = tol * std::max(1.0, target);
  long h_prev = 1, h_prev2 = 0;
  long k_prev = 0, k_prev2 = 1;
  double y = target;
  for (int iter = 0; iter < 64; ++iter) {
    const double a_real = std::floor(y);
    if (a_real > 1e15) break;
    const long a = static_cast<long>(a_real);
    const long h = a * h_prev + h_prev2;
    const long k = a * k_prev + k_prev2;
    if (k > max_denominator) break;
    if (std::abs(target - static_cast<double>(h) / static_cast<double>(k)) <= allowed) {
      out.rational = true;
      out.numerator = x < 0 ? -h : h;
      out.denominator = k;
      return out;
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const double frac = y - a_real;
    if (frac <= 0.0) break;
    y = 1.0 / frac;
  }
  return out;
}

GeometryClass classify_geometry(const FamilyParams& params) {
  const double b = params.b();
  const double c = params.c();
  GeometryClass out{};
  out.tag = params.tag();
  out.sqrt_abs_one_plus_c = rational_approximation(std::sqrt(std::abs(1.0 + c)));
  if (c < 0.0) out.sqrt_neg_c = rational_approximation(std::sqrt(-c));
  if (out.sqrt_abs_one_plus_c.rational && out.sqrt_abs_one_plus_c.numerator > 0) {
    out.bubbles = out.sqrt_abs_one_plus_c.numerator;
    out.end_index = out.sqrt_abs_one_plus_c.denominator;
  }
  out.cmc = (b == 0.0);
  out.planar_ends = params.is_singular();
  if (b == 0.0) {
    out.side = BubbleSide::None;
  } else {
    switch (params.tag()) {
      case CaseTag::PosC: out.side = b > 0 ? BubbleSide::Inside : BubbleSide::Outside; break;
      case CaseTag::MidC: out.side = BubbleSide::Nested; break;
      case CaseTag::NegOne: out.side = BubbleSide::Outside; break;
      case CaseTag::LowC: out.side = b > 0 ? BubbleSide::Outside : BubbleSide::Inside; break;
    }
  }
  return out;
}

std::optional<double> u1_period(const FamilyParams& params) {
  if (params.c() < 0.0) return kTwoPi / std::sqrt(-params.c());
  return std::nullopt;
}

std::optional<double> u2_period(const FamilyParams& params) {
  if (params.c() > -1.0) return kTwoPi / std::sqrt(1.0 + params.c());
  return std::nullopt;
}

}  // namespace isothermic
