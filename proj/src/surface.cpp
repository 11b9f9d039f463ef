#include "isothermic/surface.hpp"

#include <cmath>
#include <limits>

namespace isothermic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const Vec3 kNaNVec(kNaN, kNaN, kNaN);

}  // namespace

CylinderFrame cylinder_frame(double u1, double u2) noexcept {
  const double c2 = std::cos(u2);
  const double s2 = std::sin(u2);
  return {Vec3(c2, s2, u1), Vec3(0.0, 0.0, 1.0), Vec3(-s2, c2, 0.0), Vec3(-c2, -s2, 0.0)};
}

PointFlags point_flags(double M, double fg_sum, const MaskTolerances& tol) noexcept {
  PointFlags flags;
  flags.near_domain_boundary = !(std::abs(fg_sum) >= tol.domain);
  flags.near_singular = !(std::abs(M) >= tol.singular);
  return flags;
}

SurfacePoint eval_surface_point(const ProfilePair& pair, double u1, double u2,
                                const MaskTolerances& tol) {
  const double b = pair.params().b();
  const double c = pair.params().c();
  const ProfileValues v = pair(u1, u2);

  SurfacePoint p;
  p.u1 = u1;
  p.u2 = u2;
  p.M = 2.0 * b + c * (v.f - v.g);
  p.fg_sum = v.f + v.g;
  p.flags = point_flags(p.M, p.fg_sum, tol);
  if (!p.flags.ok()) {
    p.position = kNaNVec;
    p.normal = kNaNVec;
    p.psi = p.lambda1 = p.lambda2 = p.H = p.Hskew = p.K = kNaN;
    return p;
  }

  const CylinderFrame fr = cylinder_frame(u1, u2);
  const Vec3 V = v.df * fr.X1 + v.dg * fr.X2 - v.g * fr.N;
  const double M = p.M;
  const double s = p.fg_sum;

  p.position = fr.X - (2.0 / M) * V;
  p.normal = fr.N + (2.0 * v.g / (M * s)) * V;
  p.psi = std::abs(c * s) / std::abs(M);

  const double denom = c * s * s;
  p.lambda1 = -2.0 * v.g * (b + c * v.f) / denom;
  p.lambda2 = (-c * v.f * v.f - 2.0 * b * v.f - c * v.g * v.g) / denom;
  p.H = -0.5 - b / (c * s);
  p.Hskew = (M - 2.0 * b) / (M * p.psi * p.psi);
  p.K = p.lambda1 * p.lambda2;
  return p;
}

RibaucourEvaluation eval_via_general_ribaucour(const ProfilePair& pair, double u1, double u2,
                                               const MaskTolerances& tol) {
  const double b = pair.params().b();
  const double c = pair.params().c();
  const ProfileValues v = pair(u1, u2);

  RibaucourEvaluation out;
  auto& in = out.inter;
  in.Omega = v.f + v.g;
  in.Omega1 = v.df;
  in.Omega2 = v.dg;
  in.W = v.g;
  in.S = in.Omega1 * in.Omega1 + in.Omega2 * in.Omega2 + in.W * in.W;
  // The cylinder's curvature-line frame is flat, so T_i reduces to the
  // second derivative of Omega plus lambda_i W.
  in.T1 = 2.0 * v.d2f;
  in.T2 = 2.0 * (v.d2g + v.g);

  out.flags = point_flags(2.0 * b + c * (v.f - v.g), in.Omega, tol);
  if (!out.flags.ok()) {
    out.position = kNaNVec;
    out.lambda1 = out.lambda2 = kNaN;
    return out;
  }

  const CylinderFrame fr = cylinder_frame(u1, u2);
  const Vec3 V = in.Omega1 * fr.X1 + in.Omega2 * fr.X2 - in.W * fr.N;
  out.position = fr.X - (2.0 * in.Omega / in.S) * V;

  constexpr double base_lambda1 = 0.0;
  constexpr double base_lambda2 = -1.0;
  out.lambda1 = (in.W * in.T1 + base_lambda1 * in.S) / (in.S - in.Omega * in.T1);
  out.lambda2 = (in.W * in.T2 + base_lambda2 * in.S) / (in.S - in.Omega * in.T2);
  return out;
}

}  // namespace isothermic
