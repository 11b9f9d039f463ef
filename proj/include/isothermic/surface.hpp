#pragma once

#include <Eigen/Core>

#include "isothermic/profile.hpp"

namespace isothermic {

using Vec3 = Eigen::Vector3d;

struct CylinderFrame {
  Vec3 X;
  Vec3 X1;
  Vec3 X2;
  Vec3 N;  // inner unit normal
};

CylinderFrame cylinder_frame(double u1, double u2) noexcept;

struct MaskTolerances {
  double domain = 1e-8;    // |f + g| below this is outside the domain
  double singular = 1e-8;  // |M| below this is treated as a singular point
};

struct PointFlags {
  bool near_domain_boundary = false;
  bool near_singular = false;

  bool ok() const noexcept { return !near_domain_boundary && !near_singular; }
};

// Masked points keep u, M, fg_sum and flags; every other numeric field is NaN.
struct SurfacePoint {
  double u1 = 0.0;
  double u2 = 0.0;
  Vec3 position;
  Vec3 normal;
  double psi = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double H = 0.0;
  double Hskew = 0.0;
  double K = 0.0;
  double M = 0.0;
  double fg_sum = 0.0;
  PointFlags flags;
};

PointFlags point_flags(double M, double fg_sum, const MaskTolerances& tol) noexcept;

SurfacePoint eval_surface_point(const ProfilePair& pair, double u1, double u2,
                                const MaskTolerances& tol = {});

struct RibaucourIntermediates {
  double Omega = 0.0;
  double Omega1 = 0.0;
  double Omega2 = 0.0;
  double W = 0.0;
  double S = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
};

struct RibaucourEvaluation {
  Vec3 position;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  RibaucourIntermediates inter;
  PointFlags flags;
};

// The same surface computed through the general Ribaucour formulas with the
// cylinder as base surface. Intermediates are always filled; position and
// curvatures are NaN at masked points.
RibaucourEvaluation eval_via_general_ribaucour(const ProfilePair& pair, double u1, double u2,
                                               const MaskTolerances& tol = {});

}  // namespace isothermic
