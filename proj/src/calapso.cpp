#include "isothermic/calapso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "isothermic/errors.hpp"

namespace isothermic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinAbsOmega = 1e-12;

int sign_of_c(const FamilyParams& p) { return p.c() > 0.0 ? 1 : -1; }

std::string point_text(double u1, double u2) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << u1 << ", " << u2 << ")";
  return os.str();
}

int node_count(double width, double h) {
  const double steps = std::round(width / h);
  if (!(steps >= 0.0) || steps > 1e6) throw ValidationError("patch/step combination too large");
  return static_cast<int>(steps) + 1;
}

}  // namespace

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Omega: return "omega";
    case FieldKind::CapitalOmega: return "Omega";
    case FieldKind::Custom: return "custom";
  }
  return "?";
}

CalapsoField CalapsoField::custom(Fn fn) {
  return CalapsoField(FieldKind::Custom, std::move(fn), std::nullopt, 1);
}

CalapsoField CalapsoField::scaled(double factor) const {
  Fn inner = fn_;
  return CalapsoField(FieldKind::Custom,
                      [inner, factor](double u1, double u2) { return factor * inner(u1, u2); },
                      params_, epsilon_);
}

CalapsoField make_field(const ProfilePair& pair, FieldKind kind, const MaskTolerances& tol) {
  const FamilyParams& p = pair.params();
  const int eps = sign_of_c(p);
  const double b = p.b();
  const double c = p.c();
  CalapsoField::Fn fn;
  switch (kind) {
    case FieldKind::Omega:
      fn = [pair, eps, b, c, tol](double u1, double u2) {
        const ProfileValues v = pair(u1, u2);
        const double M = 2.0 * b + c * (v.f - v.g);
        if (!(std::abs(M) >= tol.singular)) return kNaN;
        return eps * std::numbers::sqrt2 * (M + 2.0 * c * v.g) / (2.0 * M);
      };
      break;
    case FieldKind::CapitalOmega:
      fn = [pair, eps, tol](double u1, double u2) {
        const ProfileValues v = pair(u1, u2);
        const double s = v.f + v.g;
        if (!(std::abs(s) >= tol.domain)) return kNaN;
        return eps * std::numbers::sqrt2 * (v.f - v.g) / (2.0 * s);
      };
      break;
    case FieldKind::Custom:
      throw ValidationError("custom fields cannot be built from family parameters");
  }
  return CalapsoField(kind, std::move(fn), p, eps);
}

CalapsoField field_from_surface(const ProfilePair& pair, SurfaceCurvature which,
                                const MaskTolerances& tol) {
  const bool mean = which == SurfaceCurvature::Mean;
  auto fn = [pair, mean, tol](double u1, double u2) {
    const SurfacePoint sp = eval_surface_point(pair, u1, u2, tol);
    if (!sp.flags.ok()) return kNaN;
    const double curvature = mean ? sp.H : 0.5 * sp.Hskew;
    return std::numbers::sqrt2 * sp.psi * curvature;
  };
  return CalapsoField(FieldKind::Custom, std::move(fn), pair.params(), sign_of_c(pair.params()));
}

ResidualReport calapso_residual(const CalapsoField& field, const ParamRect& patch, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ValidationError("step h must be positive");
  if (!(patch.u1_min <= patch.u1_max) || !(patch.u2_min <= patch.u2_max)) {
    throw ValidationError("invalid patch");
  }

  ResidualReport rep;
  rep.patch = patch;
  rep.h = h;
  rep.n1 = node_count(patch.width(), h);
  rep.n2 = node_count(patch.height(), h);

  // w on nodes -2 .. n+1, q on nodes -1 .. n, residual on 0 .. n-1.
  const int w1 = rep.n1 + 4, w2 = rep.n2 + 4;
  const int q1 = rep.n1 + 2, q2 = rep.n2 + 2;
  auto u1_at = [&](int i) { return patch.u1_min + i * h; };
  auto u2_at = [&](int j) { return patch.u2_min + j * h; };

  std::vector<double> w(static_cast<size_t>(w1) * w2);
  for (int a = 0; a < w1; ++a) {
    for (int b = 0; b < w2; ++b) {
      const double u1 = u1_at(a - 2), u2 = u2_at(b - 2);
      const double value = field(u1, u2);
      if (!std::isfinite(value)) {
        throw DomainError("field undefined at " + point_text(u1, u2));
      }
      w[static_cast<size_t>(a) * w2 + b] = value;
    }
  }
  auto W = [&](int a, int b) { return w[static_cast<size_t>(a) * w2 + b]; };
  auto W2 = [&](int a, int b) { return W(a, b) * W(a, b); };

  const double cross = 4.0 * h * h;
  std::vector<double> q(static_cast<size_t>(q1) * q2);
  for (int a = 0; a < q1; ++a) {
    for (int b = 0; b < q2; ++b) {
      const int A = a + 1, B = b + 1;
      const double center = W(A, B);
      if (std::abs(center) < kMinAbsOmega) {
        throw DomainError("field vanishes at " + point_text(u1_at(a - 1), u2_at(b - 1)));
      }
      const double w12 = (W(A + 1, B + 1) - W(A + 1, B - 1) - W(A - 1, B + 1) + W(A - 1, B - 1)) / cross;
      q[static_cast<size_t>(a) * q2 + b] = w12 / center;
    }
  }
  auto Q = [&](int a, int b) { return q[static_cast<size_t>(a) * q2 + b]; };

  const double hh = h * h;
  rep.residual.resize(static_cast<size_t>(rep.n1) * rep.n2);
  double sum_sq = 0.0;
  for (int i = 0; i < rep.n1; ++i) {
    for (int j = 0; j < rep.n2; ++j) {
      const int a = i + 1, b = j + 1;  // q index
      const int A = i + 2, B = j + 2;  // w index
      const double q11 = (Q(a + 1, b) - 2.0 * Q(a, b) + Q(a - 1, b)) / hh;
      const double q22 = (Q(a, b + 1) - 2.0 * Q(a, b) + Q(a, b - 1)) / hh;
      const double sq12 = (W2(A + 1, B + 1) - W2(A + 1, B - 1) - W2(A - 1, B + 1) + W2(A - 1, B - 1)) / cross;
      const double r = q11 + q22 + sq12;
      rep.residual[static_cast<size_t>(i) * rep.n2 + j] = r;
      rep.max_abs = std::max(rep.max_abs, std::abs(r));
      sum_sq += r * r;
    }
  }
  rep.l2 = std::sqrt(hh * sum_sq);
  return rep;
}

ConvergenceResult residual_convergence(const CalapsoField& field, const ParamRect& patch,
                                       const std::vector<double>& h_list) {
  if (h_list.size() < 3) throw ValidationError("convergence order needs at least 3 step sizes");
  ConvergenceResult out;
  for (double h : h_list) {
    out.h.push_back(h);
    out.max_abs.push_back(calapso_residual(field, patch, h).max_abs);
  }
  if (std::any_of(out.max_abs.begin(), out.max_abs.end(), [](double r) { return r == 0.0; })) {
    out.order = std::numeric_limits<double>::infinity();
    return out;
  }
  // Least-squares slope of log(max_abs) against log(h).
  const double n = static_cast<double>(out.h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < out.h.size(); ++k) {
    const double x = std::log(out.h[k]);
    const double y = std::log(out.max_abs[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return out;
}

double residual_convergence_order(const CalapsoField& field, const ParamRect& patch,
                                  const std::vector<double>& h_list) {
  return residual_convergence(field, patch, h_list).order;
}

std::optional<ParamRect> select_patch(const CalapsoField& field, const ProfilePair& pair,
                                      const ParamRect& window, double side,
                                      const MaskTolerances& tol) {
  constexpr double pad = 0.1;
  constexpr int samples = 21;
  const double stride = side / 4.0;
  const double b = pair.params().b();
  const double c = pair.params().c();

  std::optional<ParamRect> best;
  double best_score = -1.0;
  for (int i = 0;; ++i) {
    const double x0 = window.u1_min + i * stride;
    if (x0 + side > window.u1_max + 1e-12) break;
    for (int j = 0;; ++j) {
      const double y0 = window.u2_min + j * stride;
      if (y0 + side > window.u2_max + 1e-12) break;

      double score = std::numeric_limits<double>::infinity();
      for (int a = 0; a < samples && score > 0.0; ++a) {
        for (int k = 0; k < samples; ++k) {
          const double u1 = x0 - pad + (side + 2 * pad) * a / (samples - 1);
          const double u2 = y0 - pad + (side + 2 * pad) * k / (samples - 1);
          const ProfileValues v = pair(u1, u2);
          const double M = std::abs(2.0 * b + c * (v.f - v.g));
          const double s = std::abs(v.f + v.g);
          const double w = std::abs(field(u1, u2));
          if (!std::isfinite(w) || M <= 10 * tol.singular || s <= 10 * tol.domain || w < 1e-3) {
            score = 0.0;
            break;
          }
          score = std::min({score, w, M, s});
        }
      }
      if (score > best_score && score > 0.0) {
        best_score = score;
        best = ParamRect{x0, x0 + side, y0, y0 + side};
      }
    }
  }
  return best;
}

}  // namespace isothermic
