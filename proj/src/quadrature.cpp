#include "isothermic/quadrature.hpp"

#include <cmath>
#include <string>

#include "isothermic/errors.hpp"

namespace isothermic {

namespace {

struct Simpson {
  const std::function<double(double)>& fn;
  QuadratureResult& result;

  double eval(double x) {
    const double y = fn(x);
    ++result.evaluations;
    if (!std::isfinite(y)) {
      throw DomainError("integrand undefined at t = " + std::to_string(x));
    }
    return y;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double eps,
                int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0) {
      result.depth_limited = true;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& fn, double a, double b,
                                  double rel_tol, int max_depth) {
  QuadratureResult result;
  if (a == b) return result;
  Simpson s{fn, result};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double fm = s.eval(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = rel_tol * std::abs(whole);
  result.value = s.refine(a, b, fa, fm, fb, whole, eps, max_depth);
  return result;
}

}  // namespace isothermic
