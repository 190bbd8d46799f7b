#include "bifrb/scalar_root.hpp"

#include <cmath>
#include <limits>

#include "bifrb/errors.hpp"

namespace bifrb {

double find_root_increasing(const RootQuery& query) {
  if (!(query.lo < query.hi)) throw InvalidBounds("root bracket requires lo < hi");
  double a = query.lo;
  double b = query.hi;
  double fa = query.value(a);
  double fb = query.value(b);
  if (fa > query.tol_f) throw NoSignChange("value(lo) > tol_f: no root bracketed from below");
  if (fb < -query.tol_f) throw NoSignChange("value(hi) < -tol_f: no root bracketed from above");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  const double eps = std::numeric_limits<double>::epsilon();
  double t = 0.5 * (a + b);
  for (int it = 0; it < query.max_iter; ++it) {
    const double ft = query.value(t);
    if (std::abs(ft) <= query.tol_f) return t;
    if (ft > 0.0) {
      b = t;
      fb = ft;
    } else {
      a = t;
      fa = ft;
    }
    // Second clause: the bracket has collapsed to floating-point resolution.
    if (b - a <= query.tol_x || b - a <= 2.0 * eps * (std::abs(a) + std::abs(b))) {
      return 0.5 * (a + b);
    }
    double next = std::numeric_limits<double>::quiet_NaN();
    if (query.derivative) {
      const double d = query.derivative(t);
      if (std::isfinite(d) && d > 0.0) next = t - ft / d;
    } else if (fa != fb) {
      // Secant step against the opposite bracket endpoint.
      const double to = (ft > 0.0) ? a : b;
      const double fo = (ft > 0.0) ? fa : fb;
      next = t - ft * (to - t) / (fo - ft);
    }
    if (!std::isfinite(next) || !(next > a && next < b)) next = 0.5 * (a + b);
    t = next;
  }
  throw MaxIterExceeded("find_root_increasing: no tolerance met within max_iter");
}

}  // namespace bifrb
