#include "horizon/quadrature.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>

namespace horizon {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, fa, m, fm, lm, flm);
  double right = simpson(f, m, fm, b, fb, rm, frm);
  // requested tolerances below the roundoff level of the partial sums cannot
  // be met; the floor keeps large-magnitude integrands from recursing forever
  double floor_tol = 5e-15 * (std::abs(left) + std::abs(right));
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * std::max(tol, floor_tol))
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

double integrate_singular(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate(f, a, b, tol);
}

double integrate_semi_infinite(const std::function<double(double)>& f, const HorizonMap& map,
                               double tol, const std::vector<double>& breakpoints) {
  if (map.t_of_u && map.u_of_t && map.speed_of_u) {
    // Work in the distance u = 1 - s to the ideal point.  u_of_t keeps far
    // breakpoints exact where 1 - s_of_t(t) would round to zero, and the
    // integrable endpoint singularity sits at u = 0 where u is exact too.
    std::vector<double> bps;
    for (double t : breakpoints)
      if (std::isfinite(t) && t > 0.0) bps.push_back(map.u_of_t(t));
    bps.push_back(0.0);
    bps.push_back(1.0);
    std::sort(bps.begin(), bps.end());
    auto h = [&](double u) { return map.speed_of_u(u) * f(map.t_of_u(u)); };
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
      if (bps[k + 1] - bps[k] < 1e-300) continue;
      total += integrate_singular(h, bps[k], bps[k + 1], tol);
    }
    return total;
  }

  std::vector<double> bps;
  for (double t : breakpoints)
    if (std::isfinite(t) && t > 0.0) bps.push_back(map.s_of_t(t));
  bps.push_back(0.0);
  bps.push_back(1.0);
  std::sort(bps.begin(), bps.end());

  auto g = [&](double s) {
    double t = map.t_of_s(s);
    return map.speed(s) * f(t);
  };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    if (bps[k + 1] - bps[k] < 1e-15) continue;
    total += integrate_singular(g, bps[k], bps[k + 1], tol);
  }
  return total;
}

TailDecayCertificate summability_certificate(const std::function<double(double)>& f_abs, double T,
                                             double decay, double tol) {
  TailDecayCertificate cert;
  cert.truncation = T;
  double head = integrate(f_abs, 0.0, T, tol);
  double tail1 = integrate(f_abs, T, 2.0 * T, tol);
  double tail2 = integrate(f_abs, 2.0 * T, 4.0 * T, tol);
  const double floor = 1e-13 * (1.0 + head);
  if (tail1 <= floor && tail2 <= floor) {
    cert.summable = true;
    cert.ratio = 0.0;
    cert.value = head + tail1 + tail2;
    return cert;
  }
  cert.ratio = tail2 / std::max(tail1, 1e-300);
  cert.summable = cert.ratio < decay;
  double geom_tail = cert.summable ? tail2 * cert.ratio / (1.0 - cert.ratio) : 0.0;
  cert.value = head + tail1 + tail2 + geom_tail;
  return cert;
}

std::vector<double> cumulative_integral(const std::vector<double>& g, double h) {
  const std::size_t n = g.size();
  std::vector<double> c(n, 0.0);
  if (n < 2) return c;
  if (n < 4) {
    for (std::size_t k = 1; k < n; ++k) c[k] = c[k - 1] + 0.5 * h * (g[k - 1] + g[k]);
    return c;
  }
  // cubic through the four nearest samples, integrated over one step
  c[1] = h / 24.0 * (9.0 * g[0] + 19.0 * g[1] - 5.0 * g[2] + g[3]);
  for (std::size_t k = 2; k + 1 < n; ++k)
    c[k] = c[k - 1] + h / 24.0 * (-g[k - 2] + 13.0 * g[k - 1] + 13.0 * g[k] - g[k + 1]);
  c[n - 1] = c[n - 2] + h / 24.0 * (g[n - 4] - 5.0 * g[n - 3] + 19.0 * g[n - 2] + 9.0 * g[n - 1]);
  return c;
}

}  // namespace horizon
