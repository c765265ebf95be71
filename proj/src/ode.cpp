#include "horizon/ode.hpp"

#include <algorithm>
#include <cmath>

namespace horizon {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Stepper {
  const OdeRhs& rhs;
  const OdeOptions& opts;
  Vec k1, k2, k3, k4, k5, k6, k7;
  bool have_k1 = false;

  // One accepted/rejected trial; returns error norm and candidate state.
  double trial(double t, const Vec& x, double h, Vec& out) {
    if (!have_k1) {
      k1 = rhs(t, x);
      have_k1 = true;
    }
    k2 = rhs(t + c2 * h, x + h * (a21 * k1));
    k3 = rhs(t + c3 * h, x + h * (a31 * k1 + a32 * k2));
    k4 = rhs(t + c4 * h, x + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = rhs(t + c5 * h, x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = rhs(t + h, x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    out = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    k7 = rhs(t + h, out);
    Vec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double norm = 0.0;
    for (int i = 0; i < x.size(); ++i) {
      double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(x[i]), std::abs(out[i]));
      norm = std::max(norm, std::abs(err[i]) / sc);
    }
    return norm;
  }
};

}  // namespace

OdeResult integrate_ivp(const OdeRhs& rhs, const Vec& x0, const std::vector<double>& times,
                        const OdeOptions& opts) {
  if (times.size() < 1) throw Error(ErrorCode::invalid_input, "integrate_ivp needs output times");
  OdeResult res;
  res.times = times;
  res.values.reserve(times.size());
  res.values.push_back(x0);
  if (times.size() == 1) return res;

  const double dir = times.back() >= times.front() ? 1.0 : -1.0;
  for (std::size_t k = 1; k < times.size(); ++k)
    if ((times[k] - times[k - 1]) * dir <= 0.0)
      throw Error(ErrorCode::invalid_input, "output times must be strictly monotone");

  Stepper st{rhs, opts};
  Vec x = x0;
  double t = times.front();
  double h = dir * std::min(opts.initial_step, std::abs(times.back() - times.front()));
  std::size_t next = 1;

  while (next < times.size()) {
    if (++res.steps > opts.max_steps)
      throw Error(ErrorCode::no_convergence, "ODE step budget exhausted");
    double target = times[next];
    bool clipped = false;
    if ((t + h - target) * dir > 0.0) {
      h = target - t;
      clipped = true;
    }
    Vec cand;
    double err = st.trial(t, x, h, cand);
    if (err <= 1.0) {
      t += h;
      x = cand;
      st.k1 = st.k7;  // FSAL
      double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      double hn = h * std::clamp(fac, 0.2, 5.0);
      if (clipped || (t - target) * dir >= 0.0) {
        t = target;
        res.values.push_back(x);
        ++next;
      }
      h = hn;
    } else {
      ++res.rejected;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
      st.have_k1 = true;  // k1 still valid at (t, x)
    }
    if (std::abs(h) < opts.min_step)
      throw Error(ErrorCode::stiffness, "step-size underflow at t = " + std::to_string(t));
  }
  return res;
}

Vec integrate_to(const OdeRhs& rhs, const Vec& x0, double t0, double t1, const OdeOptions& opts) {
  if (t0 == t1) return x0;
  return integrate_ivp(rhs, x0, {t0, t1}, opts).values.back();
}

}  // namespace horizon
