#include "horizon/linear_ode.hpp"

#include <algorithm>
#include <cmath>

namespace horizon {

namespace {

double mat_norm(const Mat& m) { return m.norm(); }

}  // namespace

TailDecayCertificate LinearSystem::certify_A() const {
  return summability_certificate([this](double t) { return mat_norm(A(t)); });
}

TailDecayCertificate LinearSystem::certify_a() const {
  return summability_certificate([this](double t) { return a(t).norm(); });
}

PicardResult picard_solve(const LinearSystem& sys, const ConvergentFunction& z, double tau,
                          const SemiInfiniteGrid& grid, const PicardOptions& opts) {
  const int n = sys.dim;
  auto certA = sys.certify_A();
  auto certa = sys.certify_a();
  if (opts.enforce_summability && (!certA.summable || !certa.summable))
    throw Error(ErrorCode::non_summable_system, "coefficients fail the summability certificate");

  const bool tau_at_infinity = !std::isfinite(tau);
  if (!tau_at_infinity && !grid.has_node(tau))
    throw Error(ErrorCode::invalid_input, "tau must be a grid node or infinity");

  // Internal grid in t: each requested interval refined R-fold, then an
  // extension with uniform segments until the coefficients are negligible.
  // Working in t keeps the integrand smooth; a uniform s-grid would see a
  // power singularity at s = 1 whenever the coefficients decay slower than
  // the map compactifies.
  const std::size_t R = static_cast<std::size_t>(std::max(opts.refine_factor, 4));
  std::vector<double> bounds(grid.nodes());
  const double ext_step = std::max(1.0, bounds.back() / 16.0);
  {
    double T = bounds.back();
    int quiet = 0;
    const double t_cap = std::max(400.0, 8.0 * bounds.back());
    while (quiet < 2 && T < t_cap) {
      double next = T + ext_step;
      double coeff = 0.0;
      for (std::size_t i = 0; i <= R; ++i) {
        double t = T + (next - T) * double(i) / double(R);
        coeff = std::max(coeff, mat_norm(sys.A(t)) + sys.a(t).norm());
      }
      quiet = coeff * ext_step < 1e-15 ? quiet + 1 : 0;
      bounds.push_back(next);
      T = next;
    }
  }
  const std::size_t S = bounds.size() - 1;  // uniform segments
  const std::size_t M = S * R + 1;          // fine nodes, endpoints shared
  std::vector<double> ts(M);
  std::vector<Mat> Ak(M);
  std::vector<Vec> ak(M), zk(M);
  for (std::size_t j = 0; j < S; ++j) {
    double w = bounds[j + 1] - bounds[j];
    for (std::size_t i = 0; i < R; ++i)
      ts[j * R + i] = bounds[j] + w * double(i) / double(R);
  }
  ts[M - 1] = bounds.back();
  for (std::size_t k = 0; k < M; ++k) {
    Ak[k] = sys.A(ts[k]);
    ak[k] = sys.a(ts[k]);
    zk[k] = z.eval(ts[k]);
  }
  const Vec z_limit = z.limit();
  const std::size_t k_tau = tau_at_infinity ? M : grid.index_of(tau) * R;

  std::vector<Vec> x(zk);
  Vec x_limit = z_limit;

  PicardResult out;
  double first_residual = 0.0;
  const double c0 = certA.value;

  for (int it = 0; it < opts.max_iterations; ++it) {
    // integrand g(t) = A x + a, cumulative per component, segment by segment
    std::vector<std::vector<double>> cum(static_cast<std::size_t>(n),
                                         std::vector<double>(M, 0.0));
    for (std::size_t j = 0; j < S; ++j) {
      double h = (bounds[j + 1] - bounds[j]) / double(R);
      for (int i = 0; i < n; ++i) {
        std::vector<double> g(R + 1);
        for (std::size_t k = 0; k <= R; ++k) g[k] = (Ak[j * R + k] * x[j * R + k] + ak[j * R + k])[i];
        auto seg = cumulative_integral(g, h);
        double base = cum[static_cast<std::size_t>(i)][j * R];
        for (std::size_t k = 1; k <= R; ++k)
          cum[static_cast<std::size_t>(i)][j * R + k] = base + seg[k];
      }
    }

    // tail beyond the extension with x frozen at its limit; doubling blocks
    // until the contribution vanishes
    Vec tail = Vec::Zero(n);
    {
      double T = bounds.back();
      for (int block = 0; block < 60; ++block) {
        Vec piece(n);
        for (int i = 0; i < n; ++i)
          piece[i] = integrate(
              [&](double t) { return ((sys.A(t) * x_limit) + sys.a(t))[i]; }, T, 2.0 * T, 1e-14);
        tail += piece;
        T *= 2.0;
        if (piece.lpNorm<Eigen::Infinity>() < 1e-16) break;
      }
    }
    Vec total(n);
    for (int i = 0; i < n; ++i) total[i] = cum[static_cast<std::size_t>(i)].back() + tail[i];

    Vec c_tau(n);
    if (tau_at_infinity) {
      c_tau = total;
    } else {
      for (int i = 0; i < n; ++i) c_tau[i] = cum[static_cast<std::size_t>(i)][k_tau];
    }

    double diff = 0.0;
    for (std::size_t k = 0; k < M; ++k) {
      Vec xn(n);
      for (int i = 0; i < n; ++i) xn[i] = zk[k][i] + cum[static_cast<std::size_t>(i)][k] - c_tau[i];
      diff = std::max(diff, (xn - x[k]).lpNorm<Eigen::Infinity>());
      x[k] = xn;
    }
    Vec xl = z_limit + total - c_tau;
    diff = std::max(diff, (xl - x_limit).lpNorm<Eigen::Infinity>());
    x_limit = xl;

    out.iterations = it + 1;
    out.residuals.push_back(diff);
    if (it == 0) first_residual = std::max(diff, 1e-300);
    double fact = 1.0, pw = 1.0;
    for (int m = 1; m <= it; ++m) {
      pw *= c0;
      fact *= m;
    }
    out.weissinger_bounds.push_back(pw / fact * first_residual);
    if (diff < opts.fixed_point_tol) break;
  }
  if (out.residuals.empty() || out.residuals.back() >= opts.fixed_point_tol)
    throw Error(ErrorCode::no_convergence, "picard iteration cap reached");

  // restrict to the requested grid: node k is fine node k * R by construction
  std::vector<Vec> vals;
  vals.reserve(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) vals.push_back(x[k * R]);
  out.x = ConvergentFunction(grid.nodes(), std::move(vals), x_limit);
  return out;
}

FundamentalMatrices fundamental_matrices(const ControlProblem& problem, const Process& process,
                                         const SemiInfiniteGrid& grid,
                                         const FundamentalOptions& opts) {
  const int n = problem.state_dim;
  const auto& map = grid.map();
  FundamentalMatrices out;
  out.jacobian_certificate = summability_certificate(
      [&](double t) { return problem.phi_x(t, process.state(t), process.control(t)).norm(); });
  if (opts.enforce_summability && !out.jacobian_certificate.summable)
    throw Error(ErrorCode::non_summable_system,
                "int ||phi_x|| dt fails the summability certificate");

  auto flat = [n](const Mat& m) {
    Vec v(n * n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) v[c * n + r] = m(r, c);
    return v;
  };
  auto unflat = [n](const Vec& v) {
    Mat m(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) m(r, c) = v[c * n + r];
    return m;
  };

  const auto& nodes = grid.nodes();
  out.Y.assign(nodes.size(), Mat::Identity(n, n));
  out.Z.assign(nodes.size(), Mat::Identity(n, n));

  Mat Y = Mat::Identity(n, n), Z = Mat::Identity(n, n);
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    double tl = nodes[k], tr = nodes[k + 1];
    Vec u = process.segment_control(tl, tr);
    auto rhsY = [&](double t, const Vec& v) {
      Mat J = problem.phi_x(t, process.state(t), u);
      return flat(J * unflat(v));
    };
    auto rhsZ = [&](double t, const Vec& v) {
      Mat J = problem.phi_x(t, process.state(t), u);
      return flat(-J.transpose() * unflat(v));
    };
    Y = unflat(integrate_to(rhsY, flat(Y), tl, tr, opts.ode));
    Z = unflat(integrate_to(rhsZ, flat(Z), tl, tr, opts.ode));
    out.Y[k + 1] = Y;
    out.Z[k + 1] = Z;
  }

  // continue toward s = 1 for the recorded limits
  double t_far = map.t_of_s(1.0 - opts.limit_eps);
  if (t_far > nodes.back() && out.jacobian_certificate.summable) {
    double tl = nodes.back();
    Vec u = process.segment_control(tl, t_far);
    auto rhsY = [&](double t, const Vec& v) {
      return flat(problem.phi_x(t, process.state(t), u) * unflat(v));
    };
    auto rhsZ = [&](double t, const Vec& v) {
      return flat(-problem.phi_x(t, process.state(t), u).transpose() * unflat(v));
    };
    out.Y_limit = unflat(integrate_to(rhsY, flat(Y), tl, t_far, opts.ode));
    out.Z_limit = unflat(integrate_to(rhsZ, flat(Z), tl, t_far, opts.ode));
  } else {
    out.Y_limit = Y;
    out.Z_limit = Z;
  }

  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Mat defect = out.Y[k].transpose() * out.Z[k] - Mat::Identity(n, n);
    out.duality_defect = std::max(out.duality_defect, defect.norm());
  }
  return out;
}

}  // namespace horizon
