#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "horizon/ode.hpp"
#include "horizon/problem.hpp"
#include "horizon/quadrature.hpp"

namespace horizon {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Linear system x' = A(t) x + a(t) on [0,inf] with summable coefficients.
struct LinearSystem {
  int dim = 0;
  std::function<Mat(double)> A;
  std::function<Vec(double)> a;

  TailDecayCertificate certify_A() const;
  TailDecayCertificate certify_a() const;
};

struct PicardResult {
  ConvergentFunction x;
  int iterations = 0;
  std::vector<double> residuals;          // sup-norm change per iterate
  std::vector<double> weissinger_bounds;  // c0^m/m! * first residual
};

struct PicardOptions {
  double fixed_point_tol = 1e-10;
  int max_iterations = 60;
  int refine_factor = 16;  // fine nodes per grid interval of the internal t-grid
  bool enforce_summability = true;
};

/// Fixed-point solve of x(t) = z(t) + int_tau^t [A x + a] ds on the grid.
/// tau must be a grid node or infinity.
PicardResult picard_solve(const LinearSystem& sys, const ConvergentFunction& z, double tau,
                          const SemiInfiniteGrid& grid, const PicardOptions& opts = {});

struct FundamentalMatrices {
  std::vector<Mat> Y;  // Y' = phi_x Y, Y(0) = I
  std::vector<Mat> Z;  // Z' = -phi_x^T Z, Z(0) = I
  Mat Y_limit, Z_limit;
  TailDecayCertificate jacobian_certificate;
  double duality_defect = 0.0;  // max_k ||Y_k^T Z_k - I||
};

struct FundamentalOptions {
  bool enforce_summability = true;
  double limit_eps = 1e-6;  // the matrices are continued to s = 1 - eps
  // tight tolerances: the duality defect Y^T Z - I is checked in absolute
  // terms while Y itself may grow along the window
  OdeOptions ode = {1e-13, 1e-12, 1e-3, 1e-15, 4'000'000};
};

/// Fundamental matrix solutions along a process, normalized at t = 0.
FundamentalMatrices fundamental_matrices(const ControlProblem& problem, const Process& process,
                                         const SemiInfiniteGrid& grid,
                                         const FundamentalOptions& opts = {});

}  // namespace horizon
