#pragma once

#include <functional>
#include <vector>

namespace riscomp {

double log_gamma(double x);
double log_beta(double a, double b);

/// I_x(a, b) by continued fraction, with the symmetry
/// I_x(a, b) = 1 - I_{1-x}(b, a) applied when x > (a+1)/(a+b+2).
double regularized_beta(double a, double b, double x);

/// Inverse of x -> I_x(a, b) by safeguarded bisection/Newton.
double inverse_regularized_beta(double a, double b, double p);

/// P(a, x) = gamma(a, x) / Gamma(a).
double regularized_gamma_p(double a, double x);

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_intervals = 4000;
};

/// Adaptive Gauss-Kronrod (7/15) over [a, b]; `breakpoints` seed the initial
/// partition, which helps when the integrand is sharply peaked.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opt = {},
                           const std::vector<double>& breakpoints = {});

/// Integral over (0, inf) via x = t / (1 - t).
QuadratureResult integrate_half_line(const std::function<double(double)>& f,
                                     const QuadratureOptions& opt = {},
                                     const std::vector<double>& breakpoints_t = {});

}  // namespace riscomp
