#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace nagumo {

/// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must have opposite
/// signs. Stops when the bracket is shorter than xtol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-12);

/// Scans [lo, hi] on a uniform grid and returns the first subinterval where f
/// changes sign, or an empty optional-style pair (lo > hi) if none exists.
std::pair<double, double> first_sign_change(const std::function<double(double)>& f,
                                            double lo, double hi, int grid);

/// Maximizer of f on [lo, hi] by golden-section search, refined to xtol.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol = 1e-10);

/// Maximum of f over [lo, hi]: dense grid scan plus golden refinement around
/// every local peak.
double grid_max(const std::function<double(double)>& f, double lo, double hi,
                int grid = 4096, double xtol = 1e-10);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
/// Results are cached; safe to call concurrently.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Integral of f over [a, b] with the n-point Gauss-Legendre rule.
double gl_integrate(const std::function<double(double)>& f, double a, double b,
                    int n);

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 40);

/// Runs fn(i) for i in [0, n) on a few worker threads and returns when all
/// are done. Iteration order within a worker is ascending, results must be
/// written to per-index storage by the caller.
void parallel_for(int n, const std::function<void(int)>& fn);

int gcd_int(int a, int b);

}  // namespace nagumo
