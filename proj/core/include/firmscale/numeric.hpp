#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "firmscale/errors.hpp"

namespace firmscale {

/// Solves A x = b in place by Gaussian elimination with partial pivoting.
/// A is n*n row-major. Intended for the small dense systems in this library.
void solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n);

/// Solves a tridiagonal system with partial pivoting (fill-in limited to a
/// second superdiagonal). Diagonals: lower[i] multiplies x[i-1] in row i,
/// diag[i] multiplies x[i], upper[i] multiplies x[i+1].
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                       std::vector<double> upper, std::vector<double>& rhs);

/// Brent-style root bracketing refinement. f(lo) and f(hi) must differ in sign.
double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol = 1e-12, double f_tol = 0.0, int max_iter = 200);

/// Deterministic pairwise (cascade) summation; independent of thread count
/// because callers materialise the addends first.
double pairwise_sum(std::span<const double> values);

std::vector<double> linspace(double lo, double hi, std::size_t n);
std::vector<double> logspace(double lo, double hi, std::size_t n);

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. jobs <= 1 runs inline.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

/// Printf-style %.17g formatting used for all numeric CSV output, so that
/// values round-trip bit-exactly through text.
std::string format_full(double v);

}  // namespace firmscale
