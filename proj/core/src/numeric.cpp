#include "firmscale/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <mutex>
#include <thread>

namespace firmscale {

void solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(a[col * n + col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            const double cand = std::abs(a[row * n + col]);
            if (cand > best) {
                best = cand;
                pivot = row;
            }
        }
        if (best == 0.0) throw solver_error("singular matrix in dense solve", 0.0, 0);
        if (pivot != col) {
            for (std::size_t k = col; k < n; ++k) std::swap(a[col * n + k], a[pivot * n + k]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (std::size_t row = col + 1; row < n; ++row) {
            const double factor = a[row * n + col] * inv;
            if (factor == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= factor * a[col * n + k];
            b[row] -= factor * b[col];
        }
    }
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * b[k];
        b[i] = acc / a[i * n + i];
    }
}

void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                       std::vector<double> upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    if (n == 0) return;
    std::vector<double> upper2(n, 0.0);  // fill-in from row swaps
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(lower[i + 1]) > std::abs(diag[i])) {
            std::swap(diag[i], lower[i + 1]);
            std::swap(upper[i], diag[i + 1]);
            if (i + 2 < n) {
                upper2[i] = upper[i + 1];
                upper[i + 1] = 0.0;
            }
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (diag[i] == 0.0) throw solver_error("singular tridiagonal system", 0.0, 0);
        const double m = lower[i + 1] / diag[i];
        diag[i + 1] -= m * upper[i];
        if (i + 2 < n) upper[i + 1] -= m * upper2[i];
        rhs[i + 1] -= m * rhs[i];
    }
    if (diag[n - 1] == 0.0) throw solver_error("singular tridiagonal system", 0.0, 0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = rhs[i];
        if (i + 1 < n) acc -= upper[i] * rhs[i + 1];
        if (i + 2 < n) acc -= upper2[i] * rhs[i + 2];
        rhs[i] = acc / diag[i];
    }
}

double brent_root(const std::function<double(double)>& f, double lo, double hi,
                  double x_tol, double f_tol, int max_iter) {
    double a = lo, b = hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw solver_error("brent_root: endpoints do not bracket a root", std::min(std::abs(fa), std::abs(fb)), 0);
    double c = a, fc = fa;
    double d = b - a, e = d;
    for (int iter = 0; iter < max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * 1e-16 * std::abs(b) + 0.5 * x_tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0 || std::abs(fb) <= f_tol) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw solver_error("brent_root: no convergence", std::abs(fb), max_iter);
}

double pairwise_sum(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n <= 8) {
        double acc = 0.0;
        for (double v : values) acc += v;
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    out.back() = hi;
    return out;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    if (!(lo > 0.0 && hi > 0.0)) throw model_error("logspace requires positive endpoints");
    std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
    for (double& v : out) v = std::exp(v);
    out.front() = lo;
    out.back() = hi;
    return out;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers =
        std::min<std::size_t>(n, static_cast<std::size_t>(jobs));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed.store(true);
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace firmscale
