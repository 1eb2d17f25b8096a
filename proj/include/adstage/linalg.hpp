#pragma once

// Minimal dense symmetric solver for the IRLS normal equations.
// Systems here are tiny (features + intercept), so a hand-rolled Cholesky
// with diagonal jitter on failure is all that is needed.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace adstage::detail {

// Cholesky factorization A = L L^T in place; returns false if a pivot is
// not positive. `a` is row-major n x n, symmetric.
inline bool cholesky_inplace(std::vector<double>& a, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double ljj = std::sqrt(d);
        a[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / ljj;
        }
    }
    return true;
}

// Solve (A + jitter*I) x = b for symmetric positive semidefinite A.
// Jitter starts at zero and escalates until the factorization succeeds.
inline std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b) {
    const std::size_t n = b.size();
    if (a.size() != n * n) throw std::invalid_argument("solve_spd: shape mismatch");
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += a[i * n + i];
    double jitter = 0.0;
    std::vector<double> l;
    for (int attempt = 0; attempt < 16; ++attempt) {
        l = a;
        if (jitter > 0.0)
            for (std::size_t i = 0; i < n; ++i) l[i * n + i] += jitter;
        if (cholesky_inplace(l, n)) {
            // forward then back substitution
            std::vector<double> x = b;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < i; ++k) x[i] -= l[i * n + k] * x[k];
                x[i] /= l[i * n + i];
            }
            for (std::size_t ii = n; ii-- > 0;) {
                for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= l[k * n + ii] * x[k];
                x[ii] /= l[ii * n + ii];
            }
            return x;
        }
        jitter = jitter == 0.0 ? 1e-12 * (trace > 0.0 ? trace / double(n) : 1.0) : jitter * 100.0;
    }
    throw std::runtime_error("solve_spd: matrix not factorizable even with jitter");
}

}  // namespace adstage::detail
