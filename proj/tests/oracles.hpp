#pragma once

// Reference implementations for the tests. Written from the defining sums,
// with none of the library's indexing helpers, so a shared bug cannot hide.

#include <cmath>
#include <algorithm>
#include <cstddef>
#include <vector>

namespace oracle {

inline double spow(double x, double c) {
    const double mag = std::pow(std::fabs(x), c);
    return x < 0 ? -mag : mag;
}

/// (1/N) sum over every integer n with both nT+v and nT+v-h inside 1..len.
/// v is the raw season in 1..T, h is not wrapped.
inline double acvf(const std::vector<double>& x, std::size_t T, long long v, long long h,
                   double A, double B) {
    const long long len = static_cast<long long>(x.size());
    const long long t_ = static_cast<long long>(T);
    const long long N = len / t_;
    double sum = 0.0;
    for (long long n = -len - std::llabs(h) - 2; n <= len + std::llabs(h) + 2; ++n) {
        const long long t = n * t_ + v;
        const long long s = t - h;
        if (t < 1 || t > len || s < 1 || s > len) continue;
        sum += spow(x[t - 1], A) * spow(x[s - 1], B);
    }
    return sum / static_cast<double>(N);
}

/// Number of terms in the window, from the lb/rb formula evaluated in floating point.
inline long long window_terms(std::size_t len, std::size_t T, long long v, long long h) {
    const double t = static_cast<double>(T);
    const double nt = static_cast<double>(len);
    const double vd = static_cast<double>(v);
    const double hd = static_cast<double>(h);
    const double lb = std::max(std::ceil((1 - vd) / t), std::ceil((1 - (vd - hd)) / t));
    const double rb = std::min(std::floor((nt - vd) / t), std::floor((nt - (vd - hd)) / t));
    return rb >= lb ? static_cast<long long>(rb - lb + 1) : 0;
}

inline long long wrap(long long s, std::size_t T) {
    const long long t = static_cast<long long>(T);
    return ((s - 1) % t + t) % t + 1;
}

/// Classical zero-mean periodic autocovariance gamma_v(h), biased (divisor N).
inline double classical_peacvf(const std::vector<double>& x, std::size_t T, long long v,
                               long long h) {
    const std::size_t N = x.size() / T;
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (static_cast<long long>(i % T) + 1 != v) continue;
        const long long j = static_cast<long long>(i) - h;
        if (j < 0 || j >= static_cast<long long>(x.size())) continue;
        sum += x[i] * x[static_cast<std::size_t>(j)];
    }
    return sum / static_cast<double>(N);
}

inline double classical_peacf(const std::vector<double>& x, std::size_t T, long long v,
                              long long h) {
    return classical_peacvf(x, T, v, h) /
           std::sqrt(classical_peacvf(x, T, v, 0) * classical_peacvf(x, T, wrap(v - h, T), 0));
}

inline double acf(const std::vector<double>& x, std::size_t T, long long v, long long h,
                  double A, double B) {
    const double s = A + B;
    return acvf(x, T, v, h, A, B) / (std::pow(acvf(x, T, v, 0, A, B), A / s) *
                                     std::pow(acvf(x, T, wrap(v - h, T), 0, A, B), B / s));
}

/// Gauss-Jordan with partial pivoting; last component of the solution.
inline double last_of_solution(std::vector<std::vector<double>> m, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
        }
        std::swap(m[c], m[piv]);
        std::swap(rhs[c], rhs[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    return rhs[n - 1] / m[n - 1][n - 1];
}

/// peFLOPACF from eta entries (A = 1).
inline double pacf(const std::vector<double>& x, std::size_t T, long long v, long long h,
                   double B) {
    std::vector<std::vector<double>> m(h, std::vector<double>(h));
    std::vector<double> rhs(h);
    for (long long i = 1; i <= h; ++i) {
        for (long long j = 1; j <= h; ++j) m[i - 1][j - 1] = acf(x, T, wrap(v - j, T), i - j, 1.0, B);
        rhs[i - 1] = acf(x, T, v, i, 1.0, B);
    }
    return last_of_solution(m, rhs);
}

/// Same system with raw psi entries.
inline double pacf_acvf(const std::vector<double>& x, std::size_t T, long long v, long long h,
                        double B) {
    std::vector<std::vector<double>> m(h, std::vector<double>(h));
    std::vector<double> rhs(h);
    for (long long i = 1; i <= h; ++i) {
        for (long long j = 1; j <= h; ++j) m[i - 1][j - 1] = acvf(x, T, wrap(v - j, T), i - j, 1.0, B);
        rhs[i - 1] = acvf(x, T, v, i, 1.0, B);
    }
    return last_of_solution(m, rhs);
}

/// Empirical characteristic function Re E[exp(isX)] and its MC standard error.
struct EcfPoint {
    double value;
    double se;
};

inline EcfPoint ecf(const std::vector<double>& x, double s) {
    double sum = 0.0, sq = 0.0;
    for (double xi : x) {
        const double c = std::cos(s * xi);
        sum += c;
        sq += c * c;
    }
    const double n = static_cast<double>(x.size());
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    return {mean, std::sqrt(var / n)};
}

inline bool close_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace oracle
