#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace ncrg {

using cplx = std::complex<double>;

struct Vec2 {
    double v[2]{0.0, 0.0};
    double& operator[](int i) { return v[i]; }
    double operator[](int i) const { return v[i]; }
    Vec2 operator+(const Vec2& o) const { return {{v[0] + o.v[0], v[1] + o.v[1]}}; }
    Vec2 operator-(const Vec2& o) const { return {{v[0] - o.v[0], v[1] - o.v[1]}}; }
    Vec2 operator*(double s) const { return {{v[0] * s, v[1] * s}}; }
    double dot(const Vec2& o) const { return v[0] * o.v[0] + v[1] * o.v[1]; }
    double cross(const Vec2& o) const { return v[0] * o.v[1] - v[1] * o.v[0]; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

// 2x2 complex matrix, used for spinor kernels.
struct Mat2 {
    cplx e[2][2]{{0.0, 0.0}, {0.0, 0.0}};

    static Mat2 identity() { return {{{1.0, 0.0}, {0.0, 1.0}}}; }
    static Mat2 zero() { return {}; }

    Mat2 operator+(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][j] + o.e[i][j];
        return r;
    }
    Mat2 operator-(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][j] - o.e[i][j];
        return r;
    }
    Mat2 operator*(const Mat2& o) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                r.e[i][j] = e[i][0] * o.e[0][j] + e[i][1] * o.e[1][j];
        return r;
    }
    Mat2 operator*(cplx s) const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.e[i][j] = e[i][j] * s;
        return r;
    }
    Mat2& operator+=(const Mat2& o) {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) e[i][j] += o.e[i][j];
        return *this;
    }
    cplx trace() const { return e[0][0] + e[1][1]; }
    Mat2 adjoint() const {
        return {{{std::conj(e[0][0]), std::conj(e[1][0])},
                 {std::conj(e[0][1]), std::conj(e[1][1])}}};
    }
    double max_abs() const {
        double m = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) m = std::max(m, std::abs(e[i][j]));
        return m;
    }
};

// Nodes/weights of an n-point Gauss-Legendre rule on [-1,1].
struct GaussRule {
    std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Integrate f over [a,b] with a fixed composite Gauss-Legendre rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int nodes = 32, int panels = 1);
cplx integrate_gl_c(const std::function<cplx(double)>& f, double a, double b,
                    int nodes = 32, int panels = 1);

// Adaptive bisection on top of Gauss-Legendre; absolute+relative tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_depth = 24);

// log(sum of exp(terms)) for positive accumulations given in log space.
double log_sum_exp(const std::vector<double>& logs);

// log of binomial coefficient via lgamma.
double log_binomial(double n, double k);

// Least-squares line fit y = slope*x + intercept; returns {slope, intercept, r2}.
struct LineFit {
    double slope = 0, intercept = 0, r2 = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Determinant of a dense real matrix by partial-pivot LU.
double lu_determinant(std::vector<std::vector<double>> a);

// Rank over the rationals of an integer matrix (Bareiss fraction-free elimination).
int integer_matrix_rank(std::vector<std::vector<long long>> a);

}  // namespace ncrg
