#pragma once

#include <functional>
#include <vector>

#include "ncrg/numerics.hpp"

namespace ncrg {

// Truncated coefficient matrix of a Moyal-algebra element in the f_mn basis.
struct MatrixBaseElement {
    int trunc = 0;
    double theta = 1.0;
    std::vector<cplx> a;  // trunc x trunc, row-major

    static MatrixBaseElement zero(int trunc, double theta);
    static MatrixBaseElement unit(int trunc, double theta, int m, int n);
    static MatrixBaseElement identity(int trunc, double theta);

    cplx& at(int m, int n) { return a[m * trunc + n]; }
    cplx at(int m, int n) const { return a[m * trunc + n]; }
    bool hermitian(double tol = 1e-12) const;
    MatrixBaseElement adjoint() const;
};

// Star product as plain matrix multiplication; requires equal theta and
// truncation.
MatrixBaseElement star_matrix(const MatrixBaseElement& A, const MatrixBaseElement& B);

// Pointwise basis function f_mn(x) built by the creation/annihilation
// polynomial recursion on the fundamental Gaussian.
cplx fmn_eval(int m, int n, const Vec2& x, double theta);

// (H_1 star f_mn)(x) or (f_mn star H_1)(x) with H_1 = |x|^2 / 2.
cplx h_star_fmn(int m, int n, const Vec2& x, double theta, bool left);

// Pointwise value of a truncated element.
cplx element_eval(const MatrixBaseElement& A, const Vec2& x);

struct GridSpec {
    int points = 256;
    double half_width = 0;  // 0 = default sqrt(theta) * (4 + sqrt(2 trunc))
};

// Coefficients a_mn = (2 pi theta)^{-1} int f(x) f_nm(x) dx on a trapezoid
// grid resolving the sqrt(theta) scale.
MatrixBaseElement decompose(const std::function<cplx(const Vec2&)>& f, double theta, int trunc,
                            const GridSpec& grid = {});

// Integral form of the star product, evaluated by tensor quadrature; the
// independent oracle for star_matrix.
cplx star_x(const std::function<cplx(const Vec2&)>& f, const std::function<cplx(const Vec2&)>& g,
            const Vec2& x, double theta, double half_width = 0, int nodes = 40);

// int phi^{star 4} = 2 pi theta Tr(A^4) for a hermitian (real-field) element.
double quartic_trace(const MatrixBaseElement& A);

}  // namespace ncrg
