#pragma once

#include <array>
#include <vector>

#include "ncrg/numerics.hpp"

namespace ncrg {

// Model parameters shared by the kernel evaluations. omega is the oscillator
// strength in [0,1], b_field the angular-momentum coupling, mass the mass (and
// mu_0 of the matrix formulas), slice_base the geometric slice ratio M.
struct KernelParams {
    double theta = 1.0;
    double omega = 0.8;
    double b_field = 0.0;
    double mass = 1.0;
    double slice_base = 2.0;
    int dimension = 2;

    double omega_tilde() const { return 2.0 * omega / theta; }
    double big_c() const { return (1.0 - omega) * (1.0 - omega) / (4.0 * omega); }
};

// ---------------------------------------------------------------------------
// x-space kernels
// ---------------------------------------------------------------------------

// Operator-level parameters of H = (-Lap + Omega^2 x^2 - 2iB(x0 d1 - x1 d0))/2.
struct OscillatorParams {
    double omega = 1.0;
    double b = 0.0;
    double mass = 0.0;  // adds exp(-t m^2)
};

// Kernel of exp(-t(H + m^2)) at fixed t > 0; complex for b != 0.
cplx mehler_kernel(const Vec2& x, const Vec2& y, double t, const OscillatorParams& p);

// Integrated kernel int_0^infty dt. Refuses m = 0 with omega = 0.
cplx mehler_integrated(const Vec2& x, const Vec2& y, const OscillatorParams& p);

// Four-dimensional magnetic kernel with harmonic term (fixed t); reduces to
// the product of two plain oscillator kernels at b = 0.
cplx lsz_kernel(const std::array<double, 4>& x, const std::array<double, 4>& y, double t,
                double omega_op, double b_op);

// Gross-Neveu x-space propagator on the Moyal plane, 2x2 spinor value.
Mat2 gn_x_kernel_t(const Vec2& x, const Vec2& y, double t, const KernelParams& p);
// Slice integral over t in [M^{-2i}, M^{-2(i-1)}] (slice 0 = [1, inf)).
Mat2 gn_x_slice(const Vec2& x, const Vec2& y, int slice, const KernelParams& p);
// Full t-integral; requires x != y.
Mat2 gn_propagator_x(const Vec2& x, const Vec2& y, const KernelParams& p);

// ---------------------------------------------------------------------------
// Matrix-base kernels
// ---------------------------------------------------------------------------

// Conserved matrix indices, one entry per symplectic pair (pairs = D/2).
struct MatrixIndex4 {
    int pairs = 1;
    std::array<int, 2> m{0, 0}, n{0, 0}, k{0, 0}, l{0, 0};

    static MatrixIndex4 d2(int m, int n, int k, int l) { return {1, {m, 0}, {n, 0}, {k, 0}, {l, 0}}; }
};
bool index_conserved(const MatrixIndex4& idx);

// Quadratic form of the vulcanized model: diagonal
// mu0^2 + sum_s [(2/theta)(1+Omega^2)(2m_s+h_s+1) - 4 B h_s/theta] with the
// (1-Omega^2) nearest-neighbour band per pair. Strictly diagonal at Omega=1.
double matrix_delta(const MatrixIndex4& idx, const KernelParams& p);

// Meixner-form inverse as the alpha-integral; slice < 0 integrates over the
// whole range, slice i >= 1 over [M^{-2i}, M^{-2(i-1)}]. Refuses Omega = 0.
double matrix_propagator(const MatrixIndex4& idx, const KernelParams& p, int slice = -1);

// Free (Omega = 0) matrix propagator from the heat-kernel closed form,
// integrated over all Schwinger times.
double free_matrix_propagator(const MatrixIndex4& idx, const KernelParams& p);

// Gross-Neveu matrix kernel in a slice (D = 2): 2x2 spinor value at indices
// (m, n; k, l) with |m + k - n - l| <= 1.
Mat2 gn_matrix_slice(int m, int n, int k, int l, int slice, const KernelParams& p);

// ---------------------------------------------------------------------------
// Slice-bound scans
// ---------------------------------------------------------------------------

enum class SliceModel { Phi4Matrix, Phi4MatrixOmega0, GnMatrix };

struct SliceBoundRow {
    int slice = 0;
    double max_abs = 0;     // delta_0 scan
    double summed_max = 0;  // delta_1 scan
};

struct SliceBoundReport {
    SliceModel model;
    std::vector<SliceBoundRow> rows;
    double delta0_hat = 0;
    double delta1_hat = 0;
    double k0_cv = 0;  // prefactor coefficient of variation at claimed exponents
    double k1_cv = 0;
    double delta0_expected = 0;
    double delta1_expected = 0;
};

// Scaling-exponent scan. Phi4 models run in D = 4, Gross-Neveu in D = 2.
// Phi4Matrix and GnMatrix slice the alpha integral; the free model, whose
// alpha parametrization degenerates, is scanned over geometric index shells
// of the full propagator.
SliceBoundReport slice_bound_report(const KernelParams& p, int i_lo, int i_hi,
                                    SliceModel model);

// ---------------------------------------------------------------------------
// Tadpoles
// ---------------------------------------------------------------------------

struct TadpoleComparison {
    double closed_form = 0;
    double quadrature = 0;
    double rel_err = 0;
};

// Nonplanar tadpole at external momentum |p|: Bessel-K1 closed form against
// the Schwinger-parameter quadrature.
TadpoleComparison nonplanar_tadpole(double p, double mass, double theta, double lambda);

enum class GnTadpoleKind { PlanarRegular, PlanarSingular, Nonplanar };

// Amputated tadpole coefficient with Schwinger cutoff t >= M^{-2 rho}.
// Planar kinds grow affinely in rho; the nonplanar kind converges.
double gn_tadpole_coefficient(GnTadpoleKind kind, const KernelParams& p, int rho);

// ---------------------------------------------------------------------------
// Clifford algebra and Fierz decomposition
// ---------------------------------------------------------------------------

Mat2 gamma0();
Mat2 gamma1();
// Basis {1, gamma0, gamma1, gamma0 gamma1}.
Mat2 gamma_basis(int a);

std::array<cplx, 4> fierz_decompose(const Mat2& m);
Mat2 fierz_reconstruct(const std::array<cplx, 4>& coeffs);

// Recomputes the interaction tables g^1, g^2, g^3 from the spinor
// contraction patterns; returned matrices are exact small integers.
std::array<std::array<double, 4>, 4> fierz_g_matrix(int which);

}  // namespace ncrg
