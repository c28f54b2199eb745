#include "ncrg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ncrg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

const cplx I1{0.0, 1.0};

// log-factorial table
double log_fact(int n) {
    static std::vector<double> table = [] {
        std::vector<double> t(400001);
        t[0] = 0.0;
        for (size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] + std::log(double(i));
        return t;
    }();
    if (n < 0) return -std::numeric_limits<double>::infinity();
    if (n < static_cast<int>(table.size())) return table[n];
    return std::lgamma(double(n) + 1.0);
}

double log_binom(int n, int k) {
    if (k < 0 || k > n || n < 0) return -std::numeric_limits<double>::infinity();
    return log_fact(n) - log_fact(k) - log_fact(n - k);
}

// log sum_{u=u0..u1} exp(lg(u)) for log-concave lg, summing a window around
// the maximum.
template <typename F>
double log_concave_sum(int u0, int u1, F&& lg) {
    if (u1 < u0) return -std::numeric_limits<double>::infinity();
    int lo = u0, hi = u1;
    while (hi - lo > 2) {
        int m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (lg(m1) < lg(m2))
            lo = m1 + 1;
        else
            hi = m2;
    }
    int ustar = lo;
    double best = lg(lo);
    for (int u = lo + 1; u <= hi; ++u)
        if (lg(u) > best) {
            best = lg(u);
            ustar = u;
        }
    if (!std::isfinite(best)) return best;
    double sum = 1.0;
    for (int u = ustar - 1; u >= u0; --u) {
        double d = lg(u) - best;
        if (d < -45.0) break;
        sum += std::exp(d);
    }
    for (int u = ustar + 1; u <= u1; ++u) {
        double d = lg(u) - best;
        if (d < -45.0) break;
        sum += std::exp(d);
    }
    return best + std::log(sum);
}

// Integrate f over [lo, hi] in alpha with the substitution alpha = 1 - s^2,
// which tames the (1-alpha)^{p} endpoint with p in (-1, 0).
template <typename F>
double integrate_alpha(double lo, double hi, F&& f, int nodes, int panels) {
    // alpha = 1 - s^2 with panels graded cubically toward s = 0, where the
    // remaining fractional endpoint power sits.
    double s_lo = std::sqrt(std::max(0.0, 1.0 - hi));
    double s_hi = std::sqrt(1.0 - lo);
    const GaussRule& r = gauss_legendre(nodes);
    double total = 0;
    for (int p = 0; p < panels; ++p) {
        double fa = double(p) / panels, fb = double(p + 1) / panels;
        double a = s_lo + (s_hi - s_lo) * fa * fa * fa;
        double b = s_lo + (s_hi - s_lo) * fb * fb * fb;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0;
        for (int q = 0; q < nodes; ++q) {
            double s = mid + half * r.x[q];
            acc += r.w[q] * f(1.0 - s * s) * 2.0 * s;
        }
        total += acc * half;
    }
    return total;
}

template <typename F>
Mat2 integrate_alpha_mat(double lo, double hi, F&& f, int nodes, int panels) {
    double s_lo = std::sqrt(std::max(0.0, 1.0 - hi));
    double s_hi = std::sqrt(1.0 - lo);
    const GaussRule& r = gauss_legendre(nodes);
    Mat2 total;
    double h = (s_hi - s_lo) / panels;
    for (int p = 0; p < panels; ++p) {
        double a = s_lo + p * h, mid = a + 0.5 * h, half = 0.5 * h;
        for (int q = 0; q < nodes; ++q) {
            double s = mid + half * r.x[q];
            total += f(1.0 - s * s) * (r.w[q] * 2.0 * s * half);
        }
    }
    return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// x-space kernels
// ---------------------------------------------------------------------------

cplx mehler_kernel(const Vec2& x, const Vec2& y, double t, const OscillatorParams& p) {
    if (t <= 0) fail("mehler_kernel: t must be positive");
    double w = p.omega;
    if (w == 0.0) {
        // heat-kernel limit of H = -Lap/2
        double pref = 1.0 / (2.0 * M_PI * t);
        return pref * std::exp(-(x - y).norm2() / (2.0 * t) - t * p.mass * p.mass);
    }
    double sh = std::sinh(w * t), ch = std::cosh(w * t);
    double chb = std::cosh(p.b * t), shb = std::sinh(p.b * t);
    cplx a = (w * ch / (2.0 * sh)) * (x.norm2() + y.norm2()) - (w * chb / sh) * x.dot(y) -
             I1 * (w * shb / sh) * x.cross(y);
    return (w / (2.0 * M_PI * sh)) * std::exp(-a - t * p.mass * p.mass);
}

cplx mehler_integrated(const Vec2& x, const Vec2& y, const OscillatorParams& p) {
    if (p.omega == 0.0 && p.mass == 0.0)
        throw std::runtime_error("mehler_integrated: divergent at omega = 0 with zero mass");
    double rate = p.omega + p.mass * p.mass;
    double t_hi = 45.0 / rate;
    // log-spaced panels handle the short-time heat peak
    double lo = 1e-9;
    cplx total = 0;
    int panels = 28;
    double step = std::log(t_hi / lo) / panels;
    for (int q = 0; q < panels; ++q) {
        double a = lo * std::exp(q * step), b = lo * std::exp((q + 1) * step);
        total += integrate_gl_c([&](double t) { return mehler_kernel(x, y, t, p); }, a, b, 24);
    }
    return total;
}

cplx lsz_kernel(const std::array<double, 4>& x, const std::array<double, 4>& y, double t,
                double w, double b) {
    if (t <= 0 || w <= 0) fail("lsz_kernel: t and omega must be positive");
    double sh = std::sinh(w * t), ch = std::cosh(w * t);
    double chb = std::cosh(b * t), shb = std::sinh(b * t);
    double d2 = 0, s2 = 0, wedge = 0;
    for (int i = 0; i < 4; ++i) {
        d2 += (x[i] - y[i]) * (x[i] - y[i]);
        s2 += x[i] * x[i] + y[i] * y[i];
    }
    wedge = x[0] * y[1] - x[1] * y[0] + x[2] * y[3] - x[3] * y[2];
    cplx expo = (w / 2.0) * ((chb / sh) * d2 + ((ch - chb) / sh) * s2) +
                I1 * (w / 2.0) * (shb / sh) * wedge;
    double pref = w * w / std::pow(2.0 * M_PI * sh, 2.0);
    return pref * std::exp(-expo);
}

Mat2 gn_x_kernel_t(const Vec2& x, const Vec2& y, double t, const KernelParams& p) {
    if (t <= 0) fail("gn_x_kernel_t: t must be positive");
    double wt = p.omega_tilde();
    if (wt <= 0) fail("gn_x_kernel_t: omega must be positive");
    double sh = std::sinh(2.0 * wt * t), ch = std::cosh(2.0 * wt * t);
    double coth = ch / sh;
    Vec2 u = x - y;
    double scalar_pref = -(p.omega / (p.theta * M_PI)) * std::exp(-t * p.mass * p.mass) / sh *
                         std::exp(-0.5 * wt * coth * u.norm2());
    // The orientation of the oscillation phase and of the spin rotation is
    // fixed by the operator check: with these signs the integrated kernel
    // inverts -i dslash + Omega xtilde-slash + m in this representation.
    cplx phase = std::exp(-I1 * wt * x.cross(y));
    Mat2 slash;
    // i wt coth (u0 g0 + u1 g1) + wt (u1 g0 - u0 g1) - m
    slash += gamma0() * (I1 * wt * coth * u[0] + wt * u[1]);
    slash += gamma1() * (I1 * wt * coth * u[1] - wt * u[0]);
    slash += Mat2::identity() * cplx(-p.mass, 0.0);
    Mat2 rot = Mat2::identity() * cplx(ch, 0.0) + (gamma0() * gamma1()) * (I1 * sh);
    return (slash * rot) * (scalar_pref * phase);
}

Mat2 gn_x_slice(const Vec2& x, const Vec2& y, int slice, const KernelParams& p) {
    double M = p.slice_base;
    double lo, hi;
    if (slice == 0) {
        lo = 1.0;
        hi = 1.0 + 45.0 / (p.mass * p.mass + 2.0 * p.omega_tilde());
    } else {
        lo = std::pow(M, -2.0 * slice);
        hi = std::pow(M, -2.0 * (slice - 1));
    }
    const GaussRule& r = gauss_legendre(32);
    Mat2 total;
    int panels = 3;
    double h = (hi - lo) / panels;
    for (int q = 0; q < panels; ++q) {
        double a = lo + q * h, mid = a + 0.5 * h, half = 0.5 * h;
        for (int j = 0; j < 32; ++j)
            total += gn_x_kernel_t(x, y, mid + half * r.x[j], p) * cplx(r.w[j] * half, 0.0);
    }
    return total;
}

Mat2 gn_propagator_x(const Vec2& x, const Vec2& y, const KernelParams& p) {
    double dist = (x - y).norm();
    if (dist <= 0) fail("gn_propagator_x: x != y required");
    double M = p.slice_base;
    int i_top = std::max(1, static_cast<int>(std::ceil(std::log(50.0 / dist) / std::log(M))));
    Mat2 total;
    for (int i = 0; i <= i_top; ++i) total += gn_x_slice(x, y, i, p);
    return total;
}

// ---------------------------------------------------------------------------
// Matrix kernels
// ---------------------------------------------------------------------------

bool index_conserved(const MatrixIndex4& idx) {
    for (int s = 0; s < idx.pairs; ++s)
        if (idx.m[s] + idx.k[s] != idx.n[s] + idx.l[s]) return false;
    return true;
}

double matrix_delta(const MatrixIndex4& idx, const KernelParams& p) {
    if (!index_conserved(idx)) fail("matrix_delta: index conservation violated");
    double th = p.theta, om = p.omega, B = p.b_field;
    int off_pair = -1;
    for (int s = 0; s < idx.pairs; ++s) {
        bool diag = idx.m[s] == idx.l[s] && idx.n[s] == idx.k[s];
        if (diag) continue;
        if (off_pair >= 0) return 0.0;
        off_pair = s;
    }
    if (off_pair < 0) {
        double v = p.mass * p.mass;
        for (int s = 0; s < idx.pairs; ++s) {
            int h = idx.n[s] - idx.m[s];
            v += (2.0 / th) * (1.0 + om * om) * (2.0 * idx.m[s] + h + 1.0) - 4.0 * B * h / th;
        }
        return v;
    }
    int s = off_pair;
    int m = idx.m[s], n = idx.n[s];
    if (idx.l[s] == m + 1 && idx.k[s] == n + 1)
        return -(2.0 / th) * (1.0 - om * om) * std::sqrt(double(m + 1) * double(n + 1));
    if (idx.l[s] == m - 1 && idx.k[s] == n - 1)
        return -(2.0 / th) * (1.0 - om * om) * std::sqrt(double(m) * double(n));
    return 0.0;
}

namespace {

// log of the per-pair Meixner factor G^(alpha)(m, l, h); guards negative
// indices. lsq = log(sqrt(1-alpha)/(1+C alpha)), lx = log X.
double log_pair_factor(int m, int l, int h, double lsq, double lx, bool x_zero) {
    if (m < 0 || l < 0 || m + h < 0 || l + h < 0)
        return -std::numeric_limits<double>::infinity();
    int u0 = std::max(0, -h), u1 = std::min(m, l);
    if (u1 < u0) return -std::numeric_limits<double>::infinity();
    double base = (m + l + h) * lsq;
    if (x_zero) {
        // only the exponent-zero term survives
        if (m != l) return -std::numeric_limits<double>::infinity();
        return base;  // A(m, m, h, m) = 1
    }
    double ls = log_concave_sum(u0, u1, [&](int u) {
        return 0.5 * (log_binom(m, m - u) + log_binom(m + h, m - u) + log_binom(l, l - u) +
                      log_binom(l + h, l - u)) +
               (m + l - 2 * u) * lx;
    });
    return base + ls;
}

struct AlphaPieces {
    double lsq, lx;
    bool x_zero;
    double log_one_minus;
};

AlphaPieces alpha_pieces(double alpha, const KernelParams& p) {
    double C = p.big_c();
    AlphaPieces a;
    a.log_one_minus = std::log1p(-alpha);
    a.lsq = 0.5 * a.log_one_minus - std::log1p(C * alpha);
    double X = C * alpha * (1.0 + p.omega) / (std::sqrt(1.0 - alpha) * (1.0 - p.omega));
    a.x_zero = !(X > 0.0) || p.omega == 1.0;
    a.lx = a.x_zero ? -std::numeric_limits<double>::infinity() : std::log(X);
    return a;
}

}  // namespace

double matrix_propagator(const MatrixIndex4& idx, const KernelParams& p, int slice) {
    if (p.omega <= 0.0) fail("matrix_propagator: formula singular at omega = 0");
    if (!index_conserved(idx)) fail("matrix_propagator: index conservation violated");
    int D = p.dimension;
    if (D != 2 * idx.pairs) fail("matrix_propagator: dimension / pairs mismatch");
    double th = p.theta, om = p.omega, B = p.b_field;
    double C = p.big_c();
    double e0 = p.mass * p.mass * th / (8.0 * om) + D / 4.0 - 1.0;
    double M = p.slice_base;
    double lo = 0.0, hi = 1.0;
    if (slice >= 1) {
        lo = std::pow(M, -2.0 * slice);
        hi = std::pow(M, -2.0 * (slice - 1));
    }
    // total h for the angular-momentum factor
    int h_total = 0;
    for (int s = 0; s < idx.pairs; ++s) h_total += idx.n[s] - idx.m[s];

    auto integrand = [&](double alpha) -> double {
        AlphaPieces a = alpha_pieces(alpha, p);
        double lg = e0 * a.log_one_minus - (D / 2.0) * std::log1p(C * alpha);
        lg += -(B * h_total / (2.0 * om)) * a.log_one_minus;
        for (int s = 0; s < idx.pairs; ++s) {
            int h = idx.n[s] - idx.m[s];
            lg += log_pair_factor(idx.m[s], idx.l[s], h, a.lsq, a.lx, a.x_zero);
        }
        return std::isfinite(lg) ? std::exp(lg) : 0.0;
    };
    return (th / (8.0 * om)) * integrate_alpha(lo, hi, integrand, 48, 6);
}

double free_matrix_propagator(const MatrixIndex4& idx, const KernelParams& p) {
    if (!index_conserved(idx)) fail("free_matrix_propagator: index conservation violated");
    int D = 2 * idx.pairs;
    double mu2 = p.mass * p.mass, th = p.theta;
    auto integrand_log_t = [&](double lt) -> double {
        double t = std::exp(lt);
        double tau = 2.0 * t / th;
        double ltau = std::log(tau);
        double lg = -mu2 * t - (D / 2.0) * std::log1p(tau) + lt;  // + lt: dt = t dlt
        for (int s = 0; s < idx.pairs; ++s) {
            int m = idx.m[s], l = idx.l[s], h = idx.n[s] - idx.m[s];
            if (m < 0 || l < 0 || m + h < 0 || l + h < 0) return 0.0;
            int u0 = std::max(0, -h), u1 = std::min(m, l);
            double ls = log_concave_sum(u0, u1, [&](int u) {
                return 0.5 * (log_binom(m, m - u) + log_binom(m + h, m - u) +
                              log_binom(l, l - u) + log_binom(l + h, l - u)) +
                       (m + l - 2 * u) * ltau;
            });
            lg += ls - (m + l + h) * std::log1p(tau);
        }
        return std::isfinite(lg) ? std::exp(lg) : 0.0;
    };
    double a = std::log(1e-8), b = std::log(60.0 / std::max(mu2, 1e-2));
    return integrate_gl(integrand_log_t, a, b, 32, 12);
}

Mat2 gn_matrix_slice(int m, int n, int k, int l, int slice, const KernelParams& p) {
    if (p.omega <= 0.0 || p.omega >= 1.0)
        fail("gn_matrix_slice: omega in (0,1) required");
    double th = p.theta, om = p.omega;
    double wt = p.omega_tilde();
    double C = p.big_c();
    double mu = p.mass;
    double M = p.slice_base;
    double lo = std::pow(M, -2.0 * slice), hi = std::pow(M, -2.0 * (slice - 1));
    if (slice < 1) fail("gn_matrix_slice: slice >= 1 required");
    double cpre = 2.0 * M_PI * th * std::sqrt(th / 8.0);

    auto gamma_entry = [&](int a, int b, int c, int d, const AlphaPieces& ap) -> double {
        if (a < 0 || b < 0 || c < 0 || d < 0) return 0.0;
        if (a + c != b + d) return 0.0;
        int h = b - a;
        // B = Omega: angular factor (1-alpha)^{-h/2}
        double lg = log_pair_factor(a, d, h, ap.lsq, ap.lx, ap.x_zero) -
                    0.5 * h * ap.log_one_minus;
        return std::isfinite(lg) ? std::exp(lg) : 0.0;
    };

    auto integrand = [&](double alpha) -> Mat2 {
        AlphaPieces ap = alpha_pieces(alpha, p);
        double w = std::exp((mu * mu * th / (8.0 * om) - 0.5) * ap.log_one_minus) /
                   (1.0 + C * alpha);
        double g_pp = gamma_entry(m + 1, n, k, l, ap);
        double g_lm = gamma_entry(m, n, k, l - 1, ap);
        double g_mm = gamma_entry(m - 1, n, k, l, ap);
        double g_lp = gamma_entry(m, n, k, l + 1, ap);
        double g_np = gamma_entry(m, n + 1, k, l, ap);
        double g_km = gamma_entry(m, n, k - 1, l, ap);
        double g_nm = gamma_entry(m, n - 1, k, l, ap);
        double g_kp = gamma_entry(m, n, k + 1, l, ap);
        double sm = std::sqrt(double(m)), sm1 = std::sqrt(double(m + 1));
        double sl = std::sqrt(double(l)), sl1 = std::sqrt(double(l + 1));
        double sn = std::sqrt(double(n)), sn1 = std::sqrt(double(n + 1));
        double sk = std::sqrt(double(k)), sk1 = std::sqrt(double(k + 1));
        cplx x0 = cpre * (sm1 * g_pp - sl * g_lm + sm * g_mm - sl1 * g_lp + sn1 * g_np -
                          sk * g_km + sn * g_nm - sk1 * g_kp);
        cplx x1 = I1 * cpre *
                  (sm1 * g_pp - sl * g_lm - sm * g_mm + sl1 * g_lp - sn1 * g_np + sk * g_km +
                   sn * g_nm - sk1 * g_kp);
        Mat2 core;
        cplx comm_pref = I1 * wt * (2.0 - alpha) / alpha;
        core += gamma0() * (comm_pref * x0 + wt * x1);
        core += gamma1() * (comm_pref * x1 - wt * x0);
        core += Mat2::identity() * cplx(-mu * gamma_entry(m, n, k, l, ap), 0.0);
        double isq = 1.0 / std::sqrt(1.0 - alpha);
        Mat2 right = Mat2::identity() * cplx((2.0 - alpha) * 0.5 * isq, 0.0) +
                     (gamma0() * gamma1()) * (I1 * alpha * 0.5 * isq);
        return (core * right) * cplx(w, 0.0);
    };
    Mat2 out = integrate_alpha_mat(lo, hi, integrand, 24, 2);
    return out * cplx(-2.0 * om / (th * th * M_PI * M_PI), 0.0);
}

// ---------------------------------------------------------------------------
// Slice-bound scans
// ---------------------------------------------------------------------------

namespace {

std::vector<int> k_grid(double center, int extra_low) {
    std::vector<int> ks;
    for (int k = 0; k <= extra_low; ++k) ks.push_back(k);
    for (double f : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        int k = static_cast<int>(center * f);
        if (k > extra_low) ks.push_back(k);
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

std::vector<int> h_window_gn(int k, double C) {
    std::vector<int> hs;
    for (int h = 0; h <= 6; ++h) hs.push_back(h);
    int hstar = static_cast<int>(k / (1.0 + C));
    int w = std::max(1, k / 16);
    for (int j = -4; j <= 4; ++j) {
        int h = hstar + j * w;
        if (h >= 0 && h <= k) hs.push_back(h);
    }
    for (double f : {0.25, 0.5, 0.75}) hs.push_back(static_cast<int>(k * f));
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
}

}  // namespace

SliceBoundReport slice_bound_report(const KernelParams& p, int i_lo, int i_hi,
                                    SliceModel model) {
    SliceBoundReport rep;
    rep.model = model;
    double M = p.slice_base;
    KernelParams local = p;

    // per-(k,p,h,slice) evaluation of |G^i|
    auto eval = [&](int k, int pp, int h, int slice) -> double {
        int m = k - h - pp, n = k - pp, l = k - h;
        if (m < 0 || n < 0 || l < 0) return 0.0;
        switch (model) {
            case SliceModel::Phi4Matrix: {
                local.dimension = 4;
                MatrixIndex4 idx{2, {m, 0}, {n, 0}, {k, 0}, {l, 0}};
                return std::abs(matrix_propagator(idx, local, slice));
            }
            case SliceModel::Phi4MatrixOmega0: {
                MatrixIndex4 idx{2, {m, 0}, {n, 0}, {k, 0}, {l, 0}};
                return std::abs(free_matrix_propagator(idx, local));
            }
            case SliceModel::GnMatrix: {
                double best = 0;
                for (int shift = -1; shift <= 1; ++shift) {
                    if (n + shift < 0) continue;
                    best = std::max(best,
                                    gn_matrix_slice(m, n + shift, k, l, slice, local).max_abs());
                }
                return best;
            }
        }
        return 0.0;
    };

    switch (model) {
        case SliceModel::Phi4Matrix:
            rep.delta0_expected = 2;
            rep.delta1_expected = 2;
            break;
        case SliceModel::Phi4MatrixOmega0:
            rep.delta0_expected = 1;
            rep.delta1_expected = 0;
            break;
        case SliceModel::GnMatrix:
            rep.delta0_expected = 1;
            rep.delta1_expected = 1;
            break;
    }

    double C = p.big_c();
    for (int i = i_lo; i <= i_hi; ++i) {
        double shell = std::pow(M, 2.0 * i);
        // ---- delta_0 scan: max over indices
        double d0 = 0;
        std::vector<int> ks;
        if (model == SliceModel::Phi4MatrixOmega0) {
            // index shells of the full propagator
            for (double f = std::pow(M, 2.0 * (i - 1)); f <= shell; f *= 1.45)
                ks.push_back(static_cast<int>(f));
        } else {
            ks = k_grid(shell, 4);
        }
        for (int k : ks) {
            std::vector<int> hs = (model == SliceModel::GnMatrix)
                                      ? h_window_gn(k, C)
                                      : std::vector<int>{0, 1, 2, std::max(0, k / 2)};
            for (int h : hs)
                for (int pp = 0; pp <= 4; ++pp) d0 = std::max(d0, eval(k, pp, h, i));
        }
        // ---- delta_1 scan: max_k sum_p max_h
        double d1 = 0;
        std::vector<int> ks1;
        if (model == SliceModel::Phi4MatrixOmega0) {
            ks1.push_back(static_cast<int>(std::pow(M, 2.0 * i - 1)));
        } else {
            ks1 = {0, static_cast<int>(shell / 4), static_cast<int>(shell / 2),
                   static_cast<int>(shell)};
        }
        for (int k : ks1) {
            double sum = 0;
            std::vector<int> hs = (model == SliceModel::GnMatrix)
                                      ? h_window_gn(k, C)
                                      : std::vector<int>{0, 1, 2};
            for (int pp = 0; pp <= std::max(k, 8); ++pp) {
                double best = 0;
                for (int h : hs) best = std::max(best, eval(k, pp, h, i));
                sum += best;
                if (pp > 8 && best < 1e-9 * sum) break;
            }
            d1 = std::max(d1, sum);
        }
        rep.rows.push_back({i, d0, d1});
    }

    std::vector<double> xs, y0, y1;
    for (const auto& r : rep.rows) {
        xs.push_back(r.slice);
        y0.push_back(std::log(r.max_abs) / std::log(M));
        y1.push_back(std::log(r.summed_max) / std::log(M));
    }
    LineFit f0 = fit_line(xs, y0), f1 = fit_line(xs, y1);
    rep.delta0_hat = -f0.slope;
    rep.delta1_hat = -f1.slope;
    // prefactor stability at the expected exponents
    auto cv = [&](double expected, bool use_d0) {
        std::vector<double> kv;
        for (const auto& r : rep.rows)
            kv.push_back((use_d0 ? r.max_abs : r.summed_max) *
                         std::pow(M, expected * r.slice));
        double mean = 0;
        for (double v : kv) mean += v;
        mean /= kv.size();
        double var = 0;
        for (double v : kv) var += (v - mean) * (v - mean);
        return std::sqrt(var / kv.size()) / mean;
    };
    rep.k0_cv = cv(rep.delta0_expected, true);
    rep.k1_cv = cv(rep.delta1_expected, false);
    return rep;
}

// ---------------------------------------------------------------------------
// Tadpoles
// ---------------------------------------------------------------------------

TadpoleComparison nonplanar_tadpole(double pmom, double mass, double theta, double lambda) {
    if (pmom <= 0) fail("nonplanar_tadpole: closed form singular at p = 0");
    double b = theta * pmom;  // |Theta p|
    TadpoleComparison out;
    out.closed_form = lambda / (48.0 * M_PI * M_PI) * (mass / b) *
                      std::cyl_bessel_k(1.0, mass * b);
    // Schwinger form: lambda/(192 pi^2) int dt t^{-2} exp(-t m^2 - b^2/(4t))
    double tstar = b / (2.0 * mass);
    double lo = tstar * 1e-4, hi = tstar * 1e4;
    auto f = [&](double lt) {
        double t = std::exp(lt);
        return std::exp(-t * mass * mass - b * b / (4.0 * t)) / t;  // t^{-2} * t (log measure)
    };
    out.quadrature =
        lambda / (192.0 * M_PI * M_PI) * integrate_gl(f, std::log(lo), std::log(hi), 48, 8);
    out.rel_err = std::abs(out.quadrature - out.closed_form) /
                  std::max(std::abs(out.closed_form), 1e-300);
    return out;
}

double gn_tadpole_coefficient(GnTadpoleKind kind, const KernelParams& p, int rho) {
    double wt = p.omega_tilde();
    double m2 = p.mass * p.mass;
    double lo = std::pow(p.slice_base, -2.0 * rho);
    double hi = 45.0 / std::max(m2, 1e-6);
    double pref = 0;
    switch (kind) {
        case GnTadpoleKind::PlanarRegular:
            pref = p.theta * p.omega * p.mass / (4.0 * M_PI * (1.0 + p.omega) * (1.0 + p.omega));
            break;
        case GnTadpoleKind::PlanarSingular:
            if (p.omega == 1.0)
                fail("gn_tadpole_coefficient: planar-singular coefficient has a pole at omega = 1");
            pref = p.theta * p.omega * p.mass / (4.0 * M_PI * (1.0 - p.omega) * (1.0 - p.omega));
            break;
        case GnTadpoleKind::Nonplanar:
            pref = p.mass / 4.0;
            break;
    }
    auto f = [&](double lt) {
        double t = std::exp(lt);
        double integrand = std::exp(-t * m2);
        if (kind != GnTadpoleKind::Nonplanar) integrand /= std::tanh(2.0 * wt * t);
        return integrand * t;  // log measure
    };
    return pref * integrate_gl(f, std::log(lo), std::log(hi), 32, 16);
}

// ---------------------------------------------------------------------------
// Clifford algebra / Fierz
// ---------------------------------------------------------------------------

Mat2 gamma0() { return {{{0.0, I1}, {I1, 0.0}}}; }
Mat2 gamma1() { return {{{I1, 0.0}, {0.0, -I1}}}; }

Mat2 gamma_basis(int a) {
    switch (a) {
        case 0: return Mat2::identity();
        case 1: return gamma0();
        case 2: return gamma1();
        case 3: return gamma0() * gamma1();
    }
    fail("gamma_basis: index 0..3");
}

namespace {
const double kEta[4] = {-1.0, 1.0, 1.0, 1.0};
}

std::array<cplx, 4> fierz_decompose(const Mat2& m) {
    std::array<cplx, 4> c;
    for (int a = 0; a < 4; ++a) c[a] = (m * gamma_basis(a)).trace();
    return c;
}

Mat2 fierz_reconstruct(const std::array<cplx, 4>& coeffs) {
    Mat2 m;
    for (int a = 0; a < 4; ++a) m += gamma_basis(a) * (-0.5 * kEta[a] * coeffs[a]);
    return m;
}

std::array<std::array<double, 4>, 4> fierz_g_matrix(int which) {
    // contraction kernels of the three quartic spinor patterns
    auto K = [&](int a, int b, int c, int d) -> double {
        switch (which) {
            case 1: return (a == b && c == d) ? 1.0 : 0.0;
            case 2: return (b == c && a == d) ? 1.0 : 0.0;
            case 3: return (a == c && b == d) ? 1.0 : 0.0;
        }
        fail("fierz_g_matrix: which in 1..3");
    };
    std::array<std::array<double, 4>, 4> g{};
    for (int A = 0; A < 4; ++A)
        for (int B = 0; B < 4; ++B) {
            cplx s = 0;
            Mat2 GA = gamma_basis(A), GB = gamma_basis(B);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            s += K(a, b, c, d) * GA.e[b][a] * GB.e[d][c];
            cplx val = -s / (2.0 * kEta[A] * kEta[B]);
            if (std::abs(val.imag()) > 1e-14) fail("fierz_g_matrix: non-real entry");
            g[A][B] = val.real();
        }
    return g;
}

}  // namespace ncrg
