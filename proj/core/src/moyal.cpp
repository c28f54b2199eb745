#include "ncrg/moyal.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ncrg {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument(msg); }

// Real polynomial in (z, zbar), coefficients c[j][k] z^j zbar^k.
struct Poly2 {
    int deg_z = 0, deg_zb = 0;
    std::vector<double> c;  // (deg_z+1) x (deg_zb+1)

    static Poly2 one() { return {0, 0, {1.0}}; }
    double& at(int j, int k) { return c[j * (deg_zb + 1) + k]; }
    double at(int j, int k) const { return c[j * (deg_zb + 1) + k]; }

    Poly2 resized(int dz, int dzb) const {
        Poly2 r{dz, dzb, std::vector<double>((dz + 1) * (dzb + 1), 0.0)};
        for (int j = 0; j <= deg_z; ++j)
            for (int k = 0; k <= deg_zb; ++k) r.at(j, k) = at(j, k);
        return r;
    }
};

// (2 zbar - d/dz) P  -- left star by abar (up to sqrt(theta/2))
Poly2 raise_left(const Poly2& p) {
    Poly2 r{p.deg_z, p.deg_zb + 1,
            std::vector<double>((p.deg_z + 1) * (p.deg_zb + 2), 0.0)};
    for (int j = 0; j <= p.deg_z; ++j)
        for (int k = 0; k <= p.deg_zb; ++k) {
            r.at(j, k + 1) += 2.0 * p.at(j, k);
            if (j >= 1) r.at(j - 1, k) -= j * p.at(j, k);
        }
    return r;
}

// (2 z - d/dzbar) P  -- right star by a
Poly2 raise_right(const Poly2& p) {
    Poly2 r{p.deg_z + 1, p.deg_zb,
            std::vector<double>((p.deg_z + 2) * (p.deg_zb + 1), 0.0)};
    for (int j = 0; j <= p.deg_z; ++j)
        for (int k = 0; k <= p.deg_zb; ++k) {
            r.at(j + 1, k) += 2.0 * p.at(j, k);
            if (k >= 1) r.at(j, k - 1) -= k * p.at(j, k);
        }
    return r;
}

Poly2 fmn_poly_build(int m, int n) {
    Poly2 p = Poly2::one();
    for (int i = 0; i < m; ++i) p = raise_left(p);
    for (int i = 0; i < n; ++i) p = raise_right(p);
    // normalization (m! n! 2^{m+n})^{-1/2}
    double lg = -0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0) +
                        (m + n) * std::log(2.0));
    double norm = std::exp(lg);
    for (double& v : p.c) v *= norm;
    return p;
}

const Poly2& fmn_poly(int m, int n) {
    static std::map<std::pair<int, int>, Poly2> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({m, n});
    if (it == cache.end()) it = cache.emplace(std::pair{m, n}, fmn_poly_build(m, n)).first;
    return it->second;
}

cplx eval_poly_gauss(const Poly2& p, const Vec2& x, double theta) {
    cplx z{x[0] / std::sqrt(theta), x[1] / std::sqrt(theta)};
    cplx zb = std::conj(z);
    double r2 = std::norm(z);
    cplx val = 0;
    std::vector<cplx> zp(p.deg_z + 1), zbp(p.deg_zb + 1);
    zp[0] = 1.0;
    for (int j = 1; j <= p.deg_z; ++j) zp[j] = zp[j - 1] * z;
    zbp[0] = 1.0;
    for (int k = 1; k <= p.deg_zb; ++k) zbp[k] = zbp[k - 1] * zb;
    for (int j = 0; j <= p.deg_z; ++j)
        for (int k = 0; k <= p.deg_zb; ++k)
            if (p.at(j, k) != 0.0) val += p.at(j, k) * zp[j] * zbp[k];
    return 2.0 * val * std::exp(-r2);
}

}  // namespace

MatrixBaseElement MatrixBaseElement::zero(int trunc, double theta) {
    return {trunc, theta, std::vector<cplx>(size_t(trunc) * trunc, cplx{})};
}

MatrixBaseElement MatrixBaseElement::unit(int trunc, double theta, int m, int n) {
    MatrixBaseElement e = zero(trunc, theta);
    e.at(m, n) = 1.0;
    return e;
}

MatrixBaseElement MatrixBaseElement::identity(int trunc, double theta) {
    MatrixBaseElement e = zero(trunc, theta);
    for (int m = 0; m < trunc; ++m) e.at(m, m) = 1.0;
    return e;
}

bool MatrixBaseElement::hermitian(double tol) const {
    for (int m = 0; m < trunc; ++m)
        for (int n = 0; n < trunc; ++n)
            if (std::abs(at(m, n) - std::conj(at(n, m))) > tol) return false;
    return true;
}

MatrixBaseElement MatrixBaseElement::adjoint() const {
    MatrixBaseElement r = zero(trunc, theta);
    for (int m = 0; m < trunc; ++m)
        for (int n = 0; n < trunc; ++n) r.at(m, n) = std::conj(at(n, m));
    return r;
}

MatrixBaseElement star_matrix(const MatrixBaseElement& A, const MatrixBaseElement& B) {
    if (A.trunc != B.trunc) fail("star_matrix: truncation mismatch");
    if (A.theta != B.theta) fail("star_matrix: theta mismatch");
    MatrixBaseElement r = MatrixBaseElement::zero(A.trunc, A.theta);
    for (int m = 0; m < A.trunc; ++m)
        for (int k = 0; k < A.trunc; ++k) {
            cplx amk = A.at(m, k);
            if (amk == cplx{}) continue;
            for (int n = 0; n < A.trunc; ++n) r.at(m, n) += amk * B.at(k, n);
        }
    return r;
}

cplx fmn_eval(int m, int n, const Vec2& x, double theta) {
    if (m < 0 || n < 0 || m > 60 || n > 60)
        throw std::runtime_error("fmn_eval: index budget 0..60");
    return eval_poly_gauss(fmn_poly(m, n), x, theta);
}

cplx h_star_fmn(int m, int n, const Vec2& x, double theta, bool left) {
    Poly2 p = fmn_poly(m, n);
    // H star f = (theta/2)(2 zb dzb - dz dzb + 1) P  (left),
    // f star H = (theta/2)(2 z dz - dz dzb + 1) P    (right)
    Poly2 r{p.deg_z + 1, p.deg_zb + 1,
            std::vector<double>((p.deg_z + 2) * (p.deg_zb + 2), 0.0)};
    for (int j = 0; j <= p.deg_z; ++j)
        for (int k = 0; k <= p.deg_zb; ++k) {
            double v = p.at(j, k);
            if (v == 0.0) continue;
            if (left) {
                r.at(j, k) += 2.0 * k * v;  // 2 zb dzb
            } else {
                r.at(j, k) += 2.0 * j * v;  // 2 z dz
            }
            if (j >= 1 && k >= 1) r.at(j - 1, k - 1) -= double(j) * k * v;  // dz dzb
            r.at(j, k) += v;  // +1
        }
    for (double& v : r.c) v *= theta / 2.0;
    return eval_poly_gauss(r, x, theta);
}

cplx element_eval(const MatrixBaseElement& A, const Vec2& x) {
    cplx val = 0;
    for (int m = 0; m < A.trunc; ++m)
        for (int n = 0; n < A.trunc; ++n)
            if (A.at(m, n) != cplx{}) val += A.at(m, n) * fmn_eval(m, n, x, A.theta);
    return val;
}

MatrixBaseElement decompose(const std::function<cplx(const Vec2&)>& f, double theta, int trunc,
                            const GridSpec& grid) {
    double L = grid.half_width > 0
                   ? grid.half_width
                   : std::sqrt(theta) * (4.0 + std::sqrt(2.0 * trunc));
    int n = grid.points;
    double hstep = 2.0 * L / n;
    MatrixBaseElement out = MatrixBaseElement::zero(trunc, theta);
    std::vector<cplx> fv(size_t(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Vec2 x{{-L + (i + 0.5) * hstep, -L + (j + 0.5) * hstep}};
            fv[size_t(i) * n + j] = f(x);
        }
    // grid-refinement estimate: the integrated |f| mass on a half grid must
    // agree or the grid does not resolve the sqrt(theta) scale
    {
        auto mass = [&](int points) {
            double hs = 2.0 * L / points;
            double acc = 0;
            for (int i = 0; i < points; ++i)
                for (int j = 0; j < points; ++j) {
                    Vec2 x{{-L + (i + 0.5) * hs, -L + (j + 0.5) * hs}};
                    acc += std::abs(f(x));
                }
            return acc * hs * hs;
        };
        double fine = mass(n), coarse = mass(n / 2);
        if (std::abs(fine - coarse) > 1e-3 * std::max(1e-12, fine))
            throw std::runtime_error("decompose: under-resolved grid");
    }
    for (int m = 0; m < trunc; ++m)
        for (int nn = 0; nn < trunc; ++nn) {
            cplx acc = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Vec2 x{{-L + (i + 0.5) * hstep, -L + (j + 0.5) * hstep}};
                    acc += fv[size_t(i) * n + j] * fmn_eval(nn, m, x, theta);
                }
            out.at(m, nn) = acc * hstep * hstep / (2.0 * M_PI * theta);
        }
    return out;
}

cplx star_x(const std::function<cplx(const Vec2&)>& f, const std::function<cplx(const Vec2&)>& g,
            const Vec2& x, double theta, double half_width, int nodes) {
    double L = half_width > 0 ? half_width : 6.0 * std::sqrt(theta);
    const GaussRule& r = gauss_legendre(nodes);
    std::vector<double> pt(nodes), wt(nodes);
    for (int i = 0; i < nodes; ++i) {
        pt[i] = L * r.x[i];
        wt[i] = L * r.w[i];
    }
    // cache f(x+y) and g(x+z) on the grid
    std::vector<cplx> fv(nodes * nodes), gv(nodes * nodes);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            Vec2 y{{pt[i], pt[j]}};
            fv[i * nodes + j] = f(x + y);
            gv[i * nodes + j] = g(x + y);
        }
    cplx total = 0;
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < nodes; ++j) {
            cplx fy = fv[i * nodes + j];
            if (std::abs(fy) < 1e-300) continue;
            double wy = wt[i] * wt[j];
            // inner z integral with phase e^{-2i (y0 z1 - y1 z0)/theta}
            cplx inner = 0;
            for (int a = 0; a < nodes; ++a)
                for (int b = 0; b < nodes; ++b) {
                    // sign fixed by consistency with the ladder relations:
                    // the product must realize f_mn * f_kl = delta_nk f_ml
                    double phase = 2.0 * (pt[i] * pt[b] - pt[j] * pt[a]) / theta;
                    inner += gv[a * nodes + b] * std::polar(wt[a] * wt[b], phase);
                }
            total += fy * wy * inner;
        }
    return total / (M_PI * M_PI * theta * theta);
}

double quartic_trace(const MatrixBaseElement& A) {
    if (!A.hermitian(1e-10)) fail("quartic_trace: hermitian element required in real-field mode");
    MatrixBaseElement A2 = star_matrix(A, A);
    double tr = 0;
    for (int m = 0; m < A.trunc; ++m)
        for (int n = 0; n < A.trunc; ++n) tr += std::norm(A2.at(m, n));
    return 2.0 * M_PI * A.theta * tr;
}

}  // namespace ncrg
