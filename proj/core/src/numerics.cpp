#include "ncrg/numerics.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ncrg {

namespace {

GaussRule make_gauss_legendre(int n) {
    // Newton iteration on Legendre polynomials, nodes symmetric about 0.
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = -x;
        r.x[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
    return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int nodes, int panels) {
    const GaussRule& r = gauss_legendre(nodes);
    double total = 0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h, mid = lo + 0.5 * h, half = 0.5 * h;
        double s = 0;
        for (int i = 0; i < nodes; ++i) s += r.w[i] * f(mid + half * r.x[i]);
        total += s * half;
    }
    return total;
}

cplx integrate_gl_c(const std::function<cplx(double)>& f, double a, double b,
                    int nodes, int panels) {
    const GaussRule& r = gauss_legendre(nodes);
    cplx total = 0;
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h, mid = lo + 0.5 * h, half = 0.5 * h;
        cplx s = 0;
        for (int i = 0; i < nodes; ++i) s += r.w[i] * f(mid + half * r.x[i]);
        total += s * half;
    }
    return total;
}

namespace {

double adapt_rec(const std::function<double(double)>& f, double a, double b,
                 double whole, double tol, int depth, int max_depth) {
    double m = 0.5 * (a + b);
    double left = integrate_gl(f, a, m, 16);
    double right = integrate_gl(f, m, b, 16);
    double delta = left + right - whole;
    if (depth >= max_depth || std::abs(delta) <= tol * (1.0 + std::abs(left + right)))
        return left + right;
    return adapt_rec(f, a, m, left, tol * 0.5, depth + 1, max_depth) +
           adapt_rec(f, m, b, right, tol * 0.5, depth + 1, max_depth);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_depth) {
    double whole = integrate_gl(f, a, b, 16);
    return adapt_rec(f, a, b, whole, tol, 0, max_depth);
}

double log_sum_exp(const std::vector<double>& logs) {
    if (logs.empty()) return -std::numeric_limits<double>::infinity();
    double m = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(m)) return m;
    double s = 0;
    for (double l : logs) s += std::exp(l - m);
    return m + std::log(s);
}

double log_binomial(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need >= 2 points with equal sizes");
    size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0, ss_tot = 0, ybar = sy / n;
    for (size_t i = 0; i < n; ++i) {
        double e = y[i] - (f.slope * x[i] + f.intercept);
        ss_res += e * e;
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

double lu_determinant(std::vector<std::vector<double>> a) {
    size_t n = a.size();
    double det = 1.0;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        for (size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (a[piv][c] == 0.0) return 0.0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            double f = a[r][c] / a[c][c];
            for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

int integer_matrix_rank(std::vector<std::vector<long long>> a) {
    if (a.empty()) return 0;
    size_t rows = a.size(), cols = a[0].size();
    // Bareiss on __int128 working copies; entries stay exact.
    std::vector<std::vector<__int128>> m(rows, std::vector<__int128>(cols));
    for (size_t i = 0; i < rows; ++i)
        for (size_t j = 0; j < cols; ++j) m[i][j] = a[i][j];
    __int128 prev = 1;
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[rank]);
        for (size_t r = rank + 1; r < rows; ++r) {
            for (size_t k = c + 1; k < cols; ++k)
                m[r][k] = (m[rank][c] * m[r][k] - m[r][c] * m[rank][k]) / prev;
            m[r][c] = 0;
        }
        prev = m[rank][c];
        ++rank;
    }
    return static_cast<int>(rank);
}

}  // namespace ncrg
