#include "hypercone/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "hypercone/errors.hpp"

namespace hypercone {

namespace {

GaussLegendre compute_gauss_legendre(int order) {
    GaussLegendre gl;
    gl.nodes.resize(static_cast<std::size_t>(order));
    gl.weights.resize(static_cast<std::size_t>(order));
    for (int i = 0; i < order; ++i) {
        // Chebyshev initial guess, then Newton on P_n
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
        gl.weights[static_cast<std::size_t>(order - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

double simpson_cell(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double& fm_out) {
    double m = 0.5 * (a + b);
    fm_out = f(m);
    return (b - a) / 6.0 * (fa + 4.0 * fm_out + fb);
}

// mode: 0 = strict (throw at the cap), 1 = lenient (accept deepest estimate),
// 2 = guarded (accept when the residual is below fallback_tol, else throw)
double adaptive_rec(const std::function<double(double)>& f, double a, double fa, double b,
                    double fb, double fm, double whole, double tol, int depth, int max_depth,
                    int mode, double fallback_tol) {
    double m = 0.5 * (a + b);
    double flm, frm;
    double left = simpson_cell(f, a, fa, m, fm, flm);
    double right = simpson_cell(f, m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    if (depth >= max_depth) {
        if (mode == 1) return left + right + delta / 15.0;
        if (mode == 2 && std::abs(delta) <= fallback_tol) return left + right + delta / 15.0;
        throw QuadratureFailure("adaptive Simpson exceeded depth cap before reaching tolerance");
    }
    return adaptive_rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1, max_depth, mode, fallback_tol) +
           adaptive_rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1, max_depth, mode, fallback_tol);
}

double simpson_driver(const std::function<double(double)>& f, double a, double b, double tol,
                      int max_depth, int mode, double fallback_tol = 0.0) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm;
    double whole = simpson_cell(f, a, fa, b, fb, fm);
    return adaptive_rec(f, a, fa, b, fb, fm, whole, tol, 0, max_depth, mode, fallback_tol);
}

std::vector<double> cell_edges(double a, double b, const std::vector<double>& splits) {
    std::vector<double> edges{a};
    std::vector<double> s = splits;
    std::sort(s.begin(), s.end());
    for (double x : s)
        if (x > a + 1e-300 && x < b && x > edges.back()) edges.push_back(x);
    edges.push_back(b);
    return edges;
}

} // namespace

const GaussLegendre& gauss_legendre(int order) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, compute_gauss_legendre(order)).first;
    return it->second;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    return simpson_driver(f, a, b, tol, max_depth, 0);
}

double adaptive_simpson_split(const std::function<double(double)>& f, double a, double b,
                              double tol, const std::vector<double>& splits, int max_depth) {
    auto edges = cell_edges(a, b, splits);
    double total = 0.0;
    double cell_tol = tol / static_cast<double>(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += simpson_driver(f, edges[i], edges[i + 1], cell_tol, max_depth, 0);
    return total;
}

double adaptive_simpson_lenient(const std::function<double(double)>& f, double a, double b,
                                double tol, const std::vector<double>& splits, int max_depth) {
    auto edges = cell_edges(a, b, splits);
    double total = 0.0;
    double cell_tol = tol / static_cast<double>(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += simpson_driver(f, edges[i], edges[i + 1], cell_tol, max_depth, 1);
    return total;
}

double adaptive_simpson_guarded(const std::function<double(double)>& f, double a, double b,
                                double tol, const std::vector<double>& splits, double shave,
                                double fallback_tol, int max_depth) {
    auto edges = cell_edges(a, b, splits);
    double total = 0.0;
    double cell_tol = tol / static_cast<double>(edges.size() - 1);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double lo = edges[i], hi = edges[i + 1];
        if (i > 0) lo += shave;
        if (i + 2 < edges.size()) hi -= shave;
        if (lo >= hi) continue;
        total += simpson_driver(f, lo, hi, cell_tol, max_depth, 2, fallback_tol);
    }
    return total;
}

double trapezoid(const std::function<double(double)>& f, double a, double b, int nodes) {
    if (nodes < 2) throw Error("trapezoid needs at least two nodes");
    double h = (b - a) / (nodes - 1);
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < nodes - 1; ++i) s += f(a + h * i);
    return s * h;
}

double midpoint(const std::function<double(double)>& f, double a, double b, int cells) {
    if (cells < 1) throw Error("midpoint needs at least one cell");
    double h = (b - a) / cells;
    double s = 0.0;
    for (int i = 0; i < cells; ++i) s += f(a + h * (i + 0.5));
    return s * h;
}

} // namespace hypercone
