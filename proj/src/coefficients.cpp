#include "hypercone/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "hypercone/quadrature.hpp"

namespace hypercone {

CoefficientFamily::CoefficientFamily(int n, int m, double T, CoefficientKind kind, Evaluator eval)
    : n_(n), m_(m), T_(T), kind_(kind), eval_(std::move(eval)) {
    if (n < 1) throw Error("CoefficientFamily: space dimension must be >= 1");
    if (T <= 0.0) throw Error("CoefficientFamily: horizon must be positive");
}

std::vector<Mat> CoefficientFamily::at(double t) const {
    if (t < 0.0 || t > T_) throw OutOfDomain("coefficient evaluation outside [0, T]");
    std::vector<Mat> mats = eval_(t);
    if (static_cast<int>(mats.size()) != n_) throw Error("coefficient evaluator returned wrong count");
    return mats;
}

std::optional<double> CoefficientFamily::analytic_alpha_integral(double t) const {
    if (!analytic_integral_) return std::nullopt;
    return analytic_integral_(t);
}

namespace {

double base_alpha(const std::vector<Mat>& base) {
    double s = 0.0;
    for (const Mat& b : base) s += op_norm(b);
    return s;
}

} // namespace

CoefficientFamily CoefficientFamily::constant(std::vector<Mat> base, double T) {
    double a0 = base_alpha(base);
    CoefficientFamily c(static_cast<int>(base.size()), base.front().dim(), T,
                        CoefficientKind::constant,
                        [base](double) { return base; });
    c.set_analytic_alpha_integral([a0](double t) { return a0 * t; });
    return c;
}

CoefficientFamily CoefficientFamily::smooth_oscillatory(std::vector<Mat> base, double T,
                                                        double omega) {
    double a0 = base_alpha(base);
    CoefficientFamily c(static_cast<int>(base.size()), base.front().dim(), T,
                        CoefficientKind::smooth, [base, omega](double t) {
                            double g = 1.0 + 0.5 * std::sin(omega * t);
                            std::vector<Mat> out;
                            out.reserve(base.size());
                            for (const Mat& b : base) out.push_back(b * g);
                            return out;
                        });
    c.set_analytic_alpha_integral([a0, omega](double t) {
        // profile stays positive, so alpha = a0 * (1 + sin(omega t)/2)
        return a0 * (t + 0.5 * (1.0 - std::cos(omega * t)) / omega);
    });
    return c;
}

CoefficientFamily CoefficientFamily::piecewise_constant(std::vector<Mat> base, double T,
                                                        std::vector<double> levels,
                                                        std::vector<double> jumps) {
    if (levels.size() != jumps.size() + 1)
        throw Error("piecewise_constant: need one more level than jump");
    for (std::size_t i = 0; i + 1 < jumps.size(); ++i)
        if (jumps[i] >= jumps[i + 1]) throw Error("piecewise_constant: jumps must increase");
    double a0 = base_alpha(base);
    auto level_at = [levels, jumps](double t) {
        std::size_t k = 0;
        while (k < jumps.size() && t >= jumps[k]) ++k;
        return levels[k];
    };
    CoefficientFamily c(static_cast<int>(base.size()), base.front().dim(), T,
                        CoefficientKind::piecewise, [base, level_at](double t) {
                            double g = level_at(t);
                            std::vector<Mat> out;
                            out.reserve(base.size());
                            for (const Mat& b : base) out.push_back(b * g);
                            return out;
                        });
    c.set_time_breakpoints(jumps);
    c.set_analytic_alpha_integral([a0, levels, jumps](double t) {
        double acc = 0.0, prev = 0.0;
        for (std::size_t k = 0; k < jumps.size(); ++k) {
            if (t <= jumps[k]) return a0 * (acc + std::abs(levels[k]) * (t - prev));
            acc += std::abs(levels[k]) * (jumps[k] - prev);
            prev = jumps[k];
        }
        return a0 * (acc + std::abs(levels.back()) * (t - prev));
    });
    return c;
}

CoefficientFamily CoefficientFamily::hoelder(std::vector<Mat> base, double T, double gamma,
                                             double t0, double floor) {
    if (gamma <= 0.0 || gamma >= 1.0) throw Error("hoelder: gamma must lie in (0, 1)");
    double a0 = base_alpha(base);
    CoefficientFamily c(static_cast<int>(base.size()), base.front().dim(), T,
                        CoefficientKind::smooth, [base, gamma, t0, floor](double t) {
                            double g = floor + std::pow(std::abs(t - t0), gamma);
                            std::vector<Mat> out;
                            out.reserve(base.size());
                            for (const Mat& b : base) out.push_back(b * g);
                            return out;
                        });
    c.set_time_breakpoints({t0});
    c.set_analytic_alpha_integral([a0, gamma, t0, floor](double t) {
        auto prim = [gamma](double u) { // integral of |s|^gamma from 0 to u, u >= 0
            return std::pow(u, gamma + 1.0) / (gamma + 1.0);
        };
        double part;
        if (t <= t0)
            part = prim(t0) - prim(t0 - t);
        else
            part = prim(t0) + prim(t - t0);
        return a0 * (floor * t + part);
    });
    return c;
}

CoefficientFamily CoefficientFamily::singular_alpha(double T) {
    // scalar family: A_1(t) = |t - 1/2|^{-1/2} / 10, integrable with a pole
    CoefficientFamily c(1, 1, T, CoefficientKind::smooth, [](double t) {
        double d = std::abs(t - 0.5);
        double v = (d > 0.0) ? 0.1 / std::sqrt(d) : 1e150;
        return std::vector<Mat>{Mat::diag({cplx(v, 0.0)})};
    });
    c.set_time_breakpoints({0.5});
    c.set_analytic_alpha_integral([](double t) {
        auto prim = [](double u) { return 0.2 * std::sqrt(u); }; // int 0.1/sqrt(s) ds
        if (t <= 0.5) return prim(0.5) - prim(0.5 - t);
        return prim(0.5) + prim(t - 0.5);
    });
    return c;
}

CoefficientFamily CoefficientFamily::sampled(int n, int m, std::vector<double> times,
                                             std::vector<std::vector<Mat>> nodes) {
    if (times.size() < 2) throw Error("sampled: need at least two time nodes");
    if (times.size() != nodes.size()) throw Error("sampled: node count mismatch");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (times[i] >= times[i + 1]) throw Error("sampled: times must be strictly increasing");
    if (times.front() != 0.0) throw Error("sampled: first time must be 0");
    for (const auto& nv : nodes) {
        if (static_cast<int>(nv.size()) != n) throw Error("sampled: wrong matrix count at a node");
        for (const Mat& a : nv) {
            if (a.dim() != m) throw Error("sampled: wrong matrix dimension at a node");
            if (!a.is_real(0.0)) throw Error("sampled: coefficient matrices must be real");
        }
    }
    double T = times.back();
    auto tm = std::make_shared<std::vector<double>>(std::move(times));
    auto nd = std::make_shared<std::vector<std::vector<Mat>>>(std::move(nodes));
    CoefficientFamily c(n, m, T, CoefficientKind::sampled, [tm, nd, n](double t) {
        auto it = std::upper_bound(tm->begin(), tm->end(), t);
        std::size_t hi = static_cast<std::size_t>(it - tm->begin());
        if (hi == 0) hi = 1;
        if (hi >= tm->size()) hi = tm->size() - 1;
        std::size_t lo = hi - 1;
        double w = ((*tm)[hi] > (*tm)[lo]) ? (t - (*tm)[lo]) / ((*tm)[hi] - (*tm)[lo]) : 0.0;
        std::vector<Mat> out;
        out.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            out.push_back((*nd)[lo][static_cast<std::size_t>(j)] * (1.0 - w) +
                          (*nd)[hi][static_cast<std::size_t>(j)] * w);
        return out;
    });
    c.breakpoints_ = *tm;
    c.sample_times_ = *tm;
    return c;
}

CoefficientFamily CoefficientFamily::from_csv(const std::string& path, int n, int m) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open coefficient CSV: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("coefficient CSV is empty: " + path);
    {
        std::string h = line;
        h.erase(std::remove_if(h.begin(), h.end(), [](char ch) { return ch == ' ' || ch == '\r'; }), h.end());
        if (h != "t,j,row,col,value")
            throw ConfigError("coefficient CSV must start with header 't,j,row,col,value'");
    }
    std::vector<double> times;
    std::vector<std::vector<Mat>> nodes;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 5)
            throw ConfigError("coefficient CSV line " + std::to_string(lineno) + ": need 5 columns");
        double t = std::stod(cells[0]);
        int j = std::stoi(cells[1]), row = std::stoi(cells[2]), col = std::stoi(cells[3]);
        double value = std::stod(cells[4]);
        if (j < 1 || j > n || row < 1 || row > m || col < 1 || col > m)
            throw ConfigError("coefficient CSV line " + std::to_string(lineno) + ": index out of range");
        if (times.empty() || t > times.back()) {
            times.push_back(t);
            nodes.emplace_back(static_cast<std::size_t>(n), Mat(m));
        } else if (t < times.back()) {
            throw ConfigError("coefficient CSV: times must be sorted ascending");
        }
        nodes.back()[static_cast<std::size_t>(j - 1)](row - 1, col - 1) = value;
    }
    if (times.size() < 2) throw ConfigError("coefficient CSV needs at least two distinct times");
    return sampled(n, m, std::move(times), std::move(nodes));
}

double alpha(const CoefficientFamily& c, double t) {
    std::vector<Mat> mats = c.at(t); // throws OutOfDomain as needed
    double s = 0.0;
    for (const Mat& a : mats) s += op_norm(a);
    return s;
}

double alpha_integral(const CoefficientFamily& c, double t) {
    if (t < 0.0 || t > c.horizon()) throw OutOfDomain("alpha_integral: t outside [0, T]");
    if (t == 0.0) return 0.0;
    if (c.kind() == CoefficientKind::sampled) {
        // exact trapezoid of the piecewise-linear norm samples
        const std::vector<double>& times = c.sample_times();
        double acc = 0.0, prev_t = 0.0, prev_a = alpha(c, 0.0);
        for (std::size_t i = 1; i < times.size(); ++i) {
            double node = std::min(times[i], t);
            double a_node = alpha(c, node);
            acc += 0.5 * (prev_a + a_node) * (node - prev_t);
            prev_t = node;
            prev_a = a_node;
            if (times[i] >= t) break;
        }
        return acc;
    }
    double tol = 1e-8 * (1.0 + t);
    // shaving + guarded fallback let integrable norm blow-ups at breakpoints
    // through while still flagging non-integrable ones
    return adaptive_simpson_guarded([&c](double s) { return alpha(c, s); }, 0.0, t, tol,
                                    c.time_breakpoints(), 1e-12 * c.horizon(),
                                    1e-4 * (1.0 + t));
}

ConeRadii::ConeRadii(CoefficientFamily family, double r0, double Lambda)
    : family_(std::move(family)), r0_(r0), Lambda_(Lambda) {
    if (r0 <= 0.0) throw Error("ConeRadii: r0 must be positive");
    if (Lambda <= 0.0) throw Error("ConeRadii: Lambda must be positive");
}

double ConeRadii::growth(double t) const {
    return 2.0 * std::sqrt(Lambda_) * alpha_integral(family_, t);
}

ConeRadii cone_radii(const CoefficientFamily& c, double r0, double Lambda) {
    return ConeRadii(c, r0, Lambda);
}

BoundednessReport boundedness(const CoefficientFamily& c) {
    auto grid_sup = [&c](int cells) {
        double sup = 0.0;
        for (int i = 0; i < cells; ++i) {
            double t = c.horizon() * (i + 0.5) / cells;
            sup = std::max(sup, alpha(c, t));
        }
        return sup;
    };
    BoundednessReport rep;
    rep.coarse_sup = grid_sup(512);
    rep.C0 = grid_sup(1024);
    rep.bounded = rep.C0 <= 1.1 * rep.coarse_sup + 1e-12;
    return rep;
}

} // namespace hypercone
