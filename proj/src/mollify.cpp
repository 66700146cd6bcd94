#include "hypercone/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypercone/quadrature.hpp"

namespace hypercone {

namespace {

double bump_raw(double t) {
    double d = 1.0 - t * t;
    if (d <= 1e-12) return 0.0;
    double e = -1.0 / d;
    if (e < -700.0) return 0.0;
    return std::exp(e);
}

double bump_raw_deriv(double t) {
    double d = 1.0 - t * t;
    if (d <= 1e-12) return 0.0;
    double e = -1.0 / d;
    if (e < -690.0) return 0.0;
    return std::exp(e) * (-2.0 * t / (d * d));
}

} // namespace

MollifierKernel MollifierKernel::standard_bump(int quad_order) {
    MollifierKernel k;
    double mass = adaptive_simpson([](double t) { return bump_raw(t); }, -1.0, 1.0, 1e-14, 40);
    k.norm_const_ = 1.0 / mass;
    k.l1_rho_ = 1.0;
    k.l1_drho_ = k.norm_const_ *
                 adaptive_simpson([](double t) { return std::abs(bump_raw_deriv(t)); }, -1.0, 1.0,
                                  1e-13, 40);
    const GaussLegendre& gl = gauss_legendre(quad_order);
    k.nodes_ = gl.nodes;
    k.mass_w_.resize(k.nodes_.size());
    k.deriv_w_.resize(k.nodes_.size());
    double wsum = 0.0;
    for (std::size_t i = 0; i < k.nodes_.size(); ++i) {
        k.mass_w_[i] = gl.weights[i] * k.norm_const_ * bump_raw(k.nodes_[i]);
        wsum += k.mass_w_[i];
    }
    for (double& w : k.mass_w_) w /= wsum;
    // park the summation residual on the largest weight: unit mass exactly
    double resid = 1.0;
    std::size_t top = 0;
    for (std::size_t i = 0; i < k.mass_w_.size(); ++i) {
        resid -= k.mass_w_[i];
        if (k.mass_w_[i] > k.mass_w_[top]) top = i;
    }
    k.mass_w_[top] += resid;
    double dsum = 0.0;
    for (std::size_t i = 0; i < k.nodes_.size(); ++i) {
        k.deriv_w_[i] = gl.weights[i] * k.norm_const_ * bump_raw_deriv(k.nodes_[i]);
        dsum += k.deriv_w_[i];
    }
    for (std::size_t i = 0; i < k.nodes_.size(); ++i)
        k.deriv_w_[i] -= dsum * k.mass_w_[i]; // zero mean up to roundoff
    return k;
}

double MollifierKernel::operator()(double t) const { return norm_const_ * bump_raw(t); }

double MollifierKernel::deriv(double t) const { return norm_const_ * bump_raw_deriv(t); }

std::function<Mat(double, std::span<const double>)> extend(const Symmetrizer& s) {
    return [s](double t, std::span<const double> xi) { return s.at_extended(t, xi); };
}

// ---------------------------------------------------------------------------
// TimeSliceCache
// ---------------------------------------------------------------------------

TimeSliceCache::TimeSliceCache(const Symmetrizer& s, std::vector<double> direction, int cells)
    : T_(s.horizon()) {
    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(cells) + 8);
    for (int i = 0; i <= cells; ++i) ts.push_back(T_ * i / cells);
    for (double bp : s.time_breakpoints()) {
        if (bp <= 0.0 || bp >= T_) continue;
        ts.push_back(bp - 1e-9 * T_); // left limit node keeps jumps sharp
        ts.push_back(bp);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    times_ = std::move(ts);
    values_.reserve(times_.size());
    for (double t : times_) values_.push_back(s.at(std::clamp(t, 0.0, T_), direction));
}

Mat TimeSliceCache::operator()(double t) const {
    t = std::clamp(t, 0.0, T_);
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - times_.begin());
    if (hi == 0) return values_.front();
    if (hi >= times_.size()) return values_.back();
    std::size_t lo = hi - 1;
    double dt = times_[hi] - times_[lo];
    double w = (dt > 0.0) ? (t - times_[lo]) / dt : 0.0;
    return values_[lo] * (1.0 - w) + values_[hi] * w;
}

// ---------------------------------------------------------------------------
// MollifiedSymmetrizer
// ---------------------------------------------------------------------------

MollifiedSymmetrizer::MollifiedSymmetrizer(Symmetrizer base, MollifierKernel kernel, double eps)
    : base_(std::move(base)), kernel_(std::move(kernel)), eps_(eps) {}

std::shared_ptr<const TimeSliceCache> MollifiedSymmetrizer::slice(std::span<const double> xi) const {
    double nx = 0.0;
    for (double v : xi) nx += v * v;
    nx = std::sqrt(nx);
    if (nx == 0.0) throw Error("MollifiedSymmetrizer: xi must be nonzero");
    std::vector<double> dir(xi.begin(), xi.end());
    for (double& v : dir) v /= nx;
    // quantize the key so nearly identical directions share a table
    std::vector<double> key(dir.size());
    for (std::size_t i = 0; i < dir.size(); ++i) key[i] = std::round(dir[i] * 4096.0) / 4096.0;
    std::lock_guard<std::mutex> lk(mu_);
    auto it = slices_.find(key);
    if (it == slices_.end()) {
        auto cache = std::make_shared<TimeSliceCache>(base_, dir, cache_cells_);
        it = slices_.emplace(std::move(key), std::move(cache)).first;
    }
    return it->second;
}

Mat MollifiedSymmetrizer::at(double eps, double t, std::span<const double> xi) const {
    if (!(eps > 0.0) || eps > 1.0) throw BadEpsilon("mollify: epsilon must lie in (0, 1]");
    auto sl = slice(xi);
    const auto& u = kernel_.nodes();
    const auto& w = kernel_.mass_weights();
    Mat acc(base_.system_size());
    for (std::size_t i = 0; i < u.size(); ++i) acc += (*sl)(t - eps * u[i]) * w[i];
    return acc;
}

Mat MollifiedSymmetrizer::dt_at(double eps, double t, std::span<const double> xi) const {
    if (!(eps > 0.0) || eps > 1.0) throw BadEpsilon("mollify: epsilon must lie in (0, 1]");
    auto sl = slice(xi);
    const auto& u = kernel_.nodes();
    const auto& w = kernel_.deriv_weights();
    Mat acc(base_.system_size());
    for (std::size_t i = 0; i < u.size(); ++i) acc += (*sl)(t - eps * u[i]) * w[i];
    return acc * (1.0 / eps);
}

MollifiedSymmetrizer mollify(Symmetrizer s, MollifierKernel kernel, double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw BadEpsilon("mollify: epsilon must lie in (0, 1]");
    return MollifiedSymmetrizer(std::move(s), std::move(kernel), eps);
}

// ---------------------------------------------------------------------------
// omega_S and reports
// ---------------------------------------------------------------------------

namespace {

double shift_integral(const std::function<Mat(double)>& sl, double tau, double upper, int nodes) {
    // int_0^upper |S(t + tau) - S(t)| dt by trapezoid
    return trapezoid([&sl, tau](double t) { return op_norm(sl(t + tau) - sl(t)); }, 0.0, upper,
                     nodes);
}

double omega_impl(const std::function<Mat(double)>& sl, double T, double sigma) {
    if (!(sigma > 0.0) || sigma >= T) throw OutOfDomain("omega_S: need 0 < sigma < T");
    const int tau_grid = 33;
    const int t_nodes = 512;
    double upper = T - sigma;
    double best = 0.0;
    int best_k = 0;
    for (int k = 0; k < tau_grid; ++k) {
        double tau = sigma * k / (tau_grid - 1);
        double v = shift_integral(sl, tau, upper, t_nodes);
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    // golden-section refinement around the argmax cell
    double lo = sigma * std::max(0, best_k - 1) / (tau_grid - 1);
    double hi = sigma * std::min(tau_grid - 1, best_k + 1) / (tau_grid - 1);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = shift_integral(sl, x1, upper, t_nodes);
    double f2 = shift_integral(sl, x2, upper, t_nodes);
    for (int it = 0; it < 24; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = shift_integral(sl, x2, upper, t_nodes);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = shift_integral(sl, x1, upper, t_nodes);
        }
    }
    return std::max(best, std::max(f1, f2));
}

} // namespace

double omega_S(const Symmetrizer& s, std::span<const double> xi, double sigma) {
    std::vector<double> dir(xi.begin(), xi.end());
    return omega_impl([&s, &dir](double t) { return s.at(std::clamp(t, 0.0, s.horizon()), dir); },
                      s.horizon(), sigma);
}

double omega_S_slice(const TimeSliceCache& slice, double sigma) {
    return omega_impl([&slice](double t) { return slice(t); }, slice.horizon(), sigma);
}

double mu_S(const Symmetrizer& s, std::span<const double> xi) {
    std::vector<double> dir(xi.begin(), xi.end());
    double integral = trapezoid([&s, &dir](double t) { return op_norm(s.at(t, dir)); }, 0.0,
                                s.horizon(), 1024);
    return integral / s.horizon();
}

MollifyBoundsReport mollify_bounds_report(const MollifiedSymmetrizer& ms, std::span<const double> xi,
                             double eps) {
    if (!(eps > 0.0) || eps > 1.0) throw BadEpsilon("mollify_bounds_report: epsilon must lie in (0, 1]");
    const Symmetrizer& s = ms.base();
    double T = s.horizon();
    auto sl = ms.slice(xi);

    MollifyBoundsReport rep;
    rep.eps = eps;
    rep.xi.assign(xi.begin(), xi.end());
    rep.C = 2.0 * std::max(ms.kernel().l1_rho(), ms.kernel().l1_drho());
    rep.omega = omega_S_slice(*sl, eps);

    // split the quadratures at kernel-support edges and symmetrizer jumps
    std::vector<double> splits{eps, T - eps};
    for (double bp : s.time_breakpoints()) {
        splits.push_back(bp);
        splits.push_back(bp - eps);
        splits.push_back(bp + eps);
    }

    const auto& u = ms.kernel().nodes();
    const auto& mw = ms.kernel().mass_weights();
    const auto& dw = ms.kernel().deriv_weights();
    int m = s.system_size();
    auto s_eps_at = [&](double t) {
        Mat acc(m);
        for (std::size_t i = 0; i < u.size(); ++i) acc += (*sl)(t - eps * u[i]) * mw[i];
        return acc;
    };
    auto dt_s_eps_at = [&](double t) {
        Mat acc(m);
        for (std::size_t i = 0; i < u.size(); ++i) acc += (*sl)(t - eps * u[i]) * dw[i];
        return acc * (1.0 / eps);
    };

    double tol = 1e-9 * std::max(1.0, s.Lambda()) * T;
    rep.lhs1 = adaptive_simpson_lenient(
        [&](double t) { return op_norm(s_eps_at(t) - (*sl)(t)); }, 0.0, T, tol, splits);
    rep.lhs2 = adaptive_simpson_lenient(
        [&](double t) { return op_norm(dt_s_eps_at(t)); }, 0.0, T, tol / eps, splits);

    double sqL = std::sqrt(s.Lambda());
    rep.rhs1 = rep.C * (rep.omega + eps * sqL);
    rep.rhs2 = rep.C / eps * (rep.omega + eps * sqL);
    rep.ratio1 = (rep.rhs1 > 0.0) ? rep.lhs1 / rep.rhs1 : 0.0;
    rep.ratio2 = (rep.rhs2 > 0.0) ? rep.lhs2 / rep.rhs2 : 0.0;

    // the estimate feeding the lemma: shifted integrals against the extension
    {
        const int tau_grid = 33;
        double best = 0.0;
        for (int k = 0; k < tau_grid; ++k) {
            double tau = eps * k / (tau_grid - 1);
            best = std::max(best, shift_integral([&sl](double t) { return (*sl)(t); }, tau, T, 512));
        }
        rep.shift_lhs = best;
        double mean_norm = trapezoid([&sl](double t) { return op_norm((*sl)(t)); }, 0.0, T, 512);
        rep.shift_rhs = 2.0 * (rep.omega + eps / T * mean_norm);
        rep.shift_ratio = (rep.shift_rhs > 0.0) ? rep.shift_lhs / rep.shift_rhs : 0.0;
    }
    return rep;
}

nlohmann::json MollifyBoundsReport::to_json() const {
    nlohmann::json j;
    j["eps"] = eps;
    j["xi"] = xi;
    j["omega"] = omega;
    j["C"] = C;
    j["lhs1"] = lhs1;
    j["rhs1"] = rhs1;
    j["ratio1"] = ratio1;
    j["lhs2"] = lhs2;
    j["rhs2"] = rhs2;
    j["ratio2"] = ratio2;
    j["shift_lhs"] = shift_lhs;
    j["shift_rhs"] = shift_rhs;
    j["shift_ratio"] = shift_ratio;
    return j;
}

std::string MollifyBoundsReport::csv_header() {
    return "eps,xi,lhs1,rhs1,ratio1,lhs2,rhs2,ratio2";
}

std::string MollifyBoundsReport::csv_row() const {
    std::ostringstream os;
    char buf[64];
    auto put = [&os, &buf](double v, bool first = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!first) os << ",";
        os << buf;
    };
    put(eps, true);
    os << ",\"";
    for (std::size_t i = 0; i < xi.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", xi[i]);
        os << (i ? ";" : "") << buf;
    }
    os << "\"";
    put(lhs1);
    put(rhs1);
    put(ratio1);
    put(lhs2);
    put(rhs2);
    put(ratio2);
    return os.str();
}

} // namespace hypercone
