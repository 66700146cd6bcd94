#include "hypercone/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypercone/quadrature.hpp"

namespace hypercone {

using nlohmann::json;

namespace {

std::vector<double> re_part(std::span<const cplx> zeta) {
    std::vector<double> out(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) out[i] = zeta[i].real();
    return out;
}

std::vector<double> im_part(std::span<const cplx> zeta) {
    std::vector<double> out(zeta.size());
    for (std::size_t i = 0; i < zeta.size(); ++i) out[i] = zeta[i].imag();
    return out;
}

double vec2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

char fmtbuf[64];
std::string fmt(double v) {
    std::snprintf(fmtbuf, sizeof fmtbuf, "%.17g", v);
    return fmtbuf;
}

} // namespace

double epsilon_for(double zeta_norm, double T) {
    double eps = (zeta_norm >= 1.0) ? 1.0 / zeta_norm : 1.0;
    return std::min({eps, 1.0, 0.5 * T});
}

double phi_eps(const MollifiedSymmetrizer& ms, const CoefficientFamily& c, double t,
               std::span<const cplx> zeta, double eps) {
    std::vector<double> xi = re_part(zeta);
    std::vector<double> eta = im_part(zeta);
    double nxi = vec2(xi), neta = vec2(eta);
    double a = alpha(c, t);
    double lam = ms.base().lambda(), Lam = ms.base().Lambda();
    double out = 2.0 * std::sqrt(Lam) * a * neta;
    if (nxi > 0.0) {
        auto sl = ms.slice(xi);
        Mat s_eps = ms.at(eps, t, xi);
        Mat d_eps = ms.dt_at(eps, t, xi);
        out += 2.0 / std::sqrt(lam) * op_norm(d_eps);
        out += 2.0 / std::sqrt(lam) * op_norm(s_eps - (*sl)(t)) * a * nxi;
    }
    return out;
}

EnergyTrace energy_trace(const std::vector<std::vector<cplx>>& traj,
                         const MollifiedSymmetrizer& ms, const CoefficientFamily& c,
                         std::span<const cplx> zeta, const std::vector<double>& forcing_norms) {
    if (traj.size() < 2) throw Error("energy_trace: trajectory too short");
    if (!forcing_norms.empty() && forcing_norms.size() != traj.size())
        throw Error("energy_trace: forcing norms must match the node grid");
    double T = c.horizon();
    std::size_t nn = traj.size();
    double dt = T / static_cast<double>(nn - 1);

    EnergyTrace tr;
    tr.zeta.assign(zeta.begin(), zeta.end());
    std::vector<double> xi = re_part(zeta);
    double nxi = vec2(xi);
    double zeta_abs = 0.0;
    for (const cplx& z : zeta) zeta_abs += std::norm(z);
    zeta_abs = std::sqrt(zeta_abs);
    tr.eps = epsilon_for(zeta_abs, T);

    double lam = ms.base().lambda(), Lam = ms.base().Lambda();
    double cond_factor = std::sqrt(Lam / lam);

    std::shared_ptr<const TimeSliceCache> sl;
    if (nxi > 0.0) sl = ms.slice(xi);

    double u0n = vec_norm(traj[0]);
    double phi_acc = 0.0, f_acc = 0.0, phi_prev = 0.0, f_prev = forcing_norms.empty() ? 0.0 : forcing_norms[0];
    tr.equiv_violation = 0.0;
    double min_margin_rel = 1e300;

    for (std::size_t i = 0; i < nn; ++i) {
        double t = dt * static_cast<double>(i);
        const std::vector<cplx>& u = traj[i];
        double un = vec_norm(u);
        double un2 = un * un;

        double E;
        if (nxi > 0.0) {
            Mat s_eps = ms.at(tr.eps, t, xi);
            std::vector<cplx> su = s_eps.apply(u);
            cplx dot(0.0, 0.0);
            for (std::size_t k = 0; k < u.size(); ++k) dot += su[k] * std::conj(u[k]);
            E = dot.real();
        } else {
            E = un2; // S(t,0) = 0 convention; the plain modulus drives the estimate
        }
        double phi_i = phi_eps(ms, c, t, zeta, tr.eps);

        if (i > 0) {
            phi_acc += 0.5 * dt * (phi_prev + phi_i);
            if (!forcing_norms.empty()) f_acc += 0.5 * dt * (f_prev + forcing_norms[i]);
        }
        phi_prev = phi_i;
        if (!forcing_norms.empty()) f_prev = forcing_norms[i];

        double rhs = cond_factor * std::exp(phi_acc) *
                     (u0n + 2.0 * std::sqrt(Lam) / std::sqrt(lam) * f_acc);
        double margin = rhs - un;

        tr.t.push_back(t);
        tr.energy.push_back(E);
        tr.amplitude.push_back(un);
        tr.phi.push_back(phi_i);
        tr.rhs.push_back(rhs);
        tr.margin.push_back(margin);

        if (nxi > 0.0) {
            double denom = std::max({E, lam * un2, 1e-300});
            double viol = std::max(lam * un2 - E, E - Lam * un2) / denom;
            tr.equiv_violation = std::max(tr.equiv_violation, viol);
        }
        if (rhs > 0.0) min_margin_rel = std::min(min_margin_rel, margin / rhs);
    }
    tr.min_margin_rel = (min_margin_rel == 1e300) ? 0.0 : min_margin_rel;
    tr.equivalence_pass = tr.equiv_violation <= 1e-9;
    tr.margin_pass = tr.min_margin_rel >= -1e-8;
    return tr;
}

json EnergyTrace::to_json() const {
    json j;
    json zj = json::array();
    for (const cplx& z : zeta) zj.push_back({z.real(), z.imag()});
    j["zeta"] = zj;
    j["eps"] = eps;
    j["min_margin_rel"] = min_margin_rel;
    j["equiv_violation"] = equiv_violation;
    j["equivalence_pass"] = equivalence_pass;
    j["margin_pass"] = margin_pass;
    j["nodes"] = t.size();
    return j;
}

// ---------------------------------------------------------------------------
// conditions and the I1/I2 report
// ---------------------------------------------------------------------------

ConditionReport detect_conditions(const Symmetrizer& s, const CoefficientFamily& c) {
    ConditionReport rep;
    auto dirs = sphere_directions(c.space_dim(), std::min(8, c.space_dim() == 1 ? 2 : 8));
    double T = s.horizon();
    for (int k : {16, 32, 64, 128}) {
        double worst = 0.0;
        double step = T / k;
        for (int i = 0; i + 1 < k; ++i) {
            double t = T * (i + 0.5) / k;
            for (const auto& d : dirs)
                worst = std::max(worst, op_norm(s.at(t + step, d) - s.at(t, d)));
        }
        rep.continuity_moduli.push_back(worst);
    }
    rep.condition_i =
        rep.continuity_moduli.back() <= 0.5 * rep.continuity_moduli.front() + 1e-12;
    BoundednessReport b = boundedness(c);
    rep.condition_ii = b.bounded;
    rep.C0 = b.C0;
    return rep;
}

json ConditionReport::to_json() const {
    json j;
    j["condition_i_continuous_S"] = condition_i;
    j["condition_ii_bounded_alpha"] = condition_ii;
    j["C0"] = C0;
    j["continuity_moduli"] = continuity_moduli;
    return j;
}

BoundReportI bound_report_I(const MollifiedSymmetrizer& ms, const CoefficientFamily& c,
                            std::span<const cplx> zeta, int sphere_dirs) {
    const Symmetrizer& s = ms.base();
    double T = s.horizon();
    std::vector<double> xi = re_part(zeta);
    double nxi = vec2(xi);
    if (nxi == 0.0) throw Error("bound_report_I: Re zeta must be nonzero");
    double zeta_abs = 0.0;
    for (const cplx& z : zeta) zeta_abs += std::norm(z);
    zeta_abs = std::sqrt(zeta_abs);
    if (zeta_abs < 1.0) throw Error("bound_report_I: |zeta| >= 1 required");

    BoundReportI rep;
    rep.zeta_norm = zeta_abs;
    rep.eps = epsilon_for(zeta_abs, T);
    rep.conditions = detect_conditions(s, c);
    if (!rep.conditions.condition_i && !rep.conditions.condition_ii)
        throw ConditionUndetermined("bound_report_I: neither continuity of S nor bounded alpha detected");

    double eps = rep.eps;
    auto sl = ms.slice(xi);
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

    std::vector<double> splits{eps, T - eps};
    for (double bp : s.time_breakpoints()) {
        splits.push_back(bp);
        splits.push_back(bp - eps);
        splits.push_back(bp + eps);
    }
    double lam = s.lambda(), Lam = s.Lambda();
    double tol = 1e-9 * std::max(1.0, Lam) * T;

    rep.I1 = 2.0 / std::sqrt(lam) *
             adaptive_simpson_lenient([&](double t) { return op_norm(dt_s_eps_at(t)); }, 0.0, T,
                                      tol / eps, splits);
    rep.I2 = 2.0 * nxi / std::sqrt(lam) *
             adaptive_simpson_lenient(
                 [&](double t) { return op_norm(s_eps_at(t) - (*sl)(t)) * alpha(c, t); }, 0.0, T,
                 tol, splits);

    rep.omega_xi = omega_S_slice(*sl, eps);
    rep.omega_tilde = rep.omega_xi;
    for (const auto& d : sphere_directions(c.space_dim(), sphere_dirs)) {
        auto dir_slice = ms.slice(d);
        rep.omega_tilde = std::max(rep.omega_tilde, omega_S_slice(*dir_slice, eps));
    }

    // constants assembled along the estimate chain: the kernel constant from
    // the mollification bounds, 1/sqrt(lambda) prefactors, sqrt(Lambda) from
    // the uniform symmetrizer bound, the guard factor kappa = 1/(eps |zeta|)
    // and, for I2, the coefficient sup C0
    double C_lem = 2.0 * std::max(ms.kernel().l1_rho(), ms.kernel().l1_drho());
    double kappa = 1.0 / (eps * zeta_abs); // >= 1 when the T/2 guard binds
    rep.C1 = 2.0 * C_lem / std::sqrt(lam) * std::max(1.0, std::sqrt(Lam)) * std::max(1.0, kappa);
    double C0 = rep.conditions.condition_ii ? rep.conditions.C0 : 0.0;
    rep.C2 = 2.0 * C_lem / std::sqrt(lam) * std::max(1.0, std::sqrt(Lam)) * std::max(1.0, C0);
    rep.bound1 = rep.C1 * (zeta_abs * rep.omega_xi + 1.0);
    rep.bound2 = rep.C2 * (zeta_abs * rep.omega_xi + 1.0);
    rep.ratio1 = rep.I1 / rep.bound1;
    rep.ratio2 = rep.I2 / rep.bound2;

    // condition-(i) route: I2 <= (2 |xi| / sqrt(lambda)) sup|S_eps - S| int alpha
    if (rep.conditions.condition_i) {
        double sup_gap = 0.0;
        for (int i = 0; i <= 512; ++i) {
            double t = T * i / 512.0;
            sup_gap = std::max(sup_gap, op_norm(s_eps_at(t) - (*sl)(t)));
        }
        rep.sup_molly_gap = sup_gap;
        rep.bound2_route_i = 2.0 * nxi / std::sqrt(lam) * sup_gap * alpha_integral(c, T);
        rep.ratio2_route_i = (rep.bound2_route_i > 0.0) ? rep.I2 / rep.bound2_route_i : 0.0;
    }
    return rep;
}

json BoundReportI::to_json() const {
    json j;
    j["zeta_norm"] = zeta_norm;
    j["eps"] = eps;
    j["I1"] = I1;
    j["I2"] = I2;
    j["omega_xi"] = omega_xi;
    j["omega_tilde"] = omega_tilde;
    j["C1"] = C1;
    j["C2"] = C2;
    j["bound1"] = bound1;
    j["bound2"] = bound2;
    j["ratio1"] = ratio1;
    j["ratio2"] = ratio2;
    j["sup_molly_gap"] = sup_molly_gap;
    j["bound2_route_i"] = bound2_route_i;
    j["ratio2_route_i"] = ratio2_route_i;
    j["conditions"] = conditions.to_json();
    return j;
}

// ---------------------------------------------------------------------------
// support tracking
// ---------------------------------------------------------------------------

double support_radius(const Field& u, const std::vector<double>& center, double theta) {
    if (!(theta > 0.0) || theta >= 1.0) throw Error("support_radius: theta in (0, 1) required");
    double peak = u.max_norm();
    if (peak <= 1e-13) return 0.0;
    double cut = theta * peak;
    double radius = 0.0;
    for (std::size_t p = 0; p < u.grid.points(); ++p)
        if (u.point_norm(p) > cut) radius = std::max(radius, u.grid.periodic_distance(p, center));
    return radius;
}

ConeReport cone_check(const LatticeRun& run, const std::vector<double>& center,
                      const ConeRadii& radii, double theta) {
    ConeReport rep;
    rep.h = run.grid.h();
    rep.theta = theta;
    for (std::size_t i = 0; i < run.fields.size(); ++i) {
        ConeTimeRow row;
        row.t = run.times[i];
        row.measured = support_radius(run.fields[i], center, theta);
        row.bound = radii.forward(row.t);
        row.pass = row.measured <= row.bound + 2.0 * rep.h;
        rep.rows.push_back(row);
    }
    rep.pass = true;
    for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
    return rep;
}

json ConeReport::to_json() const {
    json j;
    j["pass"] = pass;
    j["h"] = h;
    j["theta"] = theta;
    json rowsj = json::array();
    for (const auto& r : rows)
        rowsj.push_back({{"t", r.t}, {"measured", r.measured}, {"bound", r.bound}, {"pass", r.pass}});
    j["rows"] = rowsj;
    return j;
}

std::string ConeReport::csv_header() { return "t,measured,bound,margin"; }

std::string ConeReport::csv_rows() const {
    std::ostringstream os;
    for (const auto& r : rows)
        os << fmt(r.t) << "," << fmt(r.measured) << "," << fmt(r.bound) << ","
           << fmt(r.bound - r.measured) << "\n";
    return os.str();
}

DodReport dod_check(const Field& initial_data, const LatticeRun& run,
                    const std::vector<double>& x0, const ConeRadii& radii) {
    DodReport rep;
    rep.h = run.grid.h();
    double r0 = radii.r0();

    // the data must actually vanish on the hole
    double data_peak = initial_data.max_norm();
    double worst_inside = 0.0;
    for (std::size_t p = 0; p < initial_data.grid.points(); ++p)
        if (initial_data.grid.periodic_distance(p, x0) < r0)
            worst_inside = std::max(worst_inside, initial_data.point_norm(p));
    if (worst_inside > std::max(1e-12, 1e-12 * data_peak))
        throw PreconditionError("dod_check: data do not vanish on the declared hole");

    bool any = false;
    for (std::size_t i = 0; i < run.fields.size(); ++i) {
        DodTimeRow row;
        row.t = run.times[i];
        row.rho = radii.backward(row.t);
        row.region = row.rho - 2.0 * rep.h;
        if (row.region <= 0.0) {
            row.pass = true;
            row.max_in_hole = 0.0;
            row.tolerance = 0.0;
            rep.rows.push_back(row);
            continue;
        }
        any = true;
        const Field& f = run.fields[i];
        double peak = f.max_norm();
        double inside = 0.0;
        for (std::size_t p = 0; p < f.grid.points(); ++p)
            if (f.grid.periodic_distance(p, x0) < row.region)
                inside = std::max(inside, f.point_norm(p));
        row.max_in_hole = inside;
        row.tolerance = std::max(1e-8, 1e-6 * peak);
        row.pass = inside <= row.tolerance;
        rep.rows.push_back(row);
    }
    if (!any) throw EmptyRegion("dod_check: rho(t) - 2h <= 0 at every requested time");
    rep.pass = true;
    for (const auto& r : rep.rows) rep.pass = rep.pass && r.pass;
    return rep;
}

json DodReport::to_json() const {
    json j;
    j["pass"] = pass;
    j["h"] = h;
    json rowsj = json::array();
    for (const auto& r : rows)
        rowsj.push_back({{"t", r.t},
                         {"rho", r.rho},
                         {"region", r.region},
                         {"max_in_hole", r.max_in_hole},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass}});
    j["rows"] = rowsj;
    return j;
}

// ---------------------------------------------------------------------------
// Paley-Wiener probe
// ---------------------------------------------------------------------------

PWReport pw_probe(const Field& u, double t_label, const std::vector<std::vector<double>>& dirs,
                  const std::vector<double>& magnitudes, const std::vector<double>& xi0,
                  double delta, double r_ref) {
    if (dirs.empty() || magnitudes.empty()) throw Error("pw_probe: need directions and magnitudes");
    const SpectralGrid& g = u.grid;
    std::vector<double> origin(static_cast<std::size_t>(g.dim), 0.0);
    double data_radius = support_radius(u, origin, 1e-8);
    if (data_radius + g.h() >= 0.5 * g.L)
        throw PreconditionError("pw_probe: field support reaches the box boundary");

    double eta_max = *std::max_element(magnitudes.begin(), magnitudes.end());
    if ((r_ref + delta) * eta_max > 700.0)
        throw DynamicRangeExceeded("pw_probe: requested magnitudes overflow exp((r+delta)|eta|)");

    PWReport rep;
    rep.t = t_label;
    rep.delta = delta;
    rep.r_ref = r_ref;
    rep.xi0 = xi0;

    std::size_t pts = g.points();
    double scale = std::pow(g.h(), g.dim);

    // fit window: magnitudes below the ceiling, then the top decade of those
    std::vector<double> window;
    for (double eta : magnitudes)
        if (eta * r_ref < 30.0) window.push_back(eta);
    std::sort(window.begin(), window.end());
    if (!window.empty()) {
        double top = window.back();
        std::vector<double> keep;
        for (double eta : window)
            if (eta >= top / 10.0) keep.push_back(eta);
        window = keep;
    }

    for (const auto& d : dirs) {
        PwDirectionFit fit;
        fit.dir = d;
        for (double eta : window) {
            // uhat(xi0 + i eta d) = h^n sum u(x) e^{-i xi0 . x} e^{eta d . x}
            std::vector<cplx> acc(static_cast<std::size_t>(u.m), cplx(0.0, 0.0));
            for (std::size_t p = 0; p < pts; ++p) {
                bool nonzero = false;
                for (int c = 0; c < u.m; ++c)
                    if (u.at(c, p) != 0.0) nonzero = true;
                if (!nonzero) continue;
                auto x = g.x(p);
                double phase = 0.0, growth = 0.0;
                for (int ax = 0; ax < g.dim; ++ax) {
                    phase -= xi0[static_cast<std::size_t>(ax)] * x[static_cast<std::size_t>(ax)];
                    growth += eta * d[static_cast<std::size_t>(ax)] * x[static_cast<std::size_t>(ax)];
                }
                cplx w = std::exp(growth) * cplx(std::cos(phase), std::sin(phase));
                for (int c = 0; c < u.m; ++c) acc[static_cast<std::size_t>(c)] += u.at(c, p) * w;
            }
            double mag = 0.0;
            for (const cplx& z : acc) mag += std::norm(z);
            mag = scale * std::sqrt(mag);
            fit.etas.push_back(eta);
            fit.log_values.push_back(mag > 1e-290 ? std::log(mag) : -700.0);
        }
        // least squares log|uhat| = intercept + slope * eta
        std::size_t n = fit.etas.size();
        bool floored = true;
        for (double lv : fit.log_values)
            if (lv > -699.0) floored = false;
        if (n < 2 || floored) {
            fit.degenerate = true;
            fit.slope = 0.0;
            fit.intercept = 0.0;
        } else {
            double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                sx += fit.etas[i];
                sy += fit.log_values[i];
                sxx += fit.etas[i] * fit.etas[i];
                sxy += fit.etas[i] * fit.log_values[i];
            }
            double denom = n * sxx - sx * sx;
            fit.slope = (n * sxy - sx * sy) / denom;
            fit.intercept = (sy - fit.slope * sx) / n;
        }
        rep.fits.push_back(std::move(fit));
    }
    rep.max_slope = 0.0;
    for (const auto& f : rep.fits)
        if (!f.degenerate) rep.max_slope = std::max(rep.max_slope, f.slope);
    return rep;
}

json PWReport::to_json() const {
    json j;
    j["t"] = t;
    j["delta"] = delta;
    j["r_ref"] = r_ref;
    j["xi0"] = xi0;
    j["max_slope"] = max_slope;
    json fitsj = json::array();
    for (const auto& f : fits) {
        json fj;
        fj["dir"] = f.dir;
        fj["slope"] = f.slope;
        fj["intercept"] = f.intercept;
        fj["degenerate"] = f.degenerate;
        fitsj.push_back(fj);
    }
    j["fits"] = fitsj;
    return j;
}

std::string PWReport::csv_header() { return "t,dir,eta,log_value,slope"; }

std::string PWReport::csv_rows() const {
    std::ostringstream os;
    for (const auto& f : fits) {
        std::ostringstream dname;
        for (std::size_t i = 0; i < f.dir.size(); ++i) dname << (i ? ";" : "") << fmt(f.dir[i]);
        for (std::size_t i = 0; i < f.etas.size(); ++i)
            os << fmt(t) << ",\"" << dname.str() << "\"," << fmt(f.etas[i]) << ","
               << fmt(f.log_values[i]) << "," << fmt(f.slope) << "\n";
    }
    return os.str();
}

} // namespace hypercone
