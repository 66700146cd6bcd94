#include "hypercone/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hypercone/parallel.hpp"

namespace hypercone {

void ModeProblem::validate() const {
    if (Nt < 8) throw Error("ModeProblem: need Nt >= 8");
    if (static_cast<int>(zeta.size()) != family.space_dim())
        throw Error("ModeProblem: zeta dimension mismatch");
    if (static_cast<int>(u0.size()) != family.system_size())
        throw Error("ModeProblem: u0 size mismatch");
}

namespace {

// y += s * x
void axpy(std::vector<cplx>& y, cplx s, const std::vector<cplx>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

// k = -i A u + f
std::vector<cplx> rhs_of(const Mat& a, const std::vector<cplx>& u, const std::vector<cplx>* f) {
    std::vector<cplx> k = a.apply(u);
    const cplx mi(0.0, -1.0);
    for (auto& z : k) z *= mi;
    if (f)
        for (std::size_t i = 0; i < k.size(); ++i) k[i] += (*f)[i];
    return k;
}

std::vector<cplx> rk4_step(const Mat& a0, const Mat& am, const Mat& a1,
                           const std::vector<cplx>* f0, const std::vector<cplx>* fm,
                           const std::vector<cplx>* f1, double h, const std::vector<cplx>& u) {
    std::vector<cplx> k1 = rhs_of(a0, u, f0);
    std::vector<cplx> s = u;
    axpy(s, 0.5 * h, k1);
    std::vector<cplx> k2 = rhs_of(am, s, fm);
    s = u;
    axpy(s, 0.5 * h, k2);
    std::vector<cplx> k3 = rhs_of(am, s, fm);
    s = u;
    axpy(s, h, k3);
    std::vector<cplx> k4 = rhs_of(a1, s, f1);
    std::vector<cplx> out = u;
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

} // namespace

std::vector<std::vector<cplx>> solve_mode_rk4(const ModeProblem& p) {
    p.validate();
    double T = p.family.horizon();
    double h = T / p.Nt;
    double guard = 1e12 * (vec_norm(p.u0) + 1.0);

    std::vector<std::vector<cplx>> traj(static_cast<std::size_t>(p.Nt) + 1);
    traj[0] = p.u0;
    Mat a_prev = symbol_complex(p.family, 0.0, p.zeta);
    for (int k = 0; k < p.Nt; ++k) {
        double t = h * k;
        double tm = std::min(t + 0.5 * h, T);
        double t1 = std::min(t + h, T);
        Mat am = symbol_complex(p.family, tm, p.zeta);
        Mat a1 = symbol_complex(p.family, t1, p.zeta);
        std::vector<cplx> f0, fm, f1;
        const std::vector<cplx>*pf0 = nullptr, *pfm = nullptr, *pf1 = nullptr;
        if (p.forcing) {
            f0 = p.forcing(t);
            fm = p.forcing(tm);
            f1 = p.forcing(t1);
            pf0 = &f0;
            pfm = &fm;
            pf1 = &f1;
        }
        traj[static_cast<std::size_t>(k) + 1] =
            rk4_step(a_prev, am, a1, pf0, pfm, pf1, h, traj[static_cast<std::size_t>(k)]);
        if (vec_norm(traj[static_cast<std::size_t>(k) + 1]) > guard)
            throw StepOverflow("solve_mode_rk4: intermediate norm exceeded guard");
        a_prev = a1;
    }
    return traj;
}

std::vector<std::vector<cplx>> solve_mode_picard(const ModeProblem& p, int iters) {
    p.validate();
    if (iters < 1) throw Error("solve_mode_picard: iters >= 1 required");
    double T = p.family.horizon();
    double h = T / p.Nt;
    std::size_t nn = static_cast<std::size_t>(p.Nt) + 1;
    int m = p.family.system_size();

    std::vector<Mat> a_nodes;
    a_nodes.reserve(nn);
    std::vector<std::vector<cplx>> f_nodes(nn, std::vector<cplx>(static_cast<std::size_t>(m), cplx(0.0, 0.0)));
    for (std::size_t i = 0; i < nn; ++i) {
        double t = std::min(h * static_cast<double>(i), T);
        a_nodes.push_back(symbol_complex(p.family, t, p.zeta));
        if (p.forcing) f_nodes[i] = p.forcing(t);
    }

    std::vector<std::vector<cplx>> cur(nn, p.u0);
    std::vector<std::vector<cplx>> next(nn, p.u0);
    for (int it = 0; it < iters; ++it) {
        std::vector<cplx> acc(static_cast<std::size_t>(m), cplx(0.0, 0.0));
        std::vector<cplx> g_prev = rhs_of(a_nodes[0], cur[0], &f_nodes[0]);
        next[0] = p.u0;
        for (std::size_t i = 1; i < nn; ++i) {
            std::vector<cplx> g = rhs_of(a_nodes[i], cur[i], &f_nodes[i]);
            for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += 0.5 * h * (g_prev[c] + g[c]);
            next[i] = p.u0;
            for (std::size_t c = 0; c < acc.size(); ++c) next[i][c] += acc[c];
            g_prev = std::move(g);
        }
        std::swap(cur, next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// lattice runs
// ---------------------------------------------------------------------------

void LatticeProblem::validate() const {
    grid.validate();
    if (m < 1) throw Error("LatticeProblem: m >= 1 required");
    if (u0.m != m || u0.grid.N != grid.N || u0.grid.dim != grid.dim)
        throw Error("LatticeProblem: u0 does not match the grid");
    if (static_cast<int>(x0.size()) != grid.dim) throw Error("LatticeProblem: x0 dimension mismatch");
    if (!(r0 > 0.0) || r0 >= 0.5 * grid.L)
        throw PreconditionError("LatticeProblem: need 0 < r0 < L/2 for the declared support");
}

std::vector<std::vector<cplx>> LatticeRun::mode_trajectory(std::size_t flat) const {
    if (!has_mode_history) throw Error("LatticeRun: mode history was not stored");
    std::vector<std::vector<cplx>> traj(mode_history.size(), std::vector<cplx>(static_cast<std::size_t>(m)));
    for (std::size_t node = 0; node < mode_history.size(); ++node)
        for (int c = 0; c < m; ++c)
            traj[node][static_cast<std::size_t>(c)] = mode_history[node][flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)];
    return traj;
}

std::vector<double> LatticeRun::forcing_norms(std::size_t flat) const {
    std::vector<double> out;
    if (!has_forcing) return out;
    out.reserve(fhat_nodes.size());
    for (const auto& node : fhat_nodes) {
        double s = 0.0;
        for (int c = 0; c < m; ++c)
            s += std::norm(node[flat * static_cast<std::size_t>(m) + static_cast<std::size_t>(c)]);
        out.push_back(std::sqrt(s));
    }
    return out;
}

LatticeRun solve_lattice(const LatticeProblem& lp, const CoefficientFamily& c, int Nt,
                         const LatticeSolveOptions& opts) {
    lp.validate();
    if (c.space_dim() != lp.grid.dim) throw Error("solve_lattice: dimension mismatch");
    if (c.system_size() != lp.m) throw Error("solve_lattice: system size mismatch");
    if (Nt < 8) throw Error("solve_lattice: need Nt >= 8");
    if (opts.forward_radius_at_T && !(*opts.forward_radius_at_T < 0.5 * lp.grid.L))
        throw PreconditionError(
            "solve_lattice: no-wrap condition r(T) < L/2 violated; enlarge the box or shorten T");

    const double T = c.horizon();
    const double h = T / Nt;
    const std::size_t pts = lp.grid.points();
    const int m = lp.m;
    const std::size_t nn = static_cast<std::size_t>(Nt) + 1;

    LatticeRun run;
    run.grid = lp.grid;
    run.m = m;
    run.Nt = Nt;
    run.T = T;

    // coefficients at every stage time, shared across modes
    std::vector<std::vector<Mat>> coeff_nodes(nn);
    std::vector<std::vector<Mat>> coeff_mids(static_cast<std::size_t>(Nt));
    for (std::size_t i = 0; i < nn; ++i) coeff_nodes[i] = c.at(std::min(h * static_cast<double>(i), T));
    for (int k = 0; k < Nt; ++k) coeff_mids[static_cast<std::size_t>(k)] = c.at(std::min(h * (k + 0.5), T));

    run.u0_hat = spectral_forward(lp.u0);

    run.has_forcing = static_cast<bool>(lp.forcing);
    if (run.has_forcing) {
        run.fhat_nodes.assign(nn, std::vector<cplx>(pts * static_cast<std::size_t>(m)));
        for (std::size_t i = 0; i < nn; ++i) {
            Field f = lp.forcing(std::min(h * static_cast<double>(i), T));
            ModeField fh = spectral_forward(f);
            for (std::size_t p = 0; p < pts; ++p)
                for (int cc = 0; cc < m; ++cc)
                    run.fhat_nodes[i][p * static_cast<std::size_t>(m) + static_cast<std::size_t>(cc)] = fh.at(cc, p);
        }
    }

    // output times snapped to nodes
    std::vector<double> wanted = opts.output_times.empty() ? std::vector<double>{T} : opts.output_times;
    std::vector<std::size_t> indices;
    for (double t : wanted) {
        if (t < -1e-12 || t > T + 1e-12) throw OutOfDomain("solve_lattice: output time outside [0, T]");
        auto idx = static_cast<std::size_t>(std::llround(std::clamp(t, 0.0, T) / h));
        indices.push_back(std::min(idx, nn - 1));
    }

    run.has_mode_history = opts.store_modes;
    if (opts.store_modes) {
        run.mode_history.assign(nn, std::vector<cplx>(pts * static_cast<std::size_t>(m)));
        for (std::size_t p = 0; p < pts; ++p)
            for (int cc = 0; cc < m; ++cc)
                run.mode_history[0][p * static_cast<std::size_t>(m) + static_cast<std::size_t>(cc)] = run.u0_hat.at(cc, p);
    }
    std::vector<std::vector<cplx>> out_modes(indices.size(),
                                             std::vector<cplx>(pts * static_cast<std::size_t>(m)));

    // per-mode RK4 sweep; every worker writes only its own mode slots
    std::vector<int> overflow_mode(pts, -1);
    parallel_for(pts, opts.threads, [&](std::size_t p) {
        std::vector<double> xi = lp.grid.xi(p);
        std::vector<cplx> zeta(xi.size());
        for (std::size_t d = 0; d < xi.size(); ++d) zeta[d] = cplx(xi[d], 0.0);
        std::vector<cplx> u(static_cast<std::size_t>(m));
        for (int cc = 0; cc < m; ++cc) u[static_cast<std::size_t>(cc)] = run.u0_hat.at(cc, p);
        double guard = 1e12 * (vec_norm(u) + 1.0);

        auto snapshot = [&](std::size_t node, const std::vector<cplx>& val) {
            if (opts.store_modes)
                for (int cc = 0; cc < m; ++cc)
                    run.mode_history[node][p * static_cast<std::size_t>(m) + static_cast<std::size_t>(cc)] = val[static_cast<std::size_t>(cc)];
            for (std::size_t oi = 0; oi < indices.size(); ++oi)
                if (indices[oi] == node)
                    for (int cc = 0; cc < m; ++cc)
                        out_modes[oi][p * static_cast<std::size_t>(m) + static_cast<std::size_t>(cc)] = val[static_cast<std::size_t>(cc)];
        };
        snapshot(0, u);

        std::vector<cplx> f0, fm, f1;
        for (int k = 0; k < Nt; ++k) {
            Mat a0 = assemble_symbol_complex(coeff_nodes[static_cast<std::size_t>(k)], zeta);
            Mat am = assemble_symbol_complex(coeff_mids[static_cast<std::size_t>(k)], zeta);
            Mat a1 = assemble_symbol_complex(coeff_nodes[static_cast<std::size_t>(k) + 1], zeta);
            const std::vector<cplx>*pf0 = nullptr, *pfm = nullptr, *pf1 = nullptr;
            if (run.has_forcing) {
                f0.assign(static_cast<std::size_t>(m), cplx(0.0, 0.0));
                fm = f0;
                f1 = f0;
                for (int cc = 0; cc < m; ++cc) {
                    std::size_t slot = p * static_cast<std::size_t>(m) + static_cast<std::size_t>(cc);
                    cplx a = run.fhat_nodes[static_cast<std::size_t>(k)][slot];
                    cplx b = run.fhat_nodes[static_cast<std::size_t>(k) + 1][slot];
                    f0[static_cast<std::size_t>(cc)] = a;
                    fm[static_cast<std::size_t>(cc)] = 0.5 * (a + b); // linear interp at the half node
                    f1[static_cast<std::size_t>(cc)] = b;
                }
                pf0 = &f0;
                pfm = &fm;
                pf1 = &f1;
            }
            u = rk4_step(a0, am, a1, pf0, pfm, pf1, h, u);
            if (vec_norm(u) > guard) {
                overflow_mode[p] = k;
                return;
            }
            snapshot(static_cast<std::size_t>(k) + 1, u);
        }
    });
    for (std::size_t p = 0; p < pts; ++p)
        if (overflow_mode[p] >= 0)
            throw StepOverflow("solve_lattice: StepOverflow at lattice mode " + std::to_string(p) +
                               " (step " + std::to_string(overflow_mode[p]) + ")");

    // synthesis at output times
    for (std::size_t oi = 0; oi < indices.size(); ++oi) {
        std::size_t node = indices[oi];
        ModeField mf(lp.grid, m);
        for (std::size_t p = 0; p < pts; ++p)
            for (int cc = 0; cc < m; ++cc)
                mf.at(cc, p) = out_modes[oi][p * static_cast<std::size_t>(m) + static_cast<std::size_t>(cc)];
        run.max_hermitian_asymmetry = std::max(run.max_hermitian_asymmetry, hermitian_asymmetry(mf));
        double residue = 0.0;
        run.fields.push_back(spectral_inverse(mf, &residue));
        run.max_imag_residue = std::max(run.max_imag_residue, residue);
        run.times.push_back(h * static_cast<double>(node));
        run.time_indices.push_back(node);
    }
    return run;
}

} // namespace hypercone
