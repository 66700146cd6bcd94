#include "hypercone/matcore.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace hypercone {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_dim(int dim) {
    if (dim < 1 || dim > 64) throw Error("Mat dimension must be in [1, 64]");
}

} // namespace

Mat::Mat(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim) * dim, cplx(0.0, 0.0)) {
    require_dim(dim);
}

Mat::Mat(int dim, const std::vector<cplx>& entries) : dim_(dim), a_(entries) {
    require_dim(dim);
    if (a_.size() != static_cast<std::size_t>(dim) * dim)
        throw Error("Mat entry count does not match dimension");
    check_finite();
}

void Mat::check_finite() const {
    for (const cplx& z : a_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error("Mat entries must be finite");
}

Mat Mat::identity(int dim) {
    Mat r(dim);
    for (int i = 0; i < dim; ++i) r(i, i) = 1.0;
    return r;
}

Mat Mat::diag(const std::vector<cplx>& d) {
    Mat r(static_cast<int>(d.size()));
    for (int i = 0; i < r.dim(); ++i) r(i, i) = d[static_cast<std::size_t>(i)];
    r.check_finite();
    return r;
}

Mat Mat::real(std::initializer_list<std::initializer_list<double>> rows) {
    int dim = static_cast<int>(rows.size());
    Mat r(dim);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim) throw Error("Mat initializer must be square");
        int j = 0;
        for (double v : row) r(i, j++) = v;
        ++i;
    }
    r.check_finite();
    return r;
}

Mat Mat::complex(std::initializer_list<std::initializer_list<cplx>> rows) {
    int dim = static_cast<int>(rows.size());
    Mat r(dim);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim) throw Error("Mat initializer must be square");
        int j = 0;
        for (cplx v : row) r(i, j++) = v;
        ++i;
    }
    r.check_finite();
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    Mat r(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] + o.a_[k];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    Mat r(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] - o.a_[k];
    return r;
}

Mat& Mat::operator+=(const Mat& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
}

Mat Mat::operator*(const Mat& o) const {
    Mat r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int k = 0; k < dim_; ++k) {
            cplx aik = (*this)(i, k);
            if (aik == cplx(0.0, 0.0)) continue;
            for (int j = 0; j < dim_; ++j) r(i, j) += aik * o(k, j);
        }
    return r;
}

Mat Mat::operator*(cplx s) const {
    Mat r(dim_);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = a_[k] * s;
    return r;
}

Mat operator*(double s, const Mat& a) { return a * cplx(s, 0.0); }

Mat Mat::adjoint() const {
    Mat r(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

std::vector<cplx> Mat::apply(std::span<const cplx> v) const {
    std::vector<cplx> r(static_cast<std::size_t>(dim_), cplx(0.0, 0.0));
    for (int i = 0; i < dim_; ++i) {
        cplx acc(0.0, 0.0);
        for (int j = 0; j < dim_; ++j) acc += (*this)(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = acc;
    }
    return r;
}

double Mat::frobenius() const {
    double s = 0.0;
    for (const cplx& z : a_) s += std::norm(z);
    return std::sqrt(s);
}

double Mat::max_abs() const {
    double s = 0.0;
    for (const cplx& z : a_) s = std::max(s, std::abs(z));
    return s;
}

bool Mat::is_real(double tol) const {
    for (const cplx& z : a_)
        if (std::abs(z.imag()) > tol) return false;
    return true;
}

double vec_norm(std::span<const cplx> v) {
    double s = 0.0;
    for (const cplx& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Hermitian Jacobi
// ---------------------------------------------------------------------------

namespace {

// One two-sided rotation U in the (p,q) plane with
//   U(p,p)=c, U(p,q)=s, U(q,p)=-s*conj(e), U(q,q)=c*conj(e),  e = e^{i phi},
// chosen to annihilate A(p,q) of a Hermitian A. V accumulates eigenvectors.
void jacobi_rotate(Mat& a, Mat& v, int p, int q) {
    cplx apq = a(p, q);
    double b = std::abs(apq);
    if (b == 0.0) return;
    cplx e = apq / b; // e^{i phi}
    double app = a(p, p).real();
    double aqq = a(q, q).real();
    double tau = (aqq - app) / (2.0 * b);
    double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                            : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    double c = 1.0 / std::sqrt(1.0 + t * t);
    double s = t * c;

    int m = a.dim();
    cplx ce = std::conj(e);
    // column update: B = A * U
    for (int i = 0; i < m; ++i) {
        cplx aip = a(i, p), aiq = a(i, q);
        a(i, p) = aip * c - aiq * (s * ce);
        a(i, q) = aip * s + aiq * (c * ce);
    }
    // row update: A' = U^* B
    for (int j = 0; j < m; ++j) {
        cplx apj = a(p, j), aqj = a(q, j);
        a(p, j) = c * apj - (s * e) * aqj;
        a(q, j) = s * apj + (c * e) * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx(a(p, p).real(), 0.0);
    a(q, q) = cplx(a(q, q).real(), 0.0);
    for (int i = 0; i < m; ++i) {
        cplx vip = v(i, p), viq = v(i, q);
        v(i, p) = vip * c - viq * (s * ce);
        v(i, q) = vip * s + viq * (c * ce);
    }
}

double offdiag_norm(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Full Jacobi diagonalization of the Hermitian part symmetrization of `a`.
void hermitian_jacobi(const Mat& input, std::vector<double>& evals, Mat* vecs) {
    int m = input.dim();
    Mat a(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            a(i, j) = 0.5 * (input(i, j) + std::conj(input(j, i)));
    Mat v = Mat::identity(m);
    double scale = std::max(1.0, a.frobenius());
    for (int sweep = 0; sweep < 128; ++sweep) {
        if (offdiag_norm(a) <= 64.0 * kEps * scale) break;
        for (int p = 0; p < m - 1; ++p)
            for (int q = p + 1; q < m; ++q)
                if (std::abs(a(p, q)) > 0.25 * kEps * scale / (m * m)) jacobi_rotate(a, v, p, q);
    }
    evals.resize(static_cast<std::size_t>(m));
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });
    Mat vs(m);
    for (int k = 0; k < m; ++k) {
        evals[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        for (int i = 0; i < m; ++i) vs(i, k) = v(i, order[static_cast<std::size_t>(k)]);
    }
    if (vecs) *vecs = vs;
}

} // namespace

std::vector<double> hermitian_eigenvalues(const Mat& a) {
    // closed forms for the dominant small sizes
    if (a.dim() == 1) return {a(0, 0).real()};
    if (a.dim() == 2) {
        double p = a(0, 0).real(), r = a(1, 1).real();
        cplx q = 0.5 * (a(0, 1) + std::conj(a(1, 0)));
        double mid = 0.5 * (p + r);
        double disc = std::sqrt(0.25 * (p - r) * (p - r) + std::norm(q));
        return {mid - disc, mid + disc};
    }
    std::vector<double> evals;
    hermitian_jacobi(a, evals, nullptr);
    return evals;
}

double op_norm(const Mat& a) {
    if (a.dim() == 1) return std::abs(a(0, 0));
    if (a.dim() == 2) {
        // largest singular value of a 2x2 from the Gram closed form
        double p = std::norm(a(0, 0)) + std::norm(a(1, 0));
        double r = std::norm(a(0, 1)) + std::norm(a(1, 1));
        cplx q = std::conj(a(0, 0)) * a(0, 1) + std::conj(a(1, 0)) * a(1, 1);
        double mid = 0.5 * (p + r);
        double disc = std::sqrt(0.25 * (p - r) * (p - r) + std::norm(q));
        return std::sqrt(std::max(0.0, mid + disc));
    }
    // largest singular value via the Hermitian spectrum of A^* A
    Mat gram = a.adjoint() * a;
    std::vector<double> evals;
    hermitian_jacobi(gram, evals, nullptr);
    double top = evals.empty() ? 0.0 : evals.back();
    return std::sqrt(std::max(0.0, top));
}

// ---------------------------------------------------------------------------
// General eigenproblem: Hessenberg + shifted QR, then rank-revealing QR for
// the eigenvectors of each eigenvalue cluster.
// ---------------------------------------------------------------------------

namespace {

void hessenberg_reduce(Mat& h) {
    int m = h.dim();
    for (int k = 0; k < m - 2; ++k) {
        // Householder vector for column k below the subdiagonal
        double xnorm = 0.0;
        for (int i = k + 1; i < m; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm <= kEps * std::max(1.0, h.frobenius())) continue;
        cplx x0 = h(k + 1, k);
        cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0, 0.0);
        cplx alpha = -phase * xnorm;
        std::vector<cplx> v(static_cast<std::size_t>(m), cplx(0.0, 0.0));
        v[static_cast<std::size_t>(k + 1)] = x0 - alpha;
        for (int i = k + 2; i < m; ++i) v[static_cast<std::size_t>(i)] = h(i, k);
        double vnorm = vec_norm(v);
        if (vnorm <= 0.0) continue;
        for (auto& z : v) z /= vnorm;
        // H <- (I - 2 v v^*) H (I - 2 v v^*)
        for (int j = 0; j < m; ++j) {
            cplx dot(0.0, 0.0);
            for (int i = k + 1; i < m; ++i) dot += std::conj(v[static_cast<std::size_t>(i)]) * h(i, j);
            dot *= 2.0;
            for (int i = k + 1; i < m; ++i) h(i, j) -= dot * v[static_cast<std::size_t>(i)];
        }
        for (int i = 0; i < m; ++i) {
            cplx dot(0.0, 0.0);
            for (int j = k + 1; j < m; ++j) dot += h(i, j) * v[static_cast<std::size_t>(j)];
            dot *= 2.0;
            for (int j = k + 1; j < m; ++j) h(i, j) -= dot * std::conj(v[static_cast<std::size_t>(j)]);
        }
        for (int i = k + 2; i < m; ++i) h(i, k) = 0.0;
    }
}

cplx wilkinson_shift(const Mat& h, int k) {
    // eigenvalue of the trailing 2x2 closest to h(k,k)
    cplx a = h(k - 1, k - 1), b = h(k - 1, k), c = h(k, k - 1), d = h(k, k);
    cplx tr = a + d;
    cplx det = a * d - b * c;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

std::vector<cplx> qr_eigenvalues(const Mat& input) {
    int m = input.dim();
    if (m == 1) return {input(0, 0)};
    Mat h = input;
    hessenberg_reduce(h);
    std::vector<cplx> evals;
    evals.reserve(static_cast<std::size_t>(m));
    int hi = m - 1;
    int stall = 0;
    int total_iters = 0;
    const int cap = 60 * m;
    double scale = std::max(1.0, h.frobenius());
    while (hi >= 0) {
        if (++total_iters > cap) throw ConvergenceFailure("QR eigensolver exceeded iteration cap");
        // deflate trivially small subdiagonals
        int lo = hi;
        while (lo > 0) {
            double sub = std::abs(h(lo, lo - 1));
            if (sub <= kEps * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo))) + kEps * kEps * scale) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            evals.push_back(h(hi, hi));
            --hi;
            stall = 0;
            continue;
        }
        cplx mu = wilkinson_shift(h, hi);
        ++stall;
        if (stall > 0 && stall % 12 == 0) {
            // exceptional shift to break symmetric stalls
            mu = h(hi, hi) + cplx(0.75, 0.4375) * std::abs(h(hi, hi - 1));
        }
        // explicit shifted QR step on the active block via Givens rotations
        int nb = hi - lo + 1;
        std::vector<std::array<cplx, 2>> rots(static_cast<std::size_t>(nb - 1));
        for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
        for (int i = lo; i < hi; ++i) {
            cplx f = h(i, i), g = h(i + 1, i);
            double r = std::sqrt(std::norm(f) + std::norm(g));
            cplx cs(1.0, 0.0), sn(0.0, 0.0);
            if (r > 0.0) {
                cs = f / r;
                sn = g / r;
            }
            rots[static_cast<std::size_t>(i - lo)] = {cs, sn};
            for (int j = i; j <= hi; ++j) {
                cplx hij = h(i, j), h1j = h(i + 1, j);
                h(i, j) = std::conj(cs) * hij + std::conj(sn) * h1j;
                h(i + 1, j) = -sn * hij + cs * h1j;
            }
        }
        for (int i = lo; i < hi; ++i) {
            cplx cs = rots[static_cast<std::size_t>(i - lo)][0];
            cplx sn = rots[static_cast<std::size_t>(i - lo)][1];
            int top = lo;
            for (int r2 = top; r2 <= std::min(hi, i + 2); ++r2) {
                cplx hri = h(r2, i), hri1 = h(r2, i + 1);
                h(r2, i) = hri * cs + hri1 * sn;
                h(r2, i + 1) = -hri * std::conj(sn) + hri1 * std::conj(cs);
            }
        }
        for (int i = lo; i <= hi; ++i) h(i, i) += mu;
    }
    std::sort(evals.begin(), evals.end(), [](cplx x, cplx y) {
        if (x.real() != y.real()) return x.real() < y.real();
        return x.imag() < y.imag();
    });
    return evals;
}

// Householder QR with column pivoting. Returns the diagonal magnitudes of R,
// the permutation, and R itself (upper triangle) for nullspace extraction.
struct Rrqr {
    Mat r;
    std::vector<int> perm;
};

Rrqr rrqr(const Mat& input) {
    int m = input.dim();
    Mat r = input;
    std::vector<int> perm(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::vector<double> colnorm(static_cast<std::size_t>(m), 0.0);
    for (int k = 0; k < m; ++k) {
        for (int j = k; j < m; ++j) {
            double s = 0.0;
            for (int i = k; i < m; ++i) s += std::norm(r(i, j));
            colnorm[static_cast<std::size_t>(j)] = s;
        }
        int piv = k;
        for (int j = k + 1; j < m; ++j)
            if (colnorm[static_cast<std::size_t>(j)] > colnorm[static_cast<std::size_t>(piv)]) piv = j;
        if (piv != k) {
            for (int i = 0; i < m; ++i) std::swap(r(i, k), r(i, piv));
            std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(piv)]);
            std::swap(colnorm[static_cast<std::size_t>(k)], colnorm[static_cast<std::size_t>(piv)]);
        }
        double xnorm = std::sqrt(colnorm[static_cast<std::size_t>(k)]);
        if (xnorm == 0.0) continue;
        cplx x0 = r(k, k);
        cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0, 0.0);
        cplx alpha = -phase * xnorm;
        std::vector<cplx> v(static_cast<std::size_t>(m), cplx(0.0, 0.0));
        v[static_cast<std::size_t>(k)] = x0 - alpha;
        for (int i = k + 1; i < m; ++i) v[static_cast<std::size_t>(i)] = r(i, k);
        double vnorm = vec_norm(v);
        if (vnorm > 0.0) {
            for (auto& z : v) z /= vnorm;
            for (int j = k; j < m; ++j) {
                cplx dot(0.0, 0.0);
                for (int i = k; i < m; ++i) dot += std::conj(v[static_cast<std::size_t>(i)]) * r(i, j);
                dot *= 2.0;
                for (int i = k; i < m; ++i) r(i, j) -= dot * v[static_cast<std::size_t>(i)];
            }
        }
        r(k, k) = alpha;
        for (int i = k + 1; i < m; ++i) r(i, k) = 0.0;
    }
    return {r, perm};
}

// k unit vectors spanning the "most null" directions of M, via RRQR with the
// rank forced to m - k.
std::vector<std::vector<cplx>> forced_nullspace(const Mat& msrc, int k) {
    int m = msrc.dim();
    Rrqr f = rrqr(msrc);
    int rank = m - k;
    std::vector<std::vector<cplx>> out;
    for (int nu = 0; nu < k; ++nu) {
        // solve R11 * z = -R12 * e_nu by back substitution
        std::vector<cplx> y(static_cast<std::size_t>(m), cplx(0.0, 0.0));
        y[static_cast<std::size_t>(rank + nu)] = 1.0;
        for (int i = rank - 1; i >= 0; --i) {
            cplx acc(0.0, 0.0);
            for (int j = i + 1; j < m; ++j) acc += f.r(i, j) * y[static_cast<std::size_t>(j)];
            cplx rii = f.r(i, i);
            if (std::abs(rii) < kEps * kEps) rii = cplx(kEps * kEps, 0.0);
            y[static_cast<std::size_t>(i)] = -acc / rii;
        }
        std::vector<cplx> x(static_cast<std::size_t>(m), cplx(0.0, 0.0));
        for (int i = 0; i < m; ++i) x[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])] = y[static_cast<std::size_t>(i)];
        double nrm = vec_norm(x);
        if (nrm > 0.0)
            for (auto& z : x) z /= nrm;
        out.push_back(std::move(x));
    }
    return out;
}

int numerical_rank(const Mat& msrc, double tol) {
    Rrqr f = rrqr(msrc);
    int rank = 0;
    for (int i = 0; i < msrc.dim(); ++i)
        if (std::abs(f.r(i, i)) > tol) ++rank;
    return rank;
}

void canonical_phase(std::vector<cplx>& v) {
    double best = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double m = std::abs(v[i]);
        if (m > best * (1.0 + 1e-12)) {
            best = m;
            idx = i;
        }
    }
    if (best == 0.0) return;
    cplx phase = v[idx] / best;
    for (auto& z : v) z /= phase;
    v[idx] = cplx(std::abs(v[idx]), 0.0);
}

} // namespace

std::vector<std::vector<int>> cluster_eigenvalues(const std::vector<cplx>& evals, double radius) {
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < static_cast<int>(evals.size()); ++i) {
        bool placed = false;
        for (auto& g : groups) {
            if (std::abs(evals[static_cast<std::size_t>(g.front())] - evals[static_cast<std::size_t>(i)]) <= radius) {
                g.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) groups.push_back({i});
    }
    return groups;
}

EigenResult eig(const Mat& a) {
    int m = a.dim();
    double anorm = op_norm(a);
    EigenResult res{std::vector<cplx>(), Mat::identity(m), true, 1.0};

    if (is_selfadjoint(a, 1e-12)) {
        std::vector<double> evals;
        Mat vecs(m);
        hermitian_jacobi(a, evals, &vecs);
        res.eigenvalues.resize(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            res.eigenvalues[static_cast<std::size_t>(k)] = evals[static_cast<std::size_t>(k)];
            std::vector<cplx> col(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) col[static_cast<std::size_t>(i)] = vecs(i, k);
            double nrm = vec_norm(col);
            if (nrm > 0.0)
                for (auto& z : col) z /= nrm;
            canonical_phase(col);
            for (int i = 0; i < m; ++i) vecs(i, k) = col[static_cast<std::size_t>(i)];
        }
        res.right_vectors = vecs;
        res.diagonalizable = true;
    } else {
        res.eigenvalues = qr_eigenvalues(a);
        double rank_tol = 1e-8 * std::max(anorm, kEps);
        double cluster_radius = 1e-7 * (1.0 + anorm);
        auto groups = cluster_eigenvalues(res.eigenvalues, cluster_radius);
        Mat vecs(m);
        bool diagonalizable = true;
        for (const auto& g : groups) {
            cplx center(0.0, 0.0);
            for (int idx : g) center += res.eigenvalues[static_cast<std::size_t>(idx)];
            center /= static_cast<double>(g.size());
            Mat shifted = a;
            for (int i = 0; i < m; ++i) shifted(i, i) -= center;
            int rank = numerical_rank(shifted, rank_tol);
            int geo = m - rank;
            if (geo < static_cast<int>(g.size())) diagonalizable = false;
            auto basis = forced_nullspace(shifted, static_cast<int>(g.size()));
            for (std::size_t v = 0; v < g.size(); ++v) {
                auto col = basis[v];
                canonical_phase(col);
                for (int i = 0; i < m; ++i) vecs(i, g[v]) = col[static_cast<std::size_t>(i)];
            }
        }
        res.right_vectors = vecs;
        res.diagonalizable = diagonalizable;
    }

    double cond = std::numeric_limits<double>::infinity();
    try {
        cond = op_norm(res.right_vectors) * op_norm(inverse(res.right_vectors));
    } catch (const Error&) {
        // leave infinite
    }
    res.condition = cond;
    return res;
}

Mat expm(const Mat& a, double t) {
    Mat b = a * t;
    double nrm = op_norm(b);
    if (nrm > 50.0) throw OverflowRisk("expm: |tA| exceeds 50");
    int s = 0;
    if (nrm > 0.5) s = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    double scale = std::ldexp(1.0, -s);
    Mat c = b * scale;
    Mat x = Mat::identity(a.dim());
    Mat term = Mat::identity(a.dim());
    for (int k = 1; k <= 64; ++k) {
        term = term * c * (1.0 / static_cast<double>(k));
        x += term;
        if (term.frobenius() <= 1e-18 * std::max(1.0, x.frobenius())) break;
    }
    for (int k = 0; k < s; ++k) x = x * x;
    return x;
}

bool is_selfadjoint(const Mat& a, double tol) {
    double defect = (a - a.adjoint()).frobenius();
    return defect <= tol * std::max(1.0, a.frobenius());
}

PsdBounds psd_bounds(const Mat& a, double tol) {
    if (!is_selfadjoint(a, tol)) throw NotSelfAdjoint("psd_bounds: input is not self-adjoint within tolerance");
    std::vector<double> evals = hermitian_eigenvalues(a);
    return {evals.front(), evals.back()};
}

std::optional<Mat> cholesky(const Mat& a) {
    int m = a.dim();
    Mat l(m);
    for (int j = 0; j < m; ++j) {
        double d = a(j, j).real();
        for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (d <= 0.0) return std::nullopt;
        double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (int i = j + 1; i < m; ++i) {
            cplx s = a(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    return l;
}

std::vector<cplx> solve(const Mat& a, std::span<const cplx> rhs) {
    int m = a.dim();
    Mat lu = a;
    std::vector<cplx> x(rhs.begin(), rhs.end());
    std::vector<int> piv(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) piv[static_cast<std::size_t>(i)] = i;
    for (int k = 0; k < m; ++k) {
        int p = k;
        for (int i = k + 1; i < m; ++i)
            if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
        if (std::abs(lu(p, k)) < kEps * kEps) throw Error("solve: matrix numerically singular");
        if (p != k) {
            for (int j = 0; j < m; ++j) std::swap(lu(k, j), lu(p, j));
            std::swap(x[static_cast<std::size_t>(k)], x[static_cast<std::size_t>(p)]);
        }
        for (int i = k + 1; i < m; ++i) {
            cplx f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (int j = k + 1; j < m; ++j) lu(i, j) -= f * lu(k, j);
            x[static_cast<std::size_t>(i)] -= f * x[static_cast<std::size_t>(k)];
        }
    }
    for (int i = m - 1; i >= 0; --i) {
        cplx acc = x[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j) acc -= lu(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = acc / lu(i, i);
    }
    return x;
}

Mat inverse(const Mat& a) {
    int m = a.dim();
    Mat inv(m);
    std::vector<cplx> e(static_cast<std::size_t>(m), cplx(0.0, 0.0));
    for (int j = 0; j < m; ++j) {
        std::fill(e.begin(), e.end(), cplx(0.0, 0.0));
        e[static_cast<std::size_t>(j)] = 1.0;
        std::vector<cplx> col = solve(a, e);
        for (int i = 0; i < m; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

} // namespace hypercone
