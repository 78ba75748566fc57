#include "kdisc/rhsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdisc/parallel.hpp"

namespace kdisc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const Cplx kI(0.0, 1.0);

Cplx circle_point(int j, int count) {
    double th = kTwoPi * j / count;
    return Cplx(std::cos(th), std::sin(th));
}

Cplx ipow(Cplx base, int e) {
    Cplx r(1.0);
    for (int i = 0; i < std::abs(e); ++i) r *= base;
    return e >= 0 ? r : Cplx(1.0) / r;
}

double binom(int p, int k) {
    if (k < 0 || k > p) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (p - i) / (i + 1);
    return r;
}

// Polynomial coefficients of the nonnegative part after dividing by
// (1 - zeta)^m, remainder discarded.
std::vector<Cplx> divide_drop_remainder(const CircleFunction& f, int m, int keep) {
    int D = std::max(f.poly_degree(0.0), 0);
    std::vector<Cplx> cur(D + 1);
    for (int k = 0; k <= D; ++k) cur[k] = f.coeff(k);
    for (int round = 0; round < m; ++round) {
        int top = static_cast<int>(cur.size()) - 1;
        std::vector<Cplx> q(std::max(top, 1), Cplx(0.0));
        Cplx carry(0.0);
        for (int k = top; k >= 1; --k) {
            carry = carry - cur[k];
            q[k - 1] = carry;
        }
        cur = q;
    }
    cur.resize(keep, Cplx(0.0));
    return cur;
}

} // namespace

void PerturbationPoly::add_term(const MultiIndex& J, const MultiIndex& K, int l, Cplx a) {
    if (static_cast<int>(J.size()) != n_ || static_cast<int>(K.size()) != n_)
        throw ValidationError("perturbation term multi-index size mismatch");
    if (l < 0) throw ValidationError("negative Im w exponent");
    for (int x : J) if (x < 0) throw ValidationError("negative exponent");
    for (int x : K) if (x < 0) throw ValidationError("negative exponent");
    Key key{J, K, l};
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (a != Cplx(0.0)) terms_.emplace(key, a);
    } else {
        it->second += a;
        if (it->second == Cplx(0.0)) terms_.erase(it);
    }
}

Cplx PerturbationPoly::eval(const std::vector<Cplx>& z, double s) const {
    if (static_cast<int>(z.size()) != n_)
        throw ValidationError("perturbation eval: dimension mismatch");
    Cplx total(0.0);
    for (const auto& [key, a] : terms_) {
        const auto& [J, K, l] = key;
        Cplx t = a;
        for (int i = 0; i < n_; ++i) {
            for (int p = 0; p < J[i]; ++p) t *= z[i];
            for (int p = 0; p < K[i]; ++p) t *= std::conj(z[i]);
        }
        for (int p = 0; p < l; ++p) t *= s;
        total += t;
    }
    return total;
}

PerturbationPoly PerturbationPoly::dz(int i) const {
    PerturbationPoly out(n_);
    for (const auto& [key, a] : terms_) {
        const auto& [J, K, l] = key;
        if (J[i] == 0) continue;
        MultiIndex J2 = J;
        J2[i] -= 1;
        out.add_term(J2, K, l, a * static_cast<double>(J[i]));
    }
    return out;
}

PerturbationPoly PerturbationPoly::dzbar(int i) const {
    PerturbationPoly out(n_);
    for (const auto& [key, a] : terms_) {
        const auto& [J, K, l] = key;
        if (K[i] == 0) continue;
        MultiIndex K2 = K;
        K2[i] -= 1;
        out.add_term(J, K2, l, a * static_cast<double>(K[i]));
    }
    return out;
}

PerturbationPoly PerturbationPoly::ds() const {
    PerturbationPoly out(n_);
    for (const auto& [key, a] : terms_) {
        const auto& [J, K, l] = key;
        if (l == 0) continue;
        out.add_term(J, K, l - 1, a * static_cast<double>(l));
    }
    return out;
}

PerturbedHypersurface PerturbedHypersurface::validate(const HermitianPolynomial& P,
                                                      const PerturbationPoly& theta) {
    if (!theta.empty() && theta.vars() != P.n())
        throw ValidationError("perturbation variable count does not match the model");
    const WeightVector& M = P.weight();
    int d = P.degree();
    for (const auto& [key, a] : theta.terms()) {
        const auto& [J, K, l] = key;
        // real-valuedness: conjugate partner with swapped (J, K)
        auto it = theta.terms().find(PerturbationPoly::Key{K, J, l});
        Cplx partner = (it == theta.terms().end()) ? Cplx(0.0) : it->second;
        if (std::abs(a - std::conj(partner)) > 1e-12)
            throw ValidationError("perturbation is not real-valued");
        int wdeg = M.dot(J) + M.dot(K);
        if (l == 0) {
            if (wdeg != d + 1)
                throw ValidationError("deformation term without Im w must have weight d+1");
        } else {
            if (l > d || wdeg != d - l)
                throw ValidationError("deformation term with (Im w)^l must have weight d-l");
        }
    }
    PerturbedHypersurface r;
    r.P = P;
    r.theta = theta;
    return r;
}

PerturbedHypersurface PerturbedHypersurface::scaled(double tscale) const {
    if (tscale <= 0.0) throw ValidationError("scale must be positive");
    const WeightVector& M = P.weight();
    int d = P.degree();
    PerturbationPoly th(theta.vars());
    for (const auto& [key, a] : theta.terms()) {
        const auto& [J, K, l] = key;
        int order = M.dot(J) + M.dot(K) + d * l - d;
        th.add_term(J, K, l, a * std::pow(tscale, order));
    }
    PerturbedHypersurface out;
    out.P = P;
    out.theta = th;
    out.t = t * tscale;
    return out;
}

LiftBasis LiftBasis::make(const WeightVector& M, int d, int k0, int NF) {
    LiftBasis b;
    b.M = M;
    b.d = d;
    b.k0 = k0;
    b.NF = NF;
    int n = M.n();
    for (int i = 0; i < n; ++i) b.e.push_back(M.m[i]);
    // The w component is left unconstrained: the hypersurface is invariant
    // under imaginary translations of w, so the disc family carries that
    // direction and pinning w at zeta = 1 would drop one kernel dimension.
    b.e.push_back(0);
    for (int i = 0; i < n; ++i) b.e.push_back(d - M.m[i]);
    b.e.push_back(0);
    int off = 0;
    for (int k = 0; k < b.components(); ++k) {
        if (NF < b.e[k] + 1)
            throw ValidationError("truncation too small for the constrained lift space");
        b.count.push_back(NF - b.e[k] + 1);
        b.offset.push_back(off);
        off += b.count.back();
    }
    return b;
}

int LiftBasis::total_complex() const {
    return offset.back() + count.back();
}

std::vector<CircleFunction> LiftBasis::to_components(const Eigen::VectorXd& x) const {
    std::vector<CircleFunction> out;
    out.reserve(components());
    for (int k = 0; k < components(); ++k) {
        CircleFunction f(NF);
        // multiply the coefficient polynomial by (1 - zeta)^{e_k}
        for (int p = 0; p < count[k]; ++p) {
            int c = offset[k] + p;
            Cplx a(x(2 * c), x(2 * c + 1));
            if (a == Cplx(0.0)) continue;
            for (int j = 0; j <= e[k]; ++j) {
                double sgn = (j % 2 == 0) ? 1.0 : -1.0;
                f.set_coeff(p + j, f.coeff(p + j) + a * binom(e[k], j) * sgn);
            }
        }
        out.push_back(f);
    }
    return out;
}

DiscLift LiftBasis::to_lift(const Eigen::VectorXd& x) const {
    auto comps = to_components(x);
    int n = M.n();
    DiscLift f;
    f.M = M;
    f.degree = d;
    f.k0 = k0;
    f.h.assign(comps.begin(), comps.begin() + n);
    f.g = comps[n];
    f.htilde.assign(comps.begin() + n + 1, comps.begin() + 2 * n + 1);
    f.gtilde = comps[2 * n + 1];
    return f;
}

Eigen::VectorXd LiftBasis::project(const DiscLift& f) const {
    int n = M.n();
    std::vector<const CircleFunction*> comps;
    for (int i = 0; i < n; ++i) comps.push_back(&f.h[i]);
    comps.push_back(&f.g);
    for (int i = 0; i < n; ++i) comps.push_back(&f.htilde[i]);
    comps.push_back(&f.gtilde);
    Eigen::VectorXd x(total_real());
    for (int k = 0; k < components(); ++k) {
        auto coeffs = divide_drop_remainder(*comps[k], e[k], count[k]);
        for (int p = 0; p < count[k]; ++p) {
            x(2 * (offset[k] + p)) = coeffs[p].real();
            x(2 * (offset[k] + p) + 1) = coeffs[p].imag();
        }
    }
    return x;
}

MatrixLoop build_G(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    int n = P.n(), k0 = P.k0();
    const WeightVector& M = P.weight();
    MatrixLoop G(2 * n + 2);
    for (int i = 0; i < n; ++i)
        G.entries[0][i] = substitute_disc(P.poly().dzbar(i), v, M, 0);
    G.entries[0][n] = CircleFunction::constant(Cplx(-0.5));
    for (int li = 0; li < n; ++li) {
        int rowRe = 2 * li + 1, rowIm = 2 * li + 2;
        for (int j = 0; j < n; ++j) {
            CircleFunction qraw = substitute_disc(P.poly().dz(li).dzbar(j), v, M, k0);
            CircleFunction srefl =
                substitute_disc(P.poly().dz(li).dz(j), v, M, k0).conj_reflected();
            G.entries[rowRe][j] = (qraw + srefl) * Cplx(-1.0);
            G.entries[rowIm][j] = (qraw - srefl) * (-kI);
        }
        G.entries[rowRe][n + 1 + li] = CircleFunction::constant(Cplx(1.0));
        G.entries[rowIm][n + 1 + li] = CircleFunction::constant(-kI);
        CircleFunction pzrefl = substitute_disc(P.poly().dz(li), v, M, 0).conj_reflected();
        G.entries[rowRe][2 * n + 1] = pzrefl * Cplx(2.0);
        G.entries[rowIm][2 * n + 1] = pzrefl * (-2.0 * kI);
    }
    G.entries[2 * n + 1][2 * n + 1] = CircleFunction::monomial(k0, -kI);
    return G;
}

MatrixLoop reduce_to_A(const LeviCoefficients& L, const WeightVector& M, int d) {
    int n = M.n();
    std::vector<int> s(n);
    for (int l = 0; l < n; ++l) {
        int sl = M.homogeneous() ? (d - 2) : (d - M.m[l]);
        if (sl % 2 != 0)
            throw ValidationError("row reduction needs even d - m_l (or the homogeneous case)");
        s[l] = sl / 2;
    }
    MatrixLoop A(2 * n);
    for (int l = 0; l < n; ++l) {
        A.entries[2 * l][2 * l] = CircleFunction::monomial(-s[l], Cplx(1.0));
        A.entries[2 * l + 1][2 * l] = CircleFunction::monomial(-s[l], -kI);
        for (int p = 0; p < n; ++p) {
            CircleFunction qp = L.Qprime_entries[l][p].shifted(s[l]);
            CircleFunction sb = L.S[l][p].conj_reflected().shifted(-s[l]);
            A.entries[2 * l][2 * p + 1] = qp + sb;
            A.entries[2 * l + 1][2 * p + 1] = (qp - sb) * kI;
        }
    }
    // determinant identity det A = (2i)^n Q'
    Cplx factor = ipow(2.0 * kI, n);
    double err = 0.0, scale = 0.0;
    for (int q = 0; q < 512; ++q) {
        Cplx zeta = circle_point(q, 512);
        Cplx target = factor * L.Qprime.eval(zeta);
        err = std::max(err, std::abs(A.eval(zeta).determinant() - target));
        scale = std::max(scale, std::abs(target));
    }
    if (err > 1e-8 * std::max(scale, 1e-300))
        throw NumericalError("reduced-matrix determinant identity failed");
    return A;
}

LinearizedSystem linearize(const HermitianPolynomial& P, const std::vector<Cplx>& v, int NF) {
    int n = P.n();
    LinearizedSystem sys;
    LeviCoefficients lev = levi_coefficients(P, v);
    sys.G = build_G(P, v);
    sys.A = reduce_to_A(lev, P.weight(), P.degree());
    sys.basis = LiftBasis::make(P.weight(), P.degree(), P.k0(), NF);

    int C = 4 * NF + 2;
    int ncomp = sys.basis.components();
    int cols = sys.basis.total_real();
    int rows = ncomp * C;
    Eigen::MatrixXd Mat(rows, cols);
#pragma omp parallel for if (par::enabled())
    for (int q = 0; q < C; ++q) {
        Cplx zeta = circle_point(q, C);
        Eigen::MatrixXcd Gq = sys.G.eval(zeta);
        for (int k = 0; k < ncomp; ++k) {
            Cplx base = ipow(Cplx(1.0) - zeta, sys.basis.e[k]);
            Cplx zp(1.0);
            for (int p = 0; p < sys.basis.count[k]; ++p) {
                Cplx B = base * zp;
                zp *= zeta;
                int col = 2 * (sys.basis.offset[k] + p);
                for (int j = 0; j < ncomp; ++j) {
                    Cplx val = std::conj(Gq(j, k)) * B;
                    Mat(q * ncomp + j, col) = 2.0 * val.real();
                    Mat(q * ncomp + j, col + 1) = -2.0 * val.imag();
                }
            }
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Mat, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double top = sv(0);
    int kd = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < 1e-8 * top) ++kd;
    if (kd > 0 && kd < sv.size()) {
        double kept = sv(sv.size() - kd - 1);
        double dropped = sv(sv.size() - kd);
        sys.sigma_gap = (dropped > 0.0) ? kept / dropped : std::numeric_limits<double>::infinity();
        if (sys.sigma_gap < 10.0)
            throw NumericalError("kernel rank is ambiguous; increase N_F");
    }
    sys.kernel_dim = kd;
    sys.rank = cols - kd;
    for (int i = 0; i < kd; ++i) {
        Eigen::VectorXd vec = svd.matrixV().col(sv.size() - kd + i);
        sys.kernel_vectors.push_back(vec);
        sys.kernel_basis.push_back(sys.basis.to_components(vec));
    }
    return sys;
}

int l3_kernel_dim(const MatrixLoop& A, int D) {
    int N = A.size();
    int C = 2 * (D + A.max_entry_degree()) + 16;
    int cols = 2 * N * (D + 1);
    Eigen::MatrixXd Mat(N * C, cols);
    for (int q = 0; q < C; ++q) {
        Cplx zeta = circle_point(q, C);
        Eigen::MatrixXcd Aq = A.eval(zeta);
        for (int k = 0; k < N; ++k) {
            Cplx zp(1.0);
            for (int p = 0; p <= D; ++p) {
                int col = 2 * (k * (D + 1) + p);
                for (int j = 0; j < N; ++j) {
                    Cplx val = std::conj(Aq(j, k)) * zp;
                    Mat(q * N + j, col) = 2.0 * val.real();
                    Mat(q * N + j, col + 1) = -2.0 * val.imag();
                }
                zp *= zeta;
            }
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Mat);
    const auto& sv = svd.singularValues();
    double top = sv(0);
    int kd = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) < 1e-8 * top) ++kd;
    return kd;
}

double boundary_residual(const PerturbedHypersurface& r, const DiscLift& f, int samples) {
    int n = f.n(), k0 = f.k0;
    std::vector<ComplexPoly> Pz;
    std::vector<PerturbationPoly> tz;
    for (int i = 0; i < n; ++i) {
        Pz.push_back(r.P.poly().dz(i));
        tz.push_back(r.theta.dz(i));
    }
    PerturbationPoly ts = r.theta.ds();
    double sup = 0.0;
    for (int q = 0; q < samples; ++q) {
        Cplx zeta = circle_point(q, samples);
        std::vector<Cplx> z(n), zt(n);
        for (int i = 0; i < n; ++i) {
            z[i] = f.h[i].eval(zeta);
            zt[i] = f.htilde[i].eval(zeta);
        }
        Cplx w = f.g.eval(zeta), wt = f.gtilde.eval(zeta);
        double s = w.imag();
        Cplx rw = Cplx(-0.5) + ts.eval(z, s) / (2.0 * kI);
        double E1 = -w.real() + r.P.poly().eval(z).real() + r.theta.eval(z, s).real();
        sup = std::max(sup, std::abs(E1));
        for (int i = 0; i < n; ++i) {
            Cplx rz = Pz[i].eval(z) + tz[i].eval(z, s);
            sup = std::max(sup, std::abs(-2.0 * (zt[i] * rw - wt * rz)));
        }
        sup = std::max(sup, std::abs(4.0 * (wt * std::conj(rw) * ipow(zeta, -k0)).imag()));
    }
    return sup;
}

DiscLift newton_attach(const PerturbedHypersurface& r, const DiscLift& start,
                       const std::vector<double>& kernel_coords, const LinearizedSystem& lin,
                       int max_iter, double tol) {
    const LiftBasis& basis = lin.basis;
    int n = basis.M.n(), k0 = basis.k0;
    if (static_cast<int>(kernel_coords.size()) != lin.kernel_dim)
        throw ValidationError("kernel coordinate count does not match the kernel dimension");

    // derivative polynomials
    std::vector<ComplexPoly> Pz(n);
    std::vector<std::vector<ComplexPoly>> Pzz(n, std::vector<ComplexPoly>(n)),
        Pzzb(n, std::vector<ComplexPoly>(n));
    std::vector<PerturbationPoly> tz(n), tzb(n), tzs(n);
    std::vector<std::vector<PerturbationPoly>> tzz(n, std::vector<PerturbationPoly>(n)),
        tzzb(n, std::vector<PerturbationPoly>(n));
    for (int i = 0; i < n; ++i) {
        Pz[i] = r.P.poly().dz(i);
        tz[i] = r.theta.dz(i);
        tzb[i] = r.theta.dzbar(i);
        tzs[i] = tz[i].ds();
        for (int j = 0; j < n; ++j) {
            Pzz[i][j] = Pz[i].dz(j);
            Pzzb[i][j] = Pz[i].dzbar(j);
            tzz[i][j] = tz[i].dz(j);
            tzzb[i][j] = tz[i].dzbar(j);
        }
    }
    PerturbationPoly ts = r.theta.ds(), tss = ts.ds();
    std::vector<PerturbationPoly> tsz(n), tszb(n);
    for (int j = 0; j < n; ++j) {
        tsz[j] = ts.dz(j);
        tszb[j] = ts.dzbar(j);
    }

    int C = 4 * basis.NF + 2;
    int ncomp = basis.components();
    int nun = basis.total_real();
    int brows = ncomp * C;
    int rows = brows + lin.kernel_dim;

    std::vector<Cplx> zetas(C);
    for (int q = 0; q < C; ++q) zetas[q] = circle_point(q, C);

    Eigen::VectorXd x = basis.project(start);
    Eigen::VectorXd x0 = x;

    for (int iter = 0; iter < max_iter; ++iter) {
        auto comps = basis.to_components(x);
        Eigen::VectorXd F = Eigen::VectorXd::Zero(rows);
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(rows, nun);

#pragma omp parallel for if (par::enabled())
        for (int q = 0; q < C; ++q) {
            Cplx zeta = zetas[q];
            std::vector<Cplx> z(n), zt(n);
            for (int i = 0; i < n; ++i) {
                z[i] = comps[i].eval(zeta);
                zt[i] = comps[n + 1 + i].eval(zeta);
            }
            Cplx w = comps[n].eval(zeta), wt = comps[2 * n + 1].eval(zeta);
            double s = w.imag();
            Cplx zk = ipow(zeta, -k0);

            double tss_v = tss.eval(z, s).real();
            Cplx ts_v = ts.eval(z, s);
            Cplx rw = Cplx(-0.5) + ts_v / (2.0 * kI);
            std::vector<Cplx> rz(n);
            for (int i = 0; i < n; ++i) rz[i] = Pz[i].eval(z) + tz[i].eval(z, s);

            // complex partials per equation: rows (2n+2), variables (2n+2)
            // equation 0 and 2n+1 are real (Dbar = conj(D) implicit)
            Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(ncomp, ncomp);
            Eigen::MatrixXcd Db = Eigen::MatrixXcd::Zero(ncomp, ncomp);

            // E1
            double E1 = -w.real() + r.P.poly().eval(z).real() + r.theta.eval(z, s).real();
            for (int i = 0; i < n; ++i) D(0, i) = rz[i];
            D(0, n) = rw;

            // X_i pairs occupy equation slots 1..2n (complex eq i uses slot pair)
            std::vector<Cplx> X(n);
            for (int i = 0; i < n; ++i) {
                X[i] = -2.0 * (zt[i] * rw - wt * rz[i]);
                for (int j = 0; j < n; ++j) {
                    Cplx tszj = tsz[j].eval(z, s), tszbj = tszb[j].eval(z, s);
                    D(1 + i, j) = -2.0 * (zt[i] * tszj / (2.0 * kI) -
                                          wt * (Pzz[i][j].eval(z) + tzz[i][j].eval(z, s)));
                    Db(1 + i, j) = -2.0 * (zt[i] * tszbj / (2.0 * kI) -
                                           wt * (Pzzb[i][j].eval(z) + tzzb[i][j].eval(z, s)));
                }
                Cplx tzsi = tzs[i].eval(z, s);
                D(1 + i, n) = -2.0 * (zt[i] * (-tss_v / 4.0) - wt * tzsi / (2.0 * kI));
                Db(1 + i, n) = -2.0 * (zt[i] * (tss_v / 4.0) + wt * tzsi / (2.0 * kI));
                D(1 + i, n + 1 + i) = -2.0 * rw;
                D(1 + i, 2 * n + 1) = 2.0 * rz[i];
            }

            // E_last = 4 Im(u), u = wt conj(rw) zeta^{-k0}
            double Elast = 4.0 * (wt * std::conj(rw) * zk).imag();
            {
                int row = ncomp - 1;
                Cplx Awt = std::conj(rw) * zk;
                D(row, 2 * n + 1) = -2.0 * kI * Awt;
                Cplx pref = wt * zk * (-1.0 / (2.0 * kI));
                for (int j = 0; j < n; ++j) {
                    Cplx Aj = pref * std::conj(tszb[j].eval(z, s));
                    Cplx Bj = pref * std::conj(tsz[j].eval(z, s));
                    D(row, j) = -2.0 * kI * Aj + 2.0 * kI * std::conj(Bj);
                }
                Cplx Aw = wt * zk * tss_v / 4.0;
                Cplx Bw = -Aw;
                D(row, n) = -2.0 * kI * Aw + 2.0 * kI * std::conj(Bw);
            }

            // residual entries
            F(q * ncomp + 0) = E1;
            for (int i = 0; i < n; ++i) {
                F(q * ncomp + 1 + 2 * i) = X[i].real();
                F(q * ncomp + 2 + 2 * i) = X[i].imag();
            }
            F(q * ncomp + ncomp - 1) = Elast;

            // Jacobian entries
            for (int k = 0; k < ncomp; ++k) {
                Cplx base = ipow(Cplx(1.0) - zeta, basis.e[k]);
                Cplx zp(1.0);
                for (int p = 0; p < basis.count[k]; ++p) {
                    Cplx B = base * zp;
                    zp *= zeta;
                    int col = 2 * (basis.offset[k] + p);
                    // real equations: E1 (slot 0) and E_last (slot ncomp-1)
                    for (int slot : {0, ncomp - 1}) {
                        Cplx val = D(slot, k) * B;
                        int row = q * ncomp + (slot == 0 ? 0 : ncomp - 1);
                        J(row, col) = 2.0 * val.real();
                        J(row, col + 1) = -2.0 * val.imag();
                    }
                    for (int i = 0; i < n; ++i) {
                        Cplx u = D(1 + i, k) * B + Db(1 + i, k) * std::conj(B);
                        Cplx wv = kI * D(1 + i, k) * B - kI * Db(1 + i, k) * std::conj(B);
                        J(q * ncomp + 1 + 2 * i, col) = u.real();
                        J(q * ncomp + 1 + 2 * i, col + 1) = wv.real();
                        J(q * ncomp + 2 + 2 * i, col) = u.imag();
                        J(q * ncomp + 2 + 2 * i, col + 1) = wv.imag();
                    }
                }
            }
        }

        // kernel pinning rows
        for (int j = 0; j < lin.kernel_dim; ++j) {
            const Eigen::VectorXd& kv = lin.kernel_vectors[j];
            F(brows + j) = kv.dot(x - x0) - kernel_coords[j];
            J.row(brows + j) = kv.transpose();
        }

        double res = F.head(brows).lpNorm<Eigen::Infinity>();
        double pin = (lin.kernel_dim > 0) ? F.tail(lin.kernel_dim).lpNorm<Eigen::Infinity>() : 0.0;
        if (res < tol && pin < tol) return basis.to_lift(x);

        Eigen::VectorXd dx = J.completeOrthogonalDecomposition().solve(-F);
        if (!dx.allFinite())
            throw NumericalError("admissibility lost along path");
        x += dx;
    }
    throw NumericalError("no convergence: outside the perturbation neighborhood; reduce t");
}

std::vector<FamilyEntry> disc_family(const PerturbedHypersurface& r, const DiscLift& start,
                                     const LinearizedSystem& lin,
                                     const std::vector<std::vector<double>>& grid) {
    std::vector<FamilyEntry> out;
    for (const auto& coords : grid) {
        FamilyEntry entry;
        entry.coords = coords;
        try {
            entry.disc = newton_attach(r, start, coords, lin);
            entry.residual = boundary_residual(r, entry.disc);
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.error = e.what();
        }
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace kdisc
