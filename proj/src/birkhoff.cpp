#include "kdisc/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kdisc/rng.hpp"

namespace kdisc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Cplx circle_point(int j, int count) {
    double th = kTwoPi * j / count;
    return Cplx(std::cos(th), std::sin(th));
}

Cplx ipow(Cplx base, int e) {
    Cplx r(1.0);
    for (int i = 0; i < std::abs(e); ++i) r *= base;
    return e >= 0 ? r : Cplx(1.0) / r;
}

// Complex kernel dimension of phi -> (zeta^{-s} L phi) restricted to modes
// >= 0, over vector polynomials of degree <= P.  Once P is large enough this
// equals sum_j max(s - kappa_j, 0), so its jumps in s count partial indices.
int toeplitz_kernel_dim(const MatrixLoop& L, int s, int P) {
    int N = L.size();
    int degL = L.max_entry_degree();
    int cols = N * (P + 1);
    int tmax = degL + P + std::abs(s) + 1;
    Eigen::MatrixXcd Mat = Eigen::MatrixXcd::Zero((tmax + 1) * N, cols);
    for (int t = 0; t <= tmax; ++t)
        for (int p = 0; p <= P; ++p)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j)
                    Mat(t * N + i, p * N + j) = L.entries[i][j].coeff(t + s - p);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Mat);
    const auto& sv = svd.singularValues();
    double top = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-6 * top) ++rank;
    return cols - rank;
}

} // namespace

Eigen::MatrixXcd MatrixLoop::eval(Cplx zeta) const {
    int N = size();
    Eigen::MatrixXcd out(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) out(i, j) = entries[i][j].eval(zeta);
    return out;
}

int MatrixLoop::max_entry_degree() const {
    int d = 0;
    for (const auto& row : entries)
        for (const auto& e : row) d = std::max(d, e.max_degree(1e-12));
    return d;
}

MatrixLoop MatrixLoop::identity(int N) {
    MatrixLoop I(N);
    for (int i = 0; i < N; ++i) I.entries[i][i] = CircleFunction::constant(Cplx(1.0));
    return I;
}

MatrixLoop MatrixLoop::from_sampler(const std::function<Eigen::MatrixXcd(Cplx)>& F, int N,
                                    int truncation, int sample_count) {
    std::vector<Eigen::MatrixXcd> vals(sample_count);
    for (int q = 0; q < sample_count; ++q) vals[q] = F(circle_point(q, sample_count));
    MatrixLoop out(N);
    std::vector<Cplx> scratch(sample_count);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            for (int q = 0; q < sample_count; ++q) scratch[q] = vals[q](i, j);
            out.entries[i][j] = CircleFunction::from_samples(scratch, truncation);
        }
    }
    return out;
}

std::vector<Cplx> MatrixLoop::det_samples(int count) const {
    std::vector<Cplx> out(count);
    for (int q = 0; q < count; ++q) out[q] = eval(circle_point(q, count)).determinant();
    return out;
}

void MatrixLoop::require_invertible(int count) const {
    auto vals = det_samples(count);
    double mn = std::numeric_limits<double>::max(), mx = 0.0;
    for (const auto& v : vals) {
        mn = std::min(mn, std::abs(v));
        mx = std::max(mx, std::abs(v));
    }
    if (mx == 0.0 || mn <= 1e-8 * mx)
        throw NumericalError("matrix loop is (numerically) singular on the circle");
}

MatrixLoop symbol(const MatrixLoop& G, int truncation) {
    G.require_invertible();
    int N = G.size();
    auto F = [&](Cplx zeta) -> Eigen::MatrixXcd {
        Eigen::MatrixXcd g = G.eval(zeta);
        Eigen::MatrixXcd gbar = g.conjugate();
        return -gbar.partialPivLu().solve(g);
    };
    return MatrixLoop::from_sampler(F, N, truncation, 4 * truncation + 2);
}

int maslov_index(const MatrixLoop& L) {
    return winding_of_samples(L.det_samples());
}

std::vector<int> partial_indices(const MatrixLoop& L, int D) {
    L.require_invertible();
    int N = L.size();
    int degL = L.max_entry_degree();
    std::vector<int> k(2 * D + 3); // k(s) for s = -D .. D+2, offset D
    // Kernel elements are rational with poles outside the circle; the degree
    // headroom beyond s keeps their polynomial truncation below the SVD
    // threshold.
    for (int s = -D; s <= D + 2; ++s)
        k[s + D] = toeplitz_kernel_dim(L, s, std::max(s, 0) + 2 * D + degL + 16);
    auto count_le = [&](int s) { // number of indices <= s
        return k[s + D + 1] - k[s + D];
    };
    if (k[0] != 0 || count_le(D + 1) != N)
        throw NumericalError("index recovery failed; increase D or sampling");
    std::vector<int> kappa;
    for (int s = -D; s <= D + 1; ++s) {
        int mult = count_le(s) - (s > -D ? count_le(s - 1) : 0);
        if (mult < 0) throw NumericalError("index recovery failed; increase D or sampling");
        for (int t = 0; t < mult; ++t) kappa.push_back(s);
    }
    int sum = 0;
    for (int x : kappa) sum += x;
    if (static_cast<int>(kappa.size()) != N || sum != maslov_index(L))
        throw NumericalError("index recovery failed; increase D or sampling");
    std::sort(kappa.begin(), kappa.end());
    return kappa;
}

Factorization factorize(const MatrixLoop& L, int D) {
    L.require_invertible();
    int N = L.size();
    Factorization out;

    if (N == 1) {
        const CircleFunction& f = L.entries[0][0];
        int kappa = winding_number(f);
        out.indices = {kappa};
        const int C = 4096;
        std::vector<Cplx> logs(C);
        double phase = 0.0;
        Cplx prev(1.0);
        for (int q = 0; q < C; ++q) {
            Cplx zeta = circle_point(q, C);
            Cplx w = f.eval(zeta) * ipow(zeta, -kappa);
            if (q == 0) phase = std::arg(w);
            else phase += std::arg(w / prev);
            prev = w;
            logs[q] = Cplx(std::log(std::abs(w)), phase);
        }
        CircleFunction lg = CircleFunction::from_samples(logs, 192);
        auto [plus, minus] = lg.riesz_split();
        auto expize = [&](const CircleFunction& e) {
            std::vector<Cplx> vals(C);
            for (int q = 0; q < C; ++q) vals[q] = std::exp(e.eval(circle_point(q, C)));
            return CircleFunction::from_samples(vals, 192);
        };
        out.Bplus = MatrixLoop(1);
        out.Bminus = MatrixLoop(1);
        out.Bplus.entries[0][0] = expize(plus);
        out.Bminus.entries[0][0] = expize(minus);
        double res = 0.0, scale = 0.0;
        for (int q = 0; q < 512; ++q) {
            Cplx zeta = circle_point(q, 512);
            Cplx rec = out.Bminus.entries[0][0].eval(zeta) * ipow(zeta, kappa) *
                       out.Bplus.entries[0][0].eval(zeta);
            res = std::max(res, std::abs(rec - f.eval(zeta)));
            scale = std::max(scale, std::abs(f.eval(zeta)));
        }
        out.residual = res;
        if (res > 1e-6 * scale)
            throw NumericalError("factorization unstable at current truncation");
        return out;
    }

    std::vector<int> kappa = partial_indices(L, D);
    int degL = L.max_entry_degree();
    int maxk = 0;
    for (int x : kappa) maxk = std::max(maxk, std::abs(x));
    int Dz = 2 * (degL + maxk) + 24;
    int Kmax = degL + Dz + maxk + 2;

    // Laurent modes of L
    auto Lmode = [&](int t) {
        Eigen::MatrixXcd m(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) m(i, j) = L.entries[i][j].coeff(t);
        return m;
    };

    // W = (Bplus)^{-1}, columns w_j solved so that zeta^{-kappa_j} R L w_j has
    // vanishing positive modes and a unit-lower-triangular mode-0 matrix, for
    // a constant left dressing R.  R = I works unless the leading minors of
    // the minus factor at infinity degenerate; then a generic R is retried.
    int nun = N * (Dz + 1);
    std::vector<Eigen::VectorXcd> wcols(N);
    auto attempt = [&](const Eigen::MatrixXcd& R) -> bool {
        for (int j = 0; j < N; ++j) {
            int rows = Kmax * N + j + 1;
            Eigen::MatrixXcd Mat = Eigen::MatrixXcd::Zero(rows, nun);
            Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(rows);
            for (int p = 0; p <= Dz; ++p) {
                for (int kmode = 1; kmode <= Kmax; ++kmode)
                    Mat.block((kmode - 1) * N, p * N, N, N) =
                        R * Lmode(kmode + kappa[j] - p);
                Eigen::MatrixXcd blk = R * Lmode(kappa[j] - p);
                Mat.block(Kmax * N, p * N, j + 1, N) = blk.topRows(j + 1);
            }
            rhs(Kmax * N + j) = Cplx(1.0);
            Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(Mat);
            Eigen::VectorXcd x = cod.solve(rhs);
            if ((Mat * x - rhs).lpNorm<Eigen::Infinity>() > 1e-7) return false;
            wcols[j] = x;
        }
        return true;
    };
    bool solved = attempt(Eigen::MatrixXcd::Identity(N, N));
    for (uint64_t tries = 0; !solved && tries < 4; ++tries) {
        CounterRng rng(0x6b64u, tries);
        Eigen::MatrixXcd R(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) R(i, j) = Cplx(rng.gaussian(), rng.gaussian());
        solved = attempt(R);
    }
    if (!solved) throw NumericalError("factorization unstable at current truncation");
    auto Wat = [&](Cplx zeta) {
        Eigen::MatrixXcd W(N, N);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                Cplx acc(0.0);
                for (int p = Dz; p >= 0; --p) acc = acc * zeta + wcols[j](p * N + i);
                W(i, j) = acc;
            }
        return W;
    };
    int trunc = std::min(kDefaultTruncation, 2 * Dz + 32);
    out.indices = kappa;
    out.Bplus = MatrixLoop::from_sampler(
        [&](Cplx z) -> Eigen::MatrixXcd { return Wat(z).partialPivLu().inverse(); }, N, trunc,
        4 * trunc + 2);
    out.Bminus = MatrixLoop::from_sampler(
        [&](Cplx z) -> Eigen::MatrixXcd {
            Eigen::MatrixXcd lw = L.eval(z) * Wat(z);
            for (int j = 0; j < N; ++j) lw.col(j) *= ipow(z, -kappa[j]);
            return lw;
        },
        N, trunc, 4 * trunc + 2);

    double res = 0.0, scale = 0.0;
    for (int q = 0; q < 512; ++q) {
        Cplx zeta = circle_point(q, 512);
        Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(N, N);
        for (int j = 0; j < N; ++j) lam(j, j) = ipow(zeta, kappa[j]);
        Eigen::MatrixXcd rec = out.Bminus.eval(zeta) * lam * out.Bplus.eval(zeta);
        Eigen::MatrixXcd diff = rec - L.eval(zeta);
        res = std::max(res, diff.cwiseAbs().maxCoeff());
        scale = std::max(scale, L.eval(zeta).cwiseAbs().maxCoeff());
    }
    out.residual = res;
    if (res > 1e-6 * scale)
        throw NumericalError("factorization unstable at current truncation");
    return out;
}

} // namespace kdisc
