#include "kdisc/modeldisc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "kdisc/parallel.hpp"
#include "kdisc/rng.hpp"

namespace kdisc {

namespace {

double binom(int p, int k) {
    if (k < 0 || k > p) return 0.0;
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (p - i) / (i + 1);
    return r;
}

Cplx ipow(Cplx base, int e) {
    Cplx r(1.0);
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Determinant of a small matrix of CircleFunctions by Laplace expansion.
CircleFunction poly_det(const std::vector<std::vector<CircleFunction>>& A) {
    int n = static_cast<int>(A.size());
    if (n == 1) return A[0][0];
    CircleFunction total;
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<CircleFunction>> minor;
        minor.reserve(n - 1);
        for (int r = 0; r < n; ++r) {
            if (r == i) continue;
            std::vector<CircleFunction> row;
            row.reserve(n - 1);
            for (int c = 1; c < n; ++c) row.push_back(A[r][c]);
            minor.push_back(std::move(row));
        }
        double sign = (i % 2 == 0) ? 1.0 : -1.0;
        total = total + A[i][0] * poly_det(minor) * Cplx(sign);
    }
    return total;
}

Cplx scalar_det(std::vector<std::vector<Cplx>> A) {
    int n = static_cast<int>(A.size());
    Cplx det(1.0);
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (A[piv][c] == Cplx(0.0)) return Cplx(0.0);
        if (piv != c) {
            std::swap(A[piv], A[c]);
            det = -det;
        }
        det *= A[c][c];
        for (int r = c + 1; r < n; ++r) {
            Cplx f = A[r][c] / A[c][c];
            for (int k = c; k < n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    return det;
}

// zeta^{-m} f for f divisible by zeta^m (low coefficients below tolerance).
CircleFunction shift_down_exact(const CircleFunction& f, int m, double rel_tol = 1e-9) {
    double scale = std::max(f.max_abs_coeff(), 1e-300);
    for (int k = -f.truncation(); k < m; ++k) {
        if (std::abs(f.coeff(k)) > rel_tol * scale)
            throw NumericalError("function is not divisible by the expected power of zeta");
    }
    int D = f.poly_degree(0.0);
    CircleFunction out(std::max(D - m, 0));
    for (int k = m; k <= D; ++k) out.set_coeff(k - m, f.coeff(k));
    return out;
}

std::vector<Cplx> eval_components(const std::vector<CircleFunction>& fs, Cplx zeta) {
    std::vector<Cplx> out(fs.size());
    for (size_t i = 0; i < fs.size(); ++i) out[i] = fs[i].eval(zeta);
    return out;
}

} // namespace

std::vector<CircleFunction> build_h(const std::vector<Cplx>& v, const WeightVector& M) {
    if (static_cast<int>(v.size()) != M.n())
        throw ValidationError("build_h: direction dimension mismatch");
    std::vector<CircleFunction> h;
    h.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        int m = M.m[i];
        CircleFunction f(m);
        for (int k = 0; k <= m; ++k)
            f.set_coeff(k, v[i] * binom(m, k) * ((k % 2 == 0) ? 1.0 : -1.0));
        h.push_back(f);
    }
    return h;
}

CircleFunction substitute_disc(const ComplexPoly& q, const std::vector<Cplx>& v,
                               const WeightVector& M, int extra_zeta_power) {
    if (static_cast<int>(v.size()) != M.n())
        throw ValidationError("substitute_disc: dimension mismatch");
    CircleFunction total;
    for (const auto& [key, a] : q.terms()) {
        const auto& [J, K] = key;
        int mj = M.dot(J), mk = M.dot(K);
        Cplx c = a;
        for (size_t i = 0; i < v.size(); ++i) c *= ipow(v[i], J[i]) * ipow(std::conj(v[i]), K[i]);
        if (mk % 2 != 0) c = -c;
        // (1-zeta)^{mj+mk} zeta^{extra-mk}
        int p = mj + mk, shift = extra_zeta_power - mk;
        CircleFunction term(p + std::abs(shift));
        for (int k = 0; k <= p; ++k)
            term.set_coeff(k + shift, c * binom(p, k) * ((k % 2 == 0) ? 1.0 : -1.0));
        total = total + term;
    }
    return total;
}

CircleFunction solve_g(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    CircleFunction u = substitute_disc(P.poly(), v, P.weight(), 0);
    double scale = std::max(1.0, u.max_abs_coeff());
    if (!u.real_valued(1e-10 * scale))
        throw NumericalError("boundary data of the model disc is not real");
    CircleFunction g = harmonic_extension(u, Cplx(1.0));

    if (P.weight().homogeneous()) {
        // Closed binomial series for unit weights, as an independent path.
        int d = P.degree(), k0 = P.k0();
        std::vector<Cplx> Pj(d + 1, Cplx(0.0)); // P^{j, d-j}(v, conj v), j = M.J
        for (int ell = d - k0; ell <= k0; ++ell)
            Pj[d - ell] = P.bihomogeneous_component(ell).eval(v);
        CircleFunction cand(d);
        for (int k = 0; k <= d; ++k) {
            Cplx uk(0.0);
            for (int j = 0; j <= d; ++j) uk += binom(d, k + d - j) * Pj[j];
            if (k % 2 != 0) uk = -uk;
            cand.set_coeff(k, (k == 0) ? uk : 2.0 * uk);
        }
        cand.set_coeff(0, cand.coeff(0) - Cplx(0.0, cand.eval(Cplx(1.0)).imag()));
        double diff = 0.0;
        for (int k = -g.truncation(); k <= g.truncation(); ++k)
            diff = std::max(diff, std::abs(g.coeff(k) - cand.coeff(k)));
        if (diff > 1e-8 * scale)
            throw NumericalError("closed-form and harmonic-extension g disagree");
    }
    return g;
}

Cplx g_prime_zero(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    if (!P.weight().homogeneous())
        throw ValidationError("g_prime_zero closed form needs unit weights");
    int d = P.degree(), k0 = P.k0();
    Cplx val(0.0);
    for (int ell = d - k0; ell <= k0; ++ell) {
        int j = d - ell;
        double w = 0.0;
        for (int l = 0; l <= d; ++l) w += binom(j, 1 + l) * binom(d - j, l);
        val += -2.0 * w * P.bihomogeneous_component(ell).eval(v);
    }
    Cplx check = solve_g(P, v).coeff(1);
    if (std::abs(val - check) > 1e-10 * std::max(1.0, std::abs(val)))
        throw NumericalError("closed-form g'(0) disagrees with the Fourier coefficient");
    return val;
}

LeviCoefficients levi_coefficients(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    int n = P.n(), d = P.degree(), k0 = P.k0();
    const WeightVector& M = P.weight();
    LeviCoefficients L;
    L.Q.assign(n, std::vector<CircleFunction>(n));
    L.S.assign(n, std::vector<CircleFunction>(n));
    L.Qprime_entries.assign(n, std::vector<CircleFunction>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int dij = d - M.m[i] - M.m[j];
            ComplexPoly pq = P.poly().dz(i).dzbar(j);
            ComplexPoly ps = P.poly().dz(i).dz(j);
            CircleFunction qraw = substitute_disc(pq, v, M, k0);
            CircleFunction sraw = substitute_disc(ps, v, M, k0);
            if (qraw.max_abs_coeff() == 0.0) {
                L.Q[i][j] = CircleFunction();
            } else {
                L.Q[i][j] = divide_one_minus_zeta(qraw, dij);
                if (L.Q[i][j].poly_degree() > 2 * k0 - d + M.m[j])
                    throw NumericalError("Levi coefficient degree exceeds its bound");
            }
            if (sraw.max_abs_coeff() == 0.0) {
                L.S[i][j] = CircleFunction();
            } else {
                L.S[i][j] = divide_one_minus_zeta(sraw, dij);
                if (L.S[i][j].poly_degree() > 2 * k0 - d)
                    throw NumericalError("Levi coefficient degree exceeds its bound");
            }
            L.Qprime_entries[i][j] = shift_down_exact(L.Q[i][j], M.m[j]);
        }
    }
    L.detQ = poly_det(L.Q);
    L.Qprime = shift_down_exact(L.detQ, M.sum());
    return L;
}

AdmissibilityCertificate is_admissible(const HermitianPolynomial& P, const std::vector<Cplx>& v,
                                       double tol) {
    AdmissibilityCertificate cert;
    double vnorm = 0.0;
    for (const auto& c : v) vnorm += std::norm(c);
    if (vnorm == 0.0) {
        cert.reason = "v = 0";
        return cert;
    }
    cert.P_at_v = P.eval(v);
    LeviCoefficients L;
    try {
        L = levi_coefficients(P, v);
    } catch (const NumericalError& e) {
        cert.reason = std::string("Levi extraction failed: ") + e.what();
        return cert;
    }
    const int samples = 4096;
    double minabs = std::numeric_limits<double>::max(), maxabs = 0.0, mintheta = 0.0;
    for (int j = 0; j < samples; ++j) {
        double th = 2.0 * std::numbers::pi * j / samples;
        double a = std::abs(L.detQ.eval(Cplx(std::cos(th), std::sin(th))));
        if (a < minabs) {
            minabs = a;
            mintheta = th;
        }
        maxabs = std::max(maxabs, a);
    }
    cert.min_absQ = minabs;
    cert.max_absQ = maxabs;
    cert.min_theta = mintheta;
    if (maxabs == 0.0 || minabs <= tol * maxabs) {
        cert.reason = "Q^v vanishes on the boundary circle";
        return cert;
    }
    // Sampling can straddle a root that sits exactly on the circle, so also
    // locate the roots of the Laurent polynomial detQ = zeta^kmin * q(zeta)
    // with a companion matrix and measure their distance to the circle.
    cert.min_root_gap = std::numeric_limits<double>::infinity();
    {
        int N = L.detQ.truncation();
        int kmin = N + 1, kmax = -N - 1;
        double top = L.detQ.max_abs_coeff();
        for (int k = -N; k <= N; ++k)
            if (std::abs(L.detQ.coeff(k)) > 1e-12 * top) {
                kmin = std::min(kmin, k);
                kmax = std::max(kmax, k);
            }
        int deg = kmax - kmin;
        if (deg > 0) {
            Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
            Cplx lead = L.detQ.coeff(kmax);
            for (int k = 0; k < deg; ++k) C(0, k) = -L.detQ.coeff(kmax - 1 - k) / lead;
            for (int k = 1; k < deg; ++k) C(k, k - 1) = Cplx(1.0);
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
            for (int k = 0; k < deg; ++k)
                cert.min_root_gap =
                    std::min(cert.min_root_gap, std::abs(std::abs(es.eigenvalues()[k]) - 1.0));
        }
        // No roots at all (detQ is a monomial): report a unit gap.
        if (!std::isfinite(cert.min_root_gap)) cert.min_root_gap = 1.0;
        if (cert.min_root_gap <= 1e-6) {
            cert.reason = "Q^v has a root on the boundary circle";
            return cert;
        }
    }
    if (std::abs(cert.P_at_v) <= tol) {
        cert.reason = "disc lies in the hypersurface (P(v, conj v) = 0)";
        return cert;
    }
    cert.admissible = true;
    cert.reason = "ok";
    return cert;
}

FindAdmissibleResult find_admissible(const HermitianPolynomial& P, int trials, uint64_t seed) {
    if (trials < 1) throw ValidationError("find_admissible: trials must be >= 1");
    int n = P.n();
    FindAdmissibleResult best;
    best.trials = trials;
    double best_ratio = -1.0;
    for (int t = 0; t < trials; ++t) {
        CounterRng rng(seed, static_cast<uint64_t>(t));
        std::vector<Cplx> v(n);
        double norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            v[i] = Cplx(rng.gaussian(), rng.gaussian());
            norm2 += std::norm(v[i]);
        }
        double s = 1.0 / std::sqrt(norm2);
        for (auto& c : v) c *= s;
        AdmissibilityCertificate cert = is_admissible(P, v);
        if (cert.admissible) {
            best.found = true;
            best.v = v;
            best.certificate = cert;
            best.trial = t;
            return best;
        }
        double ratio = (cert.max_absQ > 0.0) ? cert.min_absQ / cert.max_absQ : 0.0;
        if (ratio > best_ratio) {
            best_ratio = ratio;
            best.v = v;
            best.certificate = cert;
            best.trial = t;
        }
    }
    return best;
}

DiscLift build_lift(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    AdmissibilityCertificate cert = is_admissible(P, v);
    if (!cert.admissible)
        throw ValidationError("build_lift: direction is not admissible (" + cert.reason + ")");
    int d = P.degree(), k0 = P.k0();
    const WeightVector& M = P.weight();
    DiscLift f;
    f.M = M;
    f.degree = d;
    f.k0 = k0;
    f.v = v;
    f.h = build_h(v, M);
    f.g = solve_g(P, v);
    f.htilde.reserve(P.n());
    for (int i = 0; i < P.n(); ++i) {
        CircleFunction ht = substitute_disc(P.poly().dz(i), v, M, k0);
        if (!ht.holomorphic())
            throw NumericalError("conormal component is not holomorphic");
        if (ht.max_abs_coeff() > 0.0) divide_one_minus_zeta(ht, d - M.m[i]); // divisibility check
        f.htilde.push_back(ht);
    }
    f.gtilde = CircleFunction::monomial(k0, Cplx(-0.5));
    double scale = 1.0;
    for (const auto& c : f.h) scale = std::max(scale, c.max_abs_coeff());
    scale = std::max(scale, f.g.max_abs_coeff());
    if (model_boundary_residual(P, f) > 1e-10 * scale)
        throw NumericalError("constructed lift violates the boundary equations");
    return f;
}

double model_boundary_residual(const HermitianPolynomial& P, const DiscLift& f, int samples) {
    int n = f.n(), k0 = f.k0;
    std::vector<ComplexPoly> Pz;
    Pz.reserve(n);
    for (int i = 0; i < n; ++i) Pz.push_back(P.poly().dz(i));
    double sup = 0.0;
    for (int s = 0; s < samples; ++s) {
        double th = 2.0 * std::numbers::pi * s / samples;
        Cplx zeta(std::cos(th), std::sin(th));
        std::vector<Cplx> z = eval_components(f.h, zeta);
        Cplx w = f.g.eval(zeta);
        std::vector<Cplx> zt = eval_components(f.htilde, zeta);
        Cplx wt = f.gtilde.eval(zeta);
        sup = std::max(sup, std::abs(-w.real() + P.poly().eval(z).real()));
        for (int i = 0; i < n; ++i)
            sup = std::max(sup, std::abs(zt[i] + 2.0 * wt * Pz[i].eval(z)));
        sup = std::max(sup, std::abs(2.0 * (wt * ipow(std::conj(zeta), k0)).imag()));
    }
    return sup;
}

DiscLift reparametrize(const DiscLift& f, Cplx a, int truncation) {
    if (std::abs(a) >= 1.0) throw ValidationError("reparametrize: |a| must be < 1");
    if (a == Cplx(0.0)) return f;
    int k0 = f.k0;
    Cplx abar = std::conj(a);
    Cplx lambda = (1.0 - abar) / (1.0 - a);
    double one_m = 1.0 - std::norm(a);
    int count = 4 * truncation;
    auto compose = [&](const CircleFunction& c, bool lift) {
        std::vector<Cplx> vals(count);
        for (int j = 0; j < count; ++j) {
            double th = 2.0 * std::numbers::pi * j / count;
            Cplx zeta(std::cos(th), std::sin(th));
            Cplx phi = lambda * (zeta - a) / (1.0 - abar * zeta);
            Cplx val = c.eval(phi);
            if (lift) {
                // polynomial factor keeping the twisted conormal equation real
                Cplx mu = ipow((1.0 - abar * zeta) * (1.0 - abar * zeta) / one_m / lambda, k0);
                val *= mu;
            }
            vals[j] = val;
        }
        return CircleFunction::from_samples(vals, truncation);
    };
    DiscLift out;
    out.M = f.M;
    out.degree = f.degree;
    out.k0 = f.k0;
    out.h.reserve(f.h.size());
    out.htilde.reserve(f.htilde.size());
    for (const auto& c : f.h) out.h.push_back(compose(c, false));
    out.g = compose(f.g, false);
    for (const auto& c : f.htilde) out.htilde.push_back(compose(c, true));
    out.gtilde = compose(f.gtilde, true);
    return out;
}

double center_jacobian(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    return std::norm(g_prime_zero(P, v));
}

DiscLift apply_weighted_scaling(const HermitianPolynomial& P, const DiscLift& f, double t) {
    if (t <= 0.0) throw ValidationError("weighted scaling needs t > 0");
    DiscLift out = f;
    for (int i = 0; i < f.n(); ++i) {
        out.h[i] = f.h[i] * Cplx(std::pow(t, f.M.m[i]));
        out.htilde[i] = f.htilde[i] * Cplx(std::pow(t, f.degree - f.M.m[i]));
        if (!out.v.empty()) out.v[i] = f.v[i] * std::pow(t, f.M.m[i]);
    }
    out.g = f.g * Cplx(std::pow(t, f.degree));
    double scale = std::max(1.0, out.g.max_abs_coeff());
    if (model_boundary_residual(P, out) > 1e-8 * scale)
        throw NumericalError("scaling did not preserve the hypersurface");
    return out;
}

DiscLift apply_rotation(const HermitianPolynomial& P, const DiscLift& f,
                        const std::vector<double>& theta) {
    if (static_cast<int>(theta.size()) != P.n())
        throw ValidationError("rotation angle count must match the number of z variables");
    for (const auto& [key, a] : P.poly().terms()) {
        double phase = 0.0;
        for (int i = 0; i < P.n(); ++i) phase += theta[i] * (key.first[i] - key.second[i]);
        if (std::abs(a) * std::abs(std::exp(Cplx(0.0, phase)) - 1.0) > 1e-9)
            throw ValidationError("rotation does not preserve the model polynomial");
    }
    DiscLift out = f;
    for (int i = 0; i < f.n(); ++i) {
        Cplx e = std::exp(Cplx(0.0, theta[i]));
        out.h[i] = f.h[i] * e;
        out.htilde[i] = f.htilde[i] * std::conj(e);
        if (!out.v.empty()) out.v[i] = f.v[i] * e;
    }
    if (model_boundary_residual(P, out) > 1e-8)
        throw NumericalError("rotation did not preserve stationarity");
    return out;
}

DegeneracyReport degeneracy_probe(const HermitianPolynomial& P, int samples, uint64_t seed) {
    int n = P.n();
    const WeightVector& M = P.weight();
    std::vector<std::vector<ComplexPoly>> levi(n, std::vector<ComplexPoly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) levi[i][j] = P.poly().dz(i).dzbar(j);

    DegeneracyReport rep;
    rep.samples = samples;
    rep.eps = {1e-2, 1e-3, 1e-4};
    long c0 = 0, c1 = 0, c2 = 0;
#pragma omp parallel for reduction(+ : c0, c1, c2) if (par::enabled())
    for (int s = 0; s < samples; ++s) {
        CounterRng rng(seed, static_cast<uint64_t>(s));
        std::vector<Cplx> z(n);
        for (int i = 0; i < n; ++i) z[i] = Cplx(rng.gaussian(), rng.gaussian());
        // scale onto the unit weighted sphere: sum |t^{m_i} z_i|^2 = 1
        double lo = 1e-8, hi = 1e8;
        for (int it = 0; it < 200; ++it) {
            double mid = std::sqrt(lo * hi);
            double norm2 = 0.0;
            for (int i = 0; i < n; ++i) norm2 += std::norm(z[i]) * std::pow(mid, 2 * M.m[i]);
            (norm2 < 1.0 ? lo : hi) = mid;
        }
        double t = std::sqrt(lo * hi);
        for (int i = 0; i < n; ++i) z[i] *= std::pow(t, M.m[i]);
        std::vector<std::vector<Cplx>> A(n, std::vector<Cplx>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A[i][j] = levi[i][j].eval(z);
        double det = std::abs(scalar_det(A));
        if (det < 1e-2) ++c0;
        if (det < 1e-3) ++c1;
        if (det < 1e-4) ++c2;
    }
    rep.fraction = {static_cast<double>(c0) / samples, static_cast<double>(c1) / samples,
                    static_cast<double>(c2) / samples};
    return rep;
}

} // namespace kdisc
