#pragma once

#include <string>
#include <vector>

#include "kdisc/circlefns.hpp"
#include "kdisc/polyalgebra.hpp"

namespace kdisc {

// Model hypersurface rho(z, w) = -Re w + P(z, zbar) in C^{n+1}.
struct ModelHypersurface {
    HermitianPolynomial P;

    int n() const { return P.n(); }
    double rho(const std::vector<Cplx>& z, Cplx w) const { return -w.real() + P.eval(z); }
};

// Holomorphic disc with conormal lift: z = h(zeta), w = g(zeta) attached to
// the hypersurface, (htilde, gtilde) the twisted conormal components.
struct DiscLift {
    std::vector<CircleFunction> h;
    CircleFunction g;
    std::vector<CircleFunction> htilde;
    CircleFunction gtilde;

    WeightVector M;
    int degree = 0;
    int k0 = 0;
    std::vector<Cplx> v; // generating direction (empty if not applicable)

    int n() const { return static_cast<int>(h.size()); }
};

struct LeviCoefficients {
    std::vector<std::vector<CircleFunction>> Q; // Q_{i jbar}, divisible by zeta^{m_j}
    std::vector<std::vector<CircleFunction>> S; // S_{ij}, degree <= 2k0 - d
    CircleFunction detQ;                        // determinant of the Q matrix
    CircleFunction Qprime;                      // zeta^{-sum m_i} detQ
    std::vector<std::vector<CircleFunction>> Qprime_entries; // Q_{i jbar} zeta^{-m_j}
};

struct AdmissibilityCertificate {
    bool admissible = false;
    double min_absQ = 0.0;
    double max_absQ = 0.0;
    double min_theta = 0.0;    // boundary angle where |detQ| is smallest
    double min_root_gap = 0.0; // distance of the nearest root of detQ to the unit circle
    double P_at_v = 0.0;
    std::string reason;
};

struct FindAdmissibleResult {
    bool found = false;
    std::vector<Cplx> v;
    AdmissibilityCertificate certificate;
    int trial = -1; // trial index that succeeded, or best trial on failure
    int trials = 0;
};

struct DegeneracyReport {
    int samples = 0;
    std::vector<double> eps;      // thresholds probed
    std::vector<double> fraction; // fraction of sphere samples with |det Levi| < eps
};

// h_i(zeta) = (1 - zeta)^{m_i} v_i.
std::vector<CircleFunction> build_h(const std::vector<Cplx>& v, const WeightVector& M);

// zeta^{extra} * q(h^v(zeta), conj(h^v(zeta))) as an exact Laurent polynomial,
// using (1 - 1/zeta) = -(1 - zeta)/zeta on the circle.
CircleFunction substitute_disc(const ComplexPoly& q, const std::vector<Cplx>& v,
                               const WeightVector& M, int extra_zeta_power = 0);

// Holomorphic g with Re g = P(h^v, conj h^v) on the circle and g(1) = 0.  In
// the homogeneous case the result is cross-checked against the closed
// binomial-coefficient series.
CircleFunction solve_g(const HermitianPolynomial& P, const std::vector<Cplx>& v);

// Closed-form g'(0) for unit weights, cross-checked against solve_g.
Cplx g_prime_zero(const HermitianPolynomial& P, const std::vector<Cplx>& v);

LeviCoefficients levi_coefficients(const HermitianPolynomial& P, const std::vector<Cplx>& v);

AdmissibilityCertificate is_admissible(const HermitianPolynomial& P, const std::vector<Cplx>& v,
                                       double tol = 1e-6);

FindAdmissibleResult find_admissible(const HermitianPolynomial& P, int trials, uint64_t seed);

DiscLift build_lift(const HermitianPolynomial& P, const std::vector<Cplx>& v);

// Sup over boundary samples of all 2n+2 stationarity equations for the model.
double model_boundary_residual(const HermitianPolynomial& P, const DiscLift& f,
                               int samples = 1024);

// Precompose the disc with the automorphism phi_a of the unit disc fixing 1;
// the lift picks up the polynomial factor that keeps the twisted conormal
// equation satisfied.
DiscLift reparametrize(const DiscLift& f, Cplx a, int truncation = kDefaultTruncation);

// |g'(0)|^2, the Jacobian of the center map of the reparametrized family.
double center_jacobian(const HermitianPolynomial& P, const std::vector<Cplx>& v);

// Weighted scaling (z, w) -> (t^{m_1} z_1, ..., t^d w) with the induced
// cotangent action on the lift (overall scale chosen to fix gtilde).
DiscLift apply_weighted_scaling(const HermitianPolynomial& P, const DiscLift& f, double t);

// Rotation z_j -> exp(i theta_j) z_j; requires P to be invariant.
DiscLift apply_rotation(const HermitianPolynomial& P, const DiscLift& f,
                        const std::vector<double>& theta);

// Monte-Carlo probe of the Levi degeneracy locus on the unit weighted sphere.
// Advisory only.  Deterministic in (seed, sample index); uses the OpenMP path
// when kdisc::par::enabled().
DegeneracyReport degeneracy_probe(const HermitianPolynomial& P, int samples, uint64_t seed = 0);

} // namespace kdisc
