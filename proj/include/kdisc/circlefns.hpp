#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "kdisc/errors.hpp"
#include "kdisc/polyalgebra.hpp"

namespace kdisc {

constexpr int kDefaultTruncation = 256;
constexpr int kWindingSamples = 4096;

// Truncated Fourier series on the unit circle: f(zeta) = sum_{|k|<=N} c_k zeta^k.
// Immutable value type in spirit; all operations return new objects.
class CircleFunction {
public:
    CircleFunction() : CircleFunction(0) {}
    explicit CircleFunction(int truncation) : N_(truncation), c_(2 * truncation + 1, Cplx(0.0)) {
        if (truncation < 0) throw ValidationError("negative truncation");
    }

    static CircleFunction constant(Cplx a, int truncation = 0);
    static CircleFunction monomial(int k, Cplx a = Cplx(1.0));
    static CircleFunction from_coeffs(const std::vector<Cplx>& holo_coeffs); // c_0..c_deg
    // Trigonometric interpolation from equispaced samples f(exp(2*pi*i*j/count)).
    static CircleFunction from_samples(const std::vector<Cplx>& values, int truncation);

    int truncation() const { return N_; }
    Cplx coeff(int k) const { return (k < -N_ || k > N_) ? Cplx(0.0) : c_[k + N_]; }
    void set_coeff(int k, Cplx a);

    Cplx eval(Cplx zeta) const;
    std::vector<Cplx> sample(int count) const;

    CircleFunction operator+(const CircleFunction& g) const;
    CircleFunction operator-(const CircleFunction& g) const;
    CircleFunction operator*(const CircleFunction& g) const; // coefficient convolution
    CircleFunction operator*(Cplx a) const;
    CircleFunction operator-() const { return *this * Cplx(-1.0); }

    // Coefficients of zeta |-> conj(f(zeta)) on the circle (reflect and conjugate).
    CircleFunction conj_reflected() const;
    CircleFunction shifted(int p) const; // zeta^p * f; error on truncation overflow
    CircleFunction truncated(int newN) const;

    std::pair<CircleFunction, CircleFunction> riesz_split() const; // (k>=0 part, k<0 part)

    bool holomorphic(double tol = 1e-10) const;   // |c_k| < tol for all k < 0
    bool real_valued(double tol = 1e-10) const;   // c_{-k} = conj(c_k)
    int max_degree(double tol = 0.0) const;       // largest |k| with |c_k| > tol
    int poly_degree(double tol = 1e-12) const;    // largest k >= 0 with |c_k| > tol
    double max_abs_coeff() const;
    double sup_norm(int samples = 1024) const;

private:
    int N_;
    std::vector<Cplx> c_;
};

inline CircleFunction operator*(Cplx a, const CircleFunction& f) { return f * a; }

// Winding number around 0 by continuous argument tracking over equispaced
// samples.  Throws NumericalError if the symbol nearly vanishes or the
// sampling is too coarse to track the phase.
int winding_number(const CircleFunction& f, int samples = kWindingSamples);

// Same argument tracking applied to precomputed values along the circle.
int winding_of_samples(const std::vector<Cplx>& vals);

// Holomorphic g with Re g = u on the circle and Im g(anchor) = 0.
CircleFunction harmonic_extension(const CircleFunction& u, Cplx anchor = Cplx(1.0));

// q with f = (1 - zeta)^m q, via m rounds of synthetic division; throws if a
// round leaves a remainder above rel_tol * max|coeff(f)|.
CircleFunction divide_one_minus_zeta(const CircleFunction& f, int m, double rel_tol = 1e-9);

// Membership in the discrete R_m class: f(zeta) = (-1)^m zeta^m conj(f(zeta)).
bool in_R_m(const CircleFunction& f, int m, double tol = 1e-9, int samples = 1024);

// CSV dump of boundary samples: lines "theta,re,im".
std::string boundary_csv(const CircleFunction& f, int samples = 512);

} // namespace kdisc
