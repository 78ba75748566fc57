#pragma once

#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "kdisc/birkhoff.hpp"
#include "kdisc/modeldisc.hpp"

namespace kdisc {

// Polynomial perturbation theta(z, zbar, s) with s = Im w, stored as a sparse
// map (J, K, l) -> coefficient of z^J zbar^K s^l.
class PerturbationPoly {
public:
    using Key = std::tuple<MultiIndex, MultiIndex, int>;

    PerturbationPoly() = default;
    explicit PerturbationPoly(int n) : n_(n) {}

    int vars() const { return n_; }
    bool empty() const { return terms_.empty(); }
    const std::map<Key, Cplx>& terms() const { return terms_; }

    void add_term(const MultiIndex& J, const MultiIndex& K, int l, Cplx a);
    Cplx eval(const std::vector<Cplx>& z, double s) const;

    PerturbationPoly dz(int i) const;
    PerturbationPoly dzbar(int i) const;
    PerturbationPoly ds() const;

private:
    int n_ = 0;
    std::map<Key, Cplx> terms_;
};

// Defining function r = -Re w + P(z, zbar) + theta(z, zbar, Im w), with theta
// restricted to allowed deformation terms:
//   l = 0 with M.J + M.K = d + 1, or 1 <= l <= d with M.J + M.K = d - l.
struct PerturbedHypersurface {
    HermitianPolynomial P;
    PerturbationPoly theta;
    double t = 1.0; // scale at which this surface was produced

    static PerturbedHypersurface validate(const HermitianPolynomial& P,
                                          const PerturbationPoly& theta);
    // r_t = t^{-d} r(t^M z, t^d w): rescales every theta coefficient.
    PerturbedHypersurface scaled(double tscale) const;
};

// Coefficient parametrization of the constrained lift space: component i of
// the lift ranges over (1 - zeta)^{e_i} * (polynomials of degree <= NF - e_i)
// with e = (m_1..m_n, 1, d-m_1..d-m_n, 0).
struct LiftBasis {
    WeightVector M;
    int d = 0, k0 = 0, NF = 0;
    std::vector<int> e;
    std::vector<int> count;   // complex coefficients per component
    std::vector<int> offset;  // component start in the complex coefficient vector

    static LiftBasis make(const WeightVector& M, int d, int k0, int NF);

    int components() const { return static_cast<int>(e.size()); }
    int total_complex() const;
    int total_real() const { return 2 * total_complex(); }

    // x holds (Re c, Im c) interleaved per complex coefficient.
    std::vector<CircleFunction> to_components(const Eigen::VectorXd& x) const;
    DiscLift to_lift(const Eigen::VectorXd& x) const;
    // Synthetic division by (1 - zeta)^{e_i}; any remainder is discarded.
    Eigen::VectorXd project(const DiscLift& f) const;
};

struct LinearizedSystem {
    MatrixLoop G; // (2n+2) x (2n+2)
    MatrixLoop A; // 2n x 2n reduced matrix
    LiftBasis basis;
    int kernel_dim = 0;
    double sigma_gap = 0.0; // ratio of smallest kept to largest discarded singular value
    int rank = 0;
    std::vector<Eigen::VectorXd> kernel_vectors;              // basis coordinates
    std::vector<std::vector<CircleFunction>> kernel_basis;    // as component functions
};

// The (2n+2) x (2n+2) linearization matrix along the model disc, assembled
// exactly in Fourier coefficients.
MatrixLoop build_G(const HermitianPolynomial& P, const std::vector<Cplx>& v);

// Row-reduced 2n x 2n matrix A with det A = (2i)^n Q'; verified on 512
// samples to 1e-8 relative.
MatrixLoop reduce_to_A(const LeviCoefficients& L, const WeightVector& M, int d);

// Kernel of f' -> 2Re[conj(G) f'] over the constrained polynomial space, by
// real collocation with 2x oversampling and SVD rank decisions.
LinearizedSystem linearize(const HermitianPolynomial& P, const std::vector<Cplx>& v, int NF = 24);

// Kernel dimension of u -> 2Re[conj(A) u] over unconstrained vector
// polynomials of degree <= D.
int l3_kernel_dim(const MatrixLoop& A, int D);

// Sup over samples of all 2n+2 boundary equations of r evaluated on f.
double boundary_residual(const PerturbedHypersurface& r, const DiscLift& f, int samples = 1024);

// Newton solve of the boundary equations in the constrained coefficient
// space, with the kernel directions pinned to kernel_coords relative to the
// start disc.
DiscLift newton_attach(const PerturbedHypersurface& r, const DiscLift& start,
                       const std::vector<double>& kernel_coords, const LinearizedSystem& lin,
                       int max_iter = 50, double tol = 1e-9);

struct FamilyEntry {
    std::vector<double> coords;
    bool ok = false;
    DiscLift disc;
    double residual = 0.0;
    std::string error;
};

// Continuation over a grid of kernel coordinates with warm starts; failed
// grid points are annotated, not fatal.
std::vector<FamilyEntry> disc_family(const PerturbedHypersurface& r, const DiscLift& start,
                                     const LinearizedSystem& lin,
                                     const std::vector<std::vector<double>>& grid);

} // namespace kdisc
