#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "kdisc/errors.hpp"

namespace kdisc {

using Cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

// Weight vector (m_1,...,m_n).  Two regimes are accepted: all weights even,
// or all weights equal to 1 (the homogeneous case).  Other parities are
// rejected because the row reduction of the linearized system needs the
// exponents (d - m_l)/2 (or (d - 2)/2 when homogeneous) to be integral.
struct WeightVector {
    std::vector<int> m;
    bool even_system = false;

    static WeightVector make(std::vector<int> weights);

    int n() const { return static_cast<int>(m.size()); }
    int sum() const;
    bool homogeneous() const; // all weights equal to 1
    int dot(const MultiIndex& J) const;
};

int weighted_degree(const MultiIndex& J, const MultiIndex& K, const WeightVector& M);

// Polynomial in (z, zbar) with complex coefficients, stored as a sparse map
// (J, K) -> coefficient of z^J zbar^K.
class ComplexPoly {
public:
    using TermMap = std::map<std::pair<MultiIndex, MultiIndex>, Cplx>;

    ComplexPoly() = default;
    explicit ComplexPoly(int n) : n_(n) {}

    int vars() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const MultiIndex& J, const MultiIndex& K, Cplx a);
    Cplx coeff(const MultiIndex& J, const MultiIndex& K) const;

    ComplexPoly dz(int i) const;    // formal d/dz_i
    ComplexPoly dzbar(int j) const; // formal d/dzbar_j
    ComplexPoly conjugated() const; // coefficients of conj(p) as a (z,zbar) polynomial

    Cplx eval(const std::vector<Cplx>& z) const;

private:
    int n_ = 0;
    TermMap terms_;
};

// Real-valued weighted homogeneous polynomial P(z, zbar) of degree d with
// hermitian coefficient symmetry a_{JK} = conj(a_{KJ}).  k0 is the largest
// antiholomorphic weight M.K carried by a nonzero coefficient; validation
// enforces d/2 <= k0 <= d-1.
class HermitianPolynomial {
public:
    const ComplexPoly& poly() const { return poly_; }
    const WeightVector& weight() const { return weight_; }
    int n() const { return weight_.n(); }
    int degree() const { return d_; }
    int k0() const { return k0_; }

    ComplexPoly bihomogeneous_component(int ell) const; // terms with M.K == ell
    double eval(const std::vector<Cplx>& z) const;

    static HermitianPolynomial validate(const ComplexPoly& raw, const WeightVector& weight,
                                        double tol = 1e-12);

private:
    ComplexPoly poly_;
    WeightVector weight_;
    int d_ = 0;
    int k0_ = 0;
};

} // namespace kdisc
