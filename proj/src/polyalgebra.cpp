#include "kdisc/polyalgebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace kdisc {

namespace {

std::string mi_to_string(const MultiIndex& J) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < J.size(); ++i) os << (i ? "," : "") << J[i];
    os << ")";
    return os.str();
}

} // namespace

WeightVector WeightVector::make(std::vector<int> weights) {
    if (weights.empty()) throw ValidationError("weight vector must be nonempty");
    bool all_even = true, all_one = true;
    for (int w : weights) {
        if (w < 1) throw ValidationError("weights must be positive integers");
        if (w % 2 != 0) all_even = false;
        if (w != 1) all_one = false;
    }
    if (!all_even && !all_one)
        throw ValidationError("weight system must be all even or all ones");
    WeightVector M;
    M.m = std::move(weights);
    M.even_system = all_even || all_one;
    return M;
}

int WeightVector::sum() const { return std::accumulate(m.begin(), m.end(), 0); }

bool WeightVector::homogeneous() const {
    return std::all_of(m.begin(), m.end(), [](int w) { return w == 1; });
}

int WeightVector::dot(const MultiIndex& J) const {
    if (J.size() != m.size()) throw ValidationError("multi-index dimension mismatch");
    int s = 0;
    for (size_t i = 0; i < m.size(); ++i) {
        if (J[i] < 0) throw ValidationError("multi-index entries must be nonnegative");
        s += m[i] * J[i];
    }
    return s;
}

int weighted_degree(const MultiIndex& J, const MultiIndex& K, const WeightVector& M) {
    if (J.size() != K.size() || static_cast<int>(J.size()) != M.n())
        throw ValidationError("weighted_degree: dimension mismatch");
    return M.dot(J) + M.dot(K);
}

void ComplexPoly::add_term(const MultiIndex& J, const MultiIndex& K, Cplx a) {
    if (static_cast<int>(J.size()) != n_ || static_cast<int>(K.size()) != n_)
        throw ValidationError("term multi-index size does not match variable count");
    for (int j : J) if (j < 0) throw ValidationError("negative exponent");
    for (int k : K) if (k < 0) throw ValidationError("negative exponent");
    auto key = std::make_pair(J, K);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        if (a != Cplx(0.0)) terms_.emplace(key, a);
    } else {
        it->second += a;
        if (it->second == Cplx(0.0)) terms_.erase(it);
    }
}

Cplx ComplexPoly::coeff(const MultiIndex& J, const MultiIndex& K) const {
    auto it = terms_.find(std::make_pair(J, K));
    return it == terms_.end() ? Cplx(0.0) : it->second;
}

ComplexPoly ComplexPoly::dz(int i) const {
    if (i < 0 || i >= n_) throw ValidationError("derivative index out of range");
    ComplexPoly out(n_);
    for (const auto& [key, a] : terms_) {
        const auto& [J, K] = key;
        if (J[i] == 0) continue;
        MultiIndex J2 = J;
        J2[i] -= 1;
        out.add_term(J2, K, a * static_cast<double>(J[i]));
    }
    return out;
}

ComplexPoly ComplexPoly::dzbar(int j) const {
    if (j < 0 || j >= n_) throw ValidationError("derivative index out of range");
    ComplexPoly out(n_);
    for (const auto& [key, a] : terms_) {
        const auto& [J, K] = key;
        if (K[j] == 0) continue;
        MultiIndex K2 = K;
        K2[j] -= 1;
        out.add_term(J, K2, a * static_cast<double>(K[j]));
    }
    return out;
}

ComplexPoly ComplexPoly::conjugated() const {
    ComplexPoly out(n_);
    for (const auto& [key, a] : terms_) out.add_term(key.second, key.first, std::conj(a));
    return out;
}

Cplx ComplexPoly::eval(const std::vector<Cplx>& z) const {
    if (static_cast<int>(z.size()) != n_) throw ValidationError("eval: point dimension mismatch");
    Cplx total(0.0);
    for (const auto& [key, a] : terms_) {
        Cplx t = a;
        for (int i = 0; i < n_; ++i) {
            for (int p = 0; p < key.first[i]; ++p) t *= z[i];
            for (int p = 0; p < key.second[i]; ++p) t *= std::conj(z[i]);
        }
        total += t;
    }
    return total;
}

ComplexPoly HermitianPolynomial::bihomogeneous_component(int ell) const {
    if (ell < d_ - k0_ || ell > k0_)
        throw ValidationError("bihomogeneous component index out of range");
    ComplexPoly out(n());
    for (const auto& [key, a] : poly_.terms())
        if (weight_.dot(key.second) == ell) out.add_term(key.first, key.second, a);
    return out;
}

double HermitianPolynomial::eval(const std::vector<Cplx>& z) const {
    Cplx val = poly_.eval(z);
    double mag = std::abs(val);
    if (std::abs(val.imag()) > 1e-12 * std::max(1.0, mag))
        throw NumericalError("hermitian polynomial evaluated to a non-real value");
    return val.real();
}

HermitianPolynomial HermitianPolynomial::validate(const ComplexPoly& raw,
                                                  const WeightVector& weight, double tol) {
    if (raw.vars() != weight.n())
        throw ValidationError("polynomial variable count does not match weight vector");
    if (raw.empty()) throw ValidationError("polynomial has no terms");

    int d = -1, k0 = -1, kmin = -1;
    for (const auto& [key, a] : raw.terms()) {
        if (std::abs(a) <= tol) continue;
        const auto& [J, K] = key;
        Cplx partner = raw.coeff(K, J);
        if (std::abs(a - std::conj(partner)) > tol) {
            throw ValidationError("hermitian symmetry violated for term J=" + mi_to_string(J) +
                                  " K=" + mi_to_string(K));
        }
        int deg = weighted_degree(J, K, weight);
        if (d < 0) d = deg;
        else if (deg != d) throw ValidationError("mixed weighted degrees in polynomial");
        int mk = weight.dot(K);
        k0 = std::max(k0, mk);
        kmin = (kmin < 0) ? mk : std::min(kmin, mk);
    }
    if (d <= 0) throw ValidationError("polynomial is numerically zero");
    if (2 * k0 < d || k0 > d - 1)
        throw ValidationError("k0 outside [d/2, d-1]: model not of the supported form");
    // Hermitian symmetry forces min M.K = d - max M.K; double-check anyway.
    if (kmin != d - k0) throw ValidationError("bidegree range is not symmetric about d/2");

    HermitianPolynomial P;
    P.weight_ = weight;
    P.d_ = d;
    P.k0_ = k0;
    ComplexPoly cleaned(raw.vars());
    for (const auto& [key, a] : raw.terms())
        if (std::abs(a) > tol) cleaned.add_term(key.first, key.second, a);
    P.poly_ = cleaned;
    return P;
}

} // namespace kdisc
