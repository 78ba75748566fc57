#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "kdisc/modeldisc.hpp"

namespace kdisc::testutil {

// P = sum_i |z_i|^d with unit weights.
inline HermitianPolynomial ball_model(int n, int d) {
    WeightVector M = WeightVector::make(std::vector<int>(n, 1));
    ComplexPoly raw(n);
    for (int i = 0; i < n; ++i) {
        MultiIndex J(n, 0);
        J[i] = d / 2;
        raw.add_term(J, J, Cplx(1.0));
    }
    return HermitianPolynomial::validate(raw, M);
}

// P = z^3 zbar + z zbar^3 = 2 |z|^2 Re(z^2); Levi-degenerate along two lines.
inline HermitianPolynomial tube_like_model() {
    WeightVector M = WeightVector::make({1});
    ComplexPoly raw(1);
    raw.add_term({3}, {1}, Cplx(1.0));
    raw.add_term({1}, {3}, Cplx(1.0));
    return HermitianPolynomial::validate(raw, M);
}

inline double coeff_distance(const CircleFunction& a, const CircleFunction& b) {
    int N = std::max(a.truncation(), b.truncation());
    double m = 0.0;
    for (int k = -N; k <= N; ++k) m = std::max(m, std::abs(a.coeff(k) - b.coeff(k)));
    return m;
}

inline double lift_distance(const DiscLift& a, const DiscLift& b) {
    double m = coeff_distance(a.g, b.g);
    m = std::max(m, coeff_distance(a.gtilde, b.gtilde));
    for (int i = 0; i < a.n(); ++i) {
        m = std::max(m, coeff_distance(a.h[i], b.h[i]));
        m = std::max(m, coeff_distance(a.htilde[i], b.htilde[i]));
    }
    return m;
}

inline double sup_on_circle(const CircleFunction& f, int samples = 1024) {
    double m = 0.0;
    for (int q = 0; q < samples; ++q) {
        double th = 2.0 * std::numbers::pi * q / samples;
        m = std::max(m, std::abs(f.eval(Cplx(std::cos(th), std::sin(th)))));
    }
    return m;
}

} // namespace kdisc::testutil
