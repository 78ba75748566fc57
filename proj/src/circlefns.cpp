#include "kdisc/circlefns.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace kdisc {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Cplx unit_root(int j, int count) {
    double th = kTwoPi * j / count;
    return Cplx(std::cos(th), std::sin(th));
}
} // namespace

CircleFunction CircleFunction::constant(Cplx a, int truncation) {
    CircleFunction f(truncation);
    f.set_coeff(0, a);
    return f;
}

CircleFunction CircleFunction::monomial(int k, Cplx a) {
    CircleFunction f(std::abs(k));
    f.set_coeff(k, a);
    return f;
}

CircleFunction CircleFunction::from_coeffs(const std::vector<Cplx>& holo_coeffs) {
    int deg = static_cast<int>(holo_coeffs.size()) - 1;
    CircleFunction f(std::max(deg, 0));
    for (int k = 0; k <= deg; ++k) f.set_coeff(k, holo_coeffs[k]);
    return f;
}

CircleFunction CircleFunction::from_samples(const std::vector<Cplx>& values, int truncation) {
    int count = static_cast<int>(values.size());
    if (count < 2 * truncation + 1)
        throw ValidationError("from_samples: not enough samples for requested truncation");
    CircleFunction f(truncation);
    // Plain DFT; sizes here are small enough that O(N^2) is irrelevant.
    for (int k = -truncation; k <= truncation; ++k) {
        Cplx acc(0.0);
        for (int j = 0; j < count; ++j) acc += values[j] * unit_root(-k * j % count, count);
        f.set_coeff(k, acc / static_cast<double>(count));
    }
    return f;
}

void CircleFunction::set_coeff(int k, Cplx a) {
    if (k < -N_ || k > N_) throw ValidationError("coefficient index outside truncation");
    c_[k + N_] = a;
}

Cplx CircleFunction::eval(Cplx zeta) const {
    // Horner for k >= 0 in zeta and for k < 0 in 1/zeta.
    Cplx pos(0.0);
    for (int k = N_; k >= 0; --k) pos = pos * zeta + c_[k + N_];
    Cplx neg(0.0);
    Cplx w = Cplx(1.0) / zeta;
    for (int idx = 0; idx < N_; ++idx) neg = (neg + c_[idx]) * w; // c_[idx] is coeff(-N_+idx)
    return pos + neg;
}

std::vector<Cplx> CircleFunction::sample(int count) const {
    std::vector<Cplx> out(count);
    for (int j = 0; j < count; ++j) out[j] = eval(unit_root(j, count));
    return out;
}

CircleFunction CircleFunction::operator+(const CircleFunction& g) const {
    int N = std::max(N_, g.N_);
    CircleFunction out(N);
    for (int k = -N; k <= N; ++k) out.set_coeff(k, coeff(k) + g.coeff(k));
    return out;
}

CircleFunction CircleFunction::operator-(const CircleFunction& g) const {
    return *this + (g * Cplx(-1.0));
}

CircleFunction CircleFunction::operator*(const CircleFunction& g) const {
    int N = N_ + g.N_;
    CircleFunction out(N);
    for (int a = -N_; a <= N_; ++a) {
        Cplx ca = coeff(a);
        if (ca == Cplx(0.0)) continue;
        for (int b = -g.N_; b <= g.N_; ++b) {
            Cplx cb = g.coeff(b);
            if (cb == Cplx(0.0)) continue;
            out.set_coeff(a + b, out.coeff(a + b) + ca * cb);
        }
    }
    return out;
}

CircleFunction CircleFunction::operator*(Cplx a) const {
    CircleFunction out(N_);
    for (int k = -N_; k <= N_; ++k) out.set_coeff(k, coeff(k) * a);
    return out;
}

CircleFunction CircleFunction::conj_reflected() const {
    CircleFunction out(N_);
    for (int k = -N_; k <= N_; ++k) out.set_coeff(k, std::conj(coeff(-k)));
    return out;
}

CircleFunction CircleFunction::shifted(int p) const {
    int deg = max_degree();
    CircleFunction out(deg + std::abs(p));
    for (int k = -N_; k <= N_; ++k) {
        Cplx a = coeff(k);
        if (a != Cplx(0.0)) out.set_coeff(k + p, a);
    }
    return out;
}

CircleFunction CircleFunction::truncated(int newN) const {
    CircleFunction out(newN);
    for (int k = -newN; k <= newN; ++k) out.set_coeff(k, coeff(k));
    for (int k = -N_; k <= N_; ++k) {
        if (std::abs(k) > newN && std::abs(coeff(k)) > 1e-12)
            throw ValidationError("truncation would drop significant coefficients");
    }
    return out;
}

std::pair<CircleFunction, CircleFunction> CircleFunction::riesz_split() const {
    CircleFunction plus(N_), minus(N_);
    for (int k = 0; k <= N_; ++k) plus.set_coeff(k, coeff(k));
    for (int k = -N_; k < 0; ++k) minus.set_coeff(k, coeff(k));
    return {plus, minus};
}

bool CircleFunction::holomorphic(double tol) const {
    for (int k = -N_; k < 0; ++k)
        if (std::abs(coeff(k)) >= tol) return false;
    return true;
}

bool CircleFunction::real_valued(double tol) const {
    for (int k = 0; k <= N_; ++k)
        if (std::abs(coeff(-k) - std::conj(coeff(k))) > tol) return false;
    return true;
}

int CircleFunction::max_degree(double tol) const {
    int deg = 0;
    for (int k = -N_; k <= N_; ++k)
        if (std::abs(coeff(k)) > tol) deg = std::max(deg, std::abs(k));
    return deg;
}

int CircleFunction::poly_degree(double tol) const {
    int deg = 0;
    for (int k = 0; k <= N_; ++k)
        if (std::abs(coeff(k)) > tol) deg = k;
    return deg;
}

double CircleFunction::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& a : c_) m = std::max(m, std::abs(a));
    return m;
}

double CircleFunction::sup_norm(int samples) const {
    double m = 0.0;
    for (const auto& v : sample(samples)) m = std::max(m, std::abs(v));
    return m;
}

int winding_number(const CircleFunction& f, int samples) {
    return winding_of_samples(f.sample(samples));
}

int winding_of_samples(const std::vector<Cplx>& vals) {
    int samples = static_cast<int>(vals.size());
    double maxabs = 0.0, minabs = std::numeric_limits<double>::max();
    for (const auto& v : vals) {
        maxabs = std::max(maxabs, std::abs(v));
        minabs = std::min(minabs, std::abs(v));
    }
    if (minabs <= 1e-8)
        throw NumericalError("index undefined: symbol nearly vanishes on the circle");
    double total = 0.0;
    for (int j = 0; j < samples; ++j) {
        Cplx ratio = vals[(j + 1) % samples] / vals[j];
        double dphi = std::arg(ratio);
        if (std::abs(dphi) >= std::numbers::pi - 1e-9)
            throw NumericalError("winding number: phase step >= pi, increase sampling");
        total += dphi;
    }
    double turns = total / kTwoPi;
    double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 0.1)
        throw NumericalError("winding number: accumulated argument is not an integer multiple of 2*pi");
    return static_cast<int>(rounded);
}

CircleFunction harmonic_extension(const CircleFunction& u, Cplx anchor) {
    if (!u.real_valued(1e-10)) throw ValidationError("harmonic extension needs a real-valued input");
    int N = u.truncation();
    CircleFunction g(N);
    g.set_coeff(0, u.coeff(0));
    for (int k = 1; k <= N; ++k) g.set_coeff(k, 2.0 * u.coeff(k));
    Cplx at_anchor = g.eval(anchor);
    g.set_coeff(0, g.coeff(0) - Cplx(0.0, at_anchor.imag()));
    return g;
}

CircleFunction divide_one_minus_zeta(const CircleFunction& f, int m, double rel_tol) {
    if (m < 0) throw ValidationError("divide_one_minus_zeta: negative order");
    if (!f.holomorphic(1e-10))
        throw ValidationError("divide_one_minus_zeta: input is not holomorphic");
    double scale = std::max(f.max_abs_coeff(), 1e-300);
    CircleFunction cur = f;
    for (int round = 0; round < m; ++round) {
        int D = cur.poly_degree(0.0);
        // f = (1 - zeta) q + r with q_k determined from the top coefficient down.
        std::vector<Cplx> q(std::max(D, 1), Cplx(0.0));
        Cplx carry(0.0); // q_k for current k
        for (int k = D; k >= 1; --k) {
            Cplx qk1 = carry - cur.coeff(k); // q_{k-1} = q_k - a_k
            q[k - 1] = qk1;
            carry = qk1;
        }
        Cplx rem = cur.coeff(0) - carry;
        if (std::abs(rem) >= rel_tol * scale)
            throw NumericalError("not divisible by (1-zeta)^m: nonzero remainder");
        CircleFunction next(std::max(D - 1, 0));
        for (int k = 0; k <= D - 1; ++k) next.set_coeff(k, q[k]);
        cur = next;
    }
    return cur;
}

bool in_R_m(const CircleFunction& f, int m, double tol, int samples) {
    double sign = (m % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < samples; ++j) {
        Cplx zeta = unit_root(j, samples);
        Cplx lhs = f.eval(zeta);
        Cplx rhs = sign * std::pow(zeta, m) * std::conj(lhs);
        if (std::abs(lhs - rhs) > tol) return false;
    }
    return true;
}

std::string boundary_csv(const CircleFunction& f, int samples) {
    std::ostringstream os;
    os << "theta,re,im\n";
    os.precision(17);
    for (int j = 0; j < samples; ++j) {
        double th = kTwoPi * j / samples;
        Cplx v = f.eval(Cplx(std::cos(th), std::sin(th)));
        os << th << "," << v.real() << "," << v.imag() << "\n";
    }
    return os.str();
}

} // namespace kdisc
