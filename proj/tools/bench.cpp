#include <chrono>
#include <functional>
#include <iostream>
#include <vector>

#include "kdisc/parallel.hpp"
#include "kdisc/rhsolver.hpp"

using namespace kdisc;

namespace {

HermitianPolynomial ball_model(int n, int d) {
    WeightVector M = WeightVector::make(std::vector<int>(n, 1));
    ComplexPoly raw(n);
    for (int i = 0; i < n; ++i) {
        MultiIndex J(n, 0);
        J[i] = d / 2;
        raw.add_term(J, J, Cplx(1.0));
    }
    return HermitianPolynomial::validate(raw, M);
}

template <typename F>
double time_ms(F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

} // namespace

int main() {
    std::cout << "threads available: " << par::max_threads() << "\n";

    HermitianPolynomial P1 = ball_model(1, 4);
    HermitianPolynomial P2 = ball_model(2, 4);

    struct Case {
        const char* name;
        std::function<void()> body;
    };
    std::vector<Case> cases = {
        {"degeneracy_probe n=1 (200k samples)",
         [&] { degeneracy_probe(P1, 200000, 7); }},
        {"degeneracy_probe n=2 (100k samples)",
         [&] { degeneracy_probe(P2, 100000, 7); }},
        {"linearize n=1 NF=96",
         [&] { linearize(P1, {Cplx(1.0)}, 96); }},
        {"linearize n=2 NF=48",
         [&] { linearize(P2, {Cplx(0.8), Cplx(0.6)}, 48); }},
    };

    std::cout.setf(std::ios::fixed);
    std::cout.precision(1);
    for (auto& c : cases) {
        par::enabled() = false;
        double serial = time_ms(c.body);
        par::enabled() = true;
        double parallel = time_ms(c.body);
        std::cout << c.name << ": serial " << serial << " ms, openmp " << parallel
                  << " ms, speedup " << (parallel > 0 ? serial / parallel : 0.0) << "x\n";
    }
    return 0;
}
