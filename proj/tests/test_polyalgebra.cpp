#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "kdisc/polyalgebra.hpp"

using namespace kdisc;
using namespace kdisc::testutil;

TEST_CASE("weight vectors accept all-even or all-one weights only") {
    CHECK(WeightVector::make({1, 1, 1}).homogeneous());
    CHECK(WeightVector::make({2, 4}).even_system);
    CHECK_THROWS_AS(WeightVector::make({1, 2}), ValidationError);
    CHECK_THROWS_AS(WeightVector::make({3}), ValidationError);
    CHECK_THROWS_AS(WeightVector::make({2, 0}), ValidationError);
    CHECK_THROWS_AS(WeightVector::make({}), ValidationError);
}

TEST_CASE("weighted degree and dot products") {
    WeightVector M = WeightVector::make({2, 4});
    CHECK(M.sum() == 6);
    CHECK(M.dot({1, 2}) == 10);
    CHECK(weighted_degree({1, 0}, {0, 1}, M) == 6);
}

TEST_CASE("polynomial term arithmetic") {
    ComplexPoly p(1);
    p.add_term({2}, {2}, Cplx(1.0));
    p.add_term({2}, {2}, Cplx(2.0));
    CHECK(p.coeff({2}, {2}) == Cplx(3.0));
    p.add_term({2}, {2}, Cplx(-3.0));
    CHECK(p.empty());
}

TEST_CASE("formal derivatives of |z|^4") {
    ComplexPoly p(1);
    p.add_term({2}, {2}, Cplx(1.0));
    CHECK(p.dz(0).coeff({1}, {2}) == Cplx(2.0));
    CHECK(p.dzbar(0).coeff({2}, {1}) == Cplx(2.0));
    CHECK(p.dz(0).dz(0).coeff({0}, {2}) == Cplx(2.0));
    CHECK(p.dz(0).dzbar(0).coeff({1}, {1}) == Cplx(4.0));
}

TEST_CASE("conjugation swaps exponents and conjugates coefficients") {
    ComplexPoly p(2);
    p.add_term({1, 0}, {0, 2}, Cplx(1.0, 2.0));
    ComplexPoly q = p.conjugated();
    CHECK(q.coeff({0, 2}, {1, 0}) == Cplx(1.0, -2.0));
}

TEST_CASE("pointwise evaluation agrees with hand expansion") {
    ComplexPoly p(2);
    p.add_term({1, 1}, {0, 1}, Cplx(0.5, -1.0));
    std::vector<Cplx> z = {Cplx(1.0, 2.0), Cplx(-0.5, 0.25)};
    Cplx want = Cplx(0.5, -1.0) * z[0] * z[1] * std::conj(z[1]);
    CHECK(std::abs(p.eval(z) - want) < 1e-14);
}

TEST_CASE("hermitian validation pins degree and k0") {
    HermitianPolynomial P = ball_model(1, 4);
    CHECK(P.degree() == 4);
    CHECK(P.k0() == 2);
    HermitianPolynomial T = tube_like_model();
    CHECK(T.degree() == 4);
    CHECK(T.k0() == 3);
}

TEST_CASE("hermitian validation rejects bad input") {
    WeightVector M = WeightVector::make({1});
    ComplexPoly broken(1);
    broken.add_term({3}, {1}, Cplx(1.0)); // no conjugate partner
    CHECK_THROWS_AS(HermitianPolynomial::validate(broken, M), ValidationError);

    ComplexPoly pluri(1); // k0 = d is out of range
    pluri.add_term({4}, {0}, Cplx(1.0));
    pluri.add_term({0}, {4}, Cplx(1.0));
    CHECK_THROWS_AS(HermitianPolynomial::validate(pluri, M), ValidationError);

    ComplexPoly mixed(1); // not weighted homogeneous
    mixed.add_term({2}, {2}, Cplx(1.0));
    mixed.add_term({1}, {1}, Cplx(1.0));
    CHECK_THROWS_AS(HermitianPolynomial::validate(mixed, M), ValidationError);
}

TEST_CASE("bihomogeneous components split by antiholomorphic weight") {
    HermitianPolynomial T = tube_like_model();
    CHECK(T.bihomogeneous_component(1).coeff({3}, {1}) == Cplx(1.0));
    CHECK(T.bihomogeneous_component(3).coeff({1}, {3}) == Cplx(1.0));
    CHECK(T.bihomogeneous_component(2).empty());
}

TEST_CASE("evaluation of a real polynomial is real") {
    HermitianPolynomial P = ball_model(2, 4);
    std::vector<Cplx> z = {Cplx(0.3, 0.7), Cplx(-1.1, 0.2)};
    double a = std::norm(z[0]), b = std::norm(z[1]);
    CHECK(P.eval(z) == doctest::Approx(a * a + b * b).epsilon(1e-12));
}
