#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "kdisc/parallel.hpp"
#include "kdisc/rhsolver.hpp"

using namespace kdisc;
using namespace kdisc::testutil;

namespace {

PerturbationPoly allowed_theta(double eps) {
    PerturbationPoly theta(1);
    theta.add_term({3}, {2}, 0, Cplx(eps));
    theta.add_term({2}, {3}, 0, Cplx(eps));
    return theta;
}

} // namespace

TEST_CASE("perturbation polynomial evaluation and derivatives") {
    PerturbationPoly theta(1);
    theta.add_term({2}, {1}, 1, Cplx(1.0, 0.5));
    std::vector<Cplx> z = {Cplx(0.4, -0.8)};
    double s = 0.7;
    Cplx want = Cplx(1.0, 0.5) * z[0] * z[0] * std::conj(z[0]) * s;
    CHECK(std::abs(theta.eval(z, s) - want) < 1e-14);
    CHECK(std::abs(theta.dz(0).eval(z, s) - 2.0 * want / z[0]) < 1e-13);
    CHECK(std::abs(theta.dzbar(0).eval(z, s) - want / std::conj(z[0])) < 1e-13);
    CHECK(std::abs(theta.ds().eval(z, s) - want / s) < 1e-13);
}

TEST_CASE("deformation weight rules are enforced") {
    HermitianPolynomial P = ball_model(1, 4);
    CHECK_NOTHROW(PerturbedHypersurface::validate(P, allowed_theta(1e-3)));

    PerturbationPoly with_s(1); // l = 2 needs M(J + K) = d - 2
    with_s.add_term({1}, {1}, 2, Cplx(0.25));
    CHECK_NOTHROW(PerturbedHypersurface::validate(P, with_s));

    PerturbationPoly wrong_weight(1);
    wrong_weight.add_term({2}, {2}, 0, Cplx(1e-3)); // weight d, not d + 1
    CHECK_THROWS_AS(PerturbedHypersurface::validate(P, wrong_weight), ValidationError);

    PerturbationPoly not_real(1);
    not_real.add_term({3}, {2}, 0, Cplx(1e-3)); // missing conjugate partner
    CHECK_THROWS_AS(PerturbedHypersurface::validate(P, not_real), ValidationError);

    PerturbationPoly too_high(1);
    too_high.add_term({3}, {1}, 1, Cplx(1e-3)); // l = 1 needs weight d - 1
    too_high.add_term({1}, {3}, 1, Cplx(1e-3));
    CHECK_THROWS_AS(PerturbedHypersurface::validate(P, too_high), ValidationError);
}

TEST_CASE("scaling the surface rescales the defining function") {
    HermitianPolynomial P = ball_model(1, 4);
    PerturbedHypersurface r = PerturbedHypersurface::validate(P, allowed_theta(1e-2));
    double t = 0.6;
    PerturbedHypersurface rt = r.scaled(t);
    std::vector<Cplx> z = {Cplx(0.3, -0.2)};
    Cplx w(0.15, 0.45);
    std::vector<Cplx> zt = {t * z[0]};
    Cplx wt = std::pow(t, 4) * w;
    double orig = -wt.real() + P.eval(zt) + r.theta.eval(zt, wt.imag()).real();
    double scaled = -w.real() + P.eval(z) + rt.theta.eval(z, w.imag()).real();
    CHECK(scaled == doctest::Approx(orig / std::pow(t, 4)).epsilon(1e-12));
}

TEST_CASE("lift basis projects and rebuilds the model disc") {
    HermitianPolynomial P = ball_model(2, 4);
    FindAdmissibleResult r = find_admissible(P, 64, 3);
    REQUIRE(r.found);
    DiscLift f = build_lift(P, r.v);
    LiftBasis basis = LiftBasis::make(P.weight(), P.degree(), P.k0(), 24);
    DiscLift back = basis.to_lift(basis.project(f));
    CHECK(lift_distance(back, f) < 1e-10);
    CHECK(basis.total_real() == 2 * basis.total_complex());
    CHECK_THROWS_AS(LiftBasis::make(P.weight(), P.degree(), P.k0(), 2), ValidationError);
}

TEST_CASE("reduced matrix satisfies det A = (2i)^n Q'") {
    for (int n : {1, 2}) {
        HermitianPolynomial P = ball_model(n, 4);
        FindAdmissibleResult r = find_admissible(P, 64, 17);
        REQUIRE(r.found);
        LeviCoefficients L = levi_coefficients(P, r.v);
        MatrixLoop A = reduce_to_A(L, P.weight(), P.degree());
        Cplx twoi_n = std::pow(Cplx(0.0, 2.0), n);
        double worst = 0.0;
        for (int q = 0; q < 512; ++q) {
            Cplx zeta = std::polar(1.0, 2.0 * std::numbers::pi * q / 512);
            Cplx det = A.eval(zeta).determinant();
            Cplx want = twoi_n * L.Qprime.eval(zeta);
            worst = std::max(worst, std::abs(det - want) / std::abs(want));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("kernel of the linearization at |z|^4 has real dimension 8") {
    HermitianPolynomial P = ball_model(1, 4);
    LinearizedSystem lin = linearize(P, {Cplx(1.0)}, 32);
    CHECK(lin.kernel_dim == 8);
    CHECK(lin.sigma_gap >= 1e6);
    CHECK(static_cast<int>(lin.kernel_vectors.size()) == 8);
}

TEST_CASE("kernel directions solve the boundary equations to first order") {
    HermitianPolynomial P = ball_model(1, 4);
    DiscLift f0 = build_lift(P, {Cplx(1.0)});
    LinearizedSystem lin = linearize(P, {Cplx(1.0)}, 32);
    PerturbedHypersurface model = PerturbedHypersurface::validate(P, PerturbationPoly(1));
    Eigen::VectorXd x0 = lin.basis.project(f0);
    for (const auto& kv : lin.kernel_vectors) {
        double r1 = boundary_residual(model, lin.basis.to_lift(x0 + 1e-4 * kv));
        double r2 = boundary_residual(model, lin.basis.to_lift(x0 + 2e-4 * kv));
        CHECK(r1 < 1e-6);            // quadratic, not linear, in the step
        CHECK(r2 < 4.0 * r1 + 1e-9); // consistent with O(step^2)
    }
}

TEST_CASE("unconstrained conjugation kernel matches 2 ind Q") {
    HermitianPolynomial P = ball_model(1, 4);
    LeviCoefficients L = levi_coefficients(P, {Cplx(1.0)});
    MatrixLoop A = reduce_to_A(L, P.weight(), P.degree());
    int n = 1, d = 4, k0 = 2;
    CHECK(l3_kernel_dim(A, 6) == 2 * winding_number(L.detQ));
    CHECK(l3_kernel_dim(A, 6) <= 2 * n * (2 * k0 - d) + 2 * n);
}

TEST_CASE("newton solve converges on the unperturbed model") {
    HermitianPolynomial P = ball_model(1, 4);
    DiscLift f0 = build_lift(P, {Cplx(1.0)});
    LinearizedSystem lin = linearize(P, {Cplx(1.0)}, 32);
    PerturbedHypersurface model = PerturbedHypersurface::validate(P, PerturbationPoly(1));
    DiscLift f = newton_attach(model, f0, std::vector<double>(lin.kernel_dim, 0.0), lin);
    CHECK(boundary_residual(model, f) < 1e-9);
    CHECK(lift_distance(f, f0) < 1e-8);
}

TEST_CASE("newton solve attaches discs to a perturbed surface") {
    HermitianPolynomial P = ball_model(1, 4);
    PerturbedHypersurface r = PerturbedHypersurface::validate(P, allowed_theta(1e-3));
    DiscLift f0 = build_lift(P, {Cplx(1.0)});
    LinearizedSystem lin = linearize(P, {Cplx(1.0)}, 32);
    DiscLift f = newton_attach(r, f0, std::vector<double>(lin.kernel_dim, 0.0), lin);
    CHECK(boundary_residual(r, f) < 1e-9);
    CHECK(lift_distance(f, f0) > 1e-6); // the perturbation moves the disc
    CHECK(lift_distance(f, f0) < 0.1);
}

TEST_CASE("family solves annotate failures instead of throwing") {
    HermitianPolynomial P = ball_model(1, 4);
    PerturbedHypersurface r = PerturbedHypersurface::validate(P, allowed_theta(1e-3));
    DiscLift f0 = build_lift(P, {Cplx(1.0)});
    LinearizedSystem lin = linearize(P, {Cplx(1.0)}, 32);
    std::vector<std::vector<double>> grid = {std::vector<double>(lin.kernel_dim, 0.0),
                                             std::vector<double>(lin.kernel_dim, 0.01)};
    auto fam = disc_family(r, f0, lin, grid);
    REQUIRE(fam.size() == 2);
    for (const auto& e : fam) {
        CHECK(e.ok);
        CHECK(e.residual < 1e-9);
    }
}

TEST_CASE("linearization is identical with and without openmp") {
    HermitianPolynomial P = ball_model(1, 4);
    bool saved = par::enabled();
    par::enabled() = false;
    LinearizedSystem a = linearize(P, {Cplx(1.0)}, 24);
    par::enabled() = true;
    LinearizedSystem b = linearize(P, {Cplx(1.0)}, 24);
    par::enabled() = saved;
    CHECK(a.kernel_dim == b.kernel_dim);
    CHECK(a.rank == b.rank);
    CHECK(a.sigma_gap == b.sigma_gap);
}
