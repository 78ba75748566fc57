#include "kdisc/jets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace kdisc {

namespace {

std::vector<Cplx> derivatives_at_one(const CircleFunction& f, int order) {
    if (!f.holomorphic())
        throw ValidationError("jets are defined for holomorphic components only");
    std::vector<Cplx> out(order + 1, Cplx(0.0));
    int N = f.truncation();
    for (int l = 0; l <= order; ++l) {
        Cplx acc(0.0);
        for (int k = l; k <= N; ++k) {
            double fall = 1.0;
            for (int t = 0; t < l; ++t) fall *= (k - t);
            acc += fall * f.coeff(k);
        }
        out[l] = acc;
    }
    return out;
}

} // namespace

JetVector jet_of_components(const std::vector<CircleFunction>& comps, int order) {
    JetVector jet;
    jet.order = order;
    for (const auto& c : comps) jet.entries.push_back(derivatives_at_one(c, order));
    return jet;
}

JetVector jet_at_one(const DiscLift& f, int order) {
    std::vector<CircleFunction> comps;
    for (const auto& c : f.h) comps.push_back(c);
    comps.push_back(f.g);
    for (const auto& c : f.htilde) comps.push_back(c);
    comps.push_back(f.gtilde);
    return jet_of_components(comps, order);
}

JetBoundReport jet_bound(const HermitianPolynomial& P, const std::vector<Cplx>& v) {
    JetBoundReport rep;
    int n = P.n(), d = P.degree(), k0 = P.k0();
    rep.generic = 6 * n * d;
    rep.kernel_bound = 2 * (n + 1) * (k0 + 1) + 2 * n * k0 - 2 * d * n;
    if (P.weight().homogeneous()) rep.kernel_exact = 2 * (n + 1) * (k0 + 1) - d * n;

    std::vector<Cplx> vv = v;
    if (vv.empty()) {
        FindAdmissibleResult r = find_admissible(P, 64, 0);
        if (r.found) vv = r.v;
    }
    if (!vv.empty() && is_admissible(P, vv).admissible) {
        rep.have_admissible = true;
        rep.indQ = winding_number(levi_coefficients(P, vv).detQ);
        rep.refined = -2 * P.weight().sum() + 2 * rep.indQ + 2 * k0;
    }
    return rep;
}

JetInjectivity kernel_jet_injectivity(
    const std::vector<std::vector<CircleFunction>>& kernel_basis, int order) {
    JetInjectivity out;
    if (kernel_basis.empty()) {
        out.injective = true;
        out.gap = std::numeric_limits<double>::infinity();
        return out;
    }
    int K = static_cast<int>(kernel_basis.size());
    int ncomp = static_cast<int>(kernel_basis[0].size());
    int rows = 2 * ncomp * (order + 1);
    Eigen::MatrixXd Mat(rows, K);
    for (int j = 0; j < K; ++j) {
        JetVector jet = jet_of_components(kernel_basis[j], order);
        for (int c = 0; c < ncomp; ++c) {
            for (int l = 0; l <= order; ++l) {
                Mat(2 * (c * (order + 1) + l), j) = jet.entries[c][l].real();
                Mat(2 * (c * (order + 1) + l) + 1, j) = jet.entries[c][l].imag();
            }
        }
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Mat);
    const auto& sv = svd.singularValues();
    double top = sv(0);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * top) ++rank;
    out.rank = rank;
    out.injective = (rank == K);
    if (rank < sv.size() && rank > 0) {
        double dropped = sv(rank);
        out.gap = (dropped > 0.0) ? sv(rank - 1) / dropped : std::numeric_limits<double>::infinity();
        if (out.gap < 1e6)
            throw NumericalError("jet rank is ambiguous; increase the jet order or N_F");
    } else {
        out.gap = std::numeric_limits<double>::infinity();
    }
    return out;
}

} // namespace kdisc
