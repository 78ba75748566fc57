#pragma once

#include <vector>

#include "kdisc/modeldisc.hpp"
#include "kdisc/rhsolver.hpp"

namespace kdisc {

// Derivatives of all lift components at the boundary point zeta = 1.
struct JetVector {
    int order = 0;
    // entries[c][l] = d^l f_c (1), components ordered (h, g, htilde, gtilde)
    std::vector<std::vector<Cplx>> entries;
};

struct JetBoundReport {
    int generic = 0;       // 6 n d
    int refined = -1;      // -2 sum m_i + 2 ind Q + 2 k0 (needs an admissible v)
    int indQ = -1;         // winding number of Q^v
    int kernel_bound = 0;  // 2(n+1)(k0+1) + 2 n k0 - 2 d n
    int kernel_exact = -1; // 2(n+1)(k0+1) - d n in the homogeneous case
    bool have_admissible = false;
};

struct JetInjectivity {
    int rank = 0;
    bool injective = false;
    double gap = 0.0; // singular-value gap at the rank decision
};

JetVector jet_at_one(const DiscLift& f, int order);
JetVector jet_of_components(const std::vector<CircleFunction>& comps, int order);

// Jet-order bounds for the model polynomial; uses v for ind Q when supplied,
// otherwise searches for an admissible vector.
JetBoundReport jet_bound(const HermitianPolynomial& P, const std::vector<Cplx>& v = {});

// Rank of the jet map restricted to the kernel basis; injective iff the rank
// equals the kernel dimension with a clear singular-value gap.
JetInjectivity kernel_jet_injectivity(const std::vector<std::vector<CircleFunction>>& kernel_basis,
                                      int order);

} // namespace kdisc
