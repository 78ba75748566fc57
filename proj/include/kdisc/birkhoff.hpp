#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "kdisc/circlefns.hpp"

namespace kdisc {

// Matrix-valued loop on the unit circle with CircleFunction entries.
struct MatrixLoop {
    std::vector<std::vector<CircleFunction>> entries;

    MatrixLoop() = default;
    explicit MatrixLoop(int N) : entries(N, std::vector<CircleFunction>(N)) {}

    int size() const { return static_cast<int>(entries.size()); }
    Eigen::MatrixXcd eval(Cplx zeta) const;
    int max_entry_degree() const;

    static MatrixLoop identity(int N);
    // Entrywise trigonometric interpolation of a pointwise-defined loop.
    static MatrixLoop from_sampler(const std::function<Eigen::MatrixXcd(Cplx)>& F, int N,
                                   int truncation, int sample_count);

    // Determinant values at equispaced boundary points.
    std::vector<Cplx> det_samples(int count = kWindingSamples) const;
    // Throws NumericalError unless min |det| > 1e-8 max |det| on the circle.
    void require_invertible(int count = kWindingSamples) const;
};

struct Factorization {
    MatrixLoop Bminus;        // holomorphic outside the disc, normalized to I at infinity
    std::vector<int> indices; // sorted diagonal exponents
    MatrixLoop Bplus;         // holomorphic in the disc
    double residual = 0.0;    // sup norm of Bminus * diag(zeta^k) * Bplus - L
};

// -conj(G(zeta))^{-1} G(zeta), sampled and re-interpolated.
MatrixLoop symbol(const MatrixLoop& G, int truncation = kDefaultTruncation);

// Winding number of det L.
int maslov_index(const MatrixLoop& L);

// Recovers the multiset of partial indices from the kernel dimensions of the
// shifted Toeplitz problems phi -> (zeta^{-s} L phi) modes >= 0 over vector
// polynomials; the jump at s counts indices <= s.  Searches s in [-D, D + 1]
// and verifies the sum against the Maslov index.
std::vector<int> partial_indices(const MatrixLoop& L, int D);

// Best-effort Birkhoff factorization L = Bminus * diag(zeta^{kappa_j}) * Bplus
// with an explicit reconstruction residual.  Scalar loops are factored exactly
// by logarithm splitting.
Factorization factorize(const MatrixLoop& L, int D = 8);

} // namespace kdisc
