#pragma once

#include <complex>
#include <vector>

#include "qcx/common.hpp"

namespace qcx {

// Dense row-major n*n storage; callers keep entries symmetric (or Hermitian).
struct EigResult {
    std::vector<double> values;          // ascending
    std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]
};

// Cyclic Jacobi sweeps; converges when the off-diagonal Frobenius norm drops
// below 1e-12 * ||m||_F, at most 30 sweeps, otherwise NumericError with the
// residual in the message.
EigResult eig_symmetric(const std::vector<double>& m, int n);

// Hermitian eigenvalues through the 2n x 2n real embedding [[Re,-Im],[Im,Re]];
// each eigenvalue appears twice and is returned once. NumericError when the
// duplicates cannot be paired.
std::vector<double> eig_hermitian(const std::vector<std::complex<double>>& m, int n);

struct Inertia {
    int neg = 0;
    int zero = 0;
    int pos = 0;
};

// Classification bands: lambda < -tol*scale negative, |lambda| <= tol*scale zero.
Inertia inertia(const std::vector<double>& eigenvalues, double scale, double tol = 1e-7);

// Same with scale = max(1, max |lambda|).
Inertia inertia_auto(const std::vector<double>& eigenvalues, double tol = 1e-7);

double frobenius_norm(const std::vector<double>& m);

}  // namespace qcx
