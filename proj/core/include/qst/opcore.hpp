#pragma once

#include <functional>

#include "qst/types.hpp"

namespace qst {

/// Canonical operators in the truncated Fock basis at the reference
/// frequency. a lowers: a|n> = sqrt(n)|n-1>.
struct FockOperators {
    Matrix x, p, a, a_dag;
};

FockOperators fock_operators(const BasisSpec& basis);

/// Cached spectral decomposition of a Hermitian matrix, M = U diag(w) U^dag.
/// Used wherever several functions of the same matrix are needed.
struct HermitianEig {
    Eigen::VectorXd values;
    Matrix vectors;
    bool diagonal_basis = false;   // vectors is the identity; skip rotations

    /// U f(w) U^dag
    Matrix apply(const std::function<double(double)>& f) const;

    /// exp(c*M) from the cached decomposition.
    Matrix exp(double c) const;

    /// Transform into / out of the eigenbasis.
    Matrix to_eigenbasis(const Matrix& m) const;    // U^dag m U
    Matrix from_eigenbasis(const Matrix& m) const;  // U m U^dag
};

HermitianEig hermitian_eig(const Matrix& m, double herm_tol = 1e-10);

/// U f(w) U^dag from the spectral decomposition of Hermitian m. Rejects
/// non-Hermitian input and f values that are not finite on the spectrum.
Matrix hermitian_function(const Matrix& m, const std::function<double(double)>& f);

inline Matrix commutator(const Matrix& a, const Matrix& b) {
    return a * b - b * a;
}

inline Matrix anticommutator(const Matrix& a, const Matrix& b) {
    return a * b + b * a;
}

/// Single GKSL term (rate/2) (-i[K,rho] + A rho A^dag - {A^dag A, rho}/2).
Matrix apply_gksl_dissipator(const Matrix& K, const Matrix& A, double rate,
                             const Matrix& rho);

/// X = (d/dt e^{cH}) e^{-cH} for H with time derivative Hdot, via divided
/// differences in the eigenbasis of H: X_ij = c Hdot_ij phi(c (w_i - w_j))
/// with phi(d) = (e^d - 1)/d.
Matrix dexp_factor(const HermitianEig& h, const Matrix& hdot, double c);

}  // namespace qst
