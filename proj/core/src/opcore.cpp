#include "qst/opcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qst {

FockOperators fock_operators(const BasisSpec& basis) {
    if (basis.dim < 2) throw std::invalid_argument("fock_operators: dim must be >= 2");
    if (basis.mass <= 0.0 || basis.omega_ref <= 0.0)
        throw std::invalid_argument("fock_operators: mass and omega_ref must be positive");

    const int n = basis.dim;
    Matrix a = Matrix::Zero(n, n);
    for (int k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(double(k));
    Matrix a_dag = a.adjoint();

    const double mw = basis.mass * basis.omega_ref;
    Matrix x = (a + a_dag) / std::sqrt(2.0 * mw);
    Matrix p = I * std::sqrt(mw / 2.0) * (a_dag - a);
    return {std::move(x), std::move(p), std::move(a), std::move(a_dag)};
}

HermitianEig hermitian_eig(const Matrix& m, double herm_tol) {
    if (!is_hermitian(m, herm_tol))
        throw std::invalid_argument("hermitian_eig: matrix is not Hermitian");
    // Already-diagonal input gets exact basis vectors. The solver's O(eps)
    // eigenvector noise matters downstream, where entries are scaled by
    // Boltzmann factors as large as e^{beta E / 2}.
    const Eigen::Index n = m.rows();
    const double diag_scale = m.diagonal().norm();
    double offdiag = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if (i != j) offdiag = std::max(offdiag, std::abs(m(i, j)));
    if (offdiag <= 1e-15 * std::max(diag_scale, 1e-300)) {
        // keep the input ordering (usually the ladder-level order, which
        // truncation-aware consumers rely on); values may be unsorted
        HermitianEig out;
        out.values = m.diagonal().real();
        out.vectors = Matrix::Identity(n, n);
        out.diagonal_basis = true;
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eig: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix HermitianEig::apply(const std::function<double(double)>& f) const {
    Eigen::VectorXd fw(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        fw(i) = f(values(i));
        if (!std::isfinite(fw(i)))
            throw std::domain_error("hermitian_function: f not finite on an eigenvalue");
    }
    if (diagonal_basis) return Matrix(fw.cast<Complex>().asDiagonal());
    return vectors * fw.asDiagonal() * vectors.adjoint();
}

Matrix HermitianEig::exp(double c) const {
    return apply([c](double w) { return std::exp(c * w); });
}

Matrix HermitianEig::to_eigenbasis(const Matrix& m) const {
    if (diagonal_basis) return m;
    return vectors.adjoint() * m * vectors;
}

Matrix HermitianEig::from_eigenbasis(const Matrix& m) const {
    if (diagonal_basis) return m;
    return vectors * m * vectors.adjoint();
}

Matrix hermitian_function(const Matrix& m, const std::function<double(double)>& f) {
    return hermitian_eig(m).apply(f);
}

Matrix apply_gksl_dissipator(const Matrix& K, const Matrix& A, double rate,
                             const Matrix& rho) {
    const auto n = rho.rows();
    if (K.rows() != n || A.rows() != n)
        throw std::invalid_argument("apply_gksl_dissipator: dimension mismatch");
    Matrix AdA = A.adjoint() * A;
    Matrix out = -I * commutator(K, rho);
    out.noalias() += A * rho * A.adjoint();
    out -= 0.5 * anticommutator(AdA, rho);
    return 0.5 * rate * out;
}

Matrix dexp_factor(const HermitianEig& h, const Matrix& hdot, double c) {
    const auto n = h.values.size();
    Matrix b = c * h.to_eigenbasis(hdot);
    // phi grows like e^d for d > 0. Entries of hdot that are pure rounding
    // noise in the eigenbasis must not meet that amplification (for banded
    // drive operators the true entries sit near the diagonal, where level
    // differences are small), so they are zeroed first.
    const double floor = 1e-14 * b.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(b(i, j)) <= floor) {
                b(i, j) = 0.0;
                continue;
            }
            const double d = c * (h.values(i) - h.values(j));
            if (d > 700.0)
                throw std::runtime_error(
                    "dexp_factor: level-difference exponent overflows; reduce the "
                    "counting field or the truncation dimension");
            const double phi = (std::abs(d) < 1e-8) ? 1.0 + 0.5 * d : std::expm1(d) / d;
            b(i, j) *= phi;
        }
    }
    return h.from_eigenbasis(b);
}

}  // namespace qst
