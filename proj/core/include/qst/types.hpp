#pragma once

#include <complex>
#include <Eigen/Dense>

namespace qst {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

inline constexpr Complex I{0.0, 1.0};

/// Truncated Fock (or qubit) basis: dimension, mass, and the fixed
/// reference frequency used to build x and p once. The reference
/// frequency does not follow the drive.
struct BasisSpec {
    int dim;
    double mass;
    double omega_ref;
};

inline double hermiticity_defect(const Matrix& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-10) {
    return hermiticity_defect(m) <= tol;
}

}  // namespace qst
