#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace algstab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Relative commutator tolerance for accepting a family as commuting.
inline constexpr double kCommutatorTolerance = 1e-10;
/// Normality tolerance, relative to max(1, ||S||^2).
inline constexpr double kNormalityTolerance = 1e-10;

/// Operator 2-norm (largest singular value).
double op_norm(const Matrix& a);

/// ||A A* - A* A||, in the operator 2-norm.
double normality_defect(const Matrix& a);

/// ||AB - BA|| / (||A|| ||B||); zero when either factor vanishes.
double relative_commutator(const Matrix& a, const Matrix& b);

/// Frobenius inner product <A, B> = tr(A* B).
Complex frobenius_inner(const Matrix& a, const Matrix& b);

struct PseudoInverse {
  Matrix matrix;
  bool singular = false;
  double smallest_singular_value = 0.0;
};

/// Moore-Penrose pseudoinverse; singular values below rel_tol * sigma_max
/// are treated as zero and flag the input singular.
PseudoInverse pseudo_inverse(const Matrix& a, double rel_tol = 1e-12);

/// Eigen-decomposition of a normal matrix through its complex Schur form.
/// For normal input the Schur factor is unitary and the triangular factor is
/// diagonal, so repeated eigenvalues still get an orthonormal basis.
struct NormalEigen {
  Vector values;
  Matrix vectors;
};
NormalEigen normal_eigen(const Matrix& a);

/// Powers S^0 .. S^max_power.
std::vector<Matrix> matrix_powers(const Matrix& s, int max_power);

/// True when every entry has |imag| <= tol * max(1, max |entry|).
bool is_effectively_real(const Matrix& a, double tol = 1e-12);

/// Deterministic complex Gaussian matrix from a seed (real part only when
/// real_only is set).
Matrix random_matrix(int rows, int cols, std::uint64_t seed, bool real_only);

}  // namespace algstab
