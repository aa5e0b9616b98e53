#include "algstab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace algstab {

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  // Top eigenvalue of the Gram matrix: the largest singular value keeps full
  // relative accuracy this way and it is several times cheaper than an SVD.
  const Matrix gram = a.cols() <= a.rows() ? Matrix(a.adjoint() * a) : Matrix(a * a.adjoint());
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

double normality_defect(const Matrix& a) {
  const Matrix adj = a.adjoint();
  return op_norm(a * adj - adj * a);
}

double relative_commutator(const Matrix& a, const Matrix& b) {
  const double na = op_norm(a);
  const double nb = op_norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return op_norm(a * b - b * a) / (na * nb);
}

Complex frobenius_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

PseudoInverse pseudo_inverse(const Matrix& a, double rel_tol) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  PseudoInverse out;
  out.matrix = Matrix::Zero(a.cols(), a.rows());
  if (sv.size() == 0) return out;
  const double cutoff = rel_tol * sv(0);
  out.smallest_singular_value = sv(sv.size() - 1);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff && sv(i) > 0.0) {
      inv(i) = 1.0 / sv(i);
    } else {
      out.singular = true;
    }
  }
  out.matrix = svd.matrixV() * inv.cast<Complex>().asDiagonal() *
               svd.matrixU().adjoint();
  return out;
}

NormalEigen normal_eigen(const Matrix& a) {
  Eigen::ComplexSchur<Matrix> schur(a);
  NormalEigen out;
  out.values = schur.matrixT().diagonal();
  out.vectors = schur.matrixU();
  return out;
}

std::vector<Matrix> matrix_powers(const Matrix& s, int max_power) {
  std::vector<Matrix> powers;
  powers.reserve(static_cast<std::size_t>(std::max(max_power, 0)) + 1);
  powers.push_back(Matrix::Identity(s.rows(), s.cols()));
  for (int k = 1; k <= max_power; ++k) powers.push_back(powers.back() * s);
  return powers;
}

bool is_effectively_real(const Matrix& a, double tol) {
  if (a.size() == 0) return true;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return a.imag().cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix random_matrix(int rows, int cols, std::uint64_t seed, bool real_only) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix out(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) {
      const double re = gauss(rng);
      const double im = real_only ? 0.0 : gauss(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

}  // namespace algstab
