#include "algstab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "algstab/errors.hpp"

namespace algstab {

namespace {

double rounded(double v) { return std::round(v * 1e9) / 1e9; }

SpectralDecomposition canonical(const Matrix& values, const Matrix& vectors,
                                std::string model_ref) {
  const auto n = values.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double ra = rounded(values(a, j).real());
      const double rb = rounded(values(b, j).real());
      if (ra != rb) return ra < rb;
      const double ia = rounded(values(a, j).imag());
      const double ib = rounded(values(b, j).imag());
      if (ia != ib) return ia < ib;
    }
    return false;
  });
  SpectralDecomposition out;
  out.eigenvalues.resize(n, values.cols());
  out.eigenvectors.resize(vectors.rows(), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues.row(i) = values.row(order[static_cast<std::size_t>(i)]);
    out.eigenvectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
  }
  out.model_ref = std::move(model_ref);
  return out;
}

std::string describe(const ShiftFamily& shifts) {
  return std::string(to_string(shifts.tag())) + ":n=" + std::to_string(shifts.dimension()) +
         ":m=" + std::to_string(shifts.num_generators());
}

}  // namespace

std::vector<Complex> SpectralDecomposition::joint_eigenvalue(int i) const {
  std::vector<Complex> out(static_cast<std::size_t>(eigenvalues.cols()));
  for (Eigen::Index j = 0; j < eigenvalues.cols(); ++j) out[static_cast<std::size_t>(j)] = eigenvalues(i, j);
  return out;
}

SpectralDecomposition decompose(const ShiftFamily& shifts, std::uint64_t seed) {
  if (!shifts.is_normal()) {
    throw SpectralError("shift family is not normal (defect " +
                        std::to_string(shifts.normality_defect()) + ")");
  }
  if (!shifts.is_commuting()) throw SpectralError("shift family does not commute");
  const int n = shifts.dimension();
  const int m = shifts.num_generators();
  if (m == 1) {
    const NormalEigen eig = normal_eigen(shifts.shift(0));
    return canonical(eig.values, eig.vectors, describe(shifts));
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.5, 1.5);
  for (int attempt = 0; attempt < 5; ++attempt) {
    Matrix combo = Matrix::Zero(n, n);
    for (int j = 0; j < m; ++j) combo += coef(rng) * shifts.shift(j);
    const Matrix u = normal_eigen(combo).vectors;
    Matrix values(n, m);
    bool ok = true;
    for (int j = 0; j < m && ok; ++j) {
      const Matrix& s = shifts.shift(j);
      const Matrix su = s * u;
      for (int i = 0; i < n; ++i) values(i, j) = u.col(i).dot(su.col(i));
      const double residual = op_norm(su - u * values.col(j).asDiagonal());
      ok = residual <= 1e-8 * std::max(1.0, op_norm(s));
    }
    if (ok) return canonical(values, u, describe(shifts));
  }
  throw SpectralError("simultaneous diagonalization failed after 5 attempts");
}

Vector fourier(const SpectralDecomposition& decomp, const Vector& x) {
  if (x.size() != decomp.dimension()) throw ArgumentError("signal length does not match decomposition");
  return decomp.eigenvectors.adjoint() * x;
}

Vector inverse_fourier(const SpectralDecomposition& decomp, const Vector& x_hat) {
  if (x_hat.size() != decomp.dimension()) throw ArgumentError("coefficient length does not match decomposition");
  return decomp.eigenvectors * x_hat;
}

Vector spectral_response(const SpectralDecomposition& decomp, const PolynomialFilter& p) {
  if (p.num_generators() != decomp.num_generators()) {
    throw ArgumentError("filter arity does not match the decomposition");
  }
  Vector out(decomp.dimension());
  for (int i = 0; i < decomp.dimension(); ++i) out(i) = eval_scalar(p, decomp.joint_eigenvalue(i));
  return out;
}

Vector spectral_apply(const SpectralDecomposition& decomp, const PolynomialFilter& p,
                      const Vector& x) {
  const Vector response = spectral_response(decomp, p);
  return inverse_fourier(decomp, response.cwiseProduct(fourier(decomp, x)));
}

}  // namespace algstab
