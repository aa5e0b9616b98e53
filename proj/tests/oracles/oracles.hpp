#pragma once

// Reference computations used by the tests. Each one is written from the
// mathematical definition with plain loops and shares no code with the
// library beyond the Eigen matrix types.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Unitary DFT matrix whose column k is e^{2 pi i j k / n} / sqrt(n).
inline Matrix dft_columns(int n) {
  Matrix f(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      f(j, k) = std::polar(1.0 / std::sqrt(n), 2.0 * std::numbers::pi * j * k / n);
    }
  }
  return f;
}

/// y_j = sum_k h_k x_{(j - k) mod n}.
inline Vector circular_convolution(const std::vector<double>& taps, const Vector& x) {
  const int n = static_cast<int>(x.size());
  Vector y = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < taps.size(); ++k) {
      const int idx = ((j - static_cast<int>(k)) % n + n) % n;
      y(j) += taps[k] * x(idx);
    }
  }
  return y;
}

/// Naive matrix product with explicit triple loop.
inline Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      for (Eigen::Index j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

inline Matrix power(const Matrix& s, int k) {
  Matrix out = Matrix::Identity(s.rows(), s.cols());
  for (int i = 0; i < k; ++i) out = multiply(out, s);
  return out;
}

/// sum_k h_k S_1^{k_1} ... S_m^{k_m}, products formed by repeated naive
/// multiplication.
inline Matrix poly_eval(const std::map<std::vector<int>, double>& coeffs,
                        const std::vector<Matrix>& shifts) {
  const auto n = shifts.front().rows();
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [k, h] : coeffs) {
    Matrix term = Matrix::Identity(n, n);
    for (std::size_t i = 0; i < k.size(); ++i) term = multiply(term, power(shifts[i], k[i]));
    out += h * term;
  }
  return out;
}

/// Central difference [p(S + eps xi e_i) - p(S - eps xi e_i)] / (2 eps).
inline Matrix central_difference(const std::map<std::vector<int>, double>& coeffs,
                                 const std::vector<Matrix>& shifts, int i, const Matrix& xi,
                                 double eps) {
  auto plus = shifts;
  auto minus = shifts;
  plus[static_cast<std::size_t>(i)] += eps * xi;
  minus[static_cast<std::size_t>(i)] -= eps * xi;
  return (poly_eval(coeffs, plus) - poly_eval(coeffs, minus)) / (2.0 * eps);
}

/// Kronecker product a (x) b.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Cyclic permutation with (Cx)_j = x_{j-1}.
inline Matrix cyclic(int n) {
  Matrix c = Matrix::Zero(n, n);
  for (int j = 0; j < n; ++j) c(j, (j + n - 1) % n) = 1.0;
  return c;
}

/// p'(z) for univariate taps.
inline Complex derivative(const std::vector<double>& taps, Complex z) {
  Complex out = 0.0;
  for (std::size_t k = 1; k < taps.size(); ++k) {
    out += static_cast<double>(k) * taps[k] * std::pow(z, static_cast<int>(k - 1));
  }
  return out;
}

inline Complex evaluate(const std::vector<double>& taps, Complex z) {
  Complex out = 0.0;
  for (std::size_t k = 0; k < taps.size(); ++k) out += taps[k] * std::pow(z, static_cast<int>(k));
  return out;
}

/// zeta_pq = lambda_q sum_k h_k sum_{j<k} lambda_p^j lambda_q^{k-1-j}: the
/// action of xi -> D{xi S} on E_pq when S is diagonal.
inline Complex zeta(const std::vector<double>& taps, Complex lp, Complex lq) {
  Complex sum = 0.0;
  for (std::size_t k = 1; k < taps.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      sum += taps[k] * std::pow(lp, static_cast<int>(j)) * std::pow(lq, static_cast<int>(k - 1 - j));
    }
  }
  return lq * sum;
}

/// Brute-force sup over a polar grid of the closed disk of radius r.
inline double disk_sup(const std::vector<double>& taps, double r, int angles, int radii,
                       bool times_lambda) {
  double best = 0.0;
  for (int a = 0; a < angles; ++a) {
    for (int k = 0; k <= radii; ++k) {
      const Complex z = std::polar(r * k / radii, 2.0 * std::numbers::pi * a / angles);
      const Complex v = times_lambda ? z * derivative(taps, z) : derivative(taps, z);
      best = std::max(best, std::abs(v));
    }
  }
  return best;
}

/// Haar-like random unitary from the QR factor of a complex Gaussian matrix.
inline Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Matrix random_gaussian(int rows, int cols, std::mt19937_64& rng, bool real_only) {
  std::normal_distribution<double> g;
  Matrix z(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) z(i, j) = Complex(g(rng), real_only ? 0.0 : g(rng));
  }
  return z;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Largest singular value.
inline double op_norm(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace oracle
