#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "algstab/linalg.hpp"
#include "algstab/shift_family.hpp"

namespace algstab {

/// Exponents (k_1, ..., k_m) of a monomial t_1^{k_1} ... t_m^{k_m}.
using MultiIndex = std::vector<int>;

/// An algebra element written as a finite real coefficient table over
/// multi-indices. Zero coefficients are dropped, so an empty table is the
/// explicit zero filter.
class PolynomialFilter {
 public:
  explicit PolynomialFilter(int num_generators,
                            std::map<MultiIndex, double> coefficients = {});

  /// h_0 + h_1 t + ... + h_K t^K.
  static PolynomialFilter univariate(const std::vector<double>& taps);
  static PolynomialFilter zero(int num_generators) { return PolynomialFilter(num_generators); }
  /// The generator t_i itself (0-based index).
  static PolynomialFilter generator(int num_generators, int i);

  int num_generators() const { return num_generators_; }
  const std::map<MultiIndex, double>& coefficients() const { return coefficients_; }
  double coefficient(const MultiIndex& k) const;
  /// Maximum total degree; 0 for constants and for the zero filter.
  int degree() const;
  /// Maximum exponent of generator i over the support.
  int degree_in(int i) const;
  bool is_zero() const { return coefficients_.empty(); }

  PolynomialFilter operator+(const PolynomialFilter& other) const;
  PolynomialFilter operator*(const PolynomialFilter& other) const;
  PolynomialFilter scaled(double factor) const;

 private:
  int num_generators_;
  std::map<MultiIndex, double> coefficients_;
};

/// p(lambda) = sum_k h_k lambda_1^{k_1} ... lambda_m^{k_m}.
Complex eval_scalar(const PolynomialFilter& p, std::span<const Complex> lambda);

/// (dp/dlambda_1, ..., dp/dlambda_m) at lambda.
std::vector<Complex> scalar_gradient(const PolynomialFilter& p, std::span<const Complex> lambda);

/// Realizes p on a commuting family. Throws ModelError when the family's
/// commutator defect exceeds kCommutatorTolerance.
Matrix eval_operator(const PolynomialFilter& p, const ShiftFamily& shifts);

/// Realizes p with monomials ordered S_1^{k_1} S_2^{k_2} ... S_m^{k_m}.
/// No commutativity check: this is the realization used for perturbed
/// families, which need not commute.
Matrix eval_ordered(const PolynomialFilter& p, std::span<const Matrix> shifts);

struct LipschitzEstimate {
  double l0 = 0.0;
  double l1 = 0.0;
  double domain_radius = 0.0;
  int grid_resolution = 0;
};

/// Estimates L0 = sup ||grad p|| and L1 = max_i sup |lambda_i dp/dlambda_i|
/// over the polydisk |lambda_i| <= domain_radius.
///
/// The polydisk is swept by rays r * v, r in [0, domain_radius], for a fixed
/// set of directions v (grid_resolution angles per axis; for m > 1 also a
/// few modulus ratios between axes). Along each ray the squared quantities
/// are real polynomials in r and are maximized exactly via their critical
/// points, so the estimate is a lower bound of the true sup that is
/// monotone in domain_radius.
LipschitzEstimate estimate_lipschitz(const PolynomialFilter& p, double domain_radius,
                                     int grid_resolution = 64);

/// Random coefficients in [-1, 1] on every multi-index of total degree
/// <= degree.
PolynomialFilter random_filter(int num_generators, int degree, std::uint64_t seed);

}  // namespace algstab
