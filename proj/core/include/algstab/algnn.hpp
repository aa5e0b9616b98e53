#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "algstab/linalg.hpp"
#include "algstab/perturbation.hpp"
#include "algstab/polynomials.hpp"
#include "algstab/shift_family.hpp"
#include "algstab/stability.hpp"

namespace algstab {

enum class Nonlinearity { relu, abs, tanh, identity };
enum class PoolingKind { identity, decimation, spectral };

std::string_view to_string(Nonlinearity eta);
Nonlinearity nonlinearity_from_string(std::string_view name);
std::string_view to_string(PoolingKind kind);
PoolingKind pooling_kind_from_string(std::string_view name);

/// Pointwise map; every option is 1-Lipschitz with eta(0) = 0.
double apply_nonlinearity(Nonlinearity eta, double v);

struct PoolingSpec {
  PoolingKind kind = PoolingKind::identity;
  /// Decimation factor, or number of retained spectral modes.
  int k = 1;
  /// Spectral pooling keeps the largest-|lambda| modes instead of the lowest.
  bool keep_largest = false;
};

struct AlgNNLayer {
  ShiftFamily shifts;
  /// filters[g][f] maps input feature g to output feature f.
  std::vector<std::vector<PolynomialFilter>> filters;
  Nonlinearity eta = Nonlinearity::relu;
  PoolingSpec pooling;
};

/// One real vector per feature.
using Features = std::vector<RealVector>;

/// Stack of layers x_l^f = P_l eta_l(sum_g p_l^{gf}(S_l) x_{l-1}^g). Pooling
/// matrices are fixed at construction from the unperturbed shifts.
class AlgNN {
 public:
  AlgNN(std::vector<AlgNNLayer> layers, int input_features);

  int num_layers() const { return static_cast<int>(layers_.size()); }
  const AlgNNLayer& layer(int l) const { return layers_.at(static_cast<std::size_t>(l)); }
  const std::vector<AlgNNLayer>& layers() const { return layers_; }
  /// F_0 .. F_L.
  const std::vector<int>& feature_counts() const { return features_; }
  const RealMatrix& pooling_matrix(int l) const { return pooling_.at(static_cast<std::size_t>(l)); }
  int input_dimension() const { return layers_.front().shifts.dimension(); }

 private:
  std::vector<AlgNNLayer> layers_;
  std::vector<int> features_;
  std::vector<RealMatrix> pooling_;
};

/// Forward pass on the unperturbed shifts.
Features forward(const AlgNN& net, const Features& x);

/// Forward pass with every filter re-realized on the given per-layer shift
/// matrices (same coefficients, same pooling).
Features forward_with_shifts(const AlgNN& net, const Features& x,
                             const std::vector<std::vector<Matrix>>& layer_shifts);

/// Output of a single layer l applied to x (its input features).
Features layer_map(const AlgNN& net, int l, const Features& x, std::span<const Matrix> shifts);

/// sqrt(sum_f ||x^f||^2).
double feature_norm(const Features& x);
/// sum_f ||x^f||.
double feature_sum_norm(const Features& x);

struct LayerConstants {
  double c = 0.0;        // Lipschitz constant of pooling o eta
  double b = 0.0;        // filter-bank norm bound
  double delta_l = 0.0;  // per-layer increment
  double delta = 0.0;    // commutation factor
  double l0 = 0.0;
  double l1 = 0.0;
  double sup_t = 0.0;
  double sup_t1 = 0.0;
  double remainder = 0.0;
  bool certified = true;
  std::string note;
};

/// Per-layer perturbation models, one entry per layer.
using LayerPerturbations = std::vector<PerturbationModel>;

LayerConstants layer_constants(const AlgNN& net, int l, const PerturbationModel& model,
                               const StabilityOptions& options = {});

/// ||Phi_l(x, S_l) - Phi_l(x, S~_l)|| against sqrt(F_l) C_l Delta_l sum_g ||x^g||.
StabilityTrial layer_stability_check(const AlgNN& net, int l, const PerturbationModel& model,
                                     const Features& x, const StabilityOptions& options = {});

/// The l-th summand of the network bound (multi-feature form, without the
/// sqrt(F_L) prefactor), with empty products equal to 1.
double network_bound_term(const AlgNN& net, const std::vector<LayerConstants>& constants, int l,
                          double input_norm);

struct NetworkStabilityTrial {
  StabilityTrial trial;
  double statement_rhs = 0.0;  // same sum without feature-count factors
  std::vector<LayerConstants> constants;
  std::vector<double> terms;  // sqrt(F_L) * network_bound_term per layer
};

/// Full-network check: lhs = ||Phi(x, S) - Phi(x, S~)||.
NetworkStabilityTrial network_stability_check(const AlgNN& net,
                                              const LayerPerturbations& perturbations,
                                              const Features& x,
                                              const StabilityOptions& options = {});

/// Three cyclic layers 16 -> 8 -> 4 with spectral pooling, F = (1, 2, 2, 1),
/// relu, random filters rescaled so every layer's L0 is lipschitz_target.
AlgNN demo_network(std::uint64_t seed, double lipschitz_target = 1.0);

}  // namespace algstab
