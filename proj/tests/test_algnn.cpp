#include <gtest/gtest.h>

#include "algstab/algnn.hpp"
#include "algstab/errors.hpp"
#include "algstab/signal_models.hpp"
#include "algstab/spectral.hpp"

using namespace algstab;

namespace {

AlgNN single_layer(const PolynomialFilter& p, int n) {
  AlgNNLayer layer{cyclic_shift(n), {{p}}, Nonlinearity::identity, {}};
  return AlgNN({layer}, 1);
}

Features random_features(int count, int n, std::uint64_t seed) {
  Features x;
  for (int g = 0; g < count; ++g) {
    x.push_back(random_matrix(n, 1, seed + static_cast<std::uint64_t>(g), true).col(0).real());
  }
  return x;
}

}  // namespace

TEST(Nonlinearity, OneLipschitzAndZeroAtZero) {
  for (auto eta : {Nonlinearity::relu, Nonlinearity::abs, Nonlinearity::tanh, Nonlinearity::identity}) {
    EXPECT_EQ(apply_nonlinearity(eta, 0.0), 0.0);
    for (double a : {-2.0, -0.3, 0.1, 1.7}) {
      for (double b : {-1.0, 0.4, 2.5}) {
        EXPECT_LE(std::abs(apply_nonlinearity(eta, a) - apply_nonlinearity(eta, b)), std::abs(a - b) + 1e-15);
      }
    }
  }
  EXPECT_EQ(nonlinearity_from_string("tanh"), Nonlinearity::tanh);
  EXPECT_THROW(nonlinearity_from_string("gelu"), ArgumentError);
  EXPECT_THROW(pooling_kind_from_string("max"), ArgumentError);
}

TEST(AlgNN, DemoNetworkShape) {
  const AlgNN net = demo_network(1);
  EXPECT_EQ(net.num_layers(), 3);
  EXPECT_EQ(net.feature_counts(), (std::vector<int>{1, 2, 2, 1}));
  EXPECT_EQ(net.input_dimension(), 16);
  EXPECT_EQ(net.pooling_matrix(0).rows(), 8);
  EXPECT_EQ(net.pooling_matrix(0).cols(), 16);
  // Spectral pooling has orthonormal rows.
  const RealMatrix p = net.pooling_matrix(0);
  EXPECT_LE(op_norm(p.cast<Complex>()), 1.0 + 1e-12);
  const Features y = forward(net, random_features(1, 16, 3));
  ASSERT_EQ(y.size(), 1u);
  EXPECT_EQ(y.front().size(), 4);
}

TEST(AlgNN, RejectsMalformedNetworks) {
  EXPECT_THROW(AlgNN({}, 1), ArgumentError);
  const auto p = PolynomialFilter::univariate({0.0, 1.0});
  AlgNNLayer ragged{cyclic_shift(4), {{p, p}, {p}}, Nonlinearity::relu, {}};
  EXPECT_THROW(AlgNN({ragged}, 2), ArgumentError);
  AlgNNLayer wrong_arity{cyclic_shift(4), {{random_filter(2, 1, 1)}}, Nonlinearity::relu, {}};
  EXPECT_THROW(AlgNN({wrong_arity}, 1), ArgumentError);
  AlgNNLayer last_spectral{cyclic_shift(4), {{p}}, Nonlinearity::relu, {PoolingKind::spectral, 2, false}};
  EXPECT_THROW(AlgNN({last_spectral}, 1), ArgumentError);
  AlgNNLayer bad_decimation{cyclic_shift(6), {{p}}, Nonlinearity::relu, {PoolingKind::decimation, 4, false}};
  EXPECT_THROW(AlgNN({bad_decimation}, 1), ArgumentError);
}

TEST(AlgNN, WrongInputShapeThrows) {
  const AlgNN net = single_layer(PolynomialFilter::univariate({0.0, 1.0}), 8);
  EXPECT_THROW(forward(net, random_features(2, 8, 1)), ArgumentError);
  EXPECT_THROW(forward(net, random_features(1, 7, 1)), ArgumentError);
}

TEST(AlgNN, SingleIdentityLayerIsTheFilter) {
  const auto p = random_filter(1, 3, 5);
  const AlgNN net = single_layer(p, 8);
  const Features x = random_features(1, 8, 2);
  const RealVector expected = (eval_operator(p, net.layer(0).shifts) * x[0].cast<Complex>()).real();
  EXPECT_LT((forward(net, x)[0] - expected).norm(), 1e-12);
}

TEST(AlgNN, DecimationPooling) {
  const auto p = PolynomialFilter::univariate({0.0, 1.0});
  AlgNNLayer l0{cyclic_shift(8), {{p}}, Nonlinearity::identity, {PoolingKind::decimation, 2, false}};
  AlgNNLayer l1{cyclic_shift(4), {{p}}, Nonlinearity::identity, {}};
  const AlgNN net({l0, l1}, 1);
  EXPECT_EQ(net.pooling_matrix(0).rows(), 4);
  EXPECT_DOUBLE_EQ(net.pooling_matrix(0)(1, 2), 1.0);
}

TEST(LayerCheck, PassesOnDemoNetwork) {
  const AlgNN net = demo_network(2);
  Features x = random_features(1, 16, 9);
  for (int l = 0; l < net.num_layers(); ++l) {
    const auto model = random_perturbation(net.layer(l).shifts, 0.05, 0.05, PerturbationMode::generic,
                                           static_cast<std::uint64_t>(l));
    const auto t = layer_stability_check(net, l, model, x);
    EXPECT_EQ(t.status, TrialStatus::pass) << "layer " << l << ": " << t.lhs << " vs " << t.rhs;
    x = layer_map(net, l, x, net.layer(l).shifts.shifts());
  }
}

TEST(NetworkCheck, ZeroPerturbationGivesZero) {
  const AlgNN net = demo_network(3);
  LayerPerturbations models;
  for (int l = 0; l < net.num_layers(); ++l) {
    models.push_back(PerturbationModel::zero(net.layer(l).shifts.dimension(), 1));
  }
  const auto r = network_stability_check(net, models, random_features(1, 16, 1));
  EXPECT_EQ(r.trial.status, TrialStatus::pass);
  EXPECT_NEAR(r.trial.lhs, 0.0, 1e-14);
  EXPECT_NEAR(r.trial.rhs, 0.0, 1e-14);
}

TEST(NetworkCheck, StatementFormDropsFeatureFactors) {
  const AlgNN net = demo_network(4);
  LayerPerturbations models;
  for (int l = 0; l < net.num_layers(); ++l) {
    models.push_back(random_perturbation(net.layer(l).shifts, 0.02, 0.02, PerturbationMode::generic,
                                         static_cast<std::uint64_t>(l) + 10));
  }
  const auto r = network_stability_check(net, models, random_features(1, 16, 2));
  EXPECT_EQ(r.trial.status, TrialStatus::pass);
  EXPECT_EQ(r.terms.size(), 3u);
  // With F = (1, 2, 2, 1) the full form carries extra factors >= 1.
  EXPECT_GE(r.trial.rhs, r.statement_rhs - 1e-12);
  EXPECT_THROW(network_stability_check(net, {models[0]}, random_features(1, 16, 2)), ArgumentError);
}

TEST(NetworkCheck, ComplexPerturbationIsRejected) {
  // Commuting-mode perturbations of the cyclic shift are complex, so the
  // perturbed filters cannot act on real features.
  const AlgNN net = single_layer(random_filter(1, 2, 1), 8);
  const auto model = random_perturbation(net.layer(0).shifts, 0.1, 0.0, PerturbationMode::commuting, 1);
  EXPECT_THROW(network_stability_check(net, {model}, random_features(1, 8, 1)), ArgumentError);
}
