#include <gtest/gtest.h>

#include "algstab/errors.hpp"
#include "algstab/serialization.hpp"
#include "algstab/signal_models.hpp"
#include "algstab/spectral.hpp"

using namespace algstab;

TEST(Serialization, MatrixRoundTrip) {
  Matrix a(2, 3);
  a << Complex(1, 2), 3, Complex(0, -1), 4, 5, Complex(6, 7);
  EXPECT_EQ((matrix_from_json(matrix_to_json(a)) - a).norm(), 0.0);
  EXPECT_EQ(matrix_from_json(Json::parse("[[1, 2], [3, 4]]"))(1, 0), Complex(3, 0));
  EXPECT_THROW(matrix_from_json(Json::parse("[[1, 2], [3]]")), ConfigError);
}

TEST(Serialization, FilterRoundTrip) {
  const auto p = random_filter(2, 3, 4);
  EXPECT_EQ(filter_from_json(filter_to_json(p)).coefficients(), p.coefficients());
  const auto taps = filter_from_json(Json::parse(R"({"taps": [1, 0, 2]})"));
  EXPECT_EQ(taps.degree(), 2);
  EXPECT_THROW(filter_from_json(Json::parse(R"({"m": 2, "terms": [{"k": [1], "h": 1}]})")), ConfigError);
}

TEST(Serialization, FamilyAndSpecs) {
  const auto g = grid2d_shifts(2, 3, true);
  const auto back = family_from_json(family_to_json(g));
  EXPECT_EQ(back.tag(), ModelTag::grid2d);
  EXPECT_EQ((back.shift(1) - g.shift(1)).norm(), 0.0);
  EXPECT_EQ(family_from_spec(Json::parse(R"({"kind": "cyclic", "n": 5})")).dimension(), 5);
  EXPECT_EQ(family_from_spec(Json::parse(R"({"kind": "abelian_group", "orders": [2, 3]})")).num_generators(), 2);
  const auto graph = family_from_spec(Json::parse(
      R"({"kind": "graph", "edges": [[0, 1], [1, 2, 0.5]], "n": 4, "variant": "laplacian"})"));
  EXPECT_EQ(graph.dimension(), 4);
  EXPECT_THROW(family_from_spec(Json::parse(R"({"kind": "torus"})")), ConfigError);
}

TEST(Serialization, PerturbationRoundTrip) {
  const auto s = cyclic_shift(4);
  const auto m = random_perturbation(s, 0.1, 0.2, PerturbationMode::generic, 3);
  const auto back = perturbation_from_json(perturbation_to_json(m));
  EXPECT_EQ((back.component(0, 1) - m.component(0, 1)).norm(), 0.0);
  ASSERT_TRUE(back.provenance().has_value());
  EXPECT_EQ(back.provenance()->seed, 3u);
}

TEST(Serialization, NetworkRoundTrip) {
  const AlgNN net = demo_network(5);
  const AlgNN back = network_from_json(network_to_json(net));
  EXPECT_EQ(back.feature_counts(), net.feature_counts());
  EXPECT_LT((back.pooling_matrix(1) - net.pooling_matrix(1)).norm(), 1e-12);
  Features x{RealVector::LinSpaced(16, -1.0, 1.0)};
  EXPECT_LT((forward(back, x)[0] - forward(net, x)[0]).norm(), 1e-12);
  const Features f = features_from_json(features_to_json(x));
  EXPECT_EQ((f[0] - x[0]).norm(), 0.0);
}

TEST(Serialization, DecompositionHasModelRef) {
  const Json j = decomposition_to_json(decompose(cyclic_shift(4)));
  EXPECT_TRUE(j.contains("model_ref"));
  EXPECT_EQ(j.at("lambda").size(), 4u);
}
