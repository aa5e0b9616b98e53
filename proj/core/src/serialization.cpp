#include "algstab/serialization.hpp"

#include <fstream>

#include "algstab/errors.hpp"
#include "algstab/signal_models.hpp"

namespace algstab {

namespace {

Complex complex_from_json(const Json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError("expected a number or an [re, im] pair");
}

Json complex_to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RealMatrix real_matrix_from_json(const Json& j) {
  const Matrix m = matrix_from_json(j);
  if (!is_effectively_real(m, 0.0)) throw ConfigError("expected a real matrix");
  return m.real();
}

}  // namespace

Json matrix_to_json(const Matrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("matrix must be a non-empty list of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError("matrix rows must have equal length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) out(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return out;
}

Json filter_to_json(const PolynomialFilter& p) {
  Json terms = Json::array();
  for (const auto& [k, h] : p.coefficients()) terms.push_back({{"k", k}, {"h", h}});
  return {{"m", p.num_generators()}, {"terms", terms}};
}

PolynomialFilter filter_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("filter must be an object");
  if (j.contains("taps")) return PolynomialFilter::univariate(j.at("taps").get<std::vector<double>>());
  const int m = j.at("m").get<int>();
  std::map<MultiIndex, double> c;
  for (const auto& t : j.at("terms")) c[t.at("k").get<MultiIndex>()] += t.at("h").get<double>();
  try {
    return PolynomialFilter(m, std::move(c));
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("invalid filter: ") + e.what());
  }
}

Json family_to_json(const ShiftFamily& s) {
  Json shifts = Json::array();
  for (const auto& m : s.shifts()) shifts.push_back(matrix_to_json(m));
  return {{"model", std::string(to_string(s.tag()))}, {"n", s.dimension()}, {"shifts", shifts}};
}

ShiftFamily family_from_json(const Json& j) {
  std::vector<Matrix> shifts;
  for (const auto& m : j.at("shifts")) shifts.push_back(matrix_from_json(m));
  const ModelTag tag = model_tag_from_string(j.value("model", std::string("custom")));
  ShiftFamily out(tag, std::move(shifts));
  if (j.contains("n") && j.at("n").get<int>() != out.dimension()) {
    throw ConfigError("family dimension does not match its declared n");
  }
  return out;
}

ShiftFamily family_from_spec(const Json& spec, const std::filesystem::path& base_dir) {
  if (!spec.is_object()) throw ConfigError("model must be an object");
  if (spec.contains("shifts")) return family_from_json(spec);
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "cyclic") return cyclic_shift(spec.at("n").get<int>());
  if (kind == "abelian_group") return abelian_group_shifts(spec.at("orders").get<std::vector<int>>());
  if (kind == "grid2d") {
    return grid2d_shifts(spec.at("rows").get<int>(), spec.at("cols").get<int>(),
                         spec.value("periodic", true));
  }
  if (kind == "graphon") {
    return graphon_shift(named_graphon(spec.at("kernel").get<std::string>()), spec.at("n").get<int>());
  }
  if (kind == "file") {
    const Json inner = read_json_file(resolve(base_dir, spec.at("path").get<std::string>()));
    return family_from_json(inner);
  }
  if (kind == "graph") {
    const int n = spec.value("n", 0);
    RealMatrix a;
    if (spec.contains("adjacency")) {
      a = real_matrix_from_json(spec.at("adjacency"));
    } else if (spec.contains("edges")) {
      std::vector<std::tuple<int, int, double>> edges;
      int max_index = -1;
      for (const auto& e : spec.at("edges")) {
        const int u = e.at(0).get<int>();
        const int v = e.at(1).get<int>();
        edges.emplace_back(u, v, e.size() > 2 ? e.at(2).get<double>() : 1.0);
        max_index = std::max({max_index, u, v});
      }
      a = adjacency_from_edges(n > 0 ? n : max_index + 1, edges);
    } else if (spec.contains("edges_file")) {
      a = load_edge_list(resolve(base_dir, spec.at("edges_file").get<std::string>()), n);
    } else if (spec.contains("random")) {
      const Json& r = spec.at("random");
      a = random_graph(n > 0 ? n : r.at("n").get<int>(), r.at("p").get<double>(),
                       r.value("seed", std::uint64_t{0}));
    } else {
      throw ConfigError("graph model needs adjacency, edges, edges_file or random");
    }
    const GraphVariant variant =
        graph_variant_from_string(spec.value("variant", std::string("adjacency")));
    ShiftFamily family = graph_shift(a, variant);
    if (spec.value("normalize", false) && family.max_norm() > 0.0) {
      return ShiftFamily(ModelTag::graph, {family.shift(0) / family.max_norm()});
    }
    return family;
  }
  throw ConfigError("unknown model kind '" + kind + "'");
}

Json perturbation_to_json(const PerturbationModel& model) {
  Json gens = Json::array();
  for (const auto& g : model.per_generator()) {
    gens.push_back({{"T0", matrix_to_json(g.absolute)}, {"T1", matrix_to_json(g.relative)}});
  }
  Json out = {{"n", model.dimension()}, {"m", model.num_generators()}, {"generators", gens}};
  if (const auto& p = model.provenance()) {
    out["norm0"] = p->norm0;
    out["norm1"] = p->norm1;
    out["mode"] = std::string(to_string(p->mode));
    out["seed"] = p->seed;
  }
  return out;
}

PerturbationModel perturbation_from_json(const Json& j) {
  std::vector<GeneratorPerturbation> gens;
  for (const auto& g : j.at("generators")) {
    gens.push_back({matrix_from_json(g.at("T0")), matrix_from_json(g.at("T1"))});
  }
  std::optional<PerturbationProvenance> prov;
  if (j.contains("mode")) {
    prov = PerturbationProvenance{j.value("norm0", 0.0), j.value("norm1", 0.0),
                                  perturbation_mode_from_string(j.at("mode").get<std::string>()),
                                  j.value("seed", std::uint64_t{0})};
  }
  return PerturbationModel(std::move(gens), prov);
}

Json decomposition_to_json(const SpectralDecomposition& d) {
  Json lambda = Json::array();
  for (Eigen::Index i = 0; i < d.eigenvalues.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < d.eigenvalues.cols(); ++j) row.push_back(complex_to_json(d.eigenvalues(i, j)));
    lambda.push_back(std::move(row));
  }
  return {{"lambda", lambda}, {"U", matrix_to_json(d.eigenvectors)}, {"model_ref", d.model_ref}};
}

AlgNN network_from_json(const Json& j, const std::filesystem::path& base_dir) {
  std::vector<AlgNNLayer> layers;
  for (const auto& lj : j.at("layers")) {
    ShiftFamily shifts = family_from_spec(lj.at("model"), base_dir);
    std::vector<std::vector<PolynomialFilter>> bank;
    for (const auto& row : lj.at("filters")) {
      std::vector<PolynomialFilter> r;
      for (const auto& f : row) r.push_back(filter_from_json(f));
      bank.push_back(std::move(r));
    }
    PoolingSpec pooling;
    if (lj.contains("pooling")) {
      const Json& pj = lj.at("pooling");
      pooling.kind = pooling_kind_from_string(pj.value("kind", std::string("identity")));
      pooling.k = pj.value("k", 1);
      pooling.keep_largest = pj.value("keep_largest", false);
    }
    layers.push_back({std::move(shifts), std::move(bank),
                      nonlinearity_from_string(lj.value("eta", std::string("relu"))), pooling});
  }
  return AlgNN(std::move(layers), j.value("input_features", 1));
}

Json network_to_json(const AlgNN& net) {
  Json layers = Json::array();
  for (const auto& layer : net.layers()) {
    Json bank = Json::array();
    for (const auto& row : layer.filters) {
      Json r = Json::array();
      for (const auto& p : row) r.push_back(filter_to_json(p));
      bank.push_back(std::move(r));
    }
    layers.push_back({{"model", family_to_json(layer.shifts)},
                      {"filters", bank},
                      {"eta", std::string(to_string(layer.eta))},
                      {"pooling",
                       {{"kind", std::string(to_string(layer.pooling.kind))},
                        {"k", layer.pooling.k},
                        {"keep_largest", layer.pooling.keep_largest}}}});
  }
  return {{"input_features", net.feature_counts().front()}, {"layers", layers}};
}

Features features_from_json(const Json& j) {
  Features out;
  for (const auto& f : j) {
    const auto v = f.get<std::vector<double>>();
    out.push_back(Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return out;
}

Json features_to_json(const Features& x) {
  Json out = Json::array();
  for (const auto& v : x) out.push_back(std::vector<double>(v.data(), v.data() + v.size()));
  return out;
}

}  // namespace algstab
