#include "algstab/signal_models.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <tuple>

#include "algstab/errors.hpp"

namespace algstab {

namespace {

RealMatrix cyclic_permutation(int n) {
  RealMatrix c = RealMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) c(j, (j + n - 1) % n) = 1.0;
  return c;
}

RealMatrix path_adjacency(int n) {
  RealMatrix a = RealMatrix::Zero(n, n);
  for (int j = 0; j + 1 < n; ++j) a(j, j + 1) = a(j + 1, j) = 1.0;
  return a;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

GraphVariant graph_variant_from_string(std::string_view name) {
  if (name == "adjacency") return GraphVariant::adjacency;
  if (name == "laplacian") return GraphVariant::laplacian;
  throw ArgumentError("unknown graph variant '" + std::string(name) + "'");
}

ShiftFamily cyclic_shift(int n) {
  if (n < 2) throw ArgumentError("cyclic_shift needs n >= 2");
  return ShiftFamily(ModelTag::cyclic, {cyclic_permutation(n).cast<Complex>()});
}

ShiftFamily graph_shift(const RealMatrix& adjacency, GraphVariant variant) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() == 0) {
    throw ArgumentError("graph matrix must be square and non-empty");
  }
  if (!adjacency.allFinite()) throw ModelError("graph matrix has non-finite entries");
  if ((adjacency - adjacency.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ModelError("graph matrix is not symmetric");
  }
  RealMatrix s = adjacency;
  if (variant == GraphVariant::laplacian) {
    s = -adjacency;
    s.diagonal() += adjacency.rowwise().sum();
  }
  return ShiftFamily(ModelTag::graph, {s.cast<Complex>()});
}

ShiftFamily graphon_shift(const GraphonKernel& kernel, int n) {
  if (n < 2) throw ArgumentError("graphon_shift needs n >= 2");
  RealMatrix s(n, n);
  for (int j = 0; j < n; ++j) {
    const double u = (j + 0.5) / n;
    for (int k = 0; k < n; ++k) {
      const double w = kernel(u, (k + 0.5) / n);
      if (!(w >= 0.0 && w <= 1.0)) {
        throw ModelError("graphon kernel value " + std::to_string(w) + " outside [0, 1]");
      }
      s(j, k) = w / n;
    }
  }
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ModelError("graphon kernel is not symmetric");
  }
  return ShiftFamily(ModelTag::graphon, {s.cast<Complex>()});
}

ShiftFamily abelian_group_shifts(const std::vector<int>& orders) {
  if (orders.empty()) throw ArgumentError("abelian_group_shifts needs at least one factor");
  for (int o : orders) {
    if (o < 2) throw ArgumentError("every group factor needs order >= 2");
  }
  std::vector<Matrix> shifts;
  for (std::size_t j = 0; j < orders.size(); ++j) {
    RealMatrix s = RealMatrix::Identity(1, 1);
    for (std::size_t f = 0; f < orders.size(); ++f) {
      const RealMatrix factor =
          f == j ? cyclic_permutation(orders[f]) : RealMatrix::Identity(orders[f], orders[f]);
      s = kron(s, factor);
    }
    shifts.push_back(s.cast<Complex>());
  }
  const ModelTag tag = orders.size() == 1 ? ModelTag::cyclic : ModelTag::abelian_group;
  return ShiftFamily(tag, std::move(shifts));
}

ShiftFamily grid2d_shifts(int rows, int cols, bool periodic) {
  if (rows < 2 || cols < 2) throw ArgumentError("grid2d_shifts needs rows, cols >= 2");
  const RealMatrix r = periodic ? cyclic_permutation(rows) : path_adjacency(rows);
  const RealMatrix c = periodic ? cyclic_permutation(cols) : path_adjacency(cols);
  return ShiftFamily(ModelTag::grid2d,
                     {kron(r, RealMatrix::Identity(cols, cols)).cast<Complex>(),
                      kron(RealMatrix::Identity(rows, rows), c).cast<Complex>()});
}

GraphonKernel named_graphon(std::string_view name) {
  if (name == "constant") return [](double, double) { return 1.0; };
  if (name == "product") return [](double u, double v) { return u * v; };
  if (name == "gaussian") {
    return [](double u, double v) { return std::exp(-(u - v) * (u - v) / 0.1); };
  }
  if (name == "min") return [](double u, double v) { return std::min(u, v); };
  if (name == "one_minus_max") return [](double u, double v) { return 1.0 - std::max(u, v); };
  throw ArgumentError("unknown graphon kernel '" + std::string(name) + "'");
}

RealMatrix adjacency_from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  if (n < 1) throw ArgumentError("graph needs at least one node");
  RealMatrix a = RealMatrix::Zero(n, n);
  for (const auto& [u, v, w] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ArgumentError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                          ") out of range for n = " + std::to_string(n));
    }
    a(u, v) = w;
    a(v, u) = w;
  }
  return a;
}

RealMatrix load_edge_list(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open edge list " + path.string());
  std::vector<std::tuple<int, int, double>> edges;
  int max_index = -1;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    int u = 0;
    int v = 0;
    double w = 1.0;
    std::string rest;
    if (!(ss >> u >> v) || u < 0 || v < 0) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected 'u v [weight]'");
    }
    if (ss >> rest) {
      try {
        std::size_t used = 0;
        w = std::stod(rest, &used);
        if (used != rest.size() || (ss >> rest)) throw std::invalid_argument(rest);
      } catch (const std::exception&) {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad edge weight");
      }
    }
    edges.emplace_back(u, v, w);
    max_index = std::max({max_index, u, v});
  }
  return adjacency_from_edges(n > 0 ? n : max_index + 1, edges);
}

RealMatrix random_graph(int n, double p, std::uint64_t seed) {
  if (n < 1 || !(p >= 0.0 && p <= 1.0)) throw ArgumentError("invalid random graph parameters");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  RealMatrix a = RealMatrix::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) a(u, v) = a(v, u) = 1.0;
    }
  }
  return a;
}

}  // namespace algstab
