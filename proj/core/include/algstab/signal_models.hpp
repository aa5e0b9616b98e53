#pragma once

#include <filesystem>
#include <cstdint>
#include <functional>
#include <string_view>
#include <tuple>
#include <vector>

#include "algstab/linalg.hpp"
#include "algstab/shift_family.hpp"

namespace algstab {

enum class GraphVariant { adjacency, laplacian };

GraphVariant graph_variant_from_string(std::string_view name);

using GraphonKernel = std::function<double(double, double)>;

/// Cyclic shift C with (Cx)_j = x_{(j-1) mod n}.
ShiftFamily cyclic_shift(int n);

/// Graph shift from a real symmetric adjacency matrix. The laplacian
/// variant builds D - A.
ShiftFamily graph_shift(const RealMatrix& adjacency, GraphVariant variant = GraphVariant::adjacency);

/// Midpoint discretization S_jk = W(u_j, u_k) / n with u_j = (j + 1/2) / n.
ShiftFamily graphon_shift(const GraphonKernel& kernel, int n);

/// One cyclic shift per factor of Z_{n_1} x ... x Z_{n_m}. Group elements
/// are indexed in mixed radix with the first factor most significant.
ShiftFamily abelian_group_shifts(const std::vector<int>& orders);

/// Two commuting shifts on a rows x cols grid: periodic cyclic factors, or
/// symmetric path-graph factors when not periodic.
ShiftFamily grid2d_shifts(int rows, int cols, bool periodic);

/// Named graphon kernels: constant, product, gaussian, min, one_minus_max.
GraphonKernel named_graphon(std::string_view name);

/// Reads "u v [weight]" lines (0-indexed, '#' comments) into a symmetric
/// adjacency matrix of size n; n = 0 infers it from the largest index.
RealMatrix load_edge_list(const std::filesystem::path& path, int n = 0);

/// Symmetric adjacency from an edge list.
RealMatrix adjacency_from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges);

/// Erdos-Renyi G(n, p) adjacency, deterministic in seed.
RealMatrix random_graph(int n, double p, std::uint64_t seed);

}  // namespace algstab
