#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pbit {

enum class WeightType { plus_one, pm_one, minus_one, mixed };

std::string_view to_string(WeightType t);

struct Edge {
  int i;
  int j;
  double w;
};

// Undirected weighted graph, 0-based node indices. Invariants: no self-loops,
// no duplicate undirected edge, indices in [0, n_nodes).
struct Graph {
  int n_nodes = 0;
  std::vector<Edge> edges;
  std::string name;
  WeightType weight_type = WeightType::mixed;
};

// Throws DataError if any structural invariant is violated.
void validate_graph(const Graph& g);

// Parses the de facto G-set text format: header "N M", then M lines "i j w"
// with 1-based node indices. Errors carry the offending line number.
Graph parse_gset(std::string_view text, std::string name = "");

// Inverse of parse_gset; emits the same format with 1-based indices.
std::string serialize_gset(const Graph& g);

Graph load_gset_file(const std::string& path);

// Illustrative instances. Kinds 1-5 are fixed graphs; 6 and 7 are seeded
// Erdos-Renyi draws with +-1 weights and mean degree ~6.
enum class ToyKind { toy1 = 1, toy2, toy3, toy4, toy5, toy6, toy7 };

Graph generate_toy(ToyKind kind, std::uint64_t seed = 0);

// Weight multiset classification used by parse_gset and generate_toy.
WeightType infer_weight_type(const std::vector<Edge>& edges);

}  // namespace pbit
