#include "pbit/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "pbit/errors.hpp"
#include "pbit/rng.hpp"

namespace pbit {

namespace {

std::uint64_t edge_key(int i, int j) {
  auto a = static_cast<std::uint64_t>(std::min(i, j));
  auto b = static_cast<std::uint64_t>(std::max(i, j));
  return (a << 32) | b;
}

}  // namespace

std::string_view to_string(WeightType t) {
  switch (t) {
    case WeightType::plus_one: return "plus_one";
    case WeightType::pm_one: return "pm_one";
    case WeightType::minus_one: return "minus_one";
    case WeightType::mixed: return "mixed";
  }
  return "mixed";
}

WeightType infer_weight_type(const std::vector<Edge>& edges) {
  bool any_plus = false, any_minus = false, any_other = false;
  for (const Edge& e : edges) {
    if (e.w == 1.0) {
      any_plus = true;
    } else if (e.w == -1.0) {
      any_minus = true;
    } else {
      any_other = true;
    }
  }
  if (any_other || edges.empty()) return WeightType::mixed;
  if (any_plus && any_minus) return WeightType::pm_one;
  return any_plus ? WeightType::plus_one : WeightType::minus_one;
}

void validate_graph(const Graph& g) {
  if (g.n_nodes <= 0) throw DataError("graph '" + g.name + "': n_nodes must be positive");
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(g.edges.size() * 2);
  for (const Edge& e : g.edges) {
    if (e.i < 0 || e.i >= g.n_nodes || e.j < 0 || e.j >= g.n_nodes) {
      throw DataError("graph '" + g.name + "': edge index out of range");
    }
    if (e.i == e.j) throw DataError("graph '" + g.name + "': self-loop at node " + std::to_string(e.i));
    if (!seen.insert(edge_key(e.i, e.j)).second) {
      throw DataError("graph '" + g.name + "': duplicate edge (" + std::to_string(e.i) +
                      ", " + std::to_string(e.j) + ")");
    }
  }
}

Graph parse_gset(std::string_view text, std::string name) {
  Graph g;
  g.name = std::move(name);

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  auto fail = [&](const std::string& msg) -> void {
    throw DataError("gset parse error" + (g.name.empty() ? "" : " in '" + g.name + "'") +
                    ", line " + std::to_string(line_no) + ": " + msg);
  };

  long n = 0, m = 0;
  // header: first non-empty line is "N M"
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    if (!(ls >> n)) {
      if (ls.eof()) continue;  // blank line
      fail("malformed header, expected \"N M\"");
    }
    std::string trailing;
    if (!(ls >> m) || (ls >> trailing)) fail("malformed header, expected \"N M\"");
    break;
  }
  if (line_no == 0) throw DataError("gset parse error: empty input");
  if (n <= 0 || m < 0) fail("header counts must satisfy N > 0, M >= 0");

  g.n_nodes = static_cast<int>(n);
  g.edges.reserve(static_cast<std::size_t>(m));

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(static_cast<std::size_t>(m) * 2);

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    long i = 0, j = 0;
    double w = 0.0;
    if (!(ls >> i)) {
      if (ls.eof()) continue;
      fail("malformed edge line, expected \"i j w\"");
    }
    std::string trailing;
    if (!(ls >> j >> w) || (ls >> trailing)) fail("malformed edge line, expected \"i j w\"");
    if (i < 1 || i > n || j < 1 || j > n) {
      fail("node index out of range [1, " + std::to_string(n) + "]");
    }
    if (i == j) fail("self-loop at node " + std::to_string(i));
    const int a = static_cast<int>(i - 1), b = static_cast<int>(j - 1);
    if (!seen.insert(edge_key(a, b)).second) fail("duplicate edge");
    g.edges.push_back(Edge{a, b, w});
  }

  if (static_cast<long>(g.edges.size()) != m) {
    throw DataError("gset parse error" + (g.name.empty() ? "" : " in '" + g.name + "'") +
                    ": header declares " + std::to_string(m) + " edges, found " +
                    std::to_string(g.edges.size()));
  }

  g.weight_type = infer_weight_type(g.edges);
  return g;
}

std::string serialize_gset(const Graph& g) {
  std::string out;
  out.reserve(16 + g.edges.size() * 12);
  auto append_num = [&out](double v) {
    char buf[32];
    if (v == std::floor(v) && std::abs(v) < 1e15) {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
      out.append(buf, p);
    } else {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
      out.append(buf, p);
    }
  };
  out += std::to_string(g.n_nodes);
  out += ' ';
  out += std::to_string(g.edges.size());
  out += '\n';
  for (const Edge& e : g.edges) {
    out += std::to_string(e.i + 1);
    out += ' ';
    out += std::to_string(e.j + 1);
    out += ' ';
    append_num(e.w);
    out += '\n';
  }
  return out;
}

Graph load_gset_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open graph file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  // instance name = file name without directory or extension
  std::string name = path;
  if (auto pos = name.find_last_of("/\\"); pos != std::string::npos) name.erase(0, pos + 1);
  if (auto pos = name.find_last_of('.'); pos != std::string::npos && pos > 0) name.erase(pos);
  return parse_gset(buf.str(), name);
}

namespace {

Graph ring(int n, double w, std::string name) {
  Graph g;
  g.n_nodes = n;
  g.name = std::move(name);
  for (int i = 0; i < n; ++i) g.edges.push_back(Edge{i, (i + 1) % n, w});
  g.weight_type = infer_weight_type(g.edges);
  return g;
}

Graph complete(int n, double w, std::string name) {
  Graph g;
  g.n_nodes = n;
  g.name = std::move(name);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back(Edge{i, j, w});
  g.weight_type = infer_weight_type(g.edges);
  return g;
}

// Two disjoint triangles {0,1,2} and {3,4,5} joined by the bridge (2,3).
Graph triangles_bridge(double w, std::string name) {
  Graph g;
  g.n_nodes = 6;
  g.name = std::move(name);
  const int tri[2][3] = {{0, 1, 2}, {3, 4, 5}};
  for (const auto& t : tri) {
    g.edges.push_back(Edge{t[0], t[1], w});
    g.edges.push_back(Edge{t[0], t[2], w});
    g.edges.push_back(Edge{t[1], t[2], w});
  }
  g.edges.push_back(Edge{2, 3, w});
  g.weight_type = infer_weight_type(g.edges);
  return g;
}

// Open-boundary rows x cols grid.
Graph lattice(int rows, int cols, double w, std::string name) {
  Graph g;
  g.n_nodes = rows * cols;
  g.name = std::move(name);
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) g.edges.push_back(Edge{id(r, c), id(r, c + 1), w});
      if (r + 1 < rows) g.edges.push_back(Edge{id(r, c), id(r + 1, c), w});
    }
  }
  g.weight_type = infer_weight_type(g.edges);
  return g;
}

// Erdos-Renyi with edge probability k/(n-1), +-1 weights. Redrawn (stream
// advances deterministically) until the edge count lies within 15% of the
// expected n k / 2.
Graph erdos_renyi(int n, double k, std::uint64_t seed, std::string name) {
  const double p = k / static_cast<double>(n - 1);
  const double target = n * k / 2.0;
  RngStream rng(hash_combine(0x70626974u /* "pbit" */, seed));
  Graph g;
  g.n_nodes = n;
  g.name = std::move(name);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    g.edges.clear();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rng.bernoulli(p)) {
          const double w = rng.bernoulli(0.5) ? 1.0 : -1.0;
          g.edges.push_back(Edge{i, j, w});
        }
      }
    }
    const double count = static_cast<double>(g.edges.size());
    if (std::abs(count - target) <= 0.15 * target) {
      g.weight_type = infer_weight_type(g.edges);
      return g;
    }
  }
  throw NumericalError("erdos_renyi: edge count failed to enter the 15% band");
}

}  // namespace

Graph generate_toy(ToyKind kind, std::uint64_t seed) {
  switch (kind) {
    case ToyKind::toy1: return ring(4, 1.0, "Toy-1");
    case ToyKind::toy2: return complete(4, -1.0, "Toy-2");
    case ToyKind::toy3: return triangles_bridge(1.0, "Toy-3");
    case ToyKind::toy4: return ring(8, 1.0, "Toy-4");
    case ToyKind::toy5: return lattice(4, 4, -1.0, "Toy-5");
    case ToyKind::toy6: return erdos_renyi(32, 6.0, hash_combine(6, seed), "Toy-6");
    case ToyKind::toy7: return erdos_renyi(64, 6.0, hash_combine(7, seed), "Toy-7");
  }
  throw DataError("unknown toy kind");
}

}  // namespace pbit
