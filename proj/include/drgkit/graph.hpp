#pragma once

#include <cstddef>
#include <queue>
#include <string>
#include <vector>

#include "drgkit/errors.hpp"

namespace drgkit {

// Simple undirected graph, adjacency lists sorted ascending.
struct Graph {
  std::size_t n = 0;
  std::vector<std::vector<int>> adj;
  std::string name;
};

inline Graph make_graph(std::size_t n, const std::vector<std::pair<int, int>>& edges,
                        std::string name) {
  Graph g;
  g.n = n;
  g.adj.assign(n, {});
  g.name = std::move(name);
  for (auto [u, v] : edges) {
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

// All-pairs distances by BFS from every vertex; D is the diameter.
struct DistanceData {
  std::size_t n = 0;
  int D = 0;
  std::vector<int> d;  // row-major n*n

  int at(std::size_t x, std::size_t y) const { return d[x * n + y]; }
};

inline DistanceData distances(const Graph& g) {
  DistanceData out;
  out.n = g.n;
  out.d.assign(g.n * g.n, -1);
  for (std::size_t s = 0; s < g.n; ++s) {
    int* row = &out.d[s * g.n];
    row[s] = 0;
    std::queue<int> q;
    q.push(static_cast<int>(s));
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : g.adj[u]) {
        if (row[v] < 0) {
          row[v] = row[u] + 1;
          q.push(v);
        }
      }
    }
    for (std::size_t y = 0; y < g.n; ++y) {
      if (row[y] < 0)
        fail(errc::disconnected,
             "graph '" + g.name + "' is disconnected (vertex " +
                 std::to_string(y) + " unreachable from " + std::to_string(s) + ")");
      if (row[y] > out.D) out.D = row[y];
    }
  }
  return out;
}

}  // namespace drgkit
