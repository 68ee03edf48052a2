#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "drgkit/graph.hpp"

namespace drgkit {

constexpr std::size_t kDefaultSizeCap = 512;

namespace detail {
inline void check_cap(unsigned long long n, std::size_t cap, const std::string& what) {
  if (n > cap)
    fail(errc::size_cap, what + " has " + std::to_string(n) +
                             " vertices, cap is " + std::to_string(cap));
}
}  // namespace detail

// Hamming graph H(D,q): words of length D over a q-letter alphabet,
// adjacent when they differ in exactly one coordinate.  Vertex id is the
// base-q encoding with coordinate 0 least significant.
inline Graph hamming(int D, int q, std::size_t cap = kDefaultSizeCap) {
  if (D < 1 || q < 2)
    fail(errc::bad_argument, "hamming(" + std::to_string(D) + "," + std::to_string(q) +
                                 "): need D >= 1 and q >= 2");
  unsigned long long n = 1;
  for (int i = 0; i < D; ++i) {
    n *= static_cast<unsigned long long>(q);
    detail::check_cap(n, cap, "hamming(" + std::to_string(D) + "," + std::to_string(q) + ")");
  }
  std::vector<std::pair<int, int>> edges;
  std::vector<unsigned long long> pow(D + 1, 1);
  for (int i = 0; i < D; ++i) pow[i + 1] = pow[i] * q;
  for (unsigned long long v = 0; v < n; ++v) {
    for (int c = 0; c < D; ++c) {
      int digit = static_cast<int>((v / pow[c]) % q);
      for (int repl = digit + 1; repl < q; ++repl) {
        unsigned long long w = v + static_cast<unsigned long long>(repl - digit) * pow[c];
        edges.push_back({static_cast<int>(v), static_cast<int>(w)});
      }
    }
  }
  return make_graph(static_cast<std::size_t>(n), edges,
                    "hamming(" + std::to_string(D) + "," + std::to_string(q) + ")");
}

inline unsigned long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
  return r;
}

// Johnson graph J(n,k): k-subsets of an n-set, adjacent when the
// intersection has size k-1.  Vertices are numbered in colexicographic
// order of the sorted subset.
inline Graph johnson(int n, int k, std::size_t cap = kDefaultSizeCap) {
  if (n < 2 || k < 1 || k >= n)
    fail(errc::bad_argument, "johnson(" + std::to_string(n) + "," + std::to_string(k) +
                                 "): need 1 <= k < n");
  // incremental binomial with an early bail so the cap check never overflows
  unsigned long long N = 1;
  {
    int kk = std::min(k, n - k);
    for (int i = 1; i <= kk; ++i) {
      N = N * static_cast<unsigned long long>(n - kk + i) / i;
      if (N > (1ull << 40))
        detail::check_cap(N, cap,
                          "johnson(" + std::to_string(n) + "," + std::to_string(k) + ")");
    }
  }
  detail::check_cap(N, cap, "johnson(" + std::to_string(n) + "," + std::to_string(k) + ")");

  // enumerate in colex order: subset S precedes T iff max(S^T) lies in T
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    subsets.push_back(cur);
    int i = 0;
    while (i + 1 < k && cur[i] + 1 == cur[i + 1]) ++i;
    if (cur[i] + 1 >= n && i + 1 == k) break;
    ++cur[i];
    for (int j = 0; j < i; ++j) cur[j] = j;
    if (cur[k - 1] >= n) break;
  }
  if (subsets.size() != N)
    fail(errc::numeric_failure, "johnson enumeration mismatch");

  std::vector<std::pair<int, int>> edges;
  for (std::size_t a = 0; a < subsets.size(); ++a) {
    for (std::size_t b = a + 1; b < subsets.size(); ++b) {
      int inter = 0;
      std::size_t i = 0, j = 0;
      while (i < subsets[a].size() && j < subsets[b].size()) {
        if (subsets[a][i] == subsets[b][j]) {
          ++inter;
          ++i;
          ++j;
        } else if (subsets[a][i] < subsets[b][j]) {
          ++i;
        } else {
          ++j;
        }
      }
      if (inter == k - 1) edges.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
  }
  return make_graph(static_cast<std::size_t>(N), edges,
                    "johnson(" + std::to_string(n) + "," + std::to_string(k) + ")");
}

inline Graph cycle(int n, std::size_t cap = kDefaultSizeCap) {
  if (n < 6)
    fail(errc::diameter_too_small,
         "cycle(" + std::to_string(n) + ") has diameter " +
             std::to_string(n >= 2 ? n / 2 : 0) + " < 3");
  detail::check_cap(static_cast<unsigned long long>(n), cap, "cycle(" + std::to_string(n) + ")");
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.push_back({std::min(i, (i + 1) % n), std::max(i, (i + 1) % n)});
  return make_graph(static_cast<std::size_t>(n), edges, "cycle(" + std::to_string(n) + ")");
}

// Edge list text format: '#' starts a comment, first data line is "n m",
// then m lines "u v" with 0 <= u < v < n, no duplicates.  CRLF tolerated.
inline Graph parse_graph_text(const std::string& text, std::string name,
                              std::size_t cap = kDefaultSizeCap) {
  std::istringstream in(text);
  std::string line;
  long n = -1, m = -1;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<bool>> seen;
  long edges_read = 0;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    std::vector<long> nums;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        long v = std::stol(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        nums.push_back(v);
      } catch (...) {
        fail(errc::parse_error, "line " + std::to_string(lineno) +
                                    ": expected integer, got '" + tok + "'");
      }
    }
    if (nums.empty()) continue;
    if (nums.size() != 2)
      fail(errc::parse_error,
           "line " + std::to_string(lineno) + ": expected two integers");
    if (n < 0) {
      n = nums[0];
      m = nums[1];
      if (n <= 0 || m < 0)
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": bad header");
      detail::check_cap(static_cast<unsigned long long>(n), cap, "edge list '" + name + "'");
      seen.assign(n, std::vector<bool>(n, false));
      continue;
    }
    long u = nums[0], v = nums[1];
    if (u < 0 || v < 0 || u >= n || v >= n)
      fail(errc::vertex_out_of_range, "line " + std::to_string(lineno) + ": vertex " +
                                          std::to_string(std::max(u, v)) +
                                          " outside [0," + std::to_string(n) + ")");
    if (u == v)
      fail(errc::self_loop, "line " + std::to_string(lineno) + ": self loop at " +
                                std::to_string(u));
    if (u > v)
      fail(errc::parse_error,
           "line " + std::to_string(lineno) + ": edges must satisfy u < v");
    if (seen[u][v])
      fail(errc::duplicate_edge, "line " + std::to_string(lineno) + ": duplicate edge " +
                                     std::to_string(u) + " " + std::to_string(v));
    seen[u][v] = true;
    edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    ++edges_read;
  }
  if (n < 0) fail(errc::parse_error, "missing header line \"n m\"");
  if (edges_read != m)
    fail(errc::parse_error, "header promised " + std::to_string(m) + " edges, found " +
                                std::to_string(edges_read));
  return make_graph(static_cast<std::size_t>(n), edges, std::move(name));
}

inline Graph parse_graph_file(const std::string& path, std::size_t cap = kDefaultSizeCap) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_graph_text(ss.str(), path, cap);
}

inline std::string serialize_graph(const Graph& g) {
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < g.n; ++u)
    for (int v : g.adj[u])
      if (static_cast<int>(u) < v) edges.push_back({static_cast<int>(u), v});
  std::sort(edges.begin(), edges.end());
  std::ostringstream out;
  out << g.n << " " << edges.size() << "\n";
  for (auto [u, v] : edges) out << u << " " << v << "\n";
  return out.str();
}

// Graph description mini-language: "hamming:D,q", "johnson:n,k",
// "cycle:n", anything else is read as an edge list file path.
inline Graph graph_from_spec(const std::string& spec, std::size_t cap = kDefaultSizeCap) {
  auto colon = spec.find(':');
  if (colon == std::string::npos) return parse_graph_file(spec, cap);
  std::string fam = spec.substr(0, colon);
  std::vector<long> params;
  std::string rest = spec.substr(colon + 1);
  std::istringstream ps(rest);
  std::string tok;
  while (std::getline(ps, tok, ',')) {
    try {
      std::size_t used = 0;
      params.push_back(std::stol(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (...) {
      fail(errc::parse_error, "bad family parameter '" + tok + "' in '" + spec + "'");
    }
  }
  auto want = [&](std::size_t k) {
    if (params.size() != k)
      fail(errc::parse_error, "family '" + fam + "' takes " + std::to_string(k) +
                                  " parameter(s), got " + std::to_string(params.size()));
  };
  if (fam == "hamming") {
    want(2);
    return hamming(static_cast<int>(params[0]), static_cast<int>(params[1]), cap);
  }
  if (fam == "johnson") {
    want(2);
    return johnson(static_cast<int>(params[0]), static_cast<int>(params[1]), cap);
  }
  if (fam == "cycle") {
    want(1);
    return cycle(static_cast<int>(params[0]), cap);
  }
  fail(errc::parse_error, "unknown family '" + fam + "'");
}

}  // namespace drgkit
