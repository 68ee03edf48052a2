#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "drgkit/families.hpp"
#include "drgkit/graph.hpp"
#include "drgkit/subspace.hpp"

namespace drgkit {

// Association scheme data of a distance-regular graph together with its
// spectral decomposition over the chosen scalar field.
template <class S>
struct DrgProfile {
  Graph g;
  DistanceData dist;
  int D = 0;
  std::vector<std::vector<std::vector<long>>> p;  // p[h][i][j]
  std::vector<long> kdeg;                         // k_i = p[0][i][i]
  std::vector<S> theta;                           // decreasing, theta[0] = valency
  std::vector<long> mult;
  std::vector<Matrix<S>> A;   // distance matrices, A[0] = I
  std::vector<Matrix<S>> E;   // primitive idempotents, natural labels
  std::vector<Matrix<S>> EB;  // EB[i]: n x mult[i] basis of the eigenspace of theta[i]
  std::vector<std::vector<std::vector<S>>> q;  // Krein parameters, natural labels
  std::vector<std::vector<int>> orderings;     // Q-polynomial orderings (label -> natural)
  Tols tols;

  std::size_t n() const { return g.n; }
};

// ====== intersection numbers ======

// Counts N[i][j] = #{z : d(x,z)=i, d(z,y)=j} for every ordered pair and
// compares against the first pair seen at each distance h.
inline std::vector<std::vector<std::vector<long>>> intersection_numbers(
    const Graph& g, const DistanceData& dist) {
  const int D = dist.D;
  const std::size_t n = g.n;
  std::vector<std::vector<std::vector<long>>> p(
      D + 1, std::vector<std::vector<long>>(D + 1, std::vector<long>(D + 1, -1)));
  // sphere profiles first: a size mismatch at distance i is the
  // h = 0 statement p^0_{ii}(x) != p^0_{ii}(0)
  std::vector<long> sphere0(D + 1, 0);
  for (std::size_t z = 0; z < n; ++z) ++sphere0[dist.at(0, z)];
  for (std::size_t x = 1; x < n; ++x) {
    std::vector<long> sx(D + 1, 0);
    for (std::size_t z = 0; z < n; ++z) ++sx[dist.at(x, z)];
    for (int i = 0; i <= D; ++i) {
      if (sx[i] != sphere0[i]) {
        regularity_witness w;
        w.h = 0;
        w.i = i;
        w.j = i;
        w.x1 = 0;
        w.y1 = 0;
        w.count1 = sphere0[i];
        w.x2 = static_cast<int>(x);
        w.y2 = static_cast<int>(x);
        w.count2 = sx[i];
        throw not_drg_error(
            w, "not_distance_regular: sphere of radius " + std::to_string(i) +
                   " has " + std::to_string(sphere0[i]) + " vertices at 0 but " +
                   std::to_string(sx[i]) + " at " + std::to_string(x));
      }
    }
  }
  std::vector<std::pair<int, int>> first(D + 1, {-1, -1});
  std::vector<long> scratch((D + 1) * (D + 1));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      int h = dist.at(x, y);
      std::fill(scratch.begin(), scratch.end(), 0);
      const int* dx = &dist.d[x * n];
      const int* dy = &dist.d[y * n];
      for (std::size_t z = 0; z < n; ++z) ++scratch[dx[z] * (D + 1) + dy[z]];
      if (first[h].first < 0) {
        first[h] = {static_cast<int>(x), static_cast<int>(y)};
        for (int i = 0; i <= D; ++i)
          for (int j = 0; j <= D; ++j) p[h][i][j] = scratch[i * (D + 1) + j];
      } else {
        for (int i = 0; i <= D; ++i) {
          for (int j = 0; j <= D; ++j) {
            long c = scratch[i * (D + 1) + j];
            if (c != p[h][i][j]) {
              regularity_witness w;
              w.h = h;
              w.i = i;
              w.j = j;
              w.x1 = first[h].first;
              w.y1 = first[h].second;
              w.count1 = p[h][i][j];
              w.x2 = static_cast<int>(x);
              w.y2 = static_cast<int>(y);
              w.count2 = c;
              throw not_drg_error(
                  w, "not_distance_regular: p^" + std::to_string(h) + "_{" +
                         std::to_string(i) + "," + std::to_string(j) + "} is " +
                         std::to_string(w.count1) + " at pair (" +
                         std::to_string(w.x1) + "," + std::to_string(w.y1) +
                         ") but " + std::to_string(c) + " at pair (" +
                         std::to_string(w.x2) + "," + std::to_string(w.y2) + ")");
            }
          }
        }
      }
    }
  }
  return p;
}

// ====== spectrum ======

// Matrix of multiplication by A on the adjacency algebra in the distance
// matrix basis: T[h][i] = p^h_{1,i}.  Tridiagonal; its eigenvalues are the
// distinct eigenvalues of the graph.
inline std::vector<std::vector<long>> intersection_matrix(
    const std::vector<std::vector<std::vector<long>>>& p, int D) {
  std::vector<std::vector<long>> T(D + 1, std::vector<long>(D + 1, 0));
  for (int h = 0; h <= D; ++h)
    for (int i = 0; i <= D; ++i) T[h][i] = p[h][1][i];
  return T;
}

namespace detail {

using Poly = std::vector<mpz_class>;  // ascending coefficients

inline Poly charpoly_tridiag(const std::vector<std::vector<long>>& T) {
  const int m = static_cast<int>(T.size());
  Poly prev = {1};                      // f_{-1}
  Poly cur = {mpz_class(-T[0][0]), 1};  // f_0 = x - a_0
  for (int k = 1; k < m; ++k) {
    Poly next(cur.size() + 1, 0);
    // (x - a_k) * cur
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next[i + 1] += cur[i];
      next[i] -= mpz_class(T[k][k]) * cur[i];
    }
    mpz_class off = mpz_class(T[k][k - 1]) * mpz_class(T[k - 1][k]);
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= off * prev[i];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline mpz_class poly_eval(const Poly& f, long t) {
  mpz_class acc = 0;
  for (std::size_t i = f.size(); i-- > 0;) acc = acc * t + f[i];
  return acc;
}

}  // namespace detail

// Distinct eigenvalues, decreasing.  The characteristic polynomial of the
// intersection matrix is monic with integer coefficients, so any rational
// eigenvalue is an integer in [-k, k]; a plain scan settles exactness.
inline std::vector<Rational> spectrum_exact(
    const std::vector<std::vector<long>>& T, long valency) {
  detail::Poly f = detail::charpoly_tridiag(T);
  std::vector<long> roots;
  for (long t = valency; t >= -valency; --t)
    if (detail::poly_eval(f, t) == 0) roots.push_back(t);
  if (static_cast<int>(roots.size()) != static_cast<int>(T.size()))
    fail(errc::exact_mode_unsupported,
         "spectrum is not rational (found " + std::to_string(roots.size()) +
             " integer eigenvalues, need " + std::to_string(T.size()) + ")");
  std::vector<Rational> theta;
  for (long r : roots) theta.push_back(rat(r));
  return theta;  // scan order is already decreasing
}

inline std::vector<double> spectrum_float(const std::vector<std::vector<long>>& T,
                                          long valency) {
  const std::size_t m = T.size();
  Matrix<double> tm(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) tm(i, j) = static_cast<double>(T[i][j]);
  GeneralEig e = eig_general(tm);
  double scale = std::max(1.0, static_cast<double>(valency));
  std::vector<double> theta;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::fabs(e.im[i]) > 1e-8 * scale)
      fail(errc::numeric_failure, "complex eigenvalue in intersection matrix");
    theta.push_back(e.re[i]);
  }
  std::sort(theta.rbegin(), theta.rend());
  for (std::size_t i = 1; i < theta.size(); ++i)
    if (theta[i - 1] - theta[i] <= 1e-9 * scale)
      fail(errc::numeric_failure, "eigenvalues of the intersection matrix not simple");
  return theta;
}

// ====== profile construction ======

template <class S>
void build_idempotents(DrgProfile<S>& pr) {
  const std::size_t n = pr.n();
  const int r = static_cast<int>(pr.theta.size());
  Matrix<S>& A1 = pr.A[1];
  pr.E.clear();
  for (int i = 0; i < r; ++i) {
    Matrix<S> M = Matrix<S>::identity(n);
    for (int j = 0; j < r; ++j) {
      if (j == i) continue;
      Matrix<S> f = A1;
      for (std::size_t v = 0; v < n; ++v) f(v, v) -= pr.theta[j];
      M = M * f;
      if constexpr (is_exact_v<S>) {
        M = M.scaled(Rational(1) / (pr.theta[i] - pr.theta[j]));
      } else {
        M = M.scaled(1.0 / (pr.theta[i] - pr.theta[j]));
      }
    }
    pr.E.push_back(std::move(M));
  }

  // spectral residual A E_i = theta_i E_i and resolution of identity
  auto exact_zero = [](const Matrix<S>& m) {
    for (std::size_t a = 0; a < m.rows(); ++a)
      for (std::size_t b = 0; b < m.cols(); ++b)
        if (!scalar_is_zero(m(a, b))) return false;
    return true;
  };
  Matrix<S> sumE(n, n);
  for (int i = 0; i < r; ++i) sumE = sumE + pr.E[i];
  Matrix<S> dev = sumE - Matrix<S>::identity(n);
  for (int i = 0; i < r; ++i) {
    Matrix<S> res = A1 * pr.E[i] - pr.E[i].scaled(pr.theta[i]);
    if constexpr (is_exact_v<S>) {
      if (!exact_zero(res) || !exact_zero(dev))
        fail(errc::numeric_failure, "exact spectral identities violated");
    } else {
      double scale = std::max(1.0, std::fabs(to_double(pr.theta[0])));
      if (res.max_abs() > 1e-7 * scale || dev.max_abs() > 1e-7)
        fail(errc::numeric_failure, "spectral residual too large");
    }
  }

  pr.mult.clear();
  long total = 0;
  for (int i = 0; i < r; ++i) {
    double tr = to_double(pr.E[i].trace());
    long m = std::lround(tr);
    if constexpr (is_exact_v<S>) {
      Rational t = pr.E[i].trace();
      if (t.get_den() != 1 || sgn(t) <= 0)
        fail(errc::numeric_failure, "idempotent trace not a positive integer");
      m = static_cast<long>(t.get_num().get_si());
    } else {
      if (std::fabs(tr - m) > 1e-6 || m <= 0)
        fail(errc::numeric_failure, "idempotent trace far from a positive integer");
    }
    pr.mult.push_back(m);
    total += m;
  }
  if (total != static_cast<long>(n))
    fail(errc::numeric_failure, "multiplicities do not sum to n");

  // eigenspace bases from idempotent columns
  pr.EB.clear();
  for (int i = 0; i < r; ++i) {
    if constexpr (is_exact_v<S>) {
      Matrix<Rational> b = gram_schmidt_exact(pr.E[i]);
      if (static_cast<long>(b.cols()) != pr.mult[i])
        fail(errc::numeric_failure, "eigenspace basis rank mismatch");
      pr.EB.push_back(std::move(b));
    } else {
      Svd f = svd_factor(pr.E[i], false);
      std::size_t m = static_cast<std::size_t>(pr.mult[i]);
      if (f.s.size() < m || f.s[m - 1] < 0.5 ||
          (f.s.size() > m && f.s[m] > 0.5))
        fail(errc::numeric_failure, "projector singular values drifted from 0/1");
      std::vector<std::size_t> idx(m);
      for (std::size_t t = 0; t < m; ++t) idx[t] = t;
      pr.EB.push_back(f.U.columns(idx));
    }
  }
}

// q^h_{ij} = (n / m_h) * sum_{x,y} (E_h)_{xy} (E_i)_{xy} (E_j)_{xy}
template <class S>
void build_krein(DrgProfile<S>& pr) {
  const std::size_t n = pr.n();
  const int r = static_cast<int>(pr.theta.size());
  pr.q.assign(r, std::vector<std::vector<S>>(r, std::vector<S>(r, scalar_from_int<S>(0))));
  for (int i = 0; i < r; ++i) {
    for (int j = i; j < r; ++j) {
      Matrix<S> ij = schur(pr.E[i], pr.E[j]);
      for (int h = 0; h < r; ++h) {
        S acc = scalar_from_int<S>(0);
        for (std::size_t x = 0; x < n; ++x)
          for (std::size_t y = 0; y < n; ++y) acc += pr.E[h](x, y) * ij(x, y);
        S val = acc * scalar_from_int<S>(static_cast<long>(n));
        if constexpr (is_exact_v<S>) {
          val /= rat(pr.mult[h]);
        } else {
          val /= static_cast<double>(pr.mult[h]);
        }
        pr.q[h][i][j] = val;
        pr.q[h][j][i] = val;
      }
    }
  }
  double qmax = 0.0;
  for (int h = 0; h < r; ++h)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        qmax = std::max(qmax, std::fabs(to_double(pr.q[h][i][j])));
  for (int h = 0; h < r; ++h) {
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        if constexpr (is_exact_v<S>) {
          if (sgn(pr.q[h][i][j]) < 0)
            fail(errc::negative_krein, "q^" + std::to_string(h) + "_{" +
                                           std::to_string(i) + "," + std::to_string(j) +
                                           "} = " + pr.q[h][i][j].get_str());
        } else {
          if (to_double(pr.q[h][i][j]) < -1e-8 * std::max(1.0, qmax))
            fail(errc::negative_krein, "q^" + std::to_string(h) + "_{" +
                                           std::to_string(i) + "," + std::to_string(j) +
                                           "} = " + std::to_string(to_double(pr.q[h][i][j])));
        }
      }
    }
  }
}

template <class S>
bool krein_is_zero(const DrgProfile<S>& pr, int h, int i, int j, double qmax) {
  if constexpr (is_exact_v<S>) {
    (void)qmax;
    return sgn(pr.q[h][i][j]) == 0;
  } else {
    return std::fabs(to_double(pr.q[h][i][j])) <= 1e-8 * std::max(1.0, qmax);
  }
}

// Krein table relabelled by an ordering (new label -> natural label).
template <class S>
std::vector<std::vector<std::vector<S>>> krein_parameters(const DrgProfile<S>& pr,
                                                          const std::vector<int>& ord) {
  const int r = static_cast<int>(pr.theta.size());
  std::vector<std::vector<std::vector<S>>> out(
      r, std::vector<std::vector<S>>(r, std::vector<S>(r, scalar_from_int<S>(0))));
  for (int h = 0; h < r; ++h)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) out[h][i][j] = pr.q[ord[h]][ord[i]][ord[j]];
  return out;
}

// A Q-polynomial ordering is fixed by the choice of the degree-one
// idempotent: the Krein row of that idempotent forces each next label.
// Candidates are grown greedily and then checked against the full
// triangle-pattern condition.
template <class S>
std::vector<std::vector<int>> find_qpoly_orderings(const DrgProfile<S>& pr) {
  const int D = pr.D;
  double qmax = 0.0;
  for (int h = 0; h <= D; ++h)
    for (int i = 0; i <= D; ++i)
      for (int j = 0; j <= D; ++j)
        qmax = std::max(qmax, std::fabs(to_double(pr.q[h][i][j])));

  auto zero = [&](int h, int i, int j) { return krein_is_zero(pr, h, i, j, qmax); };

  std::vector<std::vector<int>> found;
  for (int e = 1; e <= D; ++e) {
    std::vector<int> ord = {0, e};
    std::vector<bool> used(D + 1, false);
    used[0] = used[e] = true;
    bool ok = true;
    for (int j = 1; j < D && ok; ++j) {
      int next = -1;
      for (int h = 0; h <= D; ++h) {
        if (zero(h, e, ord[j])) continue;
        if (h == ord[j] || (j >= 1 && h == ord[j - 1])) continue;
        if (used[h] || next >= 0) {
          ok = false;
          break;
        }
        next = h;
      }
      if (!ok || next < 0) {
        ok = false;
        break;
      }
      ord.push_back(next);
      used[next] = true;
    }
    if (!ok || static_cast<int>(ord.size()) != D + 1) continue;

    bool pattern = true;
    for (int h = 0; h <= D && pattern; ++h) {
      for (int i = 0; i <= D && pattern; ++i) {
        for (int j = 0; j <= D && pattern; ++j) {
          bool z = zero(ord[h], ord[i], ord[j]);
          if ((h > i + j || i > h + j || j > h + i) && !z) pattern = false;
          if ((h == i + j || i == h + j || j == h + i) && z) pattern = false;
        }
      }
    }
    if (pattern) found.push_back(ord);
  }
  std::sort(found.begin(), found.end());
  return found;
}

template <class S>
DrgProfile<S> certify(const Graph& g, Tols tols = Tols{}) {
  DrgProfile<S> pr;
  pr.g = g;
  pr.tols = tols;
  pr.dist = distances(g);
  pr.D = pr.dist.D;
  if (pr.D < 3)
    fail(errc::diameter_too_small,
         "graph '" + g.name + "' has diameter " + std::to_string(pr.D) + " < 3");
  pr.p = intersection_numbers(g, pr.dist);
  pr.kdeg.clear();
  for (int i = 0; i <= pr.D; ++i) pr.kdeg.push_back(pr.p[0][i][i]);

  const std::size_t n = g.n;
  pr.A.clear();
  for (int i = 0; i <= pr.D; ++i) {
    Matrix<S> Ai(n, n);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (pr.dist.at(x, y) == i) Ai(x, y) = scalar_from_int<S>(1);
    pr.A.push_back(std::move(Ai));
  }

  std::vector<std::vector<long>> T = intersection_matrix(pr.p, pr.D);
  long valency = pr.kdeg[1];
  if constexpr (is_exact_v<S>) {
    pr.theta = spectrum_exact(T, valency);
    if (pr.theta[0] != rat(valency))
      fail(errc::numeric_failure, "largest eigenvalue is not the valency");
  } else {
    pr.theta = spectrum_float(T, valency);
    if (std::fabs(pr.theta[0] - static_cast<double>(valency)) > 1e-7 * std::max<double>(1, valency))
      fail(errc::numeric_failure, "largest eigenvalue is not the valency");
  }

  build_idempotents(pr);
  build_krein(pr);
  pr.orderings = find_qpoly_orderings(pr);
  return pr;
}

// One vertex per class of the stable distance-color refinement.  For a
// certified distance-regular graph every local count is constant, so this
// typically collapses to the single vertex 0; it is an inexpensive proxy
// for orbit representatives, not an isomorphism computation.
inline std::vector<int> representatives(const DistanceData& dist) {
  const std::size_t n = dist.n;
  std::vector<int> color(n, 0);
  int ncolors = 1;
  for (int round = 0; round < static_cast<int>(n); ++round) {
    std::map<std::vector<int>, int> sig_to_color;
    std::vector<int> next(n);
    for (std::size_t x = 0; x < n; ++x) {
      std::vector<int> sig;
      sig.push_back(color[x]);
      std::vector<int> pairs;
      for (std::size_t y = 0; y < n; ++y)
        pairs.push_back(dist.at(x, y) * (ncolors + 1) + color[y]);
      std::sort(pairs.begin(), pairs.end());
      sig.insert(sig.end(), pairs.begin(), pairs.end());
      auto it = sig_to_color.find(sig);
      if (it == sig_to_color.end())
        it = sig_to_color.emplace(std::move(sig), static_cast<int>(sig_to_color.size())).first;
      next[x] = it->second;
    }
    int nc = static_cast<int>(sig_to_color.size());
    bool stable = (nc == ncolors);
    color = std::move(next);
    ncolors = nc;
    if (stable) break;
  }
  std::vector<int> reps;
  std::vector<bool> seen(ncolors, false);
  for (std::size_t x = 0; x < n; ++x) {
    if (!seen[color[x]]) {
      seen[color[x]] = true;
      reps.push_back(static_cast<int>(x));
    }
  }
  return reps;
}

}  // namespace drgkit
