#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "drgkit/drg.hpp"

namespace drgkit {

// ====== local (subconstituent) algebra data at a base vertex ======

// Bundles everything the decompositions need at base vertex x under a
// fixed Q-polynomial ordering `ord` (new label -> natural label).  The
// dual adjacency matrix is diagonal, so it is kept as its diagonal.
template <class S>
struct LocalAlgebra {
  const DrgProfile<S>* pr = nullptr;
  int x = 0;
  std::vector<int> ord;
  std::vector<std::vector<std::size_t>> spheres;  // vertices at distance i from x
  std::vector<S> theta_q;      // theta under the ordering
  std::vector<S> theta_star;   // dual eigenvalues
  std::vector<S> astar;        // diagonal of the dual adjacency matrix

  std::size_t n() const { return pr->n(); }
  int D() const { return pr->D; }
  const Matrix<S>& A() const { return pr->A[1]; }
  const Matrix<S>& Eq(int i) const { return pr->E[ord[i]]; }
  const Matrix<S>& EBq(int i) const { return pr->EB[ord[i]]; }
  long multq(int i) const { return pr->mult[ord[i]]; }

  // dual distance matrix diagonal: n * row x of E_{ord[i]}
  std::vector<S> astar_i(int i) const {
    std::vector<S> d(n());
    for (std::size_t y = 0; y < n(); ++y)
      d[y] = Eq(i)(x, y) * scalar_from_int<S>(static_cast<long>(n()));
    return d;
  }
};

template <class S>
LocalAlgebra<S> local_algebra(const DrgProfile<S>& pr, const std::vector<int>& ord,
                              int x) {
  if (x < 0 || static_cast<std::size_t>(x) >= pr.n())
    fail(errc::vertex_out_of_range, "base vertex " + std::to_string(x));
  if (static_cast<int>(ord.size()) != pr.D + 1 || ord[0] != 0)
    fail(errc::bad_argument, "ordering must be a permutation of 0..D fixing 0");
  LocalAlgebra<S> la;
  la.pr = &pr;
  la.x = x;
  la.ord = ord;
  la.spheres.assign(pr.D + 1, {});
  for (std::size_t y = 0; y < pr.n(); ++y)
    la.spheres[pr.dist.at(x, y)].push_back(y);
  for (int i = 0; i <= pr.D; ++i) la.theta_q.push_back(pr.theta[ord[i]]);

  // theta*_i = n * (E_{ord[1]})_{x,y} for y at distance i; constant on the
  // distance class because E_{ord[1]} lies in the adjacency algebra
  const Matrix<S>& E1 = pr.E[ord[1]];
  const S nn = scalar_from_int<S>(static_cast<long>(pr.n()));
  double scale = 0.0;
  for (int i = 0; i <= pr.D; ++i) {
    S val = E1(x, la.spheres[i][0]) * nn;
    for (std::size_t y : la.spheres[i]) {
      S other = E1(x, y) * nn;
      if constexpr (is_exact_v<S>) {
        if (other != val)
          fail(errc::numeric_failure, "dual eigenvalue not constant on distance class");
      } else {
        if (std::fabs(other - val) > 1e-8 * std::max(1.0, std::fabs(val)))
          fail(errc::numeric_failure, "dual eigenvalue not constant on distance class");
      }
    }
    la.theta_star.push_back(val);
    scale = std::max(scale, std::fabs(to_double(val)));
  }
  for (int i = 0; i <= pr.D; ++i) {
    for (int j = i + 1; j <= pr.D; ++j) {
      if constexpr (is_exact_v<S>) {
        if (la.theta_star[i] == la.theta_star[j])
          fail(errc::degenerate_dual_eigenvalues,
               "theta*_" + std::to_string(i) + " equals theta*_" + std::to_string(j));
      } else {
        if (std::fabs(la.theta_star[i] - la.theta_star[j]) <= 1e-9 * std::max(1.0, scale))
          fail(errc::degenerate_dual_eigenvalues,
               "theta*_" + std::to_string(i) + " ~ theta*_" + std::to_string(j));
      }
    }
  }
  la.astar.assign(pr.n(), scalar_from_int<S>(0));
  for (int i = 0; i <= pr.D; ++i)
    for (std::size_t y : la.spheres[i]) la.astar[y] = la.theta_star[i];
  return la;
}

// ====== split decomposition ======

template <class S>
struct SplitDecomposition {
  int D = 0;
  std::size_t n = 0;
  std::vector<Subspace<S>> Sstar;              // cumulative spheres
  std::vector<Subspace<S>> SE;                 // cumulative ordered eigenspaces
  std::vector<std::vector<Subspace<S>>> V;     // V[i][j]
  std::vector<std::vector<Subspace<S>>> Vt;    // refined cells
  std::vector<std::vector<long>> vdims, vtdims;
};

template <class S>
SplitDecomposition<S> split_decomposition(const LocalAlgebra<S>& la) {
  const int D = la.D();
  const std::size_t n = la.n();
  const Tols tols = la.pr->tols;
  SplitDecomposition<S> sd;
  sd.D = D;
  sd.n = n;

  std::vector<std::size_t> acc;
  for (int i = 0; i <= D; ++i) {
    acc.insert(acc.end(), la.spheres[i].begin(), la.spheres[i].end());
    sd.Sstar.push_back(coordinate_subspace<S>(n, acc, tols.rank));
  }
  Matrix<S> eb = la.EBq(0);
  sd.SE.push_back(make_subspace<S>(n, eb, tols.rank));
  for (int j = 1; j <= D; ++j) {
    eb = hcat(eb, la.EBq(j));
    sd.SE.push_back(make_subspace<S>(n, eb, tols.rank));
  }

  sd.V.assign(D + 1, {});
  sd.vdims.assign(D + 1, std::vector<long>(D + 1, 0));
  for (int i = 0; i <= D; ++i) {
    for (int j = 0; j <= D; ++j) {
      sd.V[i].push_back(intersect(sd.Sstar[i], sd.SE[j]));
      sd.vdims[i][j] = static_cast<long>(sd.V[i][j].dim());
    }
  }
  if (sd.vdims[D][D] != static_cast<long>(n))
    fail(errc::numeric_failure, "top cell of the split grid is not the full space");

  auto vdim = [&](int i, int j) -> long {
    if (i < 0 || j < 0) return 0;
    return sd.vdims[i][j];
  };
  sd.Vt.assign(D + 1, {});
  sd.vtdims.assign(D + 1, std::vector<long>(D + 1, 0));
  long total = 0;
  for (int i = 0; i <= D; ++i) {
    for (int j = 0; j <= D; ++j) {
      Subspace<S> below =
          (j == 0) ? ((i == 0) ? zero_subspace<S>(n) : sd.V[i - 1][0])
                   : ((i == 0) ? sd.V[0][j - 1]
                               : sum(sd.V[i][j - 1], sd.V[i - 1][j]));
      Subspace<S> cell = orth_complement_in(below, sd.V[i][j], tols);
      long expect = vdim(i, j) - vdim(i, j - 1) - vdim(i - 1, j) + vdim(i - 1, j - 1);
      if (static_cast<long>(cell.dim()) != expect)
        fail(errc::numeric_failure,
             "refined cell (" + std::to_string(i) + "," + std::to_string(j) +
                 ") has dimension " + std::to_string(cell.dim()) + ", expected " +
                 std::to_string(expect));
      sd.vtdims[i][j] = static_cast<long>(cell.dim());
      total += sd.vtdims[i][j];
      sd.Vt[i].push_back(std::move(cell));
    }
  }
  if (total != static_cast<long>(n))
    fail(errc::numeric_failure, "refined cells do not fill the space");
  return sd;
}

// ====== displacement decomposition ======

template <class S>
struct Displacement {
  std::vector<Subspace<S>> Veta;  // indexed by displacement 0..D
  std::vector<long> dims;
};

template <class S>
Displacement<S> displacement_from_split(const SplitDecomposition<S>& sd,
                                        const Tols& tols) {
  const int D = sd.D;
  Displacement<S> out;
  for (int eta = 0; eta <= D; ++eta) {
    Matrix<S> cols(sd.n, 0);
    long want = 0;
    for (int i = 0; i <= D; ++i) {
      int j = D + eta - i;
      if (j < 0 || j > D) continue;
      cols = hcat(cols, sd.Vt[i][j].basis);
      want += sd.vtdims[i][j];
    }
    Subspace<S> v = make_subspace<S>(sd.n, orthogonal_basis(cols, tols.rank, 1.0),
                                     tols.rank);
    if (static_cast<long>(v.dim()) != want)
      fail(errc::numeric_failure,
           "displacement space " + std::to_string(eta) + " is not a direct sum");
    out.dims.push_back(want);
    out.Veta.push_back(std::move(v));
  }
  long total = 0;
  for (long d : out.dims) total += d;
  if (total != static_cast<long>(sd.n))
    fail(errc::numeric_failure, "displacement spaces do not fill the space");

  for (int a = 0; a <= D; ++a) {
    for (int b = a + 1; b <= D; ++b) {
      for (std::size_t ja = 0; ja < out.Veta[a].dim(); ++ja) {
        std::vector<S> u = out.Veta[a].basis.col(ja);
        for (std::size_t jb = 0; jb < out.Veta[b].dim(); ++jb) {
          S d = dot(u, out.Veta[b].basis.col(jb));
          if constexpr (is_exact_v<S>) {
            if (sgn(d) != 0)
              fail(errc::orthogonality_violation,
                   "displacement spaces " + std::to_string(a) + " and " +
                       std::to_string(b) + " not orthogonal");
          } else {
            if (std::fabs(d) > tols.contain)
              fail(errc::orthogonality_violation,
                   "displacement spaces " + std::to_string(a) + " and " +
                       std::to_string(b) + " not orthogonal");
          }
        }
      }
    }
  }
  return out;
}

// ====== float view used by the module oracle ======

struct LocalView {
  std::size_t n = 0;
  int D = 0;
  Matrix<double> A;
  std::vector<double> astar;
  std::vector<double> theta_q, theta_star;
  std::vector<Matrix<double>> Eq;
  std::vector<std::vector<std::size_t>> spheres;
};

template <class S>
LocalView make_view(const LocalAlgebra<S>& la) {
  LocalView v;
  v.n = la.n();
  v.D = la.D();
  v.A = to_float(la.A());
  for (const S& s : la.astar) v.astar.push_back(to_double(s));
  for (int i = 0; i <= v.D; ++i) {
    v.theta_q.push_back(to_double(la.theta_q[i]));
    v.theta_star.push_back(to_double(la.theta_star[i]));
    v.Eq.push_back(to_float(la.Eq(i)));
  }
  v.spheres = la.spheres;
  return v;
}

// ====== irreducible module oracle ======

struct ModuleRecord {
  Subspace<double> basis;
  int rho = 0, tau = 0, d = 0, dstar = 0, eta = 0;
  bool contiguous = true;
  std::vector<Subspace<double>> Wh;
};

struct OracleResult {
  std::vector<ModuleRecord> records;
  int attempts = 1;
  std::size_t commutant_dim = 0;
  std::uint64_t seed = 0;
};

constexpr std::size_t kDefaultOracleCap = 64;
// eigenvalues of the random commutant element closer than this (relative
// to its spectral radius) are treated as one module
constexpr double kClusterTol = 1e-6;
// threshold for "the module touches E*_i V / E_i V"
constexpr double kSupportTol = 1e-7;
// invariance and cross-route comparison tolerance
constexpr double kOracleTol = 1e-6;

namespace detail {

inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Kernel of M -> (AM-MA, A*M-MA*) via the spectral decomposition of the
// positive semidefinite normal operator G = L_A^2 + L_{A*}^2 on vec(M).
inline std::vector<Matrix<double>> commutant_basis(const LocalView& lv, Tols tols) {
  const std::size_t n = lv.n;
  Matrix<double> A2(n, n);
  A2 = lv.A * lv.A;
  const std::size_t N = n * n;
  Matrix<double> G(N, N);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t row = i + n * j;
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          double g = -2.0 * lv.A(j, l) * lv.A(i, k);
          if (j == l) g += A2(i, k);
          if (i == k) g += A2(j, l);
          if (i == k && j == l) {
            double da = lv.astar[i] - lv.astar[j];
            g += da * da;
          }
          G(row, k + n * l) = g;
        }
      }
    }
  }
  SymEig eig = sym_eig(G);
  double lmax = std::max(eig.values.back(), 0.0);
  std::vector<double> sv;  // singular values of the stacked operator, descending
  for (std::size_t t = eig.values.size(); t-- > 0;)
    sv.push_back(std::sqrt(std::max(eig.values[t], 0.0)));
  std::size_t rank = rank_cut(sv, tols.rank, std::sqrt(lmax));
  std::size_t kdim = N - rank;
  std::vector<Matrix<double>> basis;
  for (std::size_t t = 0; t < kdim; ++t) {
    Matrix<double> B(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) B(i, j) = eig.vectors(i + n * j, t);
    basis.push_back(std::move(B));
  }
  return basis;
}

// T-orbit closure of a random vector inside the candidate module, in the
// coordinates of the module itself.
inline bool orbit_spans(const Matrix<double>& Ain, const Matrix<double>& Astar_in,
                        std::size_t dimW, std::mt19937_64& rng) {
  std::vector<std::vector<double>> basis;
  auto add = [&](std::vector<double> v) {
    double n0 = norm2(v);
    for (const auto& b : basis) {
      double c = 0;
      for (std::size_t i = 0; i < v.size(); ++i) c += b[i] * v[i];
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
    double nr = norm2(v);
    if (nr <= 1e-8 * std::max(1.0, n0)) return false;
    for (double& x : v) x /= nr;
    basis.push_back(std::move(v));
    return true;
  };
  std::vector<double> v0(dimW);
  for (double& x : v0) x = 2.0 * unit_interval(rng) - 1.0;
  if (!add(v0)) return false;
  std::size_t head = 0;
  while (head < basis.size() && basis.size() < dimW) {
    std::vector<double> w = basis[head++];
    add(Ain.apply(w));
    if (basis.size() >= dimW) break;
    add(Astar_in.apply(w));
  }
  return basis.size() == dimW;
}

}  // namespace detail

// Fills record.Wh with the per-module split
//   W_h = (E*_rho W + ... + E*_{rho+h} W)  intersect  (E_tau W + ... + E_{tau+d-h} W)
// and asserts the dimensions add up to dim W.
inline void module_split(ModuleRecord& rec, const LocalView& lv, const Tols& tols) {
  rec.Wh.clear();
  const std::size_t n = lv.n;
  std::size_t total = 0;
  for (int h = 0; h <= rec.d; ++h) {
    // coordinate mask over spheres rho..rho+h applied to the basis
    std::vector<char> keep(n, 0);
    for (int i = rec.rho; i <= rec.rho + h; ++i)
      for (std::size_t y : lv.spheres[i]) keep[y] = 1;
    Matrix<double> left_cols(n, rec.basis.dim());
    for (std::size_t c = 0; c < rec.basis.dim(); ++c)
      for (std::size_t y = 0; y < n; ++y)
        left_cols(y, c) = keep[y] ? rec.basis.basis(y, c) : 0.0;
    Subspace<double> left =
        make_subspace<double>(n, orthogonal_basis(left_cols, tols.rank, 1.0), tols.rank);

    Matrix<double> esum(n, n);
    for (int j = rec.tau; j <= rec.tau + rec.d - h; ++j) esum = esum + lv.Eq[j];
    Subspace<double> right = image(esum, rec.basis);

    Subspace<double> wh = intersect(left, right);
    total += wh.dim();
    rec.Wh.push_back(std::move(wh));
  }
  if (total != rec.basis.dim())
    fail(errc::numeric_failure,
         "per-module split dimensions add to " + std::to_string(total) +
             ", module has " + std::to_string(rec.basis.dim()));
}

// Independent route: decompose the standard module into irreducible
// T-modules as eigenspaces of a random symmetric element of the commutant
// of {A, A*}.  Always runs in floating point.
inline OracleResult decompose_irreducible(const LocalView& lv, std::uint64_t seed,
                                          std::size_t cap = kDefaultOracleCap,
                                          Tols tols = Tols{}) {
  const std::size_t n = lv.n;
  if (n > cap)
    fail(errc::oracle_cap_exceeded,
         "graph has " + std::to_string(n) + " vertices, oracle cap is " +
             std::to_string(cap) + " (raise with --oracle-cap)");
  std::vector<Matrix<double>> comm = detail::commutant_basis(lv, tols);
  if (comm.empty()) fail(errc::numeric_failure, "empty commutant");

  std::string why;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::uint64_t s = attempt == 0 ? seed : mix_seed(seed + static_cast<std::uint64_t>(attempt));
    std::mt19937_64 rng(mix_seed(s));
    Matrix<double> H(n, n);
    for (const Matrix<double>& B : comm) {
      double c = 2.0 * detail::unit_interval(rng) - 1.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) H(i, j) += c * 0.5 * (B(i, j) + B(j, i));
    }
    SymEig eig = sym_eig(H);
    double radius = 0.0;
    for (double v : eig.values) radius = std::max(radius, std::fabs(v));
    if (radius <= 0.0) {
      why = "random commutant element vanished";
      continue;
    }

    std::vector<std::pair<std::size_t, std::size_t>> clusters;  // [begin,end)
    std::size_t begin = 0;
    for (std::size_t t = 1; t <= eig.values.size(); ++t) {
      if (t == eig.values.size() || eig.values[t] - eig.values[t - 1] > kClusterTol * radius) {
        clusters.push_back({begin, t});
        begin = t;
      }
    }

    std::vector<ModuleRecord> records;
    bool good = true;
    for (auto [b, e] : clusters) {
      std::vector<std::size_t> idx;
      for (std::size_t t = b; t < e; ++t) idx.push_back(t);
      ModuleRecord rec;
      rec.basis = make_subspace<double>(n, eig.vectors.columns(idx), tols.rank);
      const std::size_t dw = rec.basis.dim();

      // invariance of the eigenspace under A and A*
      Matrix<double> AW = lv.A * rec.basis.basis;
      Matrix<double> AsW(n, dw);
      for (std::size_t c = 0; c < dw; ++c)
        for (std::size_t y = 0; y < n; ++y)
          AsW(y, c) = lv.astar[y] * rec.basis.basis(y, c);
      double inv_res = 0.0;
      for (std::size_t c = 0; c < dw; ++c) {
        inv_res = std::max(inv_res, contains(rec.basis, AW.col(c)).residual);
        inv_res = std::max(inv_res, contains(rec.basis, AsW.col(c)).residual);
      }
      if (inv_res > kOracleTol) {
        good = false;
        why = "eigenspace not invariant, residual " + std::to_string(inv_res);
        break;
      }

      // restrictions in module coordinates; the orbit test runs there
      Matrix<double> Bt = rec.basis.basis.transpose();
      Matrix<double> Ain = Bt * AW;
      Matrix<double> Asin = Bt * AsW;
      if (!detail::orbit_spans(Ain, Asin, dw, rng)) {
        good = false;
        why = "orbit of a random vector does not span the eigenspace";
        break;
      }

      // endpoint data from projections onto spheres / ordered eigenspaces
      std::vector<char> star_hit(lv.D + 1, 0), e_hit(lv.D + 1, 0);
      for (int i = 0; i <= lv.D; ++i) {
        double best = 0.0;
        for (std::size_t c = 0; c < dw; ++c) {
          double acc = 0.0;
          for (std::size_t y : lv.spheres[i]) {
            double v = rec.basis.basis(y, c);
            acc += v * v;
          }
          best = std::max(best, std::sqrt(acc));
        }
        star_hit[i] = best > kSupportTol;
        best = 0.0;
        Matrix<double> EW = lv.Eq[i] * rec.basis.basis;
        for (std::size_t c = 0; c < dw; ++c) best = std::max(best, norm2(EW.col(c)));
        e_hit[i] = best > kSupportTol;
      }
      auto interval = [&](const std::vector<char>& hit, int& lo, int& cnt) {
        lo = -1;
        int hi = -1;
        cnt = 0;
        for (int i = 0; i <= lv.D; ++i) {
          if (hit[i]) {
            if (lo < 0) lo = i;
            hi = i;
            ++cnt;
          }
        }
        return lo >= 0 && cnt == hi - lo + 1;
      };
      int cnt_star = 0, cnt_e = 0;
      bool c1 = interval(star_hit, rec.rho, cnt_star);
      bool c2 = interval(e_hit, rec.tau, cnt_e);
      rec.contiguous = c1 && c2;
      if (!rec.contiguous) {
        good = false;
        why = "module support is not an interval";
        break;
      }
      rec.d = cnt_star - 1;
      rec.dstar = cnt_e - 1;
      rec.eta = rec.rho + rec.tau + rec.d - lv.D;
      records.push_back(std::move(rec));
    }
    if (!good) continue;

    std::size_t total = 0;
    for (const ModuleRecord& r : records) total += r.basis.dim();
    if (total != n) {
      why = "module dimensions do not fill the space";
      continue;
    }
    for (ModuleRecord& r : records) module_split(r, lv, tols);

    OracleResult out;
    out.records = std::move(records);
    out.attempts = attempt + 1;
    out.commutant_dim = comm.size();
    out.seed = seed;
    return out;
  }
  fail(errc::irreducibility_not_certified, "after 8 attempts: " + why);
}

// ====== verification battery ======

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst_residual = 0.0;
  std::string witness;
};

struct VerificationReport {
  int x = 0;
  std::vector<int> ordering;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  bool all_pass = true;
};

namespace detail {

template <class S>
void track(CheckResult& c, const ContainResult& r, const std::string& where) {
  if (r.residual > c.worst_residual) {
    c.worst_residual = r.residual;
    c.witness = where;
  }
  if (!r.ok) {
    c.pass = false;
    if (c.witness.empty()) c.witness = where;
  }
}

inline void track_eq(CheckResult& c, const EqualResult& r, const std::string& where) {
  if (r.worst_residual > c.worst_residual) {
    c.worst_residual = r.worst_residual;
    c.witness = where;
  }
  if (!r.ok) {
    c.pass = false;
    c.witness = where;
  }
}

}  // namespace detail

// Runs the eight structural checks against one base vertex: the raw
// tridiagonal relations, both cumulative shift identities, vanishing and
// shift laws of the refined grid, per-module integer laws, agreement of
// the two displacement routes, per-module split containment, and the
// intersection characterization of the refined cells.
template <class S>
VerificationReport verify_all(const LocalAlgebra<S>& la, const SplitDecomposition<S>& sd,
                              const Displacement<S>& disp, const OracleResult& oracle) {
  const int D = la.D();
  const std::size_t n = la.n();
  const Tols tols = la.pr->tols;
  const Tols cmp{tols.rank, kOracleTol};
  VerificationReport rep;
  rep.x = la.x;
  rep.ordering = la.ord;
  rep.seed = oracle.seed;

  // V1: A maps a sphere into the three adjacent spheres; A* maps an
  // ordered eigenspace into the three adjacent ones.
  {
    CheckResult c{"tridiagonal_actions"};
    const int* dx = &la.pr->dist.d[static_cast<std::size_t>(la.x) * n];
    for (int i = 0; i <= D; ++i) {
      for (std::size_t y : la.spheres[i]) {
        std::vector<S> col = la.A().col(y);
        double out2 = 0.0, all2 = 0.0;
        bool exact_ok = true;
        for (std::size_t z = 0; z < n; ++z) {
          double vz = to_double(col[z]);
          all2 += vz * vz;
          if (std::abs(dx[z] - i) > 1) {
            out2 += vz * vz;
            if (!scalar_is_zero(col[z])) exact_ok = false;
          }
        }
        ContainResult r;
        r.residual = std::sqrt(out2) / std::max(1.0, std::sqrt(all2));
        r.ok = is_exact_v<S> ? exact_ok : r.residual <= tols.contain;
        detail::track<S>(c, r, "A on sphere " + std::to_string(i));
      }
      Matrix<S> lo = la.EBq(std::max(i - 1, 0));
      Matrix<S> three = (i > 0) ? hcat(lo, la.EBq(i)) : la.EBq(i);
      if (i < D) three = hcat(three, la.EBq(i + 1));
      Subspace<S> target = make_subspace<S>(n, three, tols.rank);
      Matrix<S> src = la.EBq(i);
      for (std::size_t cidx = 0; cidx < src.cols(); ++cidx) {
        std::vector<S> v = src.col(cidx);
        for (std::size_t y = 0; y < n; ++y) v[y] = v[y] * la.astar[y];
        detail::track<S>(c, contains(target, v, tols),
                         "A* on eigenspace " + std::to_string(i));
      }
    }
    rep.checks.push_back(c);
  }

  // V2: (A - theta_i) maps the cumulative eigenspace sum onto the previous
  // one, and dually for A* on cumulative spheres.
  {
    CheckResult c{"cumulative_shift"};
    for (int i = 0; i <= D; ++i) {
      Matrix<S> M = la.A();
      for (std::size_t z = 0; z < n; ++z) M(z, z) -= la.theta_q[i];
      Subspace<S> img = image(M, sd.SE[i]);
      Subspace<S> target = (i == 0) ? zero_subspace<S>(n) : sd.SE[i - 1];
      detail::track_eq(c, subspace_equal(img, target, tols),
                       "(A - theta_" + std::to_string(i) + ") on cumulative eigenspaces");

      Matrix<S> Ms(n, n);
      for (std::size_t z = 0; z < n; ++z) Ms(z, z) = la.astar[z] - la.theta_star[i];
      Subspace<S> img2 = image(Ms, sd.Sstar[i]);
      Subspace<S> target2 = (i == 0) ? zero_subspace<S>(n) : sd.Sstar[i - 1];
      detail::track_eq(c, subspace_equal(img2, target2, tols),
                       "(A* - theta*_" + std::to_string(i) + ") on cumulative spheres");
    }
    rep.checks.push_back(c);
  }

  // V3: cells below the antidiagonal vanish.
  {
    CheckResult c{"split_vanishing"};
    for (int i = 0; i <= D; ++i) {
      for (int j = 0; i + j < D; ++j) {
        if (sd.vdims[i][j] != 0) {
          c.pass = false;
          c.worst_residual = std::max(c.worst_residual,
                                      static_cast<double>(sd.vdims[i][j]));
          c.witness = "V_(" + std::to_string(i) + "," + std::to_string(j) + ") has dim " +
                      std::to_string(sd.vdims[i][j]);
        }
      }
    }
    rep.checks.push_back(c);
  }

  // V4: shift maps move refined cells one step along the antidiagonal.
  {
    CheckResult c{"split_shift"};
    for (int i = 0; i <= D; ++i) {
      for (int j = 0; j <= D; ++j) {
        const Subspace<S>& cell = sd.Vt[i][j];
        if (cell.dim() == 0) continue;
        Subspace<S> down = (i + 1 <= D && j - 1 >= 0) ? sd.Vt[i + 1][j - 1]
                                                      : zero_subspace<S>(n);
        Subspace<S> up = (i - 1 >= 0 && j + 1 <= D) ? sd.Vt[i - 1][j + 1]
                                                    : zero_subspace<S>(n);
        for (std::size_t cidx = 0; cidx < cell.dim(); ++cidx) {
          std::vector<S> u = cell.basis.col(cidx);
          std::vector<S> v = la.A().apply(u);
          for (std::size_t z = 0; z < n; ++z) v[z] -= la.theta_q[j] * u[z];
          detail::track<S>(c, contains(down, v, tols),
                           "(A - theta_" + std::to_string(j) + ") on cell (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
          std::vector<S> w(n);
          for (std::size_t z = 0; z < n; ++z)
            w[z] = (la.astar[z] - la.theta_star[i]) * u[z];
          detail::track<S>(c, contains(up, w, tols),
                           "(A* - theta*_" + std::to_string(i) + ") on cell (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
    rep.checks.push_back(c);
  }

  // V5: integer laws for every module record.
  {
    CheckResult c{"module_invariants"};
    for (std::size_t r = 0; r < oracle.records.size(); ++r) {
      const ModuleRecord& m = oracle.records[r];
      auto bad = [&](const std::string& what) {
        c.pass = false;
        c.worst_residual = 1.0;
        if (c.witness.empty())
          c.witness = "module " + std::to_string(r) + ": " + what;
      };
      if (2 * m.rho + m.d < D) bad("2*rho + d < D");
      if (2 * m.tau + m.d < D) bad("2*tau + d < D");
      if (m.rho + m.d > D) bad("rho + d > D");
      if (m.tau + m.d > D) bad("tau + d > D");
      if (m.eta < 0 || m.eta > D) bad("displacement out of range");
      if (m.d != m.dstar) bad("diameter differs from dual diameter");
      if (!m.contiguous) bad("support not an interval");
    }
    rep.checks.push_back(c);
  }

  // V6: displacement spaces from the refined grid match the span of the
  // oracle modules of equal displacement.
  {
    CheckResult c{"displacement_match"};
    for (int eta = 0; eta <= D; ++eta) {
      Matrix<double> cols(n, 0);
      for (const ModuleRecord& m : oracle.records)
        if (m.eta == eta) cols = hcat(cols, m.basis.basis);
      Subspace<double> from_modules = make_subspace<double>(n, std::move(cols), cmp.rank);
      Subspace<double> from_split = to_float(disp.Veta[eta]);
      detail::track_eq(c, subspace_equal(from_split, from_modules, cmp),
                       "displacement " + std::to_string(eta));
    }
    rep.checks.push_back(c);
  }

  // V7: each per-module split cell lands in the predicted refined cell.
  {
    CheckResult c{"module_split_containment"};
    for (std::size_t r = 0; r < oracle.records.size(); ++r) {
      const ModuleRecord& m = oracle.records[r];
      for (int h = 0; h <= m.d && h < static_cast<int>(m.Wh.size()); ++h) {
        int ci = m.rho + h, cj = m.tau + m.d - h;
        if (ci > D || cj > D) continue;
        Subspace<double> cell = to_float(sd.Vt[ci][cj]);
        for (std::size_t cidx = 0; cidx < m.Wh[h].dim(); ++cidx) {
          detail::track<double>(c, contains(cell, m.Wh[h].basis.col(cidx), cmp),
                                "module " + std::to_string(r) + " slot " +
                                    std::to_string(h) + " vs cell (" +
                                    std::to_string(ci) + "," + std::to_string(cj) + ")");
        }
      }
    }
    rep.checks.push_back(c);
  }

  // V8: refined cells are recovered as V_ij intersect V_eta.
  {
    CheckResult c{"intersection_refinement"};
    for (int i = 0; i <= D; ++i) {
      for (int j = 0; j <= D; ++j) {
        if (i + j < D) continue;
        Subspace<S> x = intersect(sd.V[i][j], disp.Veta[i + j - D]);
        detail::track_eq(c, subspace_equal(x, sd.Vt[i][j], tols),
                         "cell (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
    rep.checks.push_back(c);
  }

  rep.all_pass = true;
  for (const CheckResult& c : rep.checks) rep.all_pass = rep.all_pass && c.pass;
  return rep;
}

// ====== dual width ======

template <class S>
int dual_width(const DrgProfile<S>& pr, const std::vector<int>& ord,
               const std::vector<S>& v) {
  const Tols tols = pr.tols;
  double nv = norm2(v);
  bool zero = true;
  for (const S& s : v)
    if (!scalar_is_zero(s)) {
      zero = false;
      break;
    }
  if (zero) fail(errc::zero_vector, "dual width of the zero vector");
  int g = 0;
  for (int i = 0; i <= pr.D; ++i) {
    std::vector<S> ev = pr.E[ord[i]].apply(v);
    bool hit;
    if constexpr (is_exact_v<S>) {
      hit = false;
      for (const S& s : ev)
        if (!scalar_is_zero(s)) {
          hit = true;
          break;
        }
    } else {
      hit = norm2(ev) > tols.contain * std::max(1.0, nv);
    }
    if (hit) g = i;
  }
  return g;
}

struct DualWidthResult {
  int g = 0;
  long min_margin = 0;  // min over x of (max distance from x into supp(v)) - (D - g)
  int tight_x = 0;
  bool ok = false;
  std::vector<std::size_t> support;
};

// Every vertex must see some support vertex at distance at least D - g.
template <class S>
DualWidthResult check_dual_width_bound(const DrgProfile<S>& pr,
                                       const std::vector<int>& ord,
                                       const std::vector<S>& v) {
  DualWidthResult out;
  out.g = dual_width(pr, ord, v);
  double vmax = 0.0;
  for (const S& s : v) vmax = std::max(vmax, std::fabs(to_double(s)));
  for (std::size_t y = 0; y < v.size(); ++y) {
    bool in;
    if constexpr (is_exact_v<S>) {
      in = !scalar_is_zero(v[y]);
    } else {
      in = std::fabs(v[y]) > pr.tols.contain * std::max(1.0, vmax);
    }
    if (in) out.support.push_back(y);
  }
  out.min_margin = pr.D + 1;
  for (std::size_t x = 0; x < pr.n(); ++x) {
    int far = 0;
    for (std::size_t y : out.support) far = std::max(far, pr.dist.at(x, y));
    long margin = far - (pr.D - out.g);
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.tight_x = static_cast<int>(x);
    }
  }
  out.ok = out.min_margin >= 0;
  return out;
}

// ====== per-vertex pipeline ======

template <class S>
struct VertexAnalysis {
  LocalAlgebra<S> local;
  SplitDecomposition<S> split;
  Displacement<S> disp;
  std::optional<OracleResult> oracle;
  std::optional<VerificationReport> report;
};

template <class S>
VertexAnalysis<S> analyze_vertex(const DrgProfile<S>& pr, const std::vector<int>& ord,
                                 int x, bool with_oracle, bool with_verify,
                                 std::uint64_t seed,
                                 std::size_t oracle_cap = kDefaultOracleCap) {
  VertexAnalysis<S> va{local_algebra(pr, ord, x), {}, {}, {}, {}};
  va.split = split_decomposition(va.local);
  va.disp = displacement_from_split(va.split, pr.tols);
  if (with_oracle || with_verify) {
    LocalView lv = make_view(va.local);
    va.oracle = decompose_irreducible(lv, seed, oracle_cap, pr.tols);
    if (with_verify)
      va.report = verify_all(va.local, va.split, va.disp, *va.oracle);
  }
  return va;
}

}  // namespace drgkit
