#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "drgkit/linalg.hpp"

namespace drgkit {

// A subspace of R^n held as an explicit basis matrix (one column per basis
// vector).  Float bases are orthonormal; exact bases are pairwise
// orthogonal primitive integer vectors.  tol is the rank tolerance the
// basis was built with (always 0 for the exact field).
template <class S>
struct Subspace {
  std::size_t ambient = 0;
  Matrix<S> basis;
  double tol = 0.0;

  std::size_t dim() const { return basis.cols(); }
};

template <class S>
Subspace<S> zero_subspace(std::size_t n) {
  Subspace<S> s;
  s.ambient = n;
  s.basis = Matrix<S>(n, 0);
  return s;
}

template <class S>
Subspace<S> full_space(std::size_t n, double tol = 0.0) {
  Subspace<S> s;
  s.ambient = n;
  s.basis = Matrix<S>::identity(n);
  s.tol = is_exact_v<S> ? 0.0 : tol;
  return s;
}

// Gram condition: float bases must be orthonormal to rounding accuracy,
// exact bases pairwise orthogonal with positive self products.
template <class S>
void validate_subspace(const Subspace<S>& s) {
  const std::size_t d = s.dim();
  if constexpr (is_exact_v<S>) {
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<S> cj = s.basis.col(j);
      if (sgn(dot(cj, cj)) <= 0)
        fail(errc::numeric_failure, "exact basis vector with nonpositive norm");
      for (std::size_t k = j + 1; k < d; ++k) {
        if (sgn(dot(cj, s.basis.col(k))) != 0)
          fail(errc::numeric_failure, "exact basis not orthogonal");
      }
    }
  } else {
    double worst = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<S> cj = s.basis.col(j);
      for (std::size_t k = j; k < d; ++k) {
        double g = to_double(dot(cj, s.basis.col(k)));
        double target = (j == k) ? 1.0 : 0.0;
        worst = std::max(worst, std::fabs(g - target));
      }
    }
    if (worst > 1e-10 * std::max<double>(1.0, static_cast<double>(d)))
      fail(errc::numeric_failure,
           "float basis not orthonormal, gram deviation " + std::to_string(worst));
  }
}

template <class S>
Subspace<S> make_subspace(std::size_t ambient, Matrix<S> basis, double tol) {
  Subspace<S> s;
  s.ambient = ambient;
  s.basis = std::move(basis);
  s.tol = is_exact_v<S> ? 0.0 : tol;
  validate_subspace(s);
  return s;
}

// Span of arbitrary generating columns.
template <class S>
Subspace<S> span(const Matrix<S>& cols, double rank_tol) {
  if (cols.rows() == 0) fail(errc::bad_argument, "span in zero-dimensional ambient");
  double hint = 0.0;
  if constexpr (!is_exact_v<S>) {
    for (std::size_t j = 0; j < cols.cols(); ++j) hint = std::max(hint, norm2(cols.col(j)));
  }
  return make_subspace(cols.rows(), orthogonal_basis(cols, rank_tol, hint), rank_tol);
}

// Subspace spanned by the given standard unit vectors; exact in both fields.
template <class S>
Subspace<S> coordinate_subspace(std::size_t n, std::vector<std::size_t> idx,
                                double tol = 0.0) {
  std::sort(idx.begin(), idx.end());
  Matrix<S> b(n, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    if (idx[j] >= n) fail(errc::bad_argument, "coordinate index out of range");
    b(idx[j], j) = scalar_from_int<S>(1);
  }
  return make_subspace(n, std::move(b), is_exact_v<S> ? 0.0 : tol);
}

// Orthogonal projection of v onto the subspace.
template <class S>
std::vector<S> project(const Subspace<S>& s, const std::vector<S>& v) {
  std::vector<S> out(s.ambient, scalar_from_int<S>(0));
  for (std::size_t j = 0; j < s.dim(); ++j) {
    std::vector<S> u = s.basis.col(j);
    S c = dot(u, v);
    if constexpr (is_exact_v<S>) {
      c /= dot(u, u);
      if (sgn(c) == 0) continue;
    }
    for (std::size_t i = 0; i < s.ambient; ++i) out[i] += c * u[i];
  }
  return out;
}

struct ContainResult {
  bool ok = false;
  double residual = 0.0;
};

// Relative containment residual |v - Pv| / max(1, |v|).  Exact field:
// membership is decided exactly, the residual is reported as a double.
template <class S>
ContainResult contains(const Subspace<S>& s, const std::vector<S>& v,
                       const Tols& tols = Tols{}) {
  std::vector<S> p = project(s, v);
  ContainResult r;
  if constexpr (is_exact_v<S>) {
    bool zero = true;
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      Rational d = v[i] - p[i];
      if (sgn(d) != 0) zero = false;
      double dd = to_double(d);
      acc += dd * dd;
    }
    r.residual = std::sqrt(acc) / std::max(1.0, norm2(v));
    r.ok = zero;
  } else {
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double d = v[i] - p[i];
      acc += d * d;
    }
    r.residual = std::sqrt(acc) / std::max(1.0, norm2(v));
    r.ok = r.residual <= tols.contain;
  }
  return r;
}

template <class S>
Subspace<S> sum(const Subspace<S>& a, const Subspace<S>& b) {
  if (a.ambient != b.ambient) fail(errc::bad_argument, "sum of mismatched ambients");
  double tol = std::max(a.tol, b.tol);
  return make_subspace(a.ambient,
                       orthogonal_basis(hcat(a.basis, b.basis), tol, 1.0), tol);
}

// Intersection via the kernel of the stacked system [Ba | -Bb]: a kernel
// vector (u; w) satisfies Ba u = Bb w, and that common image spans the
// intersection.  The map (u; w) -> Ba u is injective on the kernel, so the
// produced dimension must equal the kernel dimension.
template <class S>
Subspace<S> intersect(const Subspace<S>& a, const Subspace<S>& b) {
  if (a.ambient != b.ambient)
    fail(errc::bad_argument, "intersection of mismatched ambients");
  double tol = std::max(a.tol, b.tol);
  if (a.dim() == 0 || b.dim() == 0) return zero_subspace<S>(a.ambient);

  Matrix<S> stacked = hcat(a.basis, b.basis.scaled(scalar_from_int<S>(-1)));
  Matrix<S> ker = kernel_basis(stacked, tol, 1.0);
  Matrix<S> w(a.ambient, ker.cols());
  for (std::size_t j = 0; j < ker.cols(); ++j) {
    std::vector<S> u(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) u[i] = ker(i, j);
    std::vector<S> img = a.basis.apply(u);
    w.set_col(j, img);
  }
  Subspace<S> out = make_subspace(a.ambient, orthogonal_basis(w, tol, 1.0), tol);
  if (out.dim() != ker.cols())
    fail(errc::numeric_failure, "intersection rank drifted from kernel dimension");
  return out;
}

// Orthogonal complement of sub inside amb.  Requires sub to lie in amb;
// the result dimension is forced to dim(amb) - dim(sub).
template <class S>
Subspace<S> orth_complement_in(const Subspace<S>& sub, const Subspace<S>& amb,
                               const Tols& tols = Tols{}) {
  if (sub.ambient != amb.ambient)
    fail(errc::bad_argument, "complement of mismatched ambients");
  if (sub.dim() > amb.dim())
    fail(errc::bad_argument, "complement with sub larger than ambient space");
  for (std::size_t j = 0; j < sub.dim(); ++j) {
    ContainResult c = contains(amb, sub.basis.col(j), tols);
    if (!c.ok)
      fail(errc::numeric_failure,
           "complement precondition: sub not inside amb, residual " +
               std::to_string(c.residual));
  }
  const std::size_t want = amb.dim() - sub.dim();
  if (want == 0) return zero_subspace<S>(amb.ambient);

  Matrix<S> resid(amb.ambient, amb.dim());
  for (std::size_t j = 0; j < amb.dim(); ++j) {
    std::vector<S> b = amb.basis.col(j);
    std::vector<S> p = project(sub, b);
    for (std::size_t i = 0; i < amb.ambient; ++i) b[i] -= p[i];
    resid.set_col(j, b);
  }
  double tol = std::max(sub.tol, amb.tol);
  Matrix<S> basis;
  if constexpr (is_exact_v<S>) {
    basis = gram_schmidt_exact(resid);
  } else {
    Svd f = svd_factor(resid, false);
    std::size_t cut = rank_cut(f.s, tol, 1.0);
    if (cut != want)
      fail(errc::numeric_failure,
           "complement rank " + std::to_string(cut) + ", expected " +
               std::to_string(want));
    std::vector<std::size_t> idx(want);
    for (std::size_t i = 0; i < want; ++i) idx[i] = i;
    basis = f.U.columns(idx);
  }
  Subspace<S> out = make_subspace(amb.ambient, std::move(basis), tol);
  if (out.dim() != want)
    fail(errc::numeric_failure, "complement dimension mismatch");
  return out;
}

// Image of a subspace under a matrix.  The scale hint ties the rank
// decision to the operator size, so a vanishing image collapses to the
// zero subspace instead of keeping rounding noise.
template <class S>
Subspace<S> image(const Matrix<S>& m, const Subspace<S>& s) {
  Matrix<S> cols = m * s.basis;
  double hint = 0.0;
  if constexpr (!is_exact_v<S>) {
    double fro = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) fro += m(i, j) * m(i, j);
    hint = std::sqrt(fro);
  }
  return make_subspace(m.rows(), orthogonal_basis(cols, s.tol, hint), s.tol);
}

struct EqualResult {
  bool ok = false;
  double worst_residual = 0.0;
};

// Mutual containment of bases plus equal dimensions.
template <class S>
EqualResult subspace_equal(const Subspace<S>& a, const Subspace<S>& b,
                           const Tols& tols = Tols{}) {
  EqualResult r;
  r.ok = (a.dim() == b.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    ContainResult c = contains(b, a.basis.col(j), tols);
    r.worst_residual = std::max(r.worst_residual, c.residual);
    r.ok = r.ok && c.ok;
  }
  for (std::size_t j = 0; j < b.dim(); ++j) {
    ContainResult c = contains(a, b.basis.col(j), tols);
    r.worst_residual = std::max(r.worst_residual, c.residual);
    r.ok = r.ok && c.ok;
  }
  return r;
}

inline Subspace<double> to_float(const Subspace<Rational>& s) {
  Subspace<double> f;
  f.ambient = s.ambient;
  f.tol = 1e-12;
  Matrix<double> b = to_float(s.basis);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    std::vector<double> c = b.col(j);
    double n = norm2(c);
    for (double& x : c) x /= n;
    b.set_col(j, c);
  }
  f.basis = std::move(b);
  validate_subspace(f);
  return f;
}

inline const Subspace<double>& to_float(const Subspace<double>& s) { return s; }

}  // namespace drgkit
