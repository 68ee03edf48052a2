#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <vector>

#include "drgkit/matrix.hpp"

namespace drgkit {

// ====== rank decisions (float mode) ======

// Singular values arrive in descending order.  The cut is placed at the
// largest consecutive relative gap when that gap exceeds 1e6, otherwise at
// the absolute threshold tol * max(s_max, scale_hint).  scale_hint carries
// the natural magnitude of the input so that an all-noise matrix (for
// example the image of a vanishing operator) gets rank 0 instead of
// rescuing its own rounding errors.
inline std::size_t rank_cut(const std::vector<double>& s, double tol,
                            double scale_hint) {
  if (s.empty()) return 0;
  const double smax = s[0];
  const double base = std::max(smax, scale_hint);
  if (base <= 0.0) return 0;
  const double noise = 1e3 * std::numeric_limits<double>::epsilon() * base;
  if (smax <= noise) return 0;
  const double tol_abs = tol * base;

  std::size_t abs_rank = 0;
  while (abs_rank < s.size() && s[abs_rank] > tol_abs) ++abs_rank;

  std::size_t best_k = 0;
  double best_ratio = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    if (s[k - 1] <= noise) break;
    double ratio = s[k] > 0.0 ? s[k - 1] / s[k]
                              : std::numeric_limits<double>::infinity();
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_k = k;
    }
  }
  if (best_ratio > 1e6) return best_k;
  return abs_rank;
}

// ====== Eigen bridges ======

inline Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
  Matrix<double> m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

struct Svd {
  std::vector<double> s;  // descending
  Matrix<double> U;
  Matrix<double> V;
};

inline Svd svd_factor(const Matrix<double>& m, bool full_v) {
  Svd out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.U = Matrix<double>(m.rows(), 0);
    out.V = full_v ? Matrix<double>::identity(m.cols()) : Matrix<double>(m.cols(), 0);
    return out;
  }
  Eigen::MatrixXd e = to_eigen(m);
  unsigned opts = Eigen::ComputeThinU | (full_v ? Eigen::ComputeFullV : Eigen::ComputeThinV);
  // JacobiSVD: BDCSVD in Eigen 3.4.0 can emit NaN factors on inputs with
  // clustered singular values, and these matrices stay small
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(e, opts);
  const auto& sv = svd.singularValues();
  out.s.assign(sv.data(), sv.data() + sv.size());
  out.U = from_eigen(svd.matrixU());
  out.V = from_eigen(svd.matrixV());
  return out;
}

struct SymEig {
  std::vector<double> values;  // ascending
  Matrix<double> vectors;      // columns
};

inline SymEig sym_eig(const Matrix<double>& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
  if (es.info() != Eigen::Success)
    fail(errc::numeric_failure, "symmetric eigensolver did not converge");
  SymEig out;
  const auto& ev = es.eigenvalues();
  out.values.assign(ev.data(), ev.data() + ev.size());
  out.vectors = from_eigen(es.eigenvectors());
  return out;
}

struct GeneralEig {
  std::vector<double> re, im;
};

inline GeneralEig eig_general(const Matrix<double>& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m));
  if (es.info() != Eigen::Success)
    fail(errc::numeric_failure, "eigensolver did not converge");
  GeneralEig out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    out.re.push_back(es.eigenvalues()(i).real());
    out.im.push_back(es.eigenvalues()(i).imag());
  }
  return out;
}

// ====== exact elimination ======

// Scales a rational vector to a primitive integer vector (lcm of
// denominators in, gcd of numerators out, leading nonzero positive).
// Preserves the line spanned by the vector; keeps entry sizes in check.
inline void primitive_rescale(std::vector<Rational>& v) {
  mpz_class den_lcm = 1, num_gcd = 0;
  for (const Rational& x : v) {
    if (sgn(x) == 0) continue;
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
  }
  for (Rational& x : v) x *= Rational(den_lcm);
  for (const Rational& x : v) {
    if (sgn(x) == 0) continue;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), x.get_num().get_mpz_t());
  }
  if (num_gcd == 0) return;
  int lead = 0;
  for (const Rational& x : v) {
    if (sgn(x) != 0) {
      lead = sgn(x);
      break;
    }
  }
  if (lead < 0) num_gcd = -num_gcd;
  for (Rational& x : v) {
    x /= Rational(num_gcd);
    x.canonicalize();
  }
}

// Classical Gram-Schmidt without normalization.  Dependent columns drop
// out as exact zeros; survivors are pairwise orthogonal primitive vectors.
inline Matrix<Rational> gram_schmidt_exact(const Matrix<Rational>& cols) {
  const std::size_t n = cols.rows();
  std::vector<std::vector<Rational>> basis;
  std::vector<Rational> selfdots;
  for (std::size_t j = 0; j < cols.cols(); ++j) {
    std::vector<Rational> w = cols.col(j);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Rational c = dot(w, basis[b]) / selfdots[b];
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < n; ++i) w[i] -= c * basis[b][i];
    }
    bool zero = true;
    for (const Rational& x : w)
      if (sgn(x) != 0) {
        zero = false;
        break;
      }
    if (zero) continue;
    primitive_rescale(w);
    selfdots.push_back(dot(w, w));
    basis.push_back(std::move(w));
  }
  Matrix<Rational> out(n, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) out.set_col(j, basis[j]);
  return out;
}

// Reduced row echelon form in place; returns pivot column indices.
inline std::vector<std::size_t> rref_exact(Matrix<Rational>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t sel = m.rows();
    for (std::size_t i = r; i < m.rows(); ++i)
      if (sgn(m(i, c)) != 0) {
        sel = i;
        break;
      }
    if (sel == m.rows()) continue;
    if (sel != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(sel, j));
    Rational inv = m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) /= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline Matrix<Rational> kernel_exact(const Matrix<Rational>& m) {
  Matrix<Rational> r = m;
  std::vector<std::size_t> pivots = rref_exact(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix<Rational> k(m.cols(), free_cols.size());
  for (std::size_t fj = 0; fj < free_cols.size(); ++fj) {
    std::size_t f = free_cols[fj];
    k(f, fj) = rat(1);
    for (std::size_t pi = 0; pi < pivots.size(); ++pi)
      k(pivots[pi], fj) = -r(pi, f);
  }
  return k;
}

inline std::size_t rank_exact(const Matrix<Rational>& m) {
  Matrix<Rational> r = m;
  return rref_exact(r).size();
}

// ====== field-generic entry points ======

// Basis of the column span: orthonormal (float) or pairwise orthogonal
// primitive (exact).
template <class S>
Matrix<S> orthogonal_basis(const Matrix<S>& cols, double rank_tol,
                           double scale_hint) {
  if constexpr (is_exact_v<S>) {
    (void)rank_tol;
    (void)scale_hint;
    return gram_schmidt_exact(cols);
  } else {
    if (cols.cols() == 0) return cols;
    Svd f = svd_factor(cols, false);
    std::size_t r = rank_cut(f.s, rank_tol, scale_hint);
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    return f.U.columns(idx);
  }
}

template <class S>
Matrix<S> kernel_basis(const Matrix<S>& m, double rank_tol, double scale_hint) {
  if constexpr (is_exact_v<S>) {
    (void)rank_tol;
    (void)scale_hint;
    return kernel_exact(m);
  } else {
    if (m.rows() == 0 || m.cols() == 0) return Matrix<S>::identity(m.cols());
    Svd f = svd_factor(m, true);
    std::size_t r = rank_cut(f.s, rank_tol, scale_hint);
    std::vector<std::size_t> idx;
    for (std::size_t c = r; c < m.cols(); ++c) idx.push_back(c);
    return f.V.columns(idx);
  }
}

}  // namespace drgkit
