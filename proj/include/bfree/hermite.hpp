#pragma once

#include <utility>
#include <vector>

#include "bfree/integer.hpp"

namespace bfree {

/// Column-style lower echelon form of an integer matrix.
///
/// `form == input * transform` with `transform` unimodular. The first `rank`
/// columns of `form` are the pivot columns: column j has its first nonzero
/// entry in row `pivot_rows[j]`, that entry is positive, and every entry to the
/// left of it in the same row is reduced into [0, pivot). The remaining
/// columns are zero, so the matching columns of `transform` span the integer
/// kernel of the input.
template <class Scalar>
struct Echelon {
  Matrix<Scalar> form;
  Matrix<Scalar> transform;
  Eigen::Index rank = 0;
  std::vector<Eigen::Index> pivot_rows;
};

namespace detail {

template <class Scalar>
void combine_columns(Matrix<Scalar>& a, Eigen::Index p, Eigen::Index j, const Scalar& x, const Scalar& y,
                     const Scalar& u, const Scalar& v) {
  // (col_p, col_j) <- (x*col_p + y*col_j, u*col_p + v*col_j)
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Scalar cp = a(r, p);
    Scalar cj = a(r, j);
    a(r, p) = x * cp + y * cj;
    a(r, j) = u * cp + v * cj;
  }
}

template <class Scalar>
void axpy_column(Matrix<Scalar>& a, Eigen::Index dst, Eigen::Index src, const Scalar& q) {
  // col_dst -= q * col_src
  for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, dst) -= q * a(r, src);
}

}  // namespace detail

template <class Scalar>
Echelon<Scalar> column_echelon(Matrix<Scalar> a, bool track_transform) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Echelon<Scalar> out;
  if (track_transform) out.transform = Matrix<Scalar>::Identity(cols, cols);

  Eigen::Index p = 0;
  for (Eigen::Index i = 0; i < rows && p < cols; ++i) {
    for (Eigen::Index j = p + 1; j < cols; ++j) {
      if (a(i, j) == 0) continue;
      if (a(i, p) == 0) {
        a.col(p).swap(a.col(j));
        if (track_transform) out.transform.col(p).swap(out.transform.col(j));
        continue;
      }
      ExtGcd<Scalar> e = ext_gcd(Scalar(a(i, p)), Scalar(a(i, j)));
      Scalar u = a(i, j) / e.g;
      Scalar v = -a(i, p) / e.g;
      detail::combine_columns(a, p, j, e.x, e.y, u, v);
      if (track_transform) detail::combine_columns(out.transform, p, j, e.x, e.y, u, v);
    }
    if (a(i, p) == 0) continue;
    if (a(i, p) < 0) {
      a.col(p) = -a.col(p);
      if (track_transform) out.transform.col(p) = -out.transform.col(p);
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      Scalar q = floor_div(Scalar(a(i, j)), Scalar(a(i, p)));
      if (q == 0) continue;
      detail::axpy_column(a, j, p, q);
      if (track_transform) detail::axpy_column(out.transform, j, p, q);
    }
    out.pivot_rows.push_back(i);
    ++p;
  }
  out.rank = p;
  out.form = std::move(a);
  return out;
}

/// Canonical lower-triangular basis of the full-rank lattice spanned by the
/// columns of `generators` (m rows). Returns false if the span has rank < m.
template <class Scalar>
bool lower_hermite_basis(const Matrix<Scalar>& generators, Matrix<Scalar>& basis) {
  const Eigen::Index m = generators.rows();
  if (generators.cols() < m) return false;
  Echelon<Scalar> e = column_echelon<Scalar>(generators, false);
  if (e.rank < m) return false;
  basis = e.form.leftCols(m);
  return true;
}

/// Integer kernel basis (columns) of `a`.
template <class Scalar>
Matrix<Scalar> integer_kernel(const Matrix<Scalar>& a) {
  Echelon<Scalar> e = column_echelon<Scalar>(a, true);
  return e.transform.rightCols(a.cols() - e.rank);
}

/// Exact determinant by fraction-free (Bareiss) elimination.
template <class Scalar>
Scalar determinant(Matrix<Scalar> a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return Scalar(1);
  Scalar sign = 1;
  Scalar prev = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index swap = -1;
      for (Eigen::Index r = k + 1; r < n; ++r) {
        if (a(r, k) != 0) {
          swap = r;
          break;
        }
      }
      if (swap < 0) return Scalar(0);
      a.row(k).swap(a.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
      }
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

}  // namespace bfree
