#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <vector>

#include "bfree/integer.hpp"

namespace bfree {

using Point = IntVector;

inline constexpr std::size_t kDefaultCosetLimit = 1'000'000;

/// A full-rank sublattice of Z^m in canonical form.
///
/// The basis columns generate the lattice; the basis is lower-triangular
/// with positive diagonal, and each entry left of the diagonal is reduced into
/// [0, diagonal of its row). Two lattices are equal iff their bases are equal.
class Lattice {
 public:
  /// Canonical lattice spanned by the columns of `generators` (m rows).
  /// Throws Errc::RankDeficient if the span has infinite index.
  static Lattice from_generators(const IntMatrix& generators);
  static Lattice whole(Eigen::Index dim);
  static Lattice diagonal(const std::vector<BigInt>& moduli);
  /// Wraps a basis that must already be canonical (checked).
  static Lattice from_canonical(IntMatrix basis);

  Eigen::Index dim() const { return basis_.rows(); }
  const IntMatrix& basis() const { return basis_; }
  const BigInt& index() const { return index_; }
  bool is_proper() const { return index_ > 1; }
  bool is_whole() const { return index_ == 1; }
  bool is_diagonal() const;
  std::vector<BigInt> diagonal_entries() const;

  friend bool operator==(const Lattice& a, const Lattice& b);
  /// Lexicographic on (dim, column 0, column 1, ...).
  friend std::strong_ordering operator<=>(const Lattice& a, const Lattice& b);

 private:
  explicit Lattice(IntMatrix canonical);
  IntMatrix basis_;
  BigInt index_;
};

/// An invertible integer matrix acting on Z^m by p -> matrix * p.
class UnimodularMap {
 public:
  /// Throws Errc::NotUnimodular unless det(matrix) is +1 or -1.
  explicit UnimodularMap(IntMatrix matrix);
  static UnimodularMap identity(Eigen::Index dim);

  Eigen::Index dim() const { return matrix_.rows(); }
  const IntMatrix& matrix() const { return matrix_; }
  const IntMatrix& inverse_matrix() const { return inverse_; }
  UnimodularMap inverse() const;
  friend bool operator==(const UnimodularMap& a, const UnimodularMap& b) { return a.dim() == b.dim() && a.matrix_ == b.matrix_; }

  Point apply(const Point& p) const { return matrix_.lazyProduct(p); }
  Point apply_inverse(const Point& p) const { return inverse_.lazyProduct(p); }
  /// this ∘ other
  UnimodularMap compose(const UnimodularMap& other) const;

 private:
  IntMatrix matrix_;
  IntMatrix inverse_;
};

Lattice hnf(const IntMatrix& generators);
inline const BigInt& index(const Lattice& l) { return l.index(); }
Lattice sum(const Lattice& a, const Lattice& b);
Lattice intersect(const Lattice& a, const Lattice& b);
Lattice intersect_all(const std::vector<Lattice>& lattices);
bool coprime(const Lattice& a, const Lattice& b);
bool contains(const Lattice& l, const Point& p);
bool is_sublattice(const Lattice& sub, const Lattice& super);

/// Canonical representative of p + L: coordinate i lies in [0, basis(i,i)).
Point reduce(const Lattice& l, const Point& p);

/// All points of the box prod [0, basis(i,i)), coordinate 0 varying fastest.
/// These are exactly index(l) pairwise incongruent representatives.
/// Throws Errc::TooLarge beyond `limit` cosets.
std::vector<Point> coset_reps(const Lattice& l, std::size_t limit = kDefaultCosetLimit);

/// Representatives of super / sub for sub ⊆ super, as points of Z^m.
std::vector<Point> relative_coset_reps(const Lattice& super, const Lattice& sub,
                                       std::size_t limit = kDefaultCosetLimit);

/// Canonical form of A(L).
Lattice transport(const UnimodularMap& a, const Lattice& l);

/// Coefficients c with basis * c == p, or nullopt if p is not in l.
std::optional<IntVector> coordinates(const Lattice& l, const Point& p);

}  // namespace bfree
