#pragma once

#include <vector>

#include "bfree/lattice.hpp"

namespace bfree {

/// The ring of integers of Q(sqrt d), with Z-basis (1, omega):
/// omega = sqrt d if d = 2,3 (mod 4) and (1 + sqrt d)/2 if d = 1 (mod 4).
class QuadraticRing {
 public:
  /// Throws Errc::NotSquarefree for non-squarefree d and InvalidArgument for d in {0, 1}.
  explicit QuadraticRing(long d);

  long d() const { return d_; }
  bool half_integral() const { return d_ % 4 == 1 || d_ % 4 == -3; }
  /// omega^2 == omega_sq_const + omega_sq_linear * omega
  const BigInt& omega_sq_const() const { return c0_; }
  const BigInt& omega_sq_linear() const { return c1_; }

  friend bool operator==(const QuadraticRing& a, const QuadraticRing& b) { return a.d_ == b.d_; }

 private:
  long d_;
  BigInt c0_;
  BigInt c1_;
};

/// a + b*omega
struct QuadElement {
  BigInt a;
  BigInt b;

  friend bool operator==(const QuadElement&, const QuadElement&) = default;
};

QuadElement add(const QuadElement& x, const QuadElement& y);
QuadElement subtract(const QuadElement& x, const QuadElement& y);
QuadElement multiply(const QuadraticRing& ring, const QuadElement& x, const QuadElement& y);
/// Field norm N(x) = x * conj(x).
BigInt field_norm(const QuadraticRing& ring, const QuadElement& x);
inline Point coords(const QuadElement& x) {
  Point p(2);
  p << x.a, x.b;
  return p;
}

/// A nonzero ideal of O_K, held as its Z-module in (1, omega) coordinates.
class QuadIdeal {
 public:
  /// Ideal generated (as an ideal) by the given elements. Throws ZeroElement if all are zero.
  static QuadIdeal generated_by(const QuadraticRing& ring, const std::vector<QuadElement>& generators);
  /// Wraps a Z-module, validating closure under multiplication by omega (Errc::NotAnIdeal).
  static QuadIdeal from_module(const QuadraticRing& ring, const Lattice& module);
  static QuadIdeal unit(const QuadraticRing& ring);

  const QuadraticRing& ring() const { return ring_; }
  const Lattice& module() const { return module_; }
  /// |O_K / a|
  const BigInt& norm() const { return module_.index(); }
  bool contains(const QuadElement& x) const { return bfree::contains(module_, coords(x)); }
  bool is_unit() const { return module_.is_whole(); }

  friend bool operator==(const QuadIdeal& a, const QuadIdeal& b) {
    return a.ring_ == b.ring_ && a.module_ == b.module_;
  }

 private:
  QuadIdeal(QuadraticRing ring, Lattice module) : ring_(ring), module_(std::move(module)) {}
  QuadraticRing ring_;
  Lattice module_;
};

/// Principal ideal x*O_K. Throws Errc::ZeroElement for x == 0.
QuadIdeal ideal_from_element(const QuadraticRing& ring, const QuadElement& x);
QuadIdeal ideal_sum(const QuadIdeal& a, const QuadIdeal& b);
QuadIdeal ideal_product(const QuadIdeal& a, const QuadIdeal& b);
QuadIdeal ideal_intersect(const QuadIdeal& a, const QuadIdeal& b);
bool ideal_coprime(const QuadIdeal& a, const QuadIdeal& b);
bool ideal_contained(const QuadIdeal& sub, const QuadIdeal& super);

/// Canonical representative of x modulo the ideal.
QuadElement reduce(const QuadIdeal& ideal, const QuadElement& x);

/// The x with x - residues[i] in ideals[i] for all i, reduced modulo the
/// product ideal. Ideals must be pairwise coprime (Errc::NotCoprime).
QuadElement crt(const std::vector<QuadIdeal>& ideals, const std::vector<QuadElement>& residues);

/// I_1 x ... x I_m in O_K^m.
struct ProductIdeal {
  std::vector<QuadIdeal> factors;

  std::size_t dim() const { return factors.size(); }
  BigInt norm() const;
  bool contains(const std::vector<QuadElement>& x) const;
};

bool product_coprime(const ProductIdeal& a, const ProductIdeal& b);
/// Coordinatewise CRT in O_K^m.
std::vector<QuadElement> crt(const std::vector<ProductIdeal>& ideals,
                             const std::vector<std::vector<QuadElement>>& residues);

}  // namespace bfree
