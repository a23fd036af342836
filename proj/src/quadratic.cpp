#include "bfree/quadratic.hpp"

#include "bfree/error.hpp"
#include "bfree/hermite.hpp"

namespace bfree {

namespace {

bool squarefree(long d) {
  long n = d < 0 ? -d : d;
  for (long p = 2; p * p <= n; ++p)
    if (n % (p * p) == 0) return false;
  return true;
}

QuadElement element_of(const IntVector& column) { return {column(0), column(1)}; }

void require_same_ring(const QuadIdeal& a, const QuadIdeal& b) {
  if (!(a.ring() == b.ring())) fail(Errc::InvalidArgument, "ideals belong to different rings");
}

std::vector<QuadElement> basis_elements(const QuadIdeal& a) {
  return {element_of(a.module().basis().col(0)), element_of(a.module().basis().col(1))};
}

}  // namespace

QuadraticRing::QuadraticRing(long d) : d_(d) {
  if (d == 0 || d == 1) fail(Errc::InvalidArgument, "quadratic ring needs d not in {0, 1}");
  if (!squarefree(d)) fail(Errc::NotSquarefree, "d = " + std::to_string(d) + " is not squarefree");
  if (half_integral()) {
    c0_ = (d - 1) / 4;
    c1_ = 1;
  } else {
    c0_ = d;
    c1_ = 0;
  }
}

QuadElement add(const QuadElement& x, const QuadElement& y) { return {x.a + y.a, x.b + y.b}; }
QuadElement subtract(const QuadElement& x, const QuadElement& y) { return {x.a - y.a, x.b - y.b}; }

QuadElement multiply(const QuadraticRing& ring, const QuadElement& x, const QuadElement& y) {
  BigInt bb = x.b * y.b;
  return {x.a * y.a + bb * ring.omega_sq_const(), x.a * y.b + x.b * y.a + bb * ring.omega_sq_linear()};
}

BigInt field_norm(const QuadraticRing& ring, const QuadElement& x) {
  if (ring.half_integral()) return x.a * x.a + x.a * x.b - x.b * x.b * ring.omega_sq_const();
  return x.a * x.a - x.b * x.b * ring.omega_sq_const();
}

QuadIdeal QuadIdeal::generated_by(const QuadraticRing& ring, const std::vector<QuadElement>& generators) {
  const QuadElement omega{0, 1};
  std::vector<IntVector> cols;
  for (const QuadElement& g : generators) {
    if (g.a == 0 && g.b == 0) continue;
    cols.push_back(coords(g));
    cols.push_back(coords(multiply(ring, g, omega)));
  }
  if (cols.empty()) fail(Errc::ZeroElement, "ideal generated by zero");
  IntMatrix m(2, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = cols[j];
  return QuadIdeal(ring, hnf(m));
}

QuadIdeal QuadIdeal::from_module(const QuadraticRing& ring, const Lattice& module) {
  if (module.dim() != 2) fail(Errc::DimensionMismatch, "quadratic ideals live in Z^2");
  const QuadElement omega{0, 1};
  for (Eigen::Index j = 0; j < 2; ++j) {
    QuadElement w = multiply(ring, element_of(module.basis().col(j)), omega);
    if (!bfree::contains(module, coords(w))) fail(Errc::NotAnIdeal, "module is not closed under multiplication by omega");
  }
  return QuadIdeal(ring, module);
}

QuadIdeal QuadIdeal::unit(const QuadraticRing& ring) { return QuadIdeal(ring, Lattice::whole(2)); }

QuadIdeal ideal_from_element(const QuadraticRing& ring, const QuadElement& x) {
  if (x.a == 0 && x.b == 0) fail(Errc::ZeroElement, "principal ideal of zero");
  return QuadIdeal::generated_by(ring, {x});
}

QuadIdeal ideal_sum(const QuadIdeal& a, const QuadIdeal& b) {
  require_same_ring(a, b);
  return QuadIdeal::from_module(a.ring(), sum(a.module(), b.module()));
}

QuadIdeal ideal_product(const QuadIdeal& a, const QuadIdeal& b) {
  require_same_ring(a, b);
  std::vector<QuadElement> gens;
  for (const QuadElement& x : basis_elements(a))
    for (const QuadElement& y : basis_elements(b)) gens.push_back(multiply(a.ring(), x, y));
  return QuadIdeal::generated_by(a.ring(), gens);
}

QuadIdeal ideal_intersect(const QuadIdeal& a, const QuadIdeal& b) {
  require_same_ring(a, b);
  return QuadIdeal::from_module(a.ring(), intersect(a.module(), b.module()));
}

bool ideal_coprime(const QuadIdeal& a, const QuadIdeal& b) { return ideal_sum(a, b).is_unit(); }

bool ideal_contained(const QuadIdeal& sub, const QuadIdeal& super) {
  require_same_ring(sub, super);
  return is_sublattice(sub.module(), super.module());
}

QuadElement reduce(const QuadIdeal& ideal, const QuadElement& x) {
  return element_of(reduce(ideal.module(), coords(x)));
}

QuadElement crt(const std::vector<QuadIdeal>& ideals, const std::vector<QuadElement>& residues) {
  if (ideals.size() != residues.size()) fail(Errc::InvalidArgument, "crt: ideals and residues differ in length");
  if (ideals.empty()) fail(Errc::InvalidArgument, "crt: no ideals");
  for (std::size_t i = 0; i < ideals.size(); ++i)
    for (std::size_t j = i + 1; j < ideals.size(); ++j)
      if (!ideal_coprime(ideals[i], ideals[j]))
        fail(Errc::NotCoprime, "crt: ideals " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");

  const QuadraticRing& ring = ideals.front().ring();
  QuadIdeal acc = QuadIdeal::unit(ring);
  QuadElement x{0, 0};
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    const QuadIdeal& next = ideals[i];
    // Write 1 = e + f with e in acc and f in next.
    IntMatrix g(2, 4);
    g << acc.module().basis(), next.module().basis();
    Echelon<BigInt> ech = column_echelon<BigInt>(g, true);
    IntVector u = ech.transform.col(0);
    QuadElement e = element_of(acc.module().basis().lazyProduct(u.head(2)));
    QuadElement f = element_of(next.module().basis().lazyProduct(u.tail(2)));
    if (!(add(e, f) == QuadElement{1, 0})) fail(Errc::NotCoprime, "crt: ideals are not coprime");
    x = add(multiply(ring, x, f), multiply(ring, residues[i], e));
    acc = ideal_intersect(acc, next);
    x = reduce(acc, x);
  }
  return x;
}

BigInt ProductIdeal::norm() const {
  BigInt n = 1;
  for (const QuadIdeal& f : factors) n *= f.norm();
  return n;
}

bool ProductIdeal::contains(const std::vector<QuadElement>& x) const {
  if (x.size() != factors.size()) fail(Errc::DimensionMismatch, "point and product ideal differ in dimension");
  for (std::size_t j = 0; j < factors.size(); ++j)
    if (!factors[j].contains(x[j])) return false;
  return true;
}

bool product_coprime(const ProductIdeal& a, const ProductIdeal& b) {
  if (a.dim() != b.dim()) fail(Errc::DimensionMismatch, "product ideals differ in dimension");
  for (std::size_t j = 0; j < a.dim(); ++j)
    if (!ideal_coprime(a.factors[j], b.factors[j])) return false;
  return true;
}

std::vector<QuadElement> crt(const std::vector<ProductIdeal>& ideals,
                             const std::vector<std::vector<QuadElement>>& residues) {
  if (ideals.size() != residues.size()) fail(Errc::InvalidArgument, "crt: ideals and residues differ in length");
  if (ideals.empty()) fail(Errc::InvalidArgument, "crt: no ideals");
  const std::size_t m = ideals.front().dim();
  for (std::size_t i = 0; i < ideals.size(); ++i)
    for (std::size_t j = i + 1; j < ideals.size(); ++j)
      if (!product_coprime(ideals[i], ideals[j]))
        fail(Errc::NotCoprime, "crt: product ideals " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");
  std::vector<QuadElement> out;
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<QuadIdeal> column;
    std::vector<QuadElement> targets;
    for (std::size_t i = 0; i < ideals.size(); ++i) {
      column.push_back(ideals[i].factors[c]);
      targets.push_back(residues[i].at(c));
    }
    out.push_back(crt(column, targets));
  }
  return out;
}

}  // namespace bfree
