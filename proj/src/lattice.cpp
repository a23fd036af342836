#include "bfree/lattice.hpp"

#include "bfree/error.hpp"
#include "bfree/hermite.hpp"

namespace bfree {

namespace {

void require_same_dim(const Lattice& a, const Lattice& b, const char* op) {
  if (a.dim() != b.dim()) fail(Errc::DimensionMismatch, std::string(op) + ": lattices of different dimension");
}

bool is_canonical(const IntMatrix& b) {
  if (b.rows() != b.cols()) return false;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    if (b(i, i) < 1) return false;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      if (j > i && b(i, j) != 0) return false;
      if (j < i && (b(i, j) < 0 || b(i, j) >= b(i, i))) return false;
    }
  }
  return true;
}

}  // namespace

Lattice::Lattice(IntMatrix canonical) : basis_(std::move(canonical)), index_(1) {
  for (Eigen::Index i = 0; i < basis_.rows(); ++i) index_ *= basis_(i, i);
}

Lattice Lattice::from_generators(const IntMatrix& generators) {
  if (generators.rows() == 0) fail(Errc::InvalidArgument, "lattice of dimension zero");
  IntMatrix basis;
  if (!lower_hermite_basis<BigInt>(generators, basis))
    fail(Errc::RankDeficient, "generators span a subgroup of infinite index");
  return Lattice(std::move(basis));
}

Lattice Lattice::whole(Eigen::Index dim) { return Lattice(IntMatrix::Identity(dim, dim)); }

Lattice Lattice::diagonal(const std::vector<BigInt>& moduli) {
  const auto m = static_cast<Eigen::Index>(moduli.size());
  IntMatrix b = IntMatrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (moduli[static_cast<std::size_t>(i)] == 0) fail(Errc::RankDeficient, "diagonal lattice with a zero modulus");
    b(i, i) = abs(moduli[static_cast<std::size_t>(i)]);
  }
  return Lattice(std::move(b));
}

Lattice Lattice::from_canonical(IntMatrix basis) {
  if (!is_canonical(basis)) fail(Errc::InvalidArgument, "basis is not in canonical lower Hermite form");
  return Lattice(std::move(basis));
}

bool Lattice::is_diagonal() const {
  for (Eigen::Index i = 0; i < basis_.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j)
      if (basis_(i, j) != 0) return false;
  return true;
}

std::vector<BigInt> Lattice::diagonal_entries() const {
  std::vector<BigInt> d;
  for (Eigen::Index i = 0; i < basis_.rows(); ++i) d.push_back(basis_(i, i));
  return d;
}

bool operator==(const Lattice& a, const Lattice& b) {
  return a.dim() == b.dim() && a.basis_ == b.basis_;
}

std::strong_ordering operator<=>(const Lattice& a, const Lattice& b) {
  if (auto c = a.dim() <=> b.dim(); c != 0) return c;
  for (Eigen::Index j = 0; j < a.dim(); ++j) {
    for (Eigen::Index i = 0; i < a.dim(); ++i) {
      int c = cmp(a.basis_(i, j), b.basis_(i, j));
      if (c < 0) return std::strong_ordering::less;
      if (c > 0) return std::strong_ordering::greater;
    }
  }
  return std::strong_ordering::equal;
}

UnimodularMap::UnimodularMap(IntMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0)
    fail(Errc::NotUnimodular, "unimodular map needs a nonempty square matrix");
  BigInt det = determinant<BigInt>(matrix_);
  if (det != 1 && det != -1) fail(Errc::NotUnimodular, "matrix has determinant " + to_string(det));
  Echelon<BigInt> e = column_echelon<BigInt>(matrix_, true);
  // matrix * U is the Hermite form of Z^m, i.e. the identity.
  inverse_ = e.transform;
}

UnimodularMap UnimodularMap::identity(Eigen::Index dim) { return UnimodularMap(IntMatrix::Identity(dim, dim)); }

UnimodularMap UnimodularMap::inverse() const { return UnimodularMap(inverse_); }

UnimodularMap UnimodularMap::compose(const UnimodularMap& other) const {
  if (other.dim() != dim()) fail(Errc::DimensionMismatch, "composing maps of different dimension");
  return UnimodularMap(IntMatrix(matrix_.lazyProduct(other.matrix_)));
}

Lattice hnf(const IntMatrix& generators) { return Lattice::from_generators(generators); }

Lattice sum(const Lattice& a, const Lattice& b) {
  require_same_dim(a, b, "sum");
  IntMatrix g(a.dim(), 2 * a.dim());
  g << a.basis(), b.basis();
  return hnf(g);
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  require_same_dim(a, b, "intersect");
  const Eigen::Index m = a.dim();
  // (u, v) in ker [A | -B]  <=>  A u == B v, a point of both lattices.
  IntMatrix stacked(m, 2 * m);
  stacked << a.basis(), -b.basis();
  IntMatrix kernel = integer_kernel<BigInt>(stacked);
  IntMatrix points = a.basis().lazyProduct(kernel.topRows(m));
  // lcm(index) * Z^m lies in both lattices; adding it keeps entries small.
  BigInt l = lcm(a.index(), b.index());
  IntMatrix g(m, points.cols() + m);
  g << points, IntMatrix(IntMatrix::Identity(m, m) * l);
  return hnf(g);
}

Lattice intersect_all(const std::vector<Lattice>& lattices) {
  if (lattices.empty()) fail(Errc::InvalidArgument, "intersection of an empty list");
  Lattice acc = lattices.front();
  for (std::size_t i = 1; i < lattices.size(); ++i) acc = intersect(acc, lattices[i]);
  return acc;
}

bool coprime(const Lattice& a, const Lattice& b) { return sum(a, b).is_whole(); }

std::optional<IntVector> coordinates(const Lattice& l, const Point& p) {
  if (p.size() != l.dim()) fail(Errc::DimensionMismatch, "point and lattice differ in dimension");
  const IntMatrix& b = l.basis();
  IntVector c(l.dim());
  for (Eigen::Index i = 0; i < l.dim(); ++i) {
    BigInt rest = p(i);
    for (Eigen::Index j = 0; j < i; ++j) rest -= b(i, j) * c(j);
    if (!divides(b(i, i), rest)) return std::nullopt;
    c(i) = rest / b(i, i);
  }
  return c;
}

bool contains(const Lattice& l, const Point& p) { return coordinates(l, p).has_value(); }

bool is_sublattice(const Lattice& sub, const Lattice& super) {
  require_same_dim(sub, super, "is_sublattice");
  if (!divides(super.index(), sub.index())) return false;
  for (Eigen::Index j = 0; j < sub.dim(); ++j)
    if (!contains(super, sub.basis().col(j))) return false;
  return true;
}

Point reduce(const Lattice& l, const Point& p) {
  if (p.size() != l.dim()) fail(Errc::DimensionMismatch, "point and lattice differ in dimension");
  Point r = p;
  const IntMatrix& b = l.basis();
  for (Eigen::Index i = 0; i < l.dim(); ++i) {
    BigInt q = floor_div(BigInt(r(i)), BigInt(b(i, i)));
    if (q != 0) r -= q * b.col(i);
  }
  return r;
}

std::vector<Point> coset_reps(const Lattice& l, std::size_t limit) {
  if (l.index() > limit)
    fail(Errc::TooLarge, "lattice index " + to_string(l.index()) + " exceeds the coset limit " + std::to_string(limit));
  const Eigen::Index m = l.dim();
  std::vector<Point> reps;
  reps.reserve(l.index().get_ui());
  Point cur = IntVector::Zero(m);
  while (true) {
    reps.push_back(cur);
    Eigen::Index i = 0;
    for (; i < m; ++i) {
      cur(i) += 1;
      if (cur(i) < l.basis()(i, i)) break;
      cur(i) = 0;
    }
    if (i == m) break;
  }
  return reps;
}

std::vector<Point> relative_coset_reps(const Lattice& super, const Lattice& sub, std::size_t limit) {
  require_same_dim(super, sub, "relative_coset_reps");
  const Eigen::Index m = super.dim();
  IntMatrix rel(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    auto c = coordinates(super, sub.basis().col(j));
    if (!c) fail(Errc::InvalidArgument, "relative_coset_reps: sub is not contained in super");
    rel.col(j) = *c;
  }
  Lattice in_coords = hnf(rel);
  std::vector<Point> out;
  for (const Point& r : coset_reps(in_coords, limit)) out.push_back(super.basis().lazyProduct(r));
  return out;
}

Lattice transport(const UnimodularMap& a, const Lattice& l) {
  if (a.dim() != l.dim()) fail(Errc::DimensionMismatch, "transport: map and lattice differ in dimension");
  return hnf(IntMatrix(a.matrix().lazyProduct(l.basis())));
}

}  // namespace bfree
