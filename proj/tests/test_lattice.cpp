#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/error.hpp"
#include "bfree/hermite.hpp"
#include "bfree/lattice.hpp"
#include "oracles.hpp"

using namespace bfree;

namespace {

Lattice cols(std::vector<std::vector<BigInt>> c) { return Lattice::from_generators(int_matrix_from_columns(c)); }

Lattice diag(std::initializer_list<long> d) {
  std::vector<BigInt> v;
  for (long x : d) v.push_back(x);
  return Lattice::diagonal(v);
}

}  // namespace

TEST_CASE("integer helpers") {
  CHECK(floor_div(BigInt(-7), BigInt(2)) == -4);
  CHECK(floor_mod(BigInt(-7), BigInt(2)) == 1);
  CHECK(floor_div(-7LL, 2LL) == -4);
  CHECK(floor_mod(7LL, -2LL) == -1);
  const auto e = ext_gcd(BigInt(240), BigInt(46));
  CHECK(e.g == 2);
  CHECK(e.x * 240 + e.y * 46 == 2);
  CHECK(parse_bigint("-123456789012345678901234567890") < 0);
  CHECK_THROWS_AS(parse_bigint("12a"), Error);
  CHECK(is_prime(BigInt(97)));
  CHECK_FALSE(is_prime(BigInt(91)));
  CHECK(next_prime(BigInt(13)) == 17);
  CHECK(prime_factors(BigInt(360)) == std::vector<BigInt>{2, 3, 5});
  CHECK(valuation(BigInt(48), BigInt(2)) == 4);
  const std::vector<BigInt> m{3, 5, 7}, r{2, 3, 2};
  CHECK(crt(m, r) == 23);
  const std::vector<BigInt> bad{4, 6};
  CHECK_THROWS_AS(crt(bad, std::vector<BigInt>{1, 1}), Error);
  CHECK(fits_int64(BigInt("9223372036854775807")));
  CHECK_FALSE(fits_int64(BigInt("9223372036854775808")));
}

TEST_CASE("echelon form agrees for long long and BigInt scalars") {
  Matrix<long long> a(2, 3);
  a << 4, 6, 2, 2, 3, 7;
  const auto e = column_echelon<long long>(a, true);
  IntMatrix b(2, 3);
  b << 4, 6, 2, 2, 3, 7;
  const auto f = column_echelon<BigInt>(b, true);
  CHECK(e.rank == 2);
  CHECK(f.rank == 2);
  for (Eigen::Index i = 0; i < 2; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) CHECK(BigInt(static_cast<long>(e.form(i, j))) == f.form(i, j));
  const IntMatrix check = b.lazyProduct(f.transform);
  CHECK(check == f.form);
  const IntMatrix k = integer_kernel<BigInt>(b);
  CHECK(k.cols() == 1);
  CHECK(b.lazyProduct(k) == IntMatrix::Zero(2, 1));
  CHECK(determinant<long long>(Matrix<long long>(a.leftCols(2))) == 0);
  IntMatrix d(3, 3);
  d << 2, 0, 1, 1, 3, 0, 0, 1, 4;
  CHECK(determinant<BigInt>(d) == 25);
}

TEST_CASE("canonical form") {
  const Lattice l = cols({{1, 1}, {0, 2}});
  CHECK(l.index() == 2);
  CHECK(cols({{1, 3}, {0, 2}}) == l);
  CHECK(cols({{1, -1}, {2, 0}, {5, 5}}) == cols({{1, 1}, {0, 2}}));
  CHECK(l.basis()(1, 0) >= 0);
  CHECK(l.basis()(1, 0) < l.basis()(1, 1));
  CHECK_THROWS_AS(cols({{1, 2}, {2, 4}}), Error);
  CHECK(Lattice::whole(3).is_whole());
  CHECK(diag({2, 3}).index() == 6);
  CHECK(diag({2, 3}).is_diagonal());
  CHECK_FALSE(l.is_diagonal());
  CHECK_THROWS(Lattice::from_canonical(int_matrix_from_columns({{1, 3}, {0, 2}})));
}

TEST_CASE("sum, intersection and coprimality") {
  const Lattice a = diag({2, 1});
  const Lattice b = diag({1, 2});
  const Lattice t = cols({{1, 1}, {0, 2}});
  CHECK(sum(a, b).is_whole());
  CHECK(coprime(a, b));
  CHECK(intersect(a, b) == diag({2, 2}));
  CHECK(coprime(a, t));
  CHECK(coprime(b, t));
  CHECK(intersect(diag({4, 6}), diag({6, 4})) == diag({12, 12}));
  CHECK(sum(diag({4, 6}), diag({6, 4})) == diag({2, 2}));
  CHECK_FALSE(coprime(diag({2, 2}), diag({4, 4})));
  CHECK(is_sublattice(diag({4, 4}), diag({2, 2})));
  CHECK_FALSE(is_sublattice(diag({2, 2}), diag({4, 4})));
  CHECK(intersect_all({a, b, t}).index() == 4);
}

TEST_CASE("reduce, coordinates and coset representatives") {
  const Lattice l = cols({{2, 1}, {0, 3}});
  const Point p = int_vector({7, -5});
  const Point r = reduce(l, p);
  CHECK(contains(l, Point(p - r)));
  CHECK(r(0) >= 0);
  CHECK(r(0) < 2);
  const auto c = coordinates(l, int_vector({4, 5}));
  REQUIRE(c);
  CHECK(l.basis().lazyProduct(*c) == int_vector({4, 5}));
  CHECK_FALSE(coordinates(l, int_vector({1, 0})));
  const auto reps = coset_reps(l);
  CHECK(reps.size() == 6);
  std::set<std::vector<BigInt>> classes;
  for (const Point& q : reps) {
    const Point s = reduce(l, q);
    classes.insert({s(0), s(1)});
  }
  CHECK(classes.size() == 6);
  CHECK_THROWS_AS(coset_reps(diag({1000, 1000}), 1000), Error);

  const Lattice sub = intersect(l, diag({4, 4}));
  const auto rel = relative_coset_reps(l, sub);
  CHECK(BigInt(static_cast<long>(rel.size())) == sub.index() / l.index());
  for (const Point& q : rel) CHECK(contains(l, q));
}

TEST_CASE("unimodular maps and transport") {
  const UnimodularMap a(int_matrix_from_columns({{1, 2}, {0, 1}}));
  const Point p = int_vector({3, 4});
  CHECK(a.apply_inverse(a.apply(p)) == p);
  CHECK(a.compose(a.inverse()) == UnimodularMap::identity(2));
  CHECK_THROWS_AS(UnimodularMap(int_matrix_from_columns({{2, 0}, {0, 1}})), Error);
  const Lattice l = diag({2, 3});
  const Lattice t = transport(a, l);
  CHECK(t.index() == l.index());
  for (const Point& q : coset_reps(l)) CHECK(contains(t, a.apply(q)) == contains(l, q));
}

TEST_CASE("index product law and membership against residue oracle") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + trial % 2;
    const IntMatrix ga = oracle::random_generators(rng, m, 30);
    const IntMatrix gb = oracle::random_generators(rng, m, 30);
    const Lattice a = Lattice::from_generators(ga);
    const Lattice b = Lattice::from_generators(gb);
    CHECK(intersect(a, b).index() * sum(a, b).index() == a.index() * b.index());

    // Independent: residue sets modulo n = lcm of indices.
    const long long n = lcm(a.index(), b.index()).get_si();
    if (oracle::power(n, m) > 200000) continue;
    const auto ra = oracle::residues(oracle::with_multiples(oracle::gens_of_matrix(ga), n, m), n, m);
    const auto rb = oracle::residues(oracle::with_multiples(oracle::gens_of_matrix(gb), n, m), n, m);
    std::set<oracle::Residue> both;
    for (const auto& r : ra)
      if (rb.count(r)) both.insert(r);
    CHECK(oracle::power(n, m) / static_cast<long long>(both.size()) == intersect(a, b).index().get_si());
    CHECK(oracle::power(n, m) / static_cast<long long>(ra.size()) == a.index().get_si());
    for (int k = 0; k < 20; ++k) {
      Point p(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) p(static_cast<Eigen::Index>(i)) = std::uniform_int_distribution<long>(-50, 50)(rng);
      CHECK(contains(a, p) == oracle::in_residues(ra, p, n));
    }
  }
}
