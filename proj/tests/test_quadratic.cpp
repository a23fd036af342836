#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bfree/error.hpp"
#include "bfree/quadratic.hpp"
#include "bfree/window.hpp"

using namespace bfree;

namespace {

QuadElement el(long a, long b) { return {a, b}; }

// Direct multiplication in Z[sqrt d] for d = 2,3 mod 4, written out by hand.
QuadElement mul_sqrt(long d, const QuadElement& x, const QuadElement& y) {
  return {x.a * y.a + d * x.b * y.b, x.a * y.b + x.b * y.a};
}

}  // namespace

TEST_CASE("ring arithmetic") {
  const QuadraticRing gauss(-1);
  CHECK(multiply(gauss, el(1, 1), el(1, -1)) == el(2, 0));
  CHECK(field_norm(gauss, el(3, 4)) == 25);
  const QuadraticRing r5(-5);
  CHECK(multiply(r5, el(1, 1), el(1, -1)) == el(6, 0));
  CHECK(field_norm(r5, el(1, 1)) == 6);
  const QuadraticRing eis(-3);  // omega = (1 + sqrt -3)/2, omega^2 = omega - 1
  CHECK(eis.half_integral());
  CHECK(multiply(eis, el(0, 1), el(0, 1)) == el(-1, 1));
  CHECK(field_norm(eis, el(0, 1)) == 1);
  CHECK_THROWS_AS(QuadraticRing(8), Error);
  CHECK_THROWS_AS(QuadraticRing(1), Error);
}

TEST_CASE("ideals") {
  const QuadraticRing r5(-5);
  // (2, 1 + sqrt -5) is the non-principal prime above 2.
  const QuadIdeal p = QuadIdeal::generated_by(r5, {el(2, 0), el(1, 1)});
  CHECK(p.norm() == 2);
  CHECK(ideal_product(p, p) == ideal_from_element(r5, el(2, 0)));
  CHECK(p.contains(el(3, 1)));
  CHECK_FALSE(p.contains(el(1, 0)));
  CHECK(ideal_contained(ideal_from_element(r5, el(2, 0)), p));
  const QuadIdeal three = ideal_from_element(r5, el(3, 0));
  CHECK(ideal_coprime(p, three));
  CHECK(ideal_sum(p, three).is_unit());
  CHECK(ideal_intersect(p, three) == ideal_product(p, three));
  CHECK_THROWS_AS(QuadIdeal::from_module(r5, Lattice::diagonal({2, 1})), Error);
  CHECK_THROWS_AS(QuadIdeal::generated_by(r5, {el(0, 0)}), Error);
  const QuadElement x = reduce(three, el(7, -8));
  CHECK(three.contains(subtract(el(7, -8), x)));
}

TEST_CASE("norm multiplicativity and product inside intersection (randomized)") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coef(-12, 12);
  for (long d : {-1L, -5L}) {
    const QuadraticRing ring(d);
    for (int i = 0; i < 250; ++i) {
      QuadElement x{coef(rng), coef(rng)}, y{coef(rng), coef(rng)};
      if (x == el(0, 0)) x = el(1, 0);
      if (y == el(0, 0)) y = el(0, 1);
      CHECK(multiply(ring, x, y) == mul_sqrt(d, x, y));
      const QuadIdeal a = ideal_from_element(ring, x), b = ideal_from_element(ring, y);
      CHECK(a.norm() == abs(field_norm(ring, x)));
      const QuadIdeal ab = ideal_product(a, b);
      CHECK(ab.norm() == a.norm() * b.norm());
      CHECK(ideal_contained(ab, ideal_intersect(a, b)));
    }
  }
}

TEST_CASE("CRT in O_K and O_K^m") {
  const QuadraticRing gauss(-1);
  const std::vector<QuadIdeal> ideals{ideal_from_element(gauss, el(1, 1)), ideal_from_element(gauss, el(3, 0)),
                                      ideal_from_element(gauss, el(2, 1))};
  const std::vector<QuadElement> res{el(1, 0), el(2, 1), el(0, 3)};
  const QuadElement x = crt(ideals, res);
  for (std::size_t i = 0; i < ideals.size(); ++i) CHECK(ideals[i].contains(subtract(x, res[i])));
  CHECK_THROWS_AS(crt({ideal_from_element(gauss, el(2, 0)), ideal_from_element(gauss, el(1, 1))}, {el(0, 0), el(1, 0)}),
                  Error);

  // Zero translates in O_K^2: a + f_i in I_i for products of coprime ideals.
  std::vector<ProductIdeal> prods;
  for (const QuadElement& g : {el(1, 1), el(3, 0), el(2, 1), el(2, -1)})
    prods.push_back({{ideal_from_element(gauss, g), ideal_from_element(gauss, g)}});
  const std::vector<std::vector<QuadElement>> shape{
      {el(0, 0), el(0, 0)}, {el(1, 0), el(0, 0)}, {el(0, 0), el(1, 0)}, {el(0, 1), el(1, 1)}};
  const auto a = construct_zero_translate_crt(prods, shape);
  for (std::size_t i = 0; i < shape.size(); ++i) {
    std::vector<QuadElement> cell{add(a[0], shape[i][0]), add(a[1], shape[i][1])};
    CHECK(prods[i].contains(cell));
  }
  CHECK(prods[0].norm() == 4);
}
