#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/error.hpp"
#include "bfree/window.hpp"
#include "oracles.hpp"

using namespace bfree;

namespace {

Point pt(long x, long y) { return int_vector({x, y}); }
Box box2(long lo0, long hi0, long lo1, long hi1) { return Box(pt(lo0, lo1), pt(hi0, hi1)); }
Shape rect(long a, long b) { return Shape::rectangle(box2(0, a, 0, b)); }

}  // namespace

TEST_CASE("boxes and shapes") {
  const Box b = box2(-1, 1, 0, 2);
  CHECK(b.volume() == 9);
  CHECK(b.linear_index(pt(-1, 0)) == 0);
  CHECK(b.linear_index(pt(-1, 1)) == 1);
  CHECK(b.linear_index(pt(0, 0)) == 3);
  for (std::uint64_t i = 0; i < 9; ++i) CHECK(b.linear_index(b.point_at(i)) == i);
  CHECK(b.minkowski(box2(0, 2, 0, 0)) == box2(-1, 3, 0, 2));
  CHECK_THROWS_AS(box2(1, 0, 0, 0), Error);
  const Shape s({pt(0, 0), pt(1, 0), pt(0, 0)});
  CHECK(s.size() == 2);
  CHECK(s.bounding_box() == box2(0, 1, 0, 0));
  CHECK(rect(1, 2).size() == 6);
}

TEST_CASE("eta windows of the worked examples") {
  const Box b = Box::centered(pt(0, 0), 25);
  const EtaWindow w2 = eta_window(preset("ex2"), b);
  const EtaWindow w1 = eta_window(preset("ex1"), b);
  CHECK(w2.ones() == 50);
  CHECK(w1.ones() == 78);
  for (long x = -25; x <= 25; ++x)
    for (long y = -25; y <= 25; ++y) {
      CHECK(w2.at(pt(x, y)) == oracle::ex2_free(x, y));
      CHECK(w1.at(pt(x, y)) == oracle::ex1_free(x, y));
    }
  WindowOptions four;
  four.threads = 4;
  CHECK(eta_window(preset("ex2"), b, four).bits == w2.bits);

  WindowOptions tiny;
  tiny.cell_limit = 100;
  CHECK_THROWS_AS(eta_window(preset("ex2"), b, tiny), Error);
  const FamilySpec empty = parse_family("dim 2\n");
  CHECK(eta_window(empty, box2(0, 2, 0, 2)).ones() == 9);
}

TEST_CASE("export formats") {
  const EtaWindow w = eta_window(preset("ex1"), box2(-1, 1, 0, 1));
  // x = -1, 0, 1 rows; y = 0, 1 columns; free only at (0, 1)
  CHECK(to_csv(w) == "0,0\n0,1\n0,0\n");
  CHECK(to_pgm(w) == "P2\n3 2\n1\n0 1 0\n0 0 0\n");
  const std::string json = to_json_text(w);
  CHECK(json == "{\"box\":{\"lo\":[-1,0],\"hi\":[1,1]},\"cells\":6,\"ones\":1,\"bits\":\"CA==\"}\n");
  const EtaWindow back = window_from_json_text(json);
  CHECK(back.bits == w.bits);
  CHECK(back.box == w.box);
  CHECK_THROWS_AS(window_from_json_text("{\"box\":1}"), Error);

  CHECK(base64_encode({}) == "");
  CHECK(base64_encode({'f'}) == "Zg==");
  CHECK(base64_encode({'f', 'o'}) == "Zm8=");
  CHECK(base64_encode({'f', 'o', 'o', 'b', 'a', 'r'}) == "Zm9vYmFy");
  CHECK(base64_decode("Zm9vYg==") == std::vector<std::uint8_t>{'f', 'o', 'o', 'b'});
  CHECK_THROWS_AS(base64_decode("Zm9"), Error);
  CHECK_THROWS_AS(base64_decode("Z=9v"), Error);
}

TEST_CASE("zero translates come with verified periods") {
  const FamilySpec ex2 = preset("ex2");
  const Shape one({pt(0, 0)});
  CHECK(*find_zero_translate(ex2, one, Box::centered(pt(0, 0), 3)) == pt(-3, -3));
  const FamilySpec ex1 = preset("ex1");
  for (long k = 0; k <= 4; ++k) {
    const Shape s = rect(k, k);
    const auto g = find_zero_translate(ex1, s, Box::centered(pt(0, 0), 20));
    REQUIRE(g);
    for (const Point& f : s.offsets()) CHECK(in_M(ex1, Point(*g + f)));
    const Lattice h = syndetic_period(ex1, *g, s);
    CHECK(verify_period(ex1, *g, s, h, 100) >= 100);
  }
  // all translates agree with a direct scan
  const Shape s = rect(1, 1);
  const Box search = box2(-6, 6, -6, 6);
  const auto all = find_all_zero_translates(ex2, s, search);
  std::size_t count = 0;
  for (long x = -6; x <= 6; ++x)
    for (long y = -6; y <= 6; ++y) {
      bool zero = true;
      for (const Point& f : s.offsets()) zero = zero && !oracle::ex2_free(x + f(0).get_si(), y + f(1).get_si());
      count += zero;
    }
  CHECK(all.size() == count);
  CHECK_THROWS_AS(syndetic_period(ex2, pt(1, 3), one), Error);
}

TEST_CASE("CRT zero translates against brute force") {
  const std::vector<long> primes{2, 3, 5, 7};
  std::vector<Lattice> ideals;
  for (long p : primes) ideals.push_back(Lattice::diagonal({p, p}));
  FamilySpec spec;
  spec.dim = 2;
  for (long p : primes) spec.entries.push_back(RectEntry{{p, p}});
  const Shape s = rect(1, 1);
  const Point g = construct_zero_translate_crt(ideals, s);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(contains(ideals[i], Point(g + s.offsets()[i])));
  CHECK(g(0) >= 0);
  CHECK(g(0) < 210);
  const auto brute = find_all_zero_translates(spec, s, box2(0, 209, 0, 209));
  CHECK(std::find(brute.begin(), brute.end(), g) != brute.end());
  CHECK_THROWS_AS(construct_zero_translate_crt({ideals[0]}, s), Error);
  CHECK_THROWS_AS(construct_zero_translate_crt({ideals[0], Lattice::diagonal({4, 4})}, rect(1, 0)), Error);

  // non-diagonal lattices with coprime indices
  const Lattice a = Lattice::from_generators(int_matrix_from_columns({{1, 1}, {0, 2}}));
  const Lattice b = Lattice::from_generators(int_matrix_from_columns({{1, 2}, {0, 3}}));
  const Point h = construct_zero_translate_crt({a, b}, rect(1, 0));
  CHECK(contains(a, h));
  CHECK(contains(b, Point(h + pt(1, 0))));
}

TEST_CASE("density profiles") {
  const FamilySpec ex2 = preset("ex2");
  const DensityProfile p = density_profile(ex2, {10}, Box::centered(pt(0, 0), 0));
  CHECK(p.rows.front().ratio >= Rational(441 - 42, 441));
  const DensityProfile far = density_profile(ex2, {5, 10}, Box::centered(pt(0, 0), 40));
  CHECK(far.rows[0].ratio == 1);
  CHECK(far.rows[1].ratio == 1);
  const FamilySpec empty = parse_family("dim 2\n");
  for (const DensityRow& r : density_profile(empty, {1, 2}, Box::centered(pt(0, 0), 2)).rows) CHECK(r.ratio == 0);

  // brute count on squarefree-1d at the origin
  const FamilySpec sf = preset("squarefree-1d");
  const DensityProfile q = density_profile(sf, {500}, Box::centered(int_vector({0}), 0));
  long in = 0;
  for (long n = -500; n <= 500; ++n) in += !oracle::squarefree(n);
  CHECK(q.rows.front().ratio == Rational(in, 1001));

  // a CRT seed lifts the ratio to 1
  std::vector<Lattice> sq;
  for (long pr : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) sq.push_back(Lattice::diagonal({pr * pr}));
  const DensitySeed seed = crt_seed(sq, 1, 5);
  const DensityProfile s = density_profile(sf, {5}, Box::centered(int_vector({0}), 10), {}, {seed});
  CHECK(s.rows.front().ratio == 1);
  CHECK(s.rows.front().from_seed);
  // a wrong witness is ignored
  DensitySeed bad = seed;
  bad.witnesses[0] = Lattice::diagonal({BigInt(1000003)});
  CHECK(density_profile(sf, {5}, Box::centered(int_vector({0}), 0), {}, {bad}).rows.front().ratio < 1);
}

TEST_CASE("window equivariance under a unimodular map") {
  const FamilySpec base = parse_family("dim 2\nrecttemplate [t,t] params=primes\n");
  const UnimodularMap a(int_matrix_from_columns({{1, 2}, {0, 1}}));
  const FamilySpec moved = transported(base, a);
  const Shape f = rect(1, 1);
  std::vector<Point> af;
  for (const Point& p : f.offsets()) af.push_back(a.apply(p));
  const Shape fa(af);
  for (long x = -6; x <= 6; ++x)
    for (long y = -6; y <= 6; ++y) {
      const Point g = pt(x, y);
      bool zero = true, zero_moved = true;
      for (const Point& o : f.offsets()) zero = zero && in_M(base, Point(g + o));
      for (const Point& o : fa.offsets()) zero_moved = zero_moved && in_M(moved, Point(a.apply(g) + o));
      CHECK(zero == zero_moved);
    }
}
