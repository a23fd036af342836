#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bfree/error.hpp"
#include "bfree/family.hpp"
#include "oracles.hpp"

using namespace bfree;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

Point pt(long x, long y) { return int_vector({x, y}); }

}  // namespace

TEST_CASE("parameter sequences") {
  const ParamSeq primes = ParamSeq::primes();
  CHECK(primes.first() == 2);
  CHECK(*primes.next_after(7) == 11);
  CHECK(primes.members_dividing(60) == ints({2, 3, 5}));
  CHECK(primes.member_gcd() == 1);
  CHECK(primes.difference_gcd() == 1);
  CHECK(primes.has_infinite_coprime_subset());
  CHECK(primes.coprime_members(4) == ints({2, 3, 5, 7}));

  const ParamSeq odd = ParamSeq::odd_primes();
  CHECK(odd.first() == 3);
  CHECK(odd.difference_gcd() == 2);
  CHECK_FALSE(odd.contains(2));
  CHECK(odd.residues_mod(4) == ints({1, 3}));
  CHECK(ParamSeq::primes({2, 5}).members_dividing(30) == ints({3}));

  const ParamSeq geo = ParamSeq::geometric(2);
  CHECK(geo.first() == 2);
  CHECK(*geo.next_after(4) == 8);
  CHECK(geo.members_dividing(24) == ints({2, 4, 8}));
  CHECK(geo.member_gcd() == 2);
  CHECK(geo.difference_gcd() == 2);
  CHECK_FALSE(geo.has_infinite_coprime_subset());
  CHECK(geo.residues_mod(12) == ints({2, 4, 8}));
  CHECK(ParamSeq::geometric(2, 2).first() == 4);

  const ParamSeq ex = ParamSeq::explicit_list(ints({6, 10, 15}));
  CHECK_FALSE(ex.is_infinite());
  CHECK(ex.member_gcd() == 1);
  CHECK(ex.difference_gcd() == 1);
  CHECK(ex.coprime_members(5).size() == 1);
  CHECK(ex.to_string() == "explicit:6,10,15");
  CHECK(primes.to_string() == "primes");

  // Prime residues: every unit class plus the primes dividing n.
  const auto r = primes.residues_mod(10);
  CHECK(r == ints({1, 2, 3, 5, 7, 9}));
  CHECK_THROWS_AS(primes.residues_mod(BigInt(2000000)), Error);
}

TEST_CASE("worked examples: membership against the free-set formulas") {
  const FamilySpec ex2 = preset("ex2");
  const FamilySpec ex1 = preset("ex1");
  for (long x = -30; x <= 30; ++x)
    for (long y = -30; y <= 30; ++y) {
      CHECK(eta(ex2, pt(x, y)) == oracle::ex2_free(x, y));
      CHECK(eta(ex1, pt(x, y)) == oracle::ex1_free(x, y));
    }
  const FamilySpec sf = preset("squarefree-1d");
  for (long n = -500; n <= 500; ++n) CHECK(eta(sf, int_vector({n})) == oracle::squarefree(n));
}

TEST_CASE("membership against listed members") {
  for (const std::string& name : preset_names()) {
    const FamilySpec spec = preset(name);
    if (spec.dim != 2) continue;
    for (long x = -12; x <= 12; ++x)
      for (long y = -12; y <= 12; ++y) {
        const bool listed = oracle::listed_free(spec, pt(x, y), 2000);
        CHECK_MESSAGE(eta(spec, pt(x, y)) == listed, name, " at ", x, ",", y);
      }
  }
}

TEST_CASE("member_containing and is_member") {
  const FamilySpec ex2 = preset("ex2");
  const auto m = member_containing(ex2, pt(3, 33));
  REQUIRE(m);
  CHECK(contains(*m, pt(3, 33)));
  CHECK(is_member(ex2, *m));
  CHECK_FALSE(member_containing(ex2, pt(1, 3)));
  CHECK(is_member(ex2, Lattice::diagonal(ints({2, 1}))));
  CHECK(is_member(ex2, Lattice::from_generators(int_matrix_from_columns({{1, 1}, {0, 14}}))));
  CHECK_FALSE(is_member(ex2, Lattice::from_generators(int_matrix_from_columns({{1, 1}, {0, 8}}))));
  CHECK_FALSE(is_member(ex2, Lattice::diagonal(ints({3, 3}))));
}

TEST_CASE("instances, envelopes and member classes") {
  const FamilySpec ex2 = preset("ex2");
  const auto inst = instances_up_to(ex2, 30);
  // two statics plus (1,1)Z + (0,2p)Z for p <= 13
  CHECK(inst.size() == 2 + 6);
  for (const Lattice& l : inst) CHECK(l.index() <= 30);

  const auto& tmpl = ex2.entries[2];
  CHECK(entry_is_infinite(tmpl));
  const Lattice env = entry_envelope(tmpl, 2);
  CHECK(env == Lattice::from_generators(int_matrix_from_columns({{1, 1}, {0, 2}})));
  for (const Lattice& l : entry_instances_up_to(tmpl, 2, 200)) CHECK(is_sublattice(l, env));

  // members + C depend only on t mod index(C)
  const Lattice c = Lattice::diagonal(ints({6, 6}));
  const auto classes = entry_members_plus(tmpl, c);
  std::set<Lattice> expect;
  for (const Lattice& l : entry_instances_up_to(tmpl, 2, 2000)) expect.insert(sum(l, c));
  CHECK(std::set<Lattice>(classes.begin(), classes.end()) == expect);

  const FamilySpec geo = parse_family("dim 2\nrecttemplate [t,3] params=geometric:2\n");
  CHECK(entry_envelope(geo.entries[0], 2) == Lattice::diagonal(ints({2, 3})));
  CHECK(is_rectangular(geo));
  CHECK_FALSE(is_rectangular(ex2));
  CHECK(is_finite(preset("rect-demo")));
  CHECK_FALSE(is_finite(ex2));
}

TEST_CASE("family file format") {
  const std::string text =
      "# comment line\n"
      "dim 2\n"
      "static [[2,0],[0,1]]   # trailing comment\n"
      "rect [3,5]\n"
      "template base=[[1,1],[0,2]] scale=(2,2) params=primes:exclude=2,3\n"
      "recttemplate [t,3*t^2] params=oddprimes\n"
      "recttemplate [t^2,1] params=explicit:5,7\n"
      "recttemplate [t,1] params=geometric:3:2\n";
  const FamilySpec s = parse_family(text);
  CHECK(s.dim == 2);
  CHECK(s.entries.size() == 6);
  const FamilySpec again = parse_family(to_text(s));
  CHECK(to_text(again) == to_text(s));

  auto line_of = [](const std::string& bad) {
    try {
      parse_family(bad);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ParseError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(line_of("static [[2,0],[0,1]]\n").find("line 1") != std::string::npos);
  CHECK(line_of("dim 2\nrect [2]\n").find("line 2") != std::string::npos);
  CHECK(line_of("dim 2\nstatic [[1,0],[0,1]]\n").find("line 2") != std::string::npos);
  CHECK(line_of("dim 2\n\nfoo [1]\n").find("line 3") != std::string::npos);
  CHECK(line_of("dim 2\ntemplate base=[[1,1],[0,2]] scale=(1,2) params=primes\n").find("line 2") != std::string::npos);
  CHECK(line_of("dim 2\nrecttemplate [t,3] params=cubes\n").find("line 2") != std::string::npos);
  CHECK(line_of("dim 2\ntransform [[2,0],[0,1]]\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(preset("nope"), Error);
}

TEST_CASE("transforms move members and points together") {
  const FamilySpec base = parse_family("dim 2\nrecttemplate [t,t^2] params=oddprimes\n");
  const FamilySpec moved = parse_family("dim 2\ntransform [[1,0],[2,1]]\nrecttemplate [t,t^2] params=oddprimes\n");
  const UnimodularMap a = *moved.transform;
  CHECK(a.apply(pt(1, 0)) == pt(1, 2));
  for (long x = -10; x <= 10; ++x)
    for (long y = -10; y <= 10; ++y) CHECK(in_M(moved, a.apply(pt(x, y))) == in_M(base, pt(x, y)));
  CHECK(to_text(transported(base, a)) == to_text(moved));
  for (const Lattice& l : instances_up_to(moved, 1000)) CHECK(is_member(moved, l));
  CHECK(to_text(untransformed(moved)) == to_text(base));
}
