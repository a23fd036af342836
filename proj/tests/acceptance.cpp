// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "bfree/error.hpp"
#include "bfree/serialize.hpp"
#include "oracles.hpp"

using namespace bfree;

namespace {

Point pt(long x, long y) { return int_vector({x, y}); }
Shape square(long k) { return Shape::rectangle(Box(pt(0, 0), pt(k, k))); }

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << what;
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// 1, 2: the free sets of the worked examples on [-25,25]^2.
void golden_window(Outcome& out, const char* name, bool (*free)(long long, long long), std::uint64_t ones) {
  const auto t0 = Clock::now();
  const EtaWindow w = eta_window(preset(name), Box::centered(pt(0, 0), 25));
  const double dt = seconds_since(t0);
  std::uint64_t mismatches = 0;
  for (long x = -25; x <= 25; ++x)
    for (long y = -25; y <= 25; ++y) mismatches += w.at(pt(x, y)) != free(x, y);
  out.require(mismatches == 0, std::to_string(mismatches) + " cells differ from the formula");
  out.require(w.ones() == ones, "ones=" + std::to_string(w.ones()));
  out.require(dt < 1.0, "took " + std::to_string(dt) + " s");
  out.note << name << ": ones=" << w.ones() << " cells=" << w.bits.size() << " in " << dt << " s";
}

void conditions(Outcome& out) {
  Budget b;
  FamilySpec cand = parse_family("dim 2\nrecttemplate [t,t] params=primes\n");
  b.dprime_candidate = cand;
  const ConditionsReport e2 = conditions_report(preset("ex2"), b);
  const ConditionsReport e1 = conditions_report(preset("ex1"), b);
  const std::vector<long> all_sides{0, 1, 2, 3, 4, 5, 6};
  for (const ConditionsReport* r : {&e2, &e1}) {
    out.require(r->at("b").truth == Truth::EvidenceTrue || r->at("b").truth == Truth::ExactTrue, "(b) not true");
    out.require(r->verdict.evidence.zero_window_sides() == all_sides, "zero windows missing for some k <= 6");
  }
  out.require(e2.at("d").truth == Truth::ExactFalse, "ex2 (d) is " + std::string(truth_name(e2.at("d").truth)));
  out.require(e1.at("d'").truth == Truth::ExactFalse, "ex1 (d') is " + std::string(truth_name(e1.at("d'").truth)));
  out.require(e1.dprime.counterexample && eta(preset("ex1"), *e1.dprime.counterexample) == 1,
              "ex1 (d') counterexample is not free");
  out.note << "ex2 b=" << truth_name(e2.at("b").truth) << " d=" << truth_name(e2.at("d").truth)
           << "; ex1 b=" << truth_name(e1.at("b").truth) << " d'=" << truth_name(e1.at("d'").truth) << " at "
           << format_point(*e1.dprime.counterexample) << "; windows k=0..6 found";
}

void crt_windows(Outcome& out) {
  const auto t0 = Clock::now();
  const long primes[] = {2, 3, 5, 7, 11};
  std::size_t cells = 0, shapes = 0, cross = 0, refusals = 0;
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<Lattice> ideals;
    std::vector<long> moduli;
    FamilySpec spec;
    spec.dim = 2;
    for (int i = 0; i < 5; ++i)
      if (mask >> i & 1) {
        ideals.push_back(Lattice::diagonal({primes[i], primes[i]}));
        moduli.push_back(primes[i]);
        spec.entries.push_back(RectEntry{{primes[i], primes[i]}});
      }
    for (long k = 0; k <= 2; ++k) {
      const Shape s = square(k);
      if (s.size() > ideals.size()) {
        try {
          construct_zero_translate_crt(ideals, s);
          out.require(false, "too few ideals accepted");
        } catch (const Error& e) {
          out.require(e.code() == Errc::NotEnoughIdeals, "wrong error for too few ideals");
          ++refusals;
        }
        continue;
      }
      ++shapes;
      const Point g = construct_zero_translate_crt(ideals, s);
      for (std::size_t i = 0; i < s.size(); ++i) {
        const Point cell = g + s.offsets()[i];
        out.require(contains(ideals[i], cell) && in_M(spec, cell), "cell fails membership");
        ++cells;
      }
      long period = 1;
      for (std::size_t i = 0; i < s.size(); ++i) period *= moduli[i];
      if (period <= 35) {
        const auto all = find_all_zero_translates(spec, s, Box(pt(0, 0), pt(period - 1, period - 1)));
        out.require(std::find(all.begin(), all.end(), g) != all.end(), "CRT translate missing from the period scan");
        ++cross;
      }
    }
  }
  const double dt = seconds_since(t0);
  out.require(dt < 10.0, "took " + std::to_string(dt) + " s");
  out.note << shapes << " subset/shape pairs, " << cells << " cells rechecked, " << cross << " period scans, "
           << refusals << " NotEnoughIdeals refusals, " << dt << " s";
}

void index_law(Outcome& out) {
  std::mt19937_64 rng(20240601);
  int pairs = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = i % 2 ? 3 : 2;
    const Lattice a = Lattice::from_generators(oracle::random_generators(rng, m, 200));
    const Lattice b = Lattice::from_generators(oracle::random_generators(rng, m, 200));
    out.require(a.index() <= 200 && b.index() <= 200, "index above 200");
    out.require(intersect(a, b).index() * sum(a, b).index() == a.index() * b.index(), "product law fails");
    ++pairs;
  }
  int members = 0;
  for (int i = 0; i < 200; ++i) {
    const std::size_t m = i % 4 == 3 ? 3 : 2;
    const IntMatrix g = oracle::random_generators(rng, m, m == 2 ? 200 : 30);
    const Lattice l = Lattice::from_generators(g);
    const long long n = l.index().get_si();
    const auto res = oracle::residues(oracle::with_multiples(oracle::gens_of_matrix(g), n, m), n, m);
    out.require(static_cast<long long>(res.size()) * n == oracle::power(n, m), "index disagrees with enumeration");
    out.require(coset_reps(l).size() == static_cast<std::size_t>(n), "coset count");
    for (int k = 0; k < 25; ++k) {
      Point p(static_cast<Eigen::Index>(m));
      for (std::size_t c = 0; c < m; ++c) p(static_cast<Eigen::Index>(c)) = std::uniform_int_distribution<long>(-300, 300)(rng);
      out.require(contains(l, p) == oracle::in_residues(res, p, n), "membership disagrees with enumeration");
    }
    ++members;
  }
  out.note << pairs << " pairs satisfy the law; " << members << " membership instances agree";
}

// Lattice {(x, y) : y = c x mod p} for c < p, or {x = 0 mod p} for c == p.
Lattice direction(long p, long c) {
  if (c == p) return Lattice::diagonal({p, 1});
  return Lattice::from_generators(int_matrix_from_columns({{1, c}, {0, p}}));
}

void prime_indices(Outcome& out) {
  std::mt19937_64 rng(99);
  const long pool[] = {2, 3, 5, 7};
  int families = 0, violations = 0, nontrivial = 0;
  while (families < 500) {
    const std::size_t want = 1 + rng() % 8;
    std::vector<Lattice> fam;
    for (int attempt = 0; attempt < 200 && fam.size() < want; ++attempt) {
      Lattice l = Lattice::whole(2);
      for (long p : pool)
        if (rng() % 2) l = intersect(l, direction(p, static_cast<long>(rng() % (p + 1))));
      if (l.is_whole()) continue;
      bool ok = true;
      for (const Lattice& o : fam) ok = ok && coprime(o, l);
      if (ok) fam.push_back(l);
    }
    ++families;
    const auto sub = coprime_indices_subset(fam);
    for (std::size_t i = 0; i < sub.size(); ++i)
      for (std::size_t j = i + 1; j < sub.size(); ++j)
        out.require(gcd(sub[i].index(), sub[j].index()) == 1, "output indices share a factor");
    for (const Lattice& s : sub) out.require(std::find(fam.begin(), fam.end(), s) != fam.end(), "output not a sublist");
    bool some_pair = false;
    for (std::size_t i = 0; i < fam.size(); ++i)
      for (std::size_t j = i + 1; j < fam.size(); ++j) some_pair = some_pair || gcd(fam[i].index(), fam[j].index()) == 1;
    if (some_pair) {
      ++nontrivial;
      out.require(sub.size() >= 2, "missed a coprime pair of indices");
    }
    out.require(!fam.empty() ? !sub.empty() : sub.empty(), "empty output");

    // A precondition violation: add a lattice that meets some member.
    if (!fam.empty()) {
      std::vector<Lattice> bad = fam;
      bad.push_back(intersect(fam.front(), Lattice::diagonal({11, 11})));
      try {
        coprime_indices_subset(bad);
        out.require(false, "non-coprime input accepted");
      } catch (const Error& e) {
        out.require(e.code() == Errc::NotPairwiseCoprime, "wrong error code");
        ++violations;
      }
    }
  }
  out.note << families << " families (" << nontrivial << " with a coprime index pair), " << violations
           << " violations raised NotPairwiseCoprime";
}

void negative_certificate(Outcome& out) {
  const FamilySpec geo = parse_family("dim 2\nrecttemplate [t,3] params=geometric:2\n");
  const ProximalityVerdict v = decide(geo);
  out.require(v.status == Status::NotProximal, "status " + std::string(status_name(v.status)));
  const Covering* cov = std::get_if<Covering>(&v.certificate);
  out.require(cov && cov->covers == std::vector<Lattice>{Lattice::diagonal({2, 3})}, "cover is not {2Z x 3Z}");
  if (!cov) return;
  const Shape s({pt(0, 0), pt(1, 0)});
  out.require(!cover_translate(cov->covers, s), "period scan found a translate inside the cover");
  out.require(!find_zero_translate(geo, s, Box(pt(0, 0), pt(1, 2))), "zero translate found on the period box");
  const ProximalityVerdict back = verdict_from_json(Json::parse(verdict_to_json(v).dump()));
  const auto* cov2 = std::get_if<Covering>(&back.certificate);
  out.require(cov2 && check_covering(geo, cov2->covers).ok, "reloaded cover rejected");
  out.require(verify_verdict(geo, back), "reloaded verdict rejected");
  out.note << "NotProximal, cover [[2,0],[0,3]], no translate of {(0,0),(1,0)} over the 2x3 period, JSON re-verified";
}

void quadratic(Outcome& out) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> coef(-15, 15);
  int pairs = 0, crts = 0;
  for (long d : {-1L, -5L}) {
    const QuadraticRing ring(d);
    for (int i = 0; i < 500; ++i) {
      QuadElement x{coef(rng), coef(rng)}, y{coef(rng), coef(rng)};
      if (x.a == 0 && x.b == 0) x.a = 1;
      if (y.a == 0 && y.b == 0) y.b = 1;
      const QuadIdeal a = ideal_from_element(ring, x), b = ideal_from_element(ring, y);
      const QuadIdeal ab = ideal_product(a, b);
      out.require(ab.norm() == a.norm() * b.norm(), "norm not multiplicative");
      out.require(a.norm() == abs(field_norm(ring, x)), "principal norm");
      out.require(ideal_contained(ab, ideal_intersect(a, b)), "ab not inside the intersection");
      ++pairs;
      if (ideal_coprime(a, b)) {
        const QuadElement r1{coef(rng), coef(rng)}, r2{coef(rng), coef(rng)};
        const QuadElement z = crt({a, b}, {r1, r2});
        out.require(a.contains(subtract(z, r1)) && b.contains(subtract(z, r2)), "CRT fails a constraint");
        ++crts;
      }
    }
  }
  out.note << pairs << " ideal pairs, " << crts << " CRT solutions checked";
}

void automorphisms(Outcome& out) {
  const char* families[] = {"recttemplate [t,t] params=primes", "recttemplate [t,t^2] params=oddprimes",
                            "recttemplate [t,3] params=geometric:2"};
  int checks = 0;
  for (const char* f : families) {
    const FamilySpec base = parse_family(std::string("dim 2\n") + f + "\n");
    const ProximalityVerdict vb = decide(base);
    for (long k = 1; k <= 3; ++k) {
      IntMatrix a(2, 2);
      a << 1, 0, k, 1;
      const UnimodularMap map(a);
      const FamilySpec moved = transported(base, map);
      const ProximalityVerdict vm = decide(moved);
      out.require(vm.status == vb.status, std::string(f) + ": status differs");
      out.require(certificate_kind(vm.certificate) == certificate_kind(vb.certificate), "certificate kind differs");
      out.require(verify_verdict(moved, vm), "transported verdict does not verify");
      const Shape shape = square(1);
      std::vector<Point> moved_offsets;
      for (const Point& o : shape.offsets()) moved_offsets.push_back(map.apply(o));
      const Shape moved_shape(moved_offsets);
      for (long x = -10; x <= 10; ++x)
        for (long y = -10; y <= 10; ++y) {
          const Point g = pt(x, y);
          out.require(eta(moved, map.apply(g)) == eta(base, g), "eta not equivariant");
          bool in_w = true, in_wm = true;
          for (const Point& o : shape.offsets()) in_w = in_w && in_M(base, Point(g + o));
          for (const Point& o : moved_shape.offsets()) in_wm = in_wm && in_M(moved, Point(map.apply(g) + o));
          out.require(in_w == in_wm, "zero windows not equivariant");
          ++checks;
        }
    }
  }
  out.note << "3 families x k=1..3: verdicts equal, " << checks << " points equivariant";
}

void density(Outcome& out) {
  const std::vector<long> sides{5, 10, 20, 40};
  auto check = [&](const char* name, const DensityProfile& p) {
    for (std::size_t i = 1; i < p.rows.size(); ++i)
      out.require(p.rows[i].ratio >= p.rows[i - 1].ratio, std::string(name) + ": ratios decrease");
    out.require(p.rows.back().ratio > Rational(9, 10), std::string(name) + ": ratio at the largest side <= 0.9");
    out.note << name << ":";
    for (const DensityRow& r : p.rows) out.note << " n=" << r.side << "->" << r.ratio.get_str();
    out.note << "; ";
  };
  check("ex2", density_profile(preset("ex2"), sides, Box::centered(pt(0, 0), 100)));

  const FamilySpec sf = preset("squarefree-1d");
  std::vector<DensitySeed> seeds;
  for (long n : sides) {
    std::vector<Lattice> sq;
    for (const BigInt& p : ParamSeq::primes().coprime_members(static_cast<std::size_t>(2 * n + 1)))
      sq.push_back(Lattice::diagonal({p * p}));
    seeds.push_back(crt_seed(sq, 1, n));
  }
  check("squarefree-1d", density_profile(sf, sides, Box::centered(int_vector({0}), 100), {}, seeds));
  out.note << "lower bounds on the upper Banach density";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"ex2 eta window golden", [](Outcome& o) { golden_window(o, "ex2", oracle::ex2_free, 50); }},
      {"ex1 eta window golden", [](Outcome& o) { golden_window(o, "ex1", oracle::ex1_free, 78); }},
      {"conditions consistency", conditions},
      {"CRT zero translates", crt_windows},
      {"index product law and membership", index_law},
      {"coprime index subsets", prime_indices},
      {"negative certificate exactness", negative_certificate},
      {"quadratic ring properties", quadratic},
      {"automorphism transport", automorphisms},
      {"density evidence", density},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << " exception: " << e.what();
    }
    std::cout << (o.ok ? "PASS " : "FAIL ") << i + 1 << " " << criteria[i].first << ": " << o.note.str() << "\n";
    failed += !o.ok;
  }
  return failed ? 1 : 0;
}
