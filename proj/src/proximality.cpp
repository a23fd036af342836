#include "bfree/proximality.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "bfree/error.hpp"

namespace bfree {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool in_some(const std::vector<Lattice>& covers, const Point& p) {
  return std::any_of(covers.begin(), covers.end(), [&](const Lattice& l) { return contains(l, p); });
}

// A coset of c missed by every cover, scanning representatives of c in
// mixed-radix order. nullopt means the covers exhaust Z^m.
std::optional<Point> first_uncovered(const Lattice& c, const std::vector<Lattice>& covers, std::size_t limit) {
  const Eigen::Index m = c.dim();
  const Point ones = IntVector::Constant(m, BigInt(1));
  if (!in_some(covers, ones)) return ones;
  if (c.index() > limit)
    fail(Errc::TooLarge, "cover intersection has index " + to_string(c.index()) + " beyond the coset limit " +
                             std::to_string(limit));
  for (const Point& r : coset_reps(c, limit))
    if (!in_some(covers, r)) return r;
  return std::nullopt;
}

std::vector<Lattice> dedupe(std::vector<Lattice> v) {
  std::vector<Lattice> out;
  std::set<Lattice> seen;
  for (Lattice& l : v)
    if (seen.insert(l).second) out.push_back(std::move(l));
  return out;
}

// Drops lattices contained in another one of the list.
std::vector<Lattice> maximal_only(const std::vector<Lattice>& v) {
  std::vector<Lattice> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < v.size() && !dominated; ++j) {
      if (i == j) continue;
      if (is_sublattice(v[i], v[j]) && (!(v[i] == v[j]) || j < i)) dominated = true;
    }
    if (!dominated) out.push_back(v[i]);
  }
  return out;
}

// Members of a finite entry.
std::vector<Lattice> finite_entry_members(const FamilyEntry& e) {
  return std::visit(overloaded{
                        [](const StaticEntry& s) { return std::vector<Lattice>{s.lattice}; },
                        [](const RectEntry& r) { return std::vector<Lattice>{Lattice::diagonal(r.moduli)}; },
                        [](const TemplateEntry& t) {
                          std::vector<Lattice> out;
                          for (const BigInt& v : t.params.values()) out.push_back(t.member(v));
                          return out;
                        },
                        [](const RectTemplateEntry& t) {
                          std::vector<Lattice> out;
                          if (!t.params.is_infinite()) {
                            for (const BigInt& v : t.params.values()) out.push_back(t.member(v));
                          } else {
                            out.push_back(t.member(t.params.first()));
                          }
                          return out;
                        },
                    },
                    e);
}

// Statics and finite members together with the envelopes of infinite entries.
std::vector<Lattice> candidate_covers(const FamilySpec& spec) {
  std::vector<Lattice> covers;
  for (const FamilyEntry& e : spec.entries) {
    if (entry_is_infinite(e)) {
      covers.push_back(entry_envelope(e, spec.dim));
    } else {
      for (Lattice& l : finite_entry_members(e)) covers.push_back(std::move(l));
    }
  }
  return maximal_only(dedupe(std::move(covers)));
}

// Rectangular view of an entry: coordinates as monomials in t.
struct RectView {
  std::vector<Monomial> coords;
  std::optional<ParamSeq> params;  // absent for a single fixed lattice
};

RectView rect_view(const FamilyEntry& e) {
  return std::visit(overloaded{
                        [](const StaticEntry& s) {
                          RectView v;
                          for (const BigInt& d : s.lattice.diagonal_entries()) v.coords.push_back({d, 0});
                          return v;
                        },
                        [](const RectEntry& r) {
                          RectView v;
                          for (const BigInt& d : r.moduli) v.coords.push_back({d, 0});
                          return v;
                        },
                        [](const TemplateEntry& t) {
                          RectView v;
                          for (Eigen::Index j = 0; j < t.base.rows(); ++j)
                            v.coords.push_back({t.base(j, j), j == t.pos ? 1ul : 0ul});
                          v.params = t.params;
                          return v;
                        },
                        [](const RectTemplateEntry& t) { return RectView{t.coords, t.params}; },
                    },
                    e);
}

// A rectangular entry holds an infinite pairwise coprime subfamily exactly when
// every coordinate is a bare power of t or 1 and the parameters contain an
// infinite pairwise coprime set.
bool rect_entry_coprime_scheme(const RectView& v) {
  if (!v.params || !v.params->has_infinite_coprime_subset()) return false;
  bool uses_t = false;
  for (const Monomial& m : v.coords) {
    if (m.coef != 1) return false;
    uses_t = uses_t || m.exp > 0;
  }
  return uses_t;
}

Lattice rect_member(const RectView& v, const BigInt& t) {
  std::vector<BigInt> moduli;
  for (const Monomial& m : v.coords) moduli.push_back(m.at(t));
  return Lattice::diagonal(moduli);
}

std::string scheme_rule(const RectView& v) {
  std::string coords;
  for (std::size_t j = 0; j < v.coords.size(); ++j) {
    const Monomial& m = v.coords[j];
    coords += j ? "," : "";
    coords += m.exp == 0 ? "1" : (m.exp == 1 ? "t" : "t^" + std::to_string(m.exp));
  }
  return "members [" + coords + "] for t in " + v.params->to_string() +
         ": distinct primes give coprime coordinates, hence coprime lattices";
}

bool pairwise_coprime(const std::vector<Lattice>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (!coprime(v[i], v[j])) return false;
  return true;
}

Certificate transport_certificate(const Certificate& c, const UnimodularMap& a) {
  auto tr = [&](const Lattice& l) { return transport(a, l); };
  return std::visit(overloaded{
                        [](const std::monostate&) -> Certificate { return std::monostate{}; },
                        [&](const CoprimeSubscheme& s) -> Certificate {
                          CoprimeSubscheme out = s;
                          for (Lattice& l : out.witnesses) l = tr(l);
                          out.rule += " (transported)";
                          return out;
                        },
                        [&](const CoprimeList& s) -> Certificate {
                          CoprimeList out = s;
                          for (Lattice& l : out.lattices) l = tr(l);
                          return out;
                        },
                        [&](const Covering& s) -> Certificate {
                          Covering out = s;
                          for (Lattice& l : out.covers) l = tr(l);
                          out.missed = a.apply(s.missed);
                          for (CheckedMember& m : out.checked) m.member_plus_cover = tr(m.member_plus_cover);
                          return out;
                        },
                        [&](const FixedTranslate& s) -> Certificate {
                          return FixedTranslate{a.apply(s.a), tr(s.lattice), s.exact};
                        },
                        [&](const FullUnion& s) -> Certificate {
                          FullUnion out = s;
                          for (Lattice& l : out.members) l = tr(l);
                          return out;
                        },
                    },
                    c);
}

Evidence crt_evidence(const std::vector<Lattice>& coprime_members, Eigen::Index m, long max_side) {
  Evidence ev;
  for (long k = 0; k <= max_side; ++k) {
    const Shape shape = Shape::rectangle(Box(IntVector::Zero(m), IntVector::Constant(m, BigInt(k))));
    if (shape.size() > coprime_members.size()) break;
    ZeroWindowRecord rec;
    rec.side = k;
    rec.translate = construct_zero_translate_crt(coprime_members, shape);
    rec.period = intersect_all({coprime_members.begin(), coprime_members.begin() + static_cast<std::ptrdiff_t>(shape.size())});
    ev.windows.push_back(std::move(rec));
  }
  return ev;
}

ProximalityVerdict empty_verdict(Eigen::Index m) {
  ProximalityVerdict v;
  v.status = Status::NotProximal;
  v.certificate = FixedTranslate{IntVector::Zero(m), Lattice::whole(m), true};
  v.reason = "empty family: every point is free";
  return v;
}

}  // namespace

std::string_view status_name(Status s) {
  switch (s) {
    case Status::Proximal:
      return "Proximal";
    case Status::NotProximal:
      return "NotProximal";
    case Status::Inconclusive:
      return "Inconclusive";
  }
  return "";
}

std::string_view certificate_kind(const Certificate& c) {
  return std::visit(overloaded{
                        [](const std::monostate&) { return std::string_view("Evidence"); },
                        [](const CoprimeSubscheme&) { return std::string_view("CoprimeSubscheme"); },
                        [](const CoprimeList&) { return std::string_view("CoprimeList"); },
                        [](const Covering&) { return std::string_view("Covering"); },
                        [](const FixedTranslate&) { return std::string_view("FixedTranslate"); },
                        [](const FullUnion&) { return std::string_view("FullUnion"); },
                    },
                    c);
}

std::string_view truth_name(Truth t) {
  switch (t) {
    case Truth::ExactTrue:
      return "exact-true";
    case Truth::ExactFalse:
      return "exact-false";
    case Truth::EvidenceTrue:
      return "evidence-true";
    case Truth::EvidenceFalse:
      return "evidence-false";
    case Truth::Unknown:
      return "unknown";
  }
  return "";
}

std::vector<long> Evidence::zero_window_sides() const {
  std::vector<long> out;
  for (const ZeroWindowRecord& r : windows)
    if (r.translate) out.push_back(r.side);
  return out;
}

CoveringCheck check_covering(const FamilySpec& spec, const std::vector<Lattice>& covers, std::size_t coset_limit) {
  CoveringCheck res;
  res.certificate.covers = covers;
  if (covers.empty()) {
    res.reason = "no covers given";
    return res;
  }
  for (const Lattice& l : covers) {
    if (l.dim() != spec.dim) fail(Errc::DimensionMismatch, "cover has the wrong dimension");
    if (!l.is_proper()) {
      res.reason = "cover is not proper (index 1)";
      return res;
    }
  }
  // Work in the coordinates of the untransformed family.
  const FamilySpec base = untransformed(spec);
  std::vector<Lattice> pulled = covers;
  if (spec.transform)
    for (Lattice& l : pulled) l = transport(spec.transform->inverse(), l);
  auto push = [&](const Lattice& l) { return spec.transform ? transport(*spec.transform, l) : l; };

  const Lattice c = intersect_all(pulled);
  const std::optional<Point> missed = first_uncovered(c, pulled, coset_limit);
  if (!missed) {
    res.reason = "the union of the covers is the whole group";
    return res;
  }
  res.certificate.missed = spec.transform ? spec.transform->apply(*missed) : *missed;

  for (std::size_t i = 0; i < base.entries.size(); ++i) {
    const FamilyEntry& e = base.entries[i];
    const Lattice env = entry_envelope(e, base.dim);
    if (std::any_of(pulled.begin(), pulled.end(), [&](const Lattice& l) { return is_sublattice(env, l); })) {
      res.certificate.checked.push_back({i, push(env), 0});
      continue;
    }
    for (const Lattice& lp : entry_members_plus(e, c, coset_limit)) {
      CheckedMember rec{i, push(lp), 0};
      if (std::none_of(pulled.begin(), pulled.end(), [&](const Lattice& l) { return is_sublattice(lp, l); })) {
        for (const Point& r : relative_coset_reps(lp, c, coset_limit)) {
          ++rec.cosets;
          if (!in_some(pulled, r)) {
            const Point shown = spec.transform ? spec.transform->apply(r) : r;
            res.reason = "entry " + std::to_string(i + 1) + " has a member meeting " + format_point(shown) +
                         " + (intersection of covers), outside every cover";
            return res;
          }
        }
      }
      res.certificate.checked.push_back(std::move(rec));
    }
  }
  res.ok = true;
  res.certificate.verified = true;
  return res;
}

FixedTranslateCheck check_fixed_translate(const FamilySpec& spec, const Point& a, const Lattice& lattice,
                                          const BigInt& test_bound, std::size_t coset_limit) {
  if (a.size() != spec.dim || lattice.dim() != spec.dim) fail(Errc::DimensionMismatch, "check_fixed_translate");
  FixedTranslateCheck res;
  res.exact = true;
  const FamilySpec base = untransformed(spec);
  const Point a0 = spec.transform ? spec.transform->apply_inverse(a) : a;
  const Lattice i0 = spec.transform ? transport(spec.transform->inverse(), lattice) : lattice;
  // (a + I) meets L iff a lies in L + I; L + I only depends on the member's
  // residue class modulo index(I).
  for (std::size_t k = 0; k < base.entries.size(); ++k) {
    const FamilyEntry& e = base.entries[k];
    try {
      for (const Lattice& lp : entry_members_plus(e, i0, coset_limit)) {
        ++res.members_checked;
        if (contains(lp, a0)) {
          res.reason = "entry " + std::to_string(k + 1) + " has a member meeting the translate";
          res.holds = false;
          return res;
        }
      }
    } catch (const Error& err) {
      if (err.code() != Errc::TooLarge) throw;
      res.exact = false;
      for (const Lattice& l : entry_instances_up_to(e, base.dim, test_bound)) {
        ++res.members_checked;
        if (contains(sum(l, i0), a0)) {
          res.reason = "entry " + std::to_string(k + 1) + " has a member meeting the translate";
          res.holds = false;
          return res;
        }
      }
    }
  }
  // Independent bounded cross-check against explicit members.
  for (const Lattice& l : instances_up_to(spec, test_bound))
    if (contains(sum(l, lattice), a))
      fail(Errc::InconsistencyDetected, "fixed-translate residue check disagrees with a listed member");
  res.holds = true;
  res.reason = res.exact ? "no member class meets the translate" : "no member of index <= bound meets the translate";
  return res;
}

std::vector<Lattice> extract_coprime_subset(const std::vector<Lattice>& lattices, std::size_t exact_limit) {
  const std::size_t n = lattices.size();
  if (n == 0) return {};
  if (n > std::min<std::size_t>(exact_limit, 64)) {
    std::vector<Lattice> out;
    for (const Lattice& l : lattices)
      if (std::all_of(out.begin(), out.end(), [&](const Lattice& o) { return coprime(o, l); })) out.push_back(l);
    return out;
  }
  // Visit vertices in order of their canonical bases so the first maximum
  // clique found is the lexicographically smallest one.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return lattices[a] < lattices[b]; });
  std::vector<std::uint64_t> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coprime(lattices[order[i]], lattices[order[j]])) {
        adj[i] |= std::uint64_t{1} << j;
        adj[j] |= std::uint64_t{1} << i;
      }
  std::vector<std::size_t> best;
  std::vector<std::size_t> cur;
  auto dfs = [&](auto&& self, std::size_t from, std::uint64_t allowed) -> void {
    if (cur.size() > best.size()) best = cur;
    for (std::size_t v = from; v < n; ++v) {
      if (!(allowed >> v & 1)) continue;
      const std::uint64_t rest = allowed & adj[v] & (v + 1 < 64 ? ~((std::uint64_t{1} << (v + 1)) - 1) : 0);
      if (cur.size() + 1 + static_cast<std::size_t>(__builtin_popcountll(rest)) <= best.size()) continue;
      cur.push_back(v);
      self(self, v + 1, rest);
      cur.pop_back();
    }
  };
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  dfs(dfs, 0, all);
  std::vector<std::size_t> picked;
  for (std::size_t v : best) picked.push_back(order[v]);
  std::sort(picked.begin(), picked.end());
  std::vector<Lattice> out;
  for (std::size_t i : picked) out.push_back(lattices[i]);
  return out;
}

std::vector<Lattice> coprime_indices_subset(const std::vector<Lattice>& lattices) {
  for (std::size_t i = 0; i < lattices.size(); ++i)
    for (std::size_t j = i + 1; j < lattices.size(); ++j)
      if (!coprime(lattices[i], lattices[j]))
        fail(Errc::NotPairwiseCoprime,
             "lattices " + std::to_string(i) + " and " + std::to_string(j) + " are not coprime");
  std::vector<std::size_t> best;
  for (std::size_t s = 0; s < lattices.size(); ++s) {
    std::vector<std::size_t> picked{s};
    for (std::size_t j = 0; j < lattices.size(); ++j) {
      if (j == s) continue;
      bool ok = std::all_of(picked.begin(), picked.end(),
                            [&](std::size_t p) { return gcd(lattices[p].index(), lattices[j].index()) == 1; });
      if (ok) picked.push_back(j);
    }
    if (picked.size() > best.size()) best = picked;
  }
  std::sort(best.begin(), best.end());
  std::vector<Lattice> out;
  for (std::size_t i : best) out.push_back(lattices[i]);
  return out;
}

Evidence collect_evidence(const FamilySpec& spec, const Budget& budget) {
  Evidence ev;
  const Eigen::Index m = spec.dim;
  const Box search = Box::centered(IntVector::Zero(m), budget.search_radius);
  for (long k = 0; k <= budget.max_side; ++k) {
    const Shape shape = Shape::rectangle(Box(IntVector::Zero(m), IntVector::Constant(m, BigInt(k))));
    ZeroWindowRecord rec;
    rec.side = k;
    rec.translate = find_zero_translate(spec, shape, search, budget.window);
    if (rec.translate) {
      rec.period = syndetic_period(spec, *rec.translate, shape);
      rec.period_checks = verify_period(spec, *rec.translate, shape, *rec.period, 100);
    }
    const bool found = rec.translate.has_value();
    ev.windows.push_back(std::move(rec));
    if (!found) break;
  }
  return ev;
}

ProximalityVerdict decide_rectangular(const FamilySpec& spec, const Budget& budget) {
  if (!is_rectangular(spec)) fail(Errc::NotRectangular, "family has non-rectangular entries or a transform");
  spec.validate();
  if (spec.entries.empty()) return empty_verdict(spec.dim);
  ProximalityVerdict v;
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const RectView view = rect_view(spec.entries[i]);
    if (!rect_entry_coprime_scheme(view)) continue;
    v.status = Status::Proximal;
    CoprimeSubscheme cert;
    cert.entry = i;
    cert.rule = scheme_rule(view);
    for (const BigInt& t : view.params->coprime_members(budget.witness_count)) cert.witnesses.push_back(rect_member(view, t));
    const std::size_t need = pow(BigInt(budget.max_side + 1), static_cast<unsigned long>(spec.dim)).get_ui();
    std::vector<Lattice> crt_members;
    for (const BigInt& t : view.params->coprime_members(need)) crt_members.push_back(rect_member(view, t));
    v.evidence = crt_evidence(crt_members, spec.dim, budget.max_side);
    v.certificate = std::move(cert);
    v.reason = "entry " + std::to_string(i + 1) + " contains an infinite pairwise coprime subfamily";
    return v;
  }
  // No entry can supply two coprime members except finitely often, so no
  // infinite pairwise coprime subset exists; the union of proper rectangular
  // lattices never exhausts Z^m.
  v.status = Status::NotProximal;
  const std::vector<Lattice> covers = candidate_covers(spec);
  Covering cov;
  cov.covers = covers;
  try {
    CoveringCheck chk = check_covering(spec, covers, budget.coset_limit);
    if (!chk.ok) fail(Errc::InconsistencyDetected, "rectangular cover rejected: " + chk.reason);
    cov = std::move(chk.certificate);
    v.reason = "no infinite pairwise coprime subfamily; covering verified";
  } catch (const Error& e) {
    if (e.code() != Errc::TooLarge) throw;
    cov.missed = IntVector::Constant(spec.dim, BigInt(1));
    v.reason = "no infinite pairwise coprime subfamily; covering not verified (" + std::string(e.what()) + ")";
  }
  v.certificate = std::move(cov);
  return v;
}

ProximalityVerdict decide(const FamilySpec& spec, const Budget& budget) {
  spec.validate();
  if (spec.transform) {
    ProximalityVerdict v = decide(untransformed(spec), budget);
    v.certificate = transport_certificate(v.certificate, *spec.transform);
    if (v.status == Status::Proximal) {
      // Windows of A(B) are A-images of windows of B, with shapes mapped too;
      // keep only the transported periods' meaning by recomputing on the spec.
      v.evidence = collect_evidence(spec, budget);
    } else {
      v.evidence = {};
    }
    v.reason += " (decided on the untransformed family)";
    return v;
  }
  if (spec.entries.empty()) return empty_verdict(spec.dim);
  if (is_rectangular(spec)) return decide_rectangular(spec, budget);

  ProximalityVerdict v;
  const Eigen::Index m = spec.dim;

  if (is_finite(spec)) {
    std::vector<Lattice> members;
    for (const FamilyEntry& e : spec.entries)
      for (Lattice& l : finite_entry_members(e)) members.push_back(std::move(l));
    members = dedupe(std::move(members));
    const Lattice c = intersect_all(members);
    try {
      std::optional<Point> missed = first_uncovered(c, members, budget.coset_limit);
      if (!missed) {
        v.status = Status::Proximal;
        v.certificate = FullUnion{members};
        v.reason = "finitely many members already cover the whole group, so eta vanishes";
        return v;
      }
      CoveringCheck chk = check_covering(spec, maximal_only(members), budget.coset_limit);
      if (!chk.ok) fail(Errc::InconsistencyDetected, "finite family rejected as its own cover: " + chk.reason);
      v.status = Status::NotProximal;
      v.certificate = std::move(chk.certificate);
      v.reason = "finite family whose union misses a coset of the intersection";
      return v;
    } catch (const Error& e) {
      if (e.code() != Errc::TooLarge) throw;
      v.reason = std::string("finite family too large to scan: ") + e.what();
    }
  } else {
    const std::vector<Lattice> covers = candidate_covers(spec);
    const bool proper = std::all_of(covers.begin(), covers.end(), [](const Lattice& l) { return l.is_proper(); });
    if (proper) {
      try {
        CoveringCheck chk = check_covering(spec, covers, budget.coset_limit);
        if (chk.ok) {
          v.status = Status::NotProximal;
          v.certificate = std::move(chk.certificate);
          v.reason = "members lie in finitely many proper lattices whose union is not the whole group";
          return v;
        }
        v.reason = "envelope cover rejected: " + chk.reason;
      } catch (const Error& e) {
        if (e.code() != Errc::TooLarge) throw;
        v.reason = std::string("envelope cover too large to check: ") + e.what();
      }
    } else {
      v.reason = "some entry spans the whole group";
    }
  }
  v.status = Status::Inconclusive;
  v.evidence = collect_evidence(spec, budget);
  return v;
}

bool verify_verdict(const FamilySpec& spec, const ProximalityVerdict& v, std::size_t coset_limit) {
  const bool kind_ok = std::visit(
      overloaded{
          [&](const std::monostate&) { return v.status == Status::Inconclusive; },
          [&](const CoprimeSubscheme& s) {
            if (v.status != Status::Proximal || s.entry >= spec.entries.size() || s.witnesses.empty()) return false;
            const FamilyEntry& e = spec.entries[s.entry];
            if (!entry_is_rectangular(e) || !rect_entry_coprime_scheme(rect_view(e))) return false;
            return std::all_of(s.witnesses.begin(), s.witnesses.end(), [&](const Lattice& l) { return is_member(spec, l); }) &&
                   pairwise_coprime(s.witnesses);
          },
          [&](const CoprimeList& s) {
            if (s.lattices.empty()) return false;
            return std::all_of(s.lattices.begin(), s.lattices.end(), [&](const Lattice& l) { return is_member(spec, l); }) &&
                   pairwise_coprime(s.lattices);
          },
          [&](const Covering& s) {
            if (v.status != Status::NotProximal) return false;
            if (in_some(s.covers, s.missed)) return false;
            return check_covering(spec, s.covers, coset_limit).ok;
          },
          [&](const FixedTranslate& s) {
            return v.status == Status::NotProximal && check_fixed_translate(spec, s.a, s.lattice, 1000, coset_limit).holds;
          },
          [&](const FullUnion& s) {
            if (v.status != Status::Proximal || s.members.empty()) return false;
            if (!std::all_of(s.members.begin(), s.members.end(), [&](const Lattice& l) { return is_member(spec, l); }))
              return false;
            return !first_uncovered(intersect_all(s.members), s.members, coset_limit).has_value();
          },
      },
      v.certificate);
  if (!kind_ok) return false;
  for (const ZeroWindowRecord& r : v.evidence.windows) {
    if (!r.translate) continue;
    const Shape shape = Shape::rectangle(Box(IntVector::Zero(spec.dim), IntVector::Constant(spec.dim, BigInt(r.side))));
    if (r.period) {
      // CRT windows: each cell sits in the period's covering members; check
      // the cells explicitly only where membership is cheap to decide.
      if (r.period->index() > BigInt("1000000000000000000")) continue;
    }
    for (const Point& f : shape.offsets())
      if (!in_M(spec, *r.translate + f)) return false;
  }
  return true;
}

std::optional<Point> cover_translate(const std::vector<Lattice>& covers, const Shape& shape, std::size_t coset_limit) {
  if (covers.empty()) return std::nullopt;
  const Lattice c = intersect_all(covers);
  for (const Point& r : coset_reps(c, coset_limit)) {
    const bool inside = std::all_of(shape.offsets().begin(), shape.offsets().end(),
                                    [&](const Point& f) { return in_some(covers, Point(r + f)); });
    if (inside) return r;
  }
  return std::nullopt;
}

const ConditionResult& ConditionsReport::at(std::string_view name) const {
  for (const ConditionResult& c : conditions)
    if (c.name == name) return c;
  fail(Errc::InvalidArgument, "no condition named '" + std::string(name) + "'");
}

namespace {

// Whether every point of l lies in the union of finitely many family members,
// choosing members greedily by overlap with l.
bool contained_in_members(const Lattice& l, const std::vector<Lattice>& pool, std::size_t coset_limit) {
  std::vector<std::pair<BigInt, std::size_t>> ranked;
  for (std::size_t i = 0; i < pool.size(); ++i) ranked.push_back({intersect(l, pool[i]).index() / l.index(), i});
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Lattice> chosen;
  Lattice d = l;
  for (const auto& [rel, i] : ranked) {
    const Lattice next = intersect(d, pool[i]);
    if (next.index() / l.index() > coset_limit) continue;
    chosen.push_back(pool[i]);
    d = next;
    bool covered = true;
    for (const Point& r : relative_coset_reps(l, d, coset_limit)) {
      if (!in_some(chosen, r)) {
        covered = false;
        break;
      }
    }
    if (covered) return true;
  }
  return false;
}

}  // namespace

DPrimeCheck check_dprime(const FamilySpec& spec, const FamilySpec& candidate, const Budget& budget) {
  if (candidate.dim != spec.dim) fail(Errc::DimensionMismatch, "candidate family has the wrong dimension");
  candidate.validate();
  DPrimeCheck res;
  res.candidate = to_text(candidate);
  const std::vector<Lattice> members = instances_up_to(candidate, budget.instance_bound);

  const bool single_scheme = candidate.entries.size() == 1 && !candidate.transform &&
                             entry_is_rectangular(candidate.entries.front()) &&
                             rect_entry_coprime_scheme(rect_view(candidate.entries.front()));
  res.pairwise_coprime = pairwise_coprime(members);
  res.pairwise_coprime_exact = single_scheme || (is_finite(candidate) && members.size() == instances_up_to(candidate, BigInt(1) << 62).size());
  if (!res.pairwise_coprime) res.pairwise_coprime_exact = true;

  const std::vector<Lattice> pool = instances_up_to(spec, budget.instance_bound);
  const Eigen::Index m = spec.dim;
  const Shape coeffs = Shape::rectangle(Box::centered(IntVector::Zero(m), 3));
  bool all_contained = true;
  for (const Lattice& l : members) {
    ++res.members_checked;
    for (const Point& c : coeffs.offsets()) {
      const Point p = l.basis().lazyProduct(c);
      if (!in_M(spec, p)) {
        res.counterexample = p;
        res.counterexample_member = l;
        res.truth = Truth::ExactFalse;
        return res;
      }
    }
    if (!is_member(spec, l) && !contained_in_members(l, pool, budget.coset_limit)) all_contained = false;
  }
  // A candidate made of one entry of the family is inside M by definition.
  const FamilySpec base = untransformed(spec);
  const bool is_entry = candidate.entries.size() == 1 && candidate.transform == spec.transform &&
                        std::any_of(base.entries.begin(), base.entries.end(), [&](const FamilyEntry& e) {
                          return entry_to_string(e) == entry_to_string(candidate.entries.front());
                        });
  if (!res.pairwise_coprime) {
    res.truth = Truth::ExactFalse;
  } else if (is_entry && res.pairwise_coprime_exact && !is_finite(candidate)) {
    res.truth = Truth::ExactTrue;
  } else if (!all_contained || members.empty()) {
    res.truth = Truth::Unknown;
  } else if (is_finite(candidate)) {
    // A finite candidate is never an infinite subfamily.
    res.truth = Truth::ExactFalse;
  } else {
    res.truth = Truth::EvidenceTrue;
  }
  return res;
}

ConditionsReport conditions_report(const FamilySpec& spec, const Budget& budget) {
  ConditionsReport rep;
  rep.verdict = decide(spec, budget);
  const Eigen::Index m = spec.dim;
  const Status st = rep.verdict.status;

  if (rep.verdict.evidence.windows.empty() && st != Status::NotProximal)
    rep.verdict.evidence = collect_evidence(spec, budget);
  const Evidence& ev = rep.verdict.evidence;
  const std::vector<long> found = ev.zero_window_sides();
  const bool all_windows = static_cast<long>(found.size()) == budget.max_side + 1;

  // Density lower bounds; CRT seeds help when a coprime subscheme is known.
  std::vector<DensitySeed> seeds;
  if (const auto* cs = std::get_if<CoprimeSubscheme>(&rep.verdict.certificate); cs && !spec.transform) {
    const RectView view = rect_view(spec.entries[cs->entry]);
    for (long n : budget.density_sides) {
      const BigInt cells = pow(BigInt(2 * n + 1), static_cast<unsigned long>(m));
      if (cells > 1000) continue;
      std::vector<Lattice> lattices;
      for (const BigInt& t : view.params->coprime_members(cells.get_ui())) lattices.push_back(rect_member(view, t));
      seeds.push_back(crt_seed(lattices, m, n));
    }
  }
  rep.density = density_profile(spec, budget.density_sides, Box::centered(IntVector::Zero(m), budget.density_radius),
                                budget.window, seeds);
  const bool density_one = !rep.density.rows.empty() && rep.density.rows.back().ratio == 1;

  auto exact = [&](Truth t, std::string detail) { return std::make_pair(t, std::move(detail)); };
  std::pair<Truth, std::string> a, b, c, e, f;
  const std::string kind(certificate_kind(rep.verdict.certificate));
  if (st == Status::Proximal) {
    a = exact(Truth::ExactTrue, "certificate " + kind);
    b = exact(Truth::ExactTrue, "zero windows exist for every shape");
    c = exact(Truth::ExactTrue, "equivalent to proximality");
    e = exact(Truth::ExactTrue, "equivalent to proximality");
    f = exact(Truth::ExactTrue, "equivalent to proximality");
  } else if (st == Status::NotProximal) {
    a = exact(Truth::ExactFalse, "certificate " + kind);
    b = exact(Truth::ExactFalse, "a fixed translate of a lattice is free");
    c = exact(Truth::ExactFalse, kind == "Covering" ? "covering certificate" : "a free translate yields a cover");
    std::string fixed = "free translate";
    if (const auto* cov = std::get_if<Covering>(&rep.verdict.certificate)) {
      const Lattice inter = intersect_all(cov->covers);
      bool holds = false;
      try {
        holds = check_fixed_translate(spec, cov->missed, inter, 1000, budget.coset_limit).holds;
      } catch (const Error& err) {
        if (err.code() != Errc::TooLarge) throw;
        holds = true;
      }
      if (!holds) fail(Errc::InconsistencyDetected, "covering certificate without a free translate");
      fixed = "missed point + intersection of covers is free";
    }
    e = exact(Truth::ExactFalse, fixed);
    f = exact(Truth::ExactFalse, "equivalent to proximality");
  } else {
    const std::string sides = "zero windows for [0,k]^m found for k <= " +
                              std::to_string(found.empty() ? -1 : found.back()) + " in [-" +
                              std::to_string(budget.search_radius) + "," + std::to_string(budget.search_radius) + "]^m";
    const Truth t = all_windows ? Truth::EvidenceTrue : Truth::EvidenceFalse;
    a = exact(t, sides);
    b = exact(t, sides);
    c = exact(t, rep.verdict.reason);
    e = exact(t, sides);
    f = exact(density_one ? Truth::EvidenceTrue : Truth::Unknown, "best density lower bound at the largest side");
  }

  // Condition (d): infinite pairwise coprime subset.
  std::pair<Truth, std::string> d;
  if (std::holds_alternative<CoprimeSubscheme>(rep.verdict.certificate)) {
    d = exact(Truth::ExactTrue, "coprime subscheme");
  } else {
    bool all_proper = true;
    for (const FamilyEntry& en : spec.entries)
      if (entry_is_infinite(en) && !entry_envelope(en, m).is_proper()) all_proper = false;
    if (all_proper)
      d = exact(Truth::ExactFalse, "every infinite entry lies in a proper envelope, so two members of one entry are never coprime");
    else
      d = exact(Truth::Unknown, "no schema argument applies");
  }

  FamilySpec cand;
  if (budget.dprime_candidate) {
    cand = *budget.dprime_candidate;
  } else if (const auto* cs = std::get_if<CoprimeSubscheme>(&rep.verdict.certificate)) {
    cand = untransformed(spec);
    cand.entries = {cand.entries[cs->entry]};
    cand.transform = spec.transform;
  } else {
    cand.dim = m;
    cand.entries = {RectTemplateEntry{std::vector<Monomial>(static_cast<std::size_t>(m), Monomial{1, 1}), ParamSeq::primes()}};
  }
  rep.dprime = check_dprime(spec, cand, budget);
  std::string dp_detail;
  if (rep.dprime.counterexample)
    dp_detail = "candidate member contains the free point " + format_point(*rep.dprime.counterexample);
  else
    dp_detail = std::to_string(rep.dprime.members_checked) + " candidate members checked inside M";

  rep.conditions = {
      {"a", a.first, a.second}, {"b", b.first, b.second}, {"c", c.first, c.second}, {"d", d.first, d.second},
      {"e", e.first, e.second}, {"f", f.first, f.second}, {"d'", rep.dprime.truth, dp_detail},
  };

  // Exact results must respect (d) => (a) <=> (b) <=> (c) <=> (e) <=> (f).
  std::optional<bool> value;
  for (const char* name : {"a", "b", "c", "e", "f"}) {
    const Truth t = rep.at(name).truth;
    if (t != Truth::ExactTrue && t != Truth::ExactFalse) continue;
    const bool x = t == Truth::ExactTrue;
    if (value && *value != x) fail(Errc::InconsistencyDetected, std::string("condition ") + name + " contradicts the others");
    value = x;
  }
  if (value && !*value) {
    if (rep.at("d").truth == Truth::ExactTrue) fail(Errc::InconsistencyDetected, "(d) holds but the system is not proximal");
    if (rep.at("d'").truth == Truth::ExactTrue) fail(Errc::InconsistencyDetected, "(d') holds but the system is not proximal");
  }
  return rep;
}

}  // namespace bfree
