#include <algorithm>
#include <set>

#include "bfree/error.hpp"
#include "bfree/family.hpp"

namespace bfree {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool is_canonical_basis(const IntMatrix& b) {
  try {
    Lattice::from_canonical(b);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Back-substitution for the rows after `from`, with coefficients c[0..from] fixed.
bool solve_tail(const IntMatrix& b, const Point& p, IntVector& c, Eigen::Index from) {
  for (Eigen::Index i = from; i < b.rows(); ++i) {
    BigInt rest = p(i);
    for (Eigen::Index j = 0; j < i; ++j) rest -= b(i, j) * c(j);
    if (!divides(b(i, i), rest)) return false;
    c(i) = rest / b(i, i);
  }
  return true;
}

std::optional<BigInt> template_parameter_for(const TemplateEntry& e, const Point& p) {
  const IntMatrix& b = e.base;
  const Eigen::Index r = e.pos;
  IntVector c(b.cols());
  c.setZero();
  if (!solve_tail(b.topLeftCorner(r, r), p.head(r), c, 0)) return std::nullopt;
  BigInt v = p(r);
  for (Eigen::Index j = 0; j < r; ++j) v -= b(r, j) * c(j);
  const BigInt& coef = b(r, r);

  auto rest_ok = [&](const BigInt& t) {
    IntMatrix scaled = b;
    scaled(r, r) *= t;
    IntVector k = c;
    k(r) = v / scaled(r, r);
    return solve_tail(scaled, p, k, r + 1);
  };

  if (v == 0) {
    // k_r = 0 satisfies row r for every t; the remaining rows do not involve t.
    if (!rest_ok(e.params.first())) return std::nullopt;
    return e.params.first();
  }
  if (!divides(coef, v)) return std::nullopt;
  for (const BigInt& t : e.params.members_dividing(BigInt(v / coef)))
    if (rest_ok(t)) return t;
  return std::nullopt;
}

bool rect_template_holds(const RectTemplateEntry& e, const Point& p, const BigInt& t) {
  for (std::size_t j = 0; j < e.coords.size(); ++j)
    if (!divides(e.coords[j].at(t), p(static_cast<Eigen::Index>(j)))) return false;
  return true;
}

std::optional<BigInt> rect_template_parameter_for(const RectTemplateEntry& e, const Point& p) {
  for (std::size_t j = 0; j < e.coords.size(); ++j) {
    const Monomial& mono = e.coords[j];
    const BigInt& x = p(static_cast<Eigen::Index>(j));
    if (mono.exp == 0 || x == 0) continue;
    if (!divides(mono.coef, x)) return std::nullopt;
    for (const BigInt& t : e.params.members_dividing(BigInt(x / mono.coef)))
      if (rect_template_holds(e, p, t)) return t;
    return std::nullopt;
  }
  // Every t-coordinate of p is zero, so only the constant coordinates matter.
  if (rect_template_holds(e, p, e.params.first())) return e.params.first();
  return std::nullopt;
}

// Exact integer e-th root of n, if n is a perfect e-th power.
std::optional<BigInt> exact_root(const BigInt& n, unsigned long e) {
  if (n < 0) return std::nullopt;
  BigInt r;
  if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), e) == 0) return std::nullopt;
  return r;
}

std::string matrix_columns_text(const IntMatrix& b) {
  std::string s = "[";
  for (Eigen::Index j = 0; j < b.cols(); ++j) {
    s += j ? ",[" : "[";
    for (Eigen::Index i = 0; i < b.rows(); ++i) s += (i ? "," : "") + to_string(b(i, j));
    s += "]";
  }
  return s + "]";
}

std::string monomial_text(const Monomial& m) {
  if (m.exp == 0) return to_string(m.coef);
  std::string s = m.coef == 1 ? "" : to_string(m.coef);
  s += "t";
  if (m.exp > 1) s += "^" + std::to_string(m.exp);
  return s;
}

void push_unique(std::vector<Lattice>& out, std::set<Lattice>& seen, Lattice l) {
  if (seen.insert(l).second) out.push_back(std::move(l));
}

}  // namespace

Lattice TemplateEntry::member(const BigInt& t) const {
  IntMatrix b = base;
  b(pos, pos) *= t;
  return Lattice::from_canonical(std::move(b));
}

Lattice RectTemplateEntry::member(const BigInt& t) const {
  std::vector<BigInt> moduli;
  for (const Monomial& m : coords) moduli.push_back(m.at(t));
  return Lattice::diagonal(moduli);
}

void FamilySpec::validate() const {
  if (dim < 1) fail(Errc::InvalidArgument, "family dimension must be positive");
  if (transform && transform->dim() != dim) fail(Errc::DimensionMismatch, "transform has the wrong dimension");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "entry " + std::to_string(i + 1) + ": ";
    std::visit(
        overloaded{
            [&](const StaticEntry& e) {
              if (e.lattice.dim() != dim) fail(Errc::DimensionMismatch, where + "lattice has the wrong dimension");
              if (!e.lattice.is_proper()) fail(Errc::InvalidArgument, where + "lattice has index 1");
            },
            [&](const RectEntry& e) {
              if (static_cast<Eigen::Index>(e.moduli.size()) != dim)
                fail(Errc::DimensionMismatch, where + "rectangular entry has the wrong dimension");
              for (const BigInt& a : e.moduli)
                if (a < 1) fail(Errc::InvalidArgument, where + "rectangular moduli must be positive");
              if (std::all_of(e.moduli.begin(), e.moduli.end(), [](const BigInt& a) { return a == 1; }))
                fail(Errc::InvalidArgument, where + "rectangular entry (1,...,1) is the whole group");
            },
            [&](const TemplateEntry& e) {
              if (e.base.rows() != dim || e.base.cols() != dim)
                fail(Errc::DimensionMismatch, where + "template base has the wrong dimension");
              if (!is_canonical_basis(e.base)) fail(Errc::InvalidArgument, where + "template base is not in canonical form");
              if (e.pos < 0 || e.pos >= dim) fail(Errc::InvalidArgument, where + "scaled position outside the diagonal");
              if (Lattice::from_canonical(e.base).index() * e.params.first() < 2)
                fail(Errc::InvalidArgument, where + "template produces the whole group");
            },
            [&](const RectTemplateEntry& e) {
              if (static_cast<Eigen::Index>(e.coords.size()) != dim)
                fail(Errc::DimensionMismatch, where + "rectangular template has the wrong dimension");
              for (const Monomial& m : e.coords)
                if (m.coef < 1) fail(Errc::InvalidArgument, where + "coefficients must be positive");
              if (e.member(e.params.first()).index() < 2)
                fail(Errc::InvalidArgument, where + "template produces the whole group");
            },
        },
        entries[i]);
  }
}

bool entry_is_infinite(const FamilyEntry& e) {
  return std::visit(overloaded{
                        [](const StaticEntry&) { return false; },
                        [](const RectEntry&) { return false; },
                        [](const TemplateEntry& t) { return t.params.is_infinite(); },
                        [](const RectTemplateEntry& t) {
                          bool uses_t = std::any_of(t.coords.begin(), t.coords.end(),
                                                    [](const Monomial& m) { return m.exp > 0; });
                          return uses_t && t.params.is_infinite();
                        },
                    },
                    e);
}

bool entry_is_rectangular(const FamilyEntry& e) {
  return std::visit(overloaded{
                        [](const StaticEntry& s) { return s.lattice.is_diagonal(); },
                        [](const RectEntry&) { return true; },
                        [](const TemplateEntry& t) { return Lattice::from_canonical(t.base).is_diagonal(); },
                        [](const RectTemplateEntry&) { return true; },
                    },
                    e);
}

Lattice entry_envelope(const FamilyEntry& e, Eigen::Index dim) {
  return std::visit(
      overloaded{
          [](const StaticEntry& s) { return s.lattice; },
          [](const RectEntry& r) { return Lattice::diagonal(r.moduli); },
          [dim](const TemplateEntry& t) {
            // Span of the fixed columns, column pos at the first parameter, and
            // the differences c (t - t0) e_pos.
            IntMatrix g(dim, dim + 1);
            g.leftCols(dim) = t.member(t.params.first()).basis();
            g.col(dim).setZero();
            g(t.pos, dim) = t.scaled_coefficient() * t.params.difference_gcd();
            return hnf(g);
          },
          [](const RectTemplateEntry& t) {
            const BigInt g = t.params.member_gcd();
            std::vector<BigInt> moduli;
            for (const Monomial& m : t.coords) moduli.push_back(m.coef * pow(g, m.exp));
            return Lattice::diagonal(moduli);
          },
      },
      e);
}

std::vector<Lattice> entry_members_plus(const FamilyEntry& e, const Lattice& c, std::size_t limit) {
  const Eigen::Index m = c.dim();
  std::vector<Lattice> out;
  std::set<Lattice> seen;
  std::visit(overloaded{
                 [&](const StaticEntry& s) { push_unique(out, seen, sum(s.lattice, c)); },
                 [&](const RectEntry& r) { push_unique(out, seen, sum(Lattice::diagonal(r.moduli), c)); },
                 [&](const TemplateEntry& t) {
                   // index(c) e_pos lies in c, so L(t) + c only depends on t mod index(c).
                   for (const BigInt& rho : t.params.residues_mod(c.index())) {
                     if (out.size() > limit) fail(Errc::TooLarge, "too many residue classes");
                     IntMatrix g(m, 2 * m);
                     g.leftCols(m) = t.base;
                     g(t.pos, t.pos) *= rho;
                     g.rightCols(m) = c.basis();
                     push_unique(out, seen, hnf(g));
                   }
                 },
                 [&](const RectTemplateEntry& t) {
                   for (const BigInt& rho : t.params.residues_mod(c.index())) {
                     if (out.size() > limit) fail(Errc::TooLarge, "too many residue classes");
                     IntMatrix g = IntMatrix::Zero(m, 2 * m);
                     for (Eigen::Index j = 0; j < m; ++j) g(j, j) = t.coords[static_cast<std::size_t>(j)].at(rho);
                     g.rightCols(m) = c.basis();
                     push_unique(out, seen, hnf(g));
                   }
                 },
             },
             e);
  return out;
}

std::optional<Lattice> entry_member_containing(const FamilyEntry& e, const Point& p) {
  return std::visit(overloaded{
                        [&](const StaticEntry& s) -> std::optional<Lattice> {
                          if (contains(s.lattice, p)) return s.lattice;
                          return std::nullopt;
                        },
                        [&](const RectEntry& r) -> std::optional<Lattice> {
                          for (std::size_t j = 0; j < r.moduli.size(); ++j)
                            if (!divides(r.moduli[j], p(static_cast<Eigen::Index>(j)))) return std::nullopt;
                          return Lattice::diagonal(r.moduli);
                        },
                        [&](const TemplateEntry& t) -> std::optional<Lattice> {
                          if (auto param = template_parameter_for(t, p)) return t.member(*param);
                          return std::nullopt;
                        },
                        [&](const RectTemplateEntry& t) -> std::optional<Lattice> {
                          if (auto param = rect_template_parameter_for(t, p)) return t.member(*param);
                          return std::nullopt;
                        },
                    },
                    e);
}

std::vector<Lattice> entry_instances_up_to(const FamilyEntry& e, Eigen::Index dim, const BigInt& bound) {
  std::vector<Lattice> out;
  std::set<Lattice> seen;
  auto take_sequence = [&](const ParamSeq& params, auto&& member) {
    std::optional<BigInt> t = params.first();
    while (t) {
      Lattice l = member(*t);
      if (l.index() > bound) break;
      if (!seen.insert(l).second) break;  // the member no longer depends on t
      out.push_back(std::move(l));
      t = params.next_after(*t);
    }
  };
  std::visit(overloaded{
                 [&](const StaticEntry& s) {
                   if (s.lattice.index() <= bound) out.push_back(s.lattice);
                 },
                 [&](const RectEntry& r) {
                   Lattice l = Lattice::diagonal(r.moduli);
                   if (l.index() <= bound) out.push_back(l);
                 },
                 [&](const TemplateEntry& t) { take_sequence(t.params, [&](const BigInt& v) { return t.member(v); }); },
                 [&](const RectTemplateEntry& t) {
                   take_sequence(t.params, [&](const BigInt& v) { return t.member(v); });
                 },
             },
             e);
  (void)dim;
  return out;
}

bool entry_has_member(const FamilyEntry& e, const Lattice& l) {
  return std::visit(overloaded{
                        [&](const StaticEntry& s) { return s.lattice == l; },
                        [&](const RectEntry& r) { return Lattice::diagonal(r.moduli) == l; },
                        [&](const TemplateEntry& t) {
                          if (l.dim() != t.base.rows()) return false;
                          const BigInt& d = l.basis()(t.pos, t.pos);
                          if (!divides(t.scaled_coefficient(), d)) return false;
                          BigInt param = d / t.scaled_coefficient();
                          return t.params.contains(param) && t.member(param) == l;
                        },
                        [&](const RectTemplateEntry& t) {
                          if (l.dim() != static_cast<Eigen::Index>(t.coords.size()) || !l.is_diagonal()) return false;
                          for (std::size_t j = 0; j < t.coords.size(); ++j) {
                            const Monomial& m = t.coords[j];
                            if (m.exp == 0) continue;
                            const BigInt& d = l.basis()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j));
                            if (!divides(m.coef, d)) return false;
                            auto root = exact_root(BigInt(d / m.coef), m.exp);
                            return root && t.params.contains(*root) && t.member(*root) == l;
                          }
                          return t.member(t.params.first()) == l;
                        },
                    },
                    e);
}

std::string entry_to_string(const FamilyEntry& e) {
  return std::visit(overloaded{
                        [](const StaticEntry& s) { return "static " + matrix_columns_text(s.lattice.basis()); },
                        [](const RectEntry& r) {
                          std::string s = "rect [";
                          for (std::size_t j = 0; j < r.moduli.size(); ++j) s += (j ? "," : "") + to_string(r.moduli[j]);
                          return s + "]";
                        },
                        [](const TemplateEntry& t) {
                          const std::string p = std::to_string(t.pos + 1);
                          return "template base=" + matrix_columns_text(t.base) + " scale=(" + p + "," + p +
                                 ") params=" + t.params.to_string();
                        },
                        [](const RectTemplateEntry& t) {
                          std::string s = "recttemplate [";
                          for (std::size_t j = 0; j < t.coords.size(); ++j) s += (j ? "," : "") + monomial_text(t.coords[j]);
                          return s + "] params=" + t.params.to_string();
                        },
                    },
                    e);
}

bool is_rectangular(const FamilySpec& spec) {
  if (spec.transform) return false;
  return std::all_of(spec.entries.begin(), spec.entries.end(), [](const FamilyEntry& e) {
    return entry_is_rectangular(e);
  });
}

bool is_finite(const FamilySpec& spec) {
  return std::none_of(spec.entries.begin(), spec.entries.end(), [](const FamilyEntry& e) { return entry_is_infinite(e); });
}

namespace {

Point untransform_point(const FamilySpec& spec, const Point& p) {
  if (p.size() != spec.dim) fail(Errc::DimensionMismatch, "point has the wrong dimension");
  return spec.transform ? spec.transform->apply_inverse(p) : p;
}

}  // namespace

bool in_M(const FamilySpec& spec, const Point& p) {
  const Point q = untransform_point(spec, p);
  for (const FamilyEntry& e : spec.entries)
    if (entry_member_containing(e, q)) return true;
  return false;
}

std::optional<Lattice> member_containing(const FamilySpec& spec, const Point& p) {
  const Point q = untransform_point(spec, p);
  for (const FamilyEntry& e : spec.entries) {
    if (auto l = entry_member_containing(e, q)) return spec.transform ? transport(*spec.transform, *l) : *l;
  }
  return std::nullopt;
}

std::vector<Lattice> instances_up_to(const FamilySpec& spec, const BigInt& bound) {
  std::vector<Lattice> out;
  std::set<Lattice> seen;
  for (const FamilyEntry& e : spec.entries)
    for (Lattice& l : entry_instances_up_to(e, spec.dim, bound))
      push_unique(out, seen, spec.transform ? transport(*spec.transform, l) : std::move(l));
  return out;
}

bool is_member(const FamilySpec& spec, const Lattice& l) {
  if (l.dim() != spec.dim) return false;
  const Lattice base = spec.transform ? transport(spec.transform->inverse(), l) : l;
  return std::any_of(spec.entries.begin(), spec.entries.end(),
                     [&](const FamilyEntry& e) { return entry_has_member(e, base); });
}

FamilySpec transported(const FamilySpec& spec, const UnimodularMap& a) {
  if (a.dim() != spec.dim) fail(Errc::DimensionMismatch, "transform has the wrong dimension");
  FamilySpec out = spec;
  out.transform = spec.transform ? a.compose(*spec.transform) : a;
  return out;
}

FamilySpec untransformed(const FamilySpec& spec) {
  FamilySpec out = spec;
  out.transform.reset();
  return out;
}

FamilySpec preset(std::string_view name) {
  auto cols = [](std::vector<std::vector<BigInt>> c) { return int_matrix_from_columns(c); };
  FamilySpec spec;
  if (name == "ex2") {
    spec.dim = 2;
    spec.entries = {
        StaticEntry{Lattice::diagonal({2, 1})},
        StaticEntry{Lattice::diagonal({1, 2})},
        TemplateEntry{cols({{1, 1}, {0, 2}}), 1, ParamSeq::primes()},
    };
  } else if (name == "ex1") {
    spec.dim = 2;
    spec.entries = {
        StaticEntry{hnf(cols({{1, 1}, {0, 2}}))},
        StaticEntry{Lattice::diagonal({1, 2})},
        TemplateEntry{cols({{2, 1}, {0, 2}}), 0, ParamSeq::odd_primes()},
        TemplateEntry{cols({{1, 1}, {0, 2}}), 0, ParamSeq::geometric(2, 2)},
    };
  } else if (name == "squarefree-1d") {
    spec.dim = 1;
    spec.entries = {RectTemplateEntry{{Monomial{1, 2}}, ParamSeq::primes()}};
  } else if (name == "rect-demo") {
    spec.dim = 2;
    for (long p : {2, 3, 5, 7, 11}) spec.entries.push_back(RectEntry{{p, p}});
  } else {
    fail(Errc::UnknownPreset, "unknown preset '" + std::string(name) + "'");
  }
  spec.validate();
  return spec;
}

std::vector<std::string> preset_names() { return {"ex2", "ex1", "squarefree-1d", "rect-demo"}; }

}  // namespace bfree
