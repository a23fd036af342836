#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bfree/lattice.hpp"

namespace bfree {

/// An increasing sequence of positive integers parameterizing a template.
class ParamSeq {
 public:
  enum class Kind { Primes, OddPrimes, Geometric, Explicit };

  /// All primes except the given finite set.
  static ParamSeq primes(std::vector<BigInt> excluded = {});
  static ParamSeq odd_primes();
  /// base^j for j >= offset; base >= 2.
  static ParamSeq geometric(BigInt base, unsigned long offset = 1);
  /// A finite, non-empty, strictly increasing list of positive integers.
  static ParamSeq explicit_list(std::vector<BigInt> values);

  Kind kind() const { return kind_; }
  bool is_infinite() const { return kind_ != Kind::Explicit; }
  const std::vector<BigInt>& excluded() const { return excluded_; }
  const BigInt& base() const { return base_; }
  unsigned long offset() const { return offset_; }
  const std::vector<BigInt>& values() const { return values_; }

  bool contains(const BigInt& t) const;
  const BigInt& first() const { return first_; }
  /// Smallest member strictly greater than t, if any.
  std::optional<BigInt> next_after(const BigInt& t) const;
  /// Members t with t | n, ascending; n must be nonzero.
  std::vector<BigInt> members_dividing(const BigInt& n) const;
  /// gcd of all members.
  BigInt member_gcd() const;
  /// gcd of all differences t - first(); 0 for a single member.
  BigInt difference_gcd() const;
  /// The residues modulo n (n >= 1) of members of the sequence, ascending.
  /// For infinite kinds only residues attained by some member are listed.
  std::vector<BigInt> residues_mod(const BigInt& n) const;
  bool has_infinite_coprime_subset() const;
  /// The first `count` members of the pairwise-coprime subsequence obtained
  /// by greedy selection in increasing order (may be shorter for finite kinds).
  std::vector<BigInt> coprime_members(std::size_t count) const;
  /// Text form used by the family file format ("primes", "geometric:2:1", ...).
  std::string to_string() const;

  friend bool operator==(const ParamSeq&, const ParamSeq&) = default;

 private:
  ParamSeq() = default;
  Kind kind_ = Kind::Explicit;
  std::vector<BigInt> excluded_;
  BigInt base_ = 0;
  unsigned long offset_ = 0;
  std::vector<BigInt> values_;
  BigInt first_ = 0;
};

struct StaticEntry {
  Lattice lattice;
};

/// a_1 Z x ... x a_m Z
struct RectEntry {
  std::vector<BigInt> moduli;
};

/// base with the diagonal entry at `pos` multiplied by the parameter t.
struct TemplateEntry {
  IntMatrix base;
  Eigen::Index pos = 0;
  ParamSeq params;

  Lattice member(const BigInt& t) const;
  const BigInt& scaled_coefficient() const { return base(pos, pos); }
};

/// coef * t^exp; exp == 0 is a constant coordinate.
struct Monomial {
  BigInt coef = 1;
  unsigned long exp = 0;

  BigInt at(const BigInt& t) const { return coef * pow(t, exp); }
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// prod_j (c_j t^{e_j}) Z
struct RectTemplateEntry {
  std::vector<Monomial> coords;
  ParamSeq params;

  Lattice member(const BigInt& t) const;
};

using FamilyEntry = std::variant<StaticEntry, RectEntry, TemplateEntry, RectTemplateEntry>;

/// A finite description of a (possibly infinite) family of lattices in Z^m,
/// optionally transported by a unimodular map (members are A(L)).
struct FamilySpec {
  Eigen::Index dim = 1;
  std::vector<FamilyEntry> entries;
  std::optional<UnimodularMap> transform;

  /// Throws InvalidArgument if an entry has the wrong dimension, an
  /// improper member or a non-canonical template base.
  void validate() const;
};

// Entry-level helpers; members of entries are in untransformed coordinates.
bool entry_is_infinite(const FamilyEntry& e);
bool entry_is_rectangular(const FamilyEntry& e);
/// The sum of all members of the entry: the smallest lattice containing all of them.
Lattice entry_envelope(const FamilyEntry& e, Eigen::Index dim);
/// The distinct lattices L + c for L ranging over the members of the entry.
std::vector<Lattice> entry_members_plus(const FamilyEntry& e, const Lattice& c,
                                        std::size_t limit = kDefaultCosetLimit);
/// A member of the entry containing p (smallest parameter), if any.
std::optional<Lattice> entry_member_containing(const FamilyEntry& e, const Point& p);
/// Members with index <= bound in increasing parameter order.
std::vector<Lattice> entry_instances_up_to(const FamilyEntry& e, Eigen::Index dim, const BigInt& bound);
bool entry_has_member(const FamilyEntry& e, const Lattice& l);
std::string entry_to_string(const FamilyEntry& e);

bool is_rectangular(const FamilySpec& spec);
bool is_finite(const FamilySpec& spec);

/// p in M_B, the union of all members.
bool in_M(const FamilySpec& spec, const Point& p);
/// 1 if p is B-free, 0 otherwise.
inline int eta(const FamilySpec& spec, const Point& p) { return in_M(spec, p) ? 0 : 1; }
/// A member containing p (first entry in order, smallest parameter), transported.
std::optional<Lattice> member_containing(const FamilySpec& spec, const Point& p);
/// All members with index <= bound, transported, deduplicated, in entry order.
std::vector<Lattice> instances_up_to(const FamilySpec& spec, const BigInt& bound);
/// Whether l is (exactly) a member of the family.
bool is_member(const FamilySpec& spec, const Lattice& l);

/// A(spec): the same family with every member mapped through a.
FamilySpec transported(const FamilySpec& spec, const UnimodularMap& a);
/// The family with the transform dropped.
FamilySpec untransformed(const FamilySpec& spec);

/// Presets: "ex2", "ex1", "squarefree-1d", "rect-demo".
FamilySpec preset(std::string_view name);
std::vector<std::string> preset_names();

/// Parses the line-oriented family format. Errors are Errc::ParseError and
/// name the offending line.
FamilySpec parse_family(std::string_view text);
FamilySpec load_family(const std::string& path);
std::string to_text(const FamilySpec& spec);

}  // namespace bfree
