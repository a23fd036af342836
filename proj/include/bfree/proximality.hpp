#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bfree/family.hpp"
#include "bfree/window.hpp"

namespace bfree {

enum class Status { Proximal, NotProximal, Inconclusive };
std::string_view status_name(Status s);

/// An infinite pairwise coprime subfamily, given by a selection rule on one
/// entry's parameters, with its first members as witnesses.
struct CoprimeSubscheme {
  std::size_t entry = 0;
  std::string rule;
  std::vector<Lattice> witnesses;
};

/// Finitely many pairwise coprime members (with pairwise coprime indices)
/// used for CRT windows.
struct CoprimeList {
  std::vector<Lattice> lattices;
  std::string extension;
};

/// One family member class checked against a cover set: member + C for
/// C the intersection of the covers, and the cosets of C it was tested on.
struct CheckedMember {
  std::size_t entry = 0;
  Lattice member_plus_cover;
  std::size_t cosets = 0;
};

/// Proper lattices whose union contains M but not the point `missed`, so
/// missed + (intersection of covers) lies in the free set.
struct Covering {
  std::vector<Lattice> covers;
  Point missed;
  std::vector<CheckedMember> checked;
  bool verified = false;
};

/// a + lattice lies in the free set.
struct FixedTranslate {
  Point a;
  Lattice lattice;
  bool exact = false;
};

/// Finitely many members whose union is already the whole group, so eta is
/// identically zero.
struct FullUnion {
  std::vector<Lattice> members;
};

struct ZeroWindowRecord {
  long side = 0;  // shape [0,side]^m
  std::optional<Point> translate;
  std::optional<Lattice> period;
  std::size_t period_checks = 0;
};

struct Evidence {
  std::vector<ZeroWindowRecord> windows;
  std::vector<long> zero_window_sides() const;
};

using Certificate = std::variant<std::monostate, CoprimeSubscheme, CoprimeList, Covering, FixedTranslate, FullUnion>;
std::string_view certificate_kind(const Certificate& c);

struct ProximalityVerdict {
  Status status = Status::Inconclusive;
  Certificate certificate;
  Evidence evidence;
  std::string reason;
};

struct Budget {
  long max_side = 6;        // zero-window shapes [0,k]^m for k <= max_side
  long search_radius = 40;  // searched over [-r, r]^m
  std::size_t coset_limit = kDefaultCosetLimit;
  std::size_t exact_limit = 20;
  BigInt instance_bound = 200;
  std::vector<long> density_sides = {5, 10, 20};
  long density_radius = 40;
  std::size_t witness_count = 16;
  WindowOptions window;
  /// Candidate pairwise coprime subfamily for the covering-subfamily
  /// condition; defaults to [t,...,t] over the primes.
  std::optional<FamilySpec> dprime_candidate;
};

/// Exact verdict for families of rectangular lattices. Throws NotRectangular.
ProximalityVerdict decide_rectangular(const FamilySpec& spec, const Budget& budget = {});
/// Verdict for any family; Inconclusive with finite evidence when no exact
/// route applies.
ProximalityVerdict decide(const FamilySpec& spec, const Budget& budget = {});

struct CoveringCheck {
  bool ok = false;
  std::string reason;
  Covering certificate;
};

/// Exact test of "covers are proper, their union is not Z^m, and every member
/// of the family lies in their union".
CoveringCheck check_covering(const FamilySpec& spec, const std::vector<Lattice>& covers,
                             std::size_t coset_limit = kDefaultCosetLimit);

struct FixedTranslateCheck {
  bool holds = false;
  bool exact = false;
  std::size_t members_checked = 0;
  std::string reason;
};

/// Whether a + lattice lies in the free set. Exact whenever template residues
/// modulo index(lattice) can be enumerated; otherwise checked against the
/// members of index <= test_bound only.
FixedTranslateCheck check_fixed_translate(const FamilySpec& spec, const Point& a, const Lattice& lattice,
                                          const BigInt& test_bound = 1000,
                                          std::size_t coset_limit = kDefaultCosetLimit);

/// A pairwise coprime sublist (input order kept). Maximum size by exhaustive
/// search when lattices.size() <= exact_limit, ties going to the
/// lexicographically smallest set of canonical bases; greedy first-fit beyond.
std::vector<Lattice> extract_coprime_subset(const std::vector<Lattice>& lattices, std::size_t exact_limit = 20);

/// For a pairwise coprime list (NotPairwiseCoprime otherwise), a sublist with
/// pairwise coprime indices: the largest of the greedy passes seeded at each
/// element.
std::vector<Lattice> coprime_indices_subset(const std::vector<Lattice>& lattices);

/// Scans one period of the covers' intersection for g with g + shape inside
/// the union of the covers. When the covers contain M, nullopt proves that no
/// zero window of the shape exists anywhere.
std::optional<Point> cover_translate(const std::vector<Lattice>& covers, const Shape& shape,
                                     std::size_t coset_limit = kDefaultCosetLimit);

/// Re-checks the certificate of a verdict against the family.
bool verify_verdict(const FamilySpec& spec, const ProximalityVerdict& v, std::size_t coset_limit = kDefaultCosetLimit);

enum class Truth { ExactTrue, ExactFalse, EvidenceTrue, EvidenceFalse, Unknown };
std::string_view truth_name(Truth t);

struct ConditionResult {
  std::string name;
  Truth truth = Truth::Unknown;
  std::string detail;
};

struct DPrimeCheck {
  std::string candidate;
  bool pairwise_coprime = false;
  bool pairwise_coprime_exact = false;
  std::size_t members_checked = 0;
  std::optional<Point> counterexample;  // a point of a candidate member in the free set
  std::optional<Lattice> counterexample_member;
  Truth truth = Truth::Unknown;
};

struct ConditionsReport {
  ProximalityVerdict verdict;
  std::vector<ConditionResult> conditions;  // a, b, c, d, e, f, d'
  DensityProfile density;
  DPrimeCheck dprime;

  const ConditionResult& at(std::string_view name) const;
};

/// Checks the candidate subfamily: pairwise coprime and every member inside M.
DPrimeCheck check_dprime(const FamilySpec& spec, const FamilySpec& candidate, const Budget& budget = {});

/// Status of each proximality condition, exact where a proof is available. Throws
/// InconsistencyDetected if two exact results contradict each other.
ConditionsReport conditions_report(const FamilySpec& spec, const Budget& budget = {});

/// Zero windows for the shapes [0,k]^m, k = 0..budget.max_side, with periods.
Evidence collect_evidence(const FamilySpec& spec, const Budget& budget);

}  // namespace bfree
