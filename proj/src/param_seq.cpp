#include <algorithm>
#include <set>

#include "bfree/error.hpp"
#include "bfree/family.hpp"

namespace bfree {

namespace {

bool is_excluded(const std::vector<BigInt>& excluded, const BigInt& p) {
  return std::find(excluded.begin(), excluded.end(), p) != excluded.end();
}

BigInt next_allowed_prime(const BigInt& after, const std::vector<BigInt>& excluded) {
  BigInt p = next_prime(after);
  while (is_excluded(excluded, p)) p = next_prime(p);
  return p;
}

}  // namespace

ParamSeq ParamSeq::primes(std::vector<BigInt> excluded) {
  ParamSeq s;
  s.kind_ = Kind::Primes;
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  s.excluded_ = std::move(excluded);
  s.first_ = next_allowed_prime(1, s.excluded_);
  return s;
}

ParamSeq ParamSeq::odd_primes() {
  ParamSeq s;
  s.kind_ = Kind::OddPrimes;
  s.excluded_ = {2};
  s.first_ = 3;
  return s;
}

ParamSeq ParamSeq::geometric(BigInt base, unsigned long offset) {
  if (base < 2) fail(Errc::InvalidArgument, "geometric parameter base must be at least 2");
  ParamSeq s;
  s.kind_ = Kind::Geometric;
  s.base_ = std::move(base);
  s.offset_ = offset;
  s.first_ = pow(s.base_, offset);
  return s;
}

ParamSeq ParamSeq::explicit_list(std::vector<BigInt> values) {
  if (values.empty()) fail(Errc::InvalidArgument, "explicit parameter list is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 1) fail(Errc::InvalidArgument, "explicit parameters must be positive");
    if (i > 0 && values[i] <= values[i - 1]) fail(Errc::InvalidArgument, "explicit parameters must be strictly increasing");
  }
  ParamSeq s;
  s.kind_ = Kind::Explicit;
  s.values_ = std::move(values);
  s.first_ = s.values_.front();
  return s;
}

bool ParamSeq::contains(const BigInt& t) const {
  switch (kind_) {
    case Kind::Primes:
    case Kind::OddPrimes:
      return is_prime(t) && !is_excluded(excluded_, t);
    case Kind::Geometric: {
      if (t < first_) return false;
      BigInt v = t;
      while (divides(base_, v)) v /= base_;
      return v == 1;
    }
    case Kind::Explicit:
      return std::binary_search(values_.begin(), values_.end(), t);
  }
  return false;
}

std::optional<BigInt> ParamSeq::next_after(const BigInt& t) const {
  switch (kind_) {
    case Kind::Primes:
    case Kind::OddPrimes:
      return next_allowed_prime(t < 1 ? BigInt(1) : t, excluded_);
    case Kind::Geometric: {
      BigInt v = first_;
      while (v <= t) v *= base_;
      return v;
    }
    case Kind::Explicit: {
      auto it = std::upper_bound(values_.begin(), values_.end(), t);
      if (it == values_.end()) return std::nullopt;
      return *it;
    }
  }
  return std::nullopt;
}

std::vector<BigInt> ParamSeq::members_dividing(const BigInt& n) const {
  if (n == 0) fail(Errc::InvalidArgument, "members_dividing(0)");
  std::vector<BigInt> out;
  switch (kind_) {
    case Kind::Primes:
    case Kind::OddPrimes:
      for (const BigInt& p : prime_factors(n))
        if (!is_excluded(excluded_, p)) out.push_back(p);
      break;
    case Kind::Geometric:
      for (BigInt v = first_; divides(v, n); v *= base_) out.push_back(v);
      break;
    case Kind::Explicit:
      for (const BigInt& v : values_)
        if (divides(v, n)) out.push_back(v);
      break;
  }
  return out;
}

BigInt ParamSeq::member_gcd() const {
  switch (kind_) {
    case Kind::Primes:
    case Kind::OddPrimes:
      return 1;
    case Kind::Geometric:
      return first_;
    case Kind::Explicit: {
      BigInt g = 0;
      for (const BigInt& v : values_) g = gcd(g, v);
      return g;
    }
  }
  return 1;
}

BigInt ParamSeq::difference_gcd() const {
  switch (kind_) {
    case Kind::Primes:
    case Kind::OddPrimes:
      // Dirichlet: all invertible classes modulo any q occur infinitely often,
      // so only the parity of the members constrains the differences.
      return is_excluded(excluded_, BigInt(2)) ? 2 : 1;
    case Kind::Geometric:
      return first_ * (base_ - 1);
    case Kind::Explicit: {
      BigInt g = 0;
      for (const BigInt& v : values_) g = gcd(g, BigInt(v - values_.front()));
      return g;
    }
  }
  return 0;
}

std::vector<BigInt> ParamSeq::residues_mod(const BigInt& n) const {
  if (n < 1) fail(Errc::InvalidArgument, "residues_mod needs a positive modulus");
  std::set<BigInt> out;
  switch (kind_) {
    case Kind::Primes:
    case Kind::OddPrimes: {
      if (!n.fits_ulong_p() || n.get_ui() > kDefaultCosetLimit)
        fail(Errc::TooLarge, "residue enumeration modulo " + bfree::to_string(n));
      // Every invertible class holds infinitely many primes; finitely many
      // exclusions cannot empty it.
      for (unsigned long r = 0; r < n.get_ui(); ++r)
        if (gcd(BigInt(r), n) == 1) out.insert(BigInt(r));
      for (const BigInt& p : (n > 1 ? prime_factors(n) : std::vector<BigInt>{}))
        if (!is_excluded(excluded_, p)) out.insert(floor_mod(p, n));
      break;
    }
    case Kind::Geometric: {
      BigInt r = floor_mod(first_, n);
      while (out.insert(r).second) r = floor_mod(BigInt(r * base_), n);
      break;
    }
    case Kind::Explicit:
      for (const BigInt& v : values_) out.insert(floor_mod(v, n));
      break;
  }
  return {out.begin(), out.end()};
}

bool ParamSeq::has_infinite_coprime_subset() const {
  return kind_ == Kind::Primes || kind_ == Kind::OddPrimes;
}

std::vector<BigInt> ParamSeq::coprime_members(std::size_t count) const {
  std::vector<BigInt> out;
  if (count == 0) return out;
  if (kind_ == Kind::Primes || kind_ == Kind::OddPrimes) {
    BigInt p = first_;
    while (out.size() < count) {
      out.push_back(p);
      p = next_allowed_prime(p, excluded_);
    }
    return out;
  }
  std::vector<BigInt> candidates = kind_ == Kind::Explicit ? values_ : std::vector<BigInt>{first_};
  for (const BigInt& v : candidates) {
    if (out.size() == count) break;
    bool ok = std::all_of(out.begin(), out.end(), [&](const BigInt& w) { return gcd(v, w) == 1; });
    if (ok) out.push_back(v);
  }
  return out;
}

std::string ParamSeq::to_string() const {
  switch (kind_) {
    case Kind::Primes: {
      if (excluded_.empty()) return "primes";
      std::string s = "primes:exclude=";
      for (std::size_t i = 0; i < excluded_.size(); ++i) s += (i ? "," : "") + bfree::to_string(excluded_[i]);
      return s;
    }
    case Kind::OddPrimes:
      return "oddprimes";
    case Kind::Geometric:
      return "geometric:" + bfree::to_string(base_) + (offset_ == 1 ? "" : ":" + std::to_string(offset_));
    case Kind::Explicit: {
      std::string s = "explicit:";
      for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? "," : "") + bfree::to_string(values_[i]);
      return s;
    }
  }
  return "";
}

}  // namespace bfree
