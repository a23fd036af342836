#include "bfree/integer.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "bfree/error.hpp"

namespace bfree {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::NotPairwiseCoprime: return "NotPairwiseCoprime";
    case Errc::NotEnoughIdeals: return "NotEnoughIdeals";
    case Errc::NotAZeroWindow: return "NotAZeroWindow";
    case Errc::NotRectangular: return "NotRectangular";
    case Errc::NotUnimodular: return "NotUnimodular";
    case Errc::NotSquarefree: return "NotSquarefree";
    case Errc::NotAnIdeal: return "NotAnIdeal";
    case Errc::ZeroElement: return "ZeroElement";
    case Errc::UnknownPreset: return "UnknownPreset";
    case Errc::ParseError: return "ParseError";
    case Errc::InconsistencyDetected: return "InconsistencyDetected";
  }
  return "Unknown";
}

ExtGcd<long long> ext_gcd(long long a, long long b) {
  long long old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

std::string to_string(const BigInt& v) { return v.get_str(10); }

bool fits_int64(const BigInt& v) {
  static const BigInt lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
  static const BigInt hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
  return v >= lo && v <= hi;
}

BigInt parse_bigint(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) fail(Errc::ParseError, "expected an integer, got '" + std::string(text) + "'");
  for (std::size_t j = i; j < text.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(text[j])))
      fail(Errc::ParseError, "expected an integer, got '" + std::string(text) + "'");
  }
  std::string digits(text.substr(text[0] == '+' ? 1 : 0));
  return BigInt(digits, 10);
}

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

BigInt next_prime(const BigInt& n) {
  BigInt r;
  mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace {

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
BigInt pollard_brent(const BigInt& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    BigInt y = 2, x, g = 1, q = 1, ys;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto f = [&](const BigInt& v) {
      BigInt w = v * v + c;
      mpz_mod(w.get_mpz_t(), w.get_mpz_t(), n.get_mpz_t());
      return w;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          BigInt diff = abs(BigInt(x - y));
          q = q * diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = gcd(abs(BigInt(x - ys)), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(BigInt n, std::vector<BigInt>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  BigInt d = pollard_brent(n);
  factor_into(d, out);
  factor_into(BigInt(n / d), out);
}

}  // namespace

std::vector<BigInt> prime_factors(const BigInt& value) {
  if (value == 0) fail(Errc::InvalidArgument, "prime_factors of zero");
  BigInt n = abs(value);
  std::vector<BigInt> out;
  for (unsigned long p = 2; p < 1000; p += (p == 2 ? 1 : 2)) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      out.emplace_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
    }
    if (BigInt(p) * p > n) break;
  }
  if (n > 1) {
    std::vector<BigInt> rest;
    factor_into(n, rest);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

unsigned long valuation(const BigInt& n, const BigInt& b) {
  if (n == 0 || abs(b) < 2) fail(Errc::InvalidArgument, "valuation needs n != 0 and |b| >= 2");
  unsigned long e = 0;
  BigInt m = n;
  while (divides(b, m)) {
    m /= b;
    ++e;
  }
  return e;
}

BigInt crt(std::span<const BigInt> moduli, std::span<const BigInt> residues) {
  if (moduli.size() != residues.size()) fail(Errc::InvalidArgument, "crt: moduli and residues differ in length");
  BigInt x = 0, modulus = 1;
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    const BigInt& n = moduli[i];
    if (n <= 0) fail(Errc::InvalidArgument, "crt: moduli must be positive");
    ExtGcd<BigInt> e = ext_gcd(modulus, n);
    if (e.g != 1) fail(Errc::NotCoprime, "crt: moduli " + to_string(modulus) + " and " + to_string(n) + " are not coprime");
    // x + modulus * k == r (mod n)  =>  k == (r - x) * modulus^{-1} (mod n)
    BigInt k = floor_mod(BigInt((residues[i] - x) * e.x), n);
    x += modulus * k;
    modulus *= n;
    x = floor_mod(x, modulus);
  }
  return x;
}

IntVector int_vector(std::initializer_list<long long> coords) {
  IntVector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (long long c : coords) v(i++) = BigInt(static_cast<long>(c));
  return v;
}

IntMatrix int_matrix_from_columns(const std::vector<std::vector<BigInt>>& columns) {
  if (columns.empty()) return IntMatrix(0, 0);
  const auto rows = static_cast<Eigen::Index>(columns.front().size());
  IntMatrix m(rows, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (static_cast<Eigen::Index>(columns[j].size()) != rows)
      fail(Errc::DimensionMismatch, "generator columns have different lengths");
    for (Eigen::Index i = 0; i < rows; ++i) m(i, static_cast<Eigen::Index>(j)) = columns[j][static_cast<std::size_t>(i)];
  }
  return m;
}

std::string format_point(const IntVector& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += to_string(p(i));
  }
  return s + ")";
}

}  // namespace bfree
