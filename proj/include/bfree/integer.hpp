#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Eigen needs to know that mpz_class is an exact, signed, non-complex scalar.
namespace Eigen {
template <>
struct NumTraits<mpz_class> : GenericNumTraits<mpz_class> {
  using Real = mpz_class;
  using NonInteger = mpz_class;
  using Nested = mpz_class;
  using Literal = mpz_class;
  enum {
    IsInteger = 1,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 6,
    AddCost = 150,
    MulCost = 100
  };
  static inline Real epsilon() { return 0; }
  static inline Real dummy_precision() { return 0; }
  static inline int digits10() { return 0; }
};
}  // namespace Eigen

namespace bfree {

using BigInt = mpz_class;
using Rational = mpq_class;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<BigInt>;
using IntVector = Vector<BigInt>;

// Scalar helpers. Overloaded for long long and BigInt so the Hermite
// kernels can be instantiated with either.

inline long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline long long floor_mod(long long a, long long b) { return a - floor_div(a, b) * b; }
inline BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool divides(const BigInt& d, const BigInt& n) {
  if (d == 0) return n == 0;
  return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}
inline bool divides(long long d, long long n) { return d == 0 ? n == 0 : n % d == 0; }

template <class Scalar>
struct ExtGcd {
  Scalar g;  // gcd, always >= 0
  Scalar x;  // x*a + y*b == g
  Scalar y;
};

inline ExtGcd<BigInt> ext_gcd(const BigInt& a, const BigInt& b) {
  ExtGcd<BigInt> r;
  mpz_gcdext(r.g.get_mpz_t(), r.x.get_mpz_t(), r.y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}
ExtGcd<long long> ext_gcd(long long a, long long b);

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}
inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}
inline BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }
inline BigInt pow(const BigInt& b, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

std::string to_string(const BigInt& v);
bool fits_int64(const BigInt& v);
// Accepts an optional sign followed by decimal digits; throws ParseError otherwise.
BigInt parse_bigint(std::string_view text);

bool is_prime(const BigInt& n);
BigInt next_prime(const BigInt& n);
// Distinct prime divisors of |n| in ascending order; n must be nonzero.
std::vector<BigInt> prime_factors(const BigInt& n);
// Largest e with b^e | n, for n != 0 and |b| >= 2.
unsigned long valuation(const BigInt& n, const BigInt& b);

// Smallest non-negative x with x == residues[i] (mod moduli[i]); moduli must be
// positive and pairwise coprime (Errc::NotCoprime otherwise).
BigInt crt(std::span<const BigInt> moduli, std::span<const BigInt> residues);

IntVector int_vector(std::initializer_list<long long> coords);
IntMatrix int_matrix_from_columns(const std::vector<std::vector<BigInt>>& columns);
std::string format_point(const IntVector& p);

}  // namespace bfree
