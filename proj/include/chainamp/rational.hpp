#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>

namespace chainamp {

inline mpz_class exact_binomial(unsigned long n, unsigned long k) {
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

// log2 of a positive big integer, accurate to a few ulp.
inline double log2_mpz(const mpz_class& x) {
  signed long exp2;
  double d = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return static_cast<double>(exp2) + std::log2(d);
}

// Correctly rounded conversion when numerator and denominator are exactly
// representable (mpq_get_d truncates instead of rounding to nearest).
inline double rational_to_double(const mpq_class& q) {
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  if (mpz_sizeinbase(num.get_mpz_t(), 2) <= 53 && mpz_sizeinbase(den.get_mpz_t(), 2) <= 53) {
    return num.get_d() / den.get_d();
  }
  return q.get_d();
}

inline double log2_mpq(const mpq_class& q) {
  return log2_mpz(q.get_num()) - log2_mpz(q.get_den());
}

}  // namespace chainamp
