#include "ach/scalar.hpp"

#include <cmath>

namespace ach {

mpq_class parse_rational(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw PreconditionError("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

mpq_class exact_sqrt(const mpq_class& q) {
  if (sgn(q) < 0) throw PreconditionError("exact_sqrt of negative rational");
  mpz_class num = q.get_num(), den = q.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0)
    throw PreconditionError("rational is not a perfect square: " + q.get_str());
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return mpq_class(rn) / mpq_class(rd);
}

Scalar Scalar::sqrt_positive() const {
  if (is_exact()) {
    if (sgn(x_.im) != 0) throw PreconditionError("sqrt of non-real exact scalar");
    if (sgn(x_.re) <= 0) throw PreconditionError("sqrt of non-positive exact scalar");
    return exact(exact_sqrt(x_.re), 0);
  }
  if (f_.real() <= 0.0) throw PreconditionError("sqrt of non-positive float scalar");
  return flt({std::sqrt(f_.real()), 0.0});
}

}  // namespace ach
