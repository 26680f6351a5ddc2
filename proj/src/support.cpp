#include "nbcert/support.hpp"

#include <cassert>

namespace nbcert {

namespace {

mpz_class pow_ll(long long base, int exp) {
    mpz_class out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exp));
    return out;
}

}  // namespace

int compare(const Support& a, const Support& b) {
    assert(a.total == b.total && a.dim == b.dim);
    const mpz_class lhs = a.prod * pow_ll(b.label_count, b.dim - 1);
    const mpz_class rhs = b.prod * pow_ll(a.label_count, a.dim - 1);
    return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

std::string to_fraction(const Support& s) {
    if (s.is_zero() || s.total == 0) return "0/1";
    mpq_class q(s.prod, mpz_class(static_cast<long>(s.total)) * pow_ll(s.label_count, s.dim - 1));
    q.canonicalize();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace nbcert
