#include "larglab/rational.hpp"

#include <cmath>

namespace larglab {

namespace {
constexpr double kSnapDen = 9007199254740992.0;  // 2^53
}

Rational::Rational(long long num, long long den) {
    if (den == 0) throw std::domain_error("Rational: zero denominator");
    v_ = mpq_class(static_cast<long>(num), static_cast<long>(den));
    v_.canonicalize();
}

Rational Rational::from_strings(const std::string& num, const std::string& den) {
    mpq_class v{mpz_class(num), mpz_class(den)};
    if (v.get_den() == 0) throw std::domain_error("Rational: zero denominator");
    v.canonicalize();
    return Rational(std::move(v));
}

Rational Rational::snapped(double v) {
    if (!std::isfinite(v) || std::fabs(v) >= 1024.0)
        throw std::domain_error("Rational::snapped: value out of snappable range");
    long long num = std::llround(v * kSnapDen);
    mpq_class q(static_cast<long>(num), 1);
    q /= mpq_class(9007199254740992L, 1);
    q.canonicalize();
    return Rational(std::move(q));
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
}

long long Rational::floor_ll() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num().get_mpz_t(), v_.get_den().get_mpz_t());
    if (!q.fits_slong_p()) throw std::overflow_error("Rational::floor_ll: out of range");
    return q.get_si();
}

Rational Rational::dist_to_integer() const {
    Rational f = frac();
    Rational g = Rational(1) - f;
    return min(f, g);
}

std::string Rational::str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

}  // namespace larglab
