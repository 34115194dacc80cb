#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace larglab {

// Exact rational scalar. All piecewise-linear geometry runs on these so that
// coincidence questions (shared crossings, integer distances, tangencies)
// are decided, not guessed. Stored canonical: denominator > 0, lowest terms.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long long n) : v_(static_cast<long>(n)) {}
    Rational(long long num, long long den);
    explicit Rational(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

    // Decimal-string constructors, the serialization format.
    static Rational from_strings(const std::string& num, const std::string& den);

    // Snap a sampled double to denominator 2^53. Requires |v| < 2^10.
    static Rational snapped(double v);

    static Rational half() { return Rational(1, 2); }

    long long floor_ll() const;
    Rational floor() const { return Rational(floor_ll()); }
    // Fractional part <x> in [0,1).
    Rational frac() const { return *this - floor(); }
    // Distance to the nearest integer, in [0, 1/2].
    Rational dist_to_integer() const;
    bool is_integer() const { return v_.get_den() == 1; }

    Rational abs() const { return v_ < 0 ? Rational(mpq_class(-v_)) : *this; }
    double to_double() const { return v_.get_d(); }
    std::string num_string() const { return v_.get_num().get_str(); }
    std::string den_string() const { return v_.get_den().get_str(); }
    std::string str() const;

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    friend const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
    friend const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

private:
    mpq_class v_;
};

}  // namespace larglab
