#pragma once

// Scalar is the numeric entry type for map data: either an exact rational
// (GMP mpq_class, kept canonical) or a double. Arithmetic between two
// exact scalars stays exact; as soon as a double is involved the result
// degrades to double. Every scalar also caches its double view so hot
// loops can read value() without touching GMP.

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "qpmaps/errors.hpp"

namespace qpmaps {

// Default tolerance for *structural* decisions (is this entry zero, are
// these rows equal). Exact scalars ignore it; doubles compare against it.
inline constexpr double kStructTol = 1e-12;

// Default tolerance for *numeric* assertions (determinant drift, conjugacy
// deviation and the like).
inline constexpr double kNumTol = 1e-9;

// Guard on quasimonomial exponents: |B*u| beyond this would push exp()
// into overflow/underflow territory.
inline constexpr double kOverflowLimit = 700.0;

class Scalar {
public:
    Scalar() : exact_(true), rat_(0), val_(0.0) {}
    Scalar(int v) : exact_(true), rat_(v), val_(static_cast<double>(v)) {}
    Scalar(long v) : exact_(true), rat_(static_cast<signed long>(v)), val_(static_cast<double>(v)) {}
    Scalar(double v) : exact_(false), rat_(0), val_(v) {}
    explicit Scalar(mpq_class q) : exact_(true), rat_(std::move(q)) {
        rat_.canonicalize();
        val_ = rat_.get_d();
    }

    // num/den as machine integers; throws InvalidParameter on den == 0.
    static Scalar rational(long num, long den);

    // Strict grammar: -?digits(/digits)?, denominator nonzero. Used by the
    // JSON reader for string-encoded entries.
    static Scalar from_rational_string(const std::string& text);

    bool exact() const { return exact_; }
    double value() const { return val_; }
    const mpq_class& rat() const; // requires exact()

    // Rationals render as "p" or "p/q"; doubles with enough digits to
    // round-trip.
    std::string str() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    bool exact_;
    mpq_class rat_;
    double val_;
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

// Structural predicates. Exact scalars are tested exactly; doubles against
// the tolerance. Mixed comparisons go through the double view.
bool struct_zero(const Scalar& s, double tol = kStructTol);
bool struct_equal(const Scalar& a, const Scalar& b, double tol = kStructTol);
bool struct_nonneg(const Scalar& s, double tol = kStructTol);

} // namespace qpmaps
