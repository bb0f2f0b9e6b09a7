#include "qpmaps/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace qpmaps {

Scalar Scalar::rational(long num, long den) {
    if (den == 0)
        throw InvalidParameter("rational with zero denominator");
    mpq_class q(static_cast<signed long>(num), static_cast<signed long>(den));
    return Scalar(std::move(q));
}

Scalar Scalar::from_rational_string(const std::string& text) {
    // -?digits(/digits)?  with no whitespace, signs inside, or empty parts.
    auto fail = [&] {
        throw InvalidParameter("not a rational literal: '" + text + "'");
    };
    std::size_t i = 0;
    if (i < text.size() && text[i] == '-') ++i;
    std::size_t num_begin = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == num_begin) fail();
    if (i < text.size()) {
        if (text[i] != '/') fail();
        ++i;
        std::size_t den_begin = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == den_begin || i != text.size()) fail();
        std::string den = text.substr(den_begin);
        if (den.find_first_not_of('0') == std::string::npos)
            throw InvalidParameter("rational literal with zero denominator: '" + text + "'");
    }
    mpq_class q;
    if (q.set_str(text, 10) != 0) fail();
    return Scalar(std::move(q));
}

const mpq_class& Scalar::rat() const {
    if (!exact_)
        throw InvalidParameter("rat() called on a floating-point scalar");
    return rat_;
}

std::string Scalar::str() const {
    if (exact_) return rat_.get_str();
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", val_);
    return buf;
}

Scalar Scalar::operator-() const {
    Scalar r(*this);
    if (r.exact_) {
        r.rat_ = -r.rat_;
        r.val_ = r.rat_.get_d();
    } else {
        r.val_ = -r.val_;
    }
    return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
    if (exact_ && o.exact_) {
        rat_ += o.rat_;
        val_ = rat_.get_d();
    } else {
        val_ = value() + o.value();
        exact_ = false;
        rat_ = 0;
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
    if (exact_ && o.exact_) {
        rat_ -= o.rat_;
        val_ = rat_.get_d();
    } else {
        val_ = value() - o.value();
        exact_ = false;
        rat_ = 0;
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
    if (exact_ && o.exact_) {
        rat_ *= o.rat_;
        val_ = rat_.get_d();
    } else {
        val_ = value() * o.value();
        exact_ = false;
        rat_ = 0;
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
    if (exact_ && o.exact_) {
        if (o.rat_ == 0)
            throw InvalidParameter("exact division by zero");
        rat_ /= o.rat_;
        val_ = rat_.get_d();
    } else {
        val_ = value() / o.value();
        exact_ = false;
        rat_ = 0;
    }
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.exact_ && b.exact_) return a.rat_ == b.rat_;
    return a.value() == b.value();
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) {
    return os << s.str();
}

bool struct_zero(const Scalar& s, double tol) {
    if (s.exact()) return s.rat() == 0;
    return std::abs(s.value()) <= tol;
}

bool struct_equal(const Scalar& a, const Scalar& b, double tol) {
    if (a.exact() && b.exact()) return a.rat() == b.rat();
    return std::abs(a.value() - b.value()) <= tol;
}

bool struct_nonneg(const Scalar& s, double tol) {
    if (s.exact()) return sgn(s.rat()) >= 0;
    return s.value() >= -tol;
}

} // namespace qpmaps
