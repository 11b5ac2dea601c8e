#pragma once

// Exact rationals over arbitrary-precision integers.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "nonsmooth/error.hpp"

namespace nonsmooth {

using BigInt = boost::multiprecision::cpp_int;

class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rat(BigInt n) : num_(std::move(n)), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rat(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == 1; }

    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat inverse() const {
        if (num_.is_zero()) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
        return Rat(den_, num_);
    }
    Rat abs() const { return sign() < 0 ? -*this : *this; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        if (a.den_ == b.den_) return Rat(a.num_ + b.num_, a.den_);
        return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        if (a.den_ == b.den_) return Rat(a.num_ - b.num_, a.den_);
        return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.num_ * b.num_, a.den_ * b.den_); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_.is_zero()) throw Error(ErrorCode::DivisionByZero, "rational division by zero");
        return Rat(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
        const BigInt lhs = a.num_ * b.den_;
        const BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Largest integer not exceeding the value.
    BigInt floor() const {
        BigInt q = num_ / den_;  // truncates toward zero
        if (num_.sign() < 0 && q * den_ != num_) q -= 1;
        return q;
    }

    /// "n/d", or "n" when d == 1.
    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Parses "n", "n/d", or "-n/d" (whitespace not allowed).
    static Rat parse(std::string_view s) {
        auto bad = [&] { return Error(ErrorCode::Parse, "malformed rational '" + std::string(s) + "'"); };
        auto parse_int = [&](std::string_view part) {
            std::size_t i = 0;
            if (!part.empty() && (part[0] == '-' || part[0] == '+')) i = 1;
            if (i == part.size()) throw bad();
            for (std::size_t j = i; j < part.size(); ++j)
                if (part[j] < '0' || part[j] > '9') throw bad();
            std::string digits(part.substr(i));
            BigInt v(digits);
            return part[0] == '-' ? BigInt(-v) : v;
        };
        const auto slash = s.find('/');
        if (slash == std::string_view::npos) return Rat(parse_int(s));
        BigInt d = parse_int(s.substr(slash + 1));
        if (d.is_zero()) throw bad();
        return Rat(parse_int(s.substr(0, slash)), d);
    }

    double to_double() const {
        // Scale so the quotient keeps ~60 significant bits even for huge operands.
        const long shift = static_cast<long>(msb_or_zero(den_)) - static_cast<long>(msb_or_zero(num_)) + 64;
        BigInt scaled = shift >= 0 ? BigInt(num_ << shift) : BigInt(num_ >> -shift);
        const BigInt q = scaled / den_;
        return std::ldexp(q.convert_to<double>(), static_cast<int>(-shift));
    }

    /// Decimal rendering with `digits` places after the point (rounded toward zero).
    std::string decimal(int digits = 12) const {
        BigInt scale = boost::multiprecision::pow(BigInt(10), digits);
        BigInt a = boost::multiprecision::abs(num_);
        BigInt whole = a / den_;
        BigInt frac = ((a % den_) * scale) / den_;
        std::string fs = frac.str();
        fs.insert(0, static_cast<std::size_t>(digits) - fs.size(), '0');
        std::string out = (num_.sign() < 0 ? "-" : "") + whole.str();
        if (digits > 0) out += "." + fs;
        return out;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

private:
    static unsigned msb_or_zero(const BigInt& v) {
        return v.is_zero() ? 0u : static_cast<unsigned>(boost::multiprecision::msb(boost::multiprecision::abs(v)));
    }

    void normalize() {
        if (den_.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g != 1 && !g.is_zero()) {
            num_ /= g;
            den_ /= g;
        }
        if (num_.is_zero()) den_ = 1;
    }

    BigInt num_;
    BigInt den_;  // > 0, coprime to num_
};

/// 2^k for any integer k.
inline Rat pow2(long k) {
    if (k >= 0) return Rat(BigInt(1) << k);
    return Rat(BigInt(1), BigInt(1) << -k);
}

/// floor(log2(r)) for r > 0.
inline long floor_log2(const Rat& r) {
    using boost::multiprecision::msb;
    if (r.sign() <= 0) throw Error(ErrorCode::OutOfDomain, "floor_log2 of non-positive value");
    long k = static_cast<long>(msb(r.num())) - static_cast<long>(msb(r.den()));
    // 2^k <= r < 2^(k+1) is off by at most one here.
    if (r < pow2(k)) --k;
    return k;
}

inline Rat midpoint(const Rat& a, const Rat& b) { return (a + b) / Rat(2); }

}  // namespace nonsmooth

template <>
struct std::hash<nonsmooth::Rat> {
    std::size_t operator()(const nonsmooth::Rat& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
