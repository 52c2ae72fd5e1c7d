#pragma once

// Exact rational arithmetic on top of boost's arbitrary precision integers.
// All engine computations run over Q; nothing in the library ever rounds.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace feasres {

using Int = boost::multiprecision::cpp_int;

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

// Largest integer r with r^k <= n, for n >= 0.
inline Int int_kth_root_floor(const Int& n, unsigned k) {
    if (n < 0) throw std::invalid_argument("int_kth_root_floor: negative");
    if (k == 0) throw std::invalid_argument("int_kth_root_floor: k == 0");
    if (n <= 1 || k == 1) return n;
    Int lo = 0, hi = 1;
    while (boost::multiprecision::pow(hi, k) <= n) hi <<= 1;
    while (lo + 1 < hi) {
        Int mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, k) <= n) lo = mid;
        else hi = mid;
    }
    return lo;
}

// Exact k-th root of an integer, if one exists. Negative n allowed for odd k.
inline std::optional<Int> int_kth_root_exact(const Int& n, unsigned k) {
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = int_kth_root_exact(-n, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    Int r = int_kth_root_floor(n, k);
    if (boost::multiprecision::pow(r, k) == n) return r;
    return std::nullopt;
}

class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(Int n) : num_(std::move(n)), den_(1) {}
    Rat(Int n, Int d) : num_(std::move(n)), den_(std::move(d)) { reduce(); }

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

    Rat operator-() const { return Rat(unsafe{}, -num_, den_); }

    Rat& operator+=(const Rat& o) {
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        reduce();
        return *this;
    }
    Rat& operator-=(const Rat& o) { return *this += -o; }
    Rat& operator*=(const Rat& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        reduce();
        return *this;
    }
    Rat& operator/=(const Rat& o) {
        if (o.num_ == 0) throw std::domain_error("Rat: division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        reduce();
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    // Exact k-th root over Q, if one exists (sign included for odd k).
    std::optional<Rat> kth_root(unsigned k) const {
        auto n = int_kth_root_exact(num_, k);
        if (!n) return std::nullopt;
        auto d = int_kth_root_exact(den_, k);
        if (!d) return std::nullopt;
        return Rat(unsafe{}, *n, *d);
    }

    // Canonical text form: "n" for integers, "n/d" otherwise, den > 0.
    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rat& r) {
        return os << r.str();
    }

private:
    struct unsafe {};
    Rat(unsafe, Int n, Int d) : num_(std::move(n)), den_(std::move(d)) {}

    void reduce() {
        if (den_ == 0) throw std::domain_error("Rat: zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        Int g = int_gcd(num_ < 0 ? Int(-num_) : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
        if (num_ == 0) den_ = 1;
    }

    Int num_;
    Int den_;
};

// Parses "n" or "n/d" with optional leading sign. Throws on malformed input.
inline Rat rat_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::runtime_error&) {
        throw std::invalid_argument("rat_from_string: malformed rational '" + s + "'");
    }
}

}  // namespace feasres
