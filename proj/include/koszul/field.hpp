#pragma once

// Exact coefficient fields: F_p for a word-sized prime p, and arbitrary-precision
// rationals. Everything downstream is templated on one of these two types; both
// expose the same tiny interface (Elem, arithmetic, inverse, descriptor string).

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace koszul {

class FieldError : public std::runtime_error {
public:
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Prime field with canonical representatives in [0, p). Elements are plain
// uint32_t; reduction of 64-bit intermediates goes through a precomputed
// Barrett constant so no division appears in hot loops.
class PrimeField {
public:
    using Elem = std::uint32_t;
    static constexpr bool is_prime_field = true;

    PrimeField() : PrimeField(32003) {}

    explicit PrimeField(std::uint32_t p) : p_(p) {
        if (p >= (1u << 31) || !is_prime_u32(p))
            throw FieldError("field characteristic must be a prime below 2^31: " + std::to_string(p));
        barrett_ = static_cast<std::uint64_t>(~static_cast<std::uint64_t>(0)) / p_;  // floor((2^64-1)/p), off-by-one safe below
        // budget for delayed reduction: how many a*b terms (a,b < p) fit in a u64
        // on top of an already-reduced entry
        const std::uint64_t step = static_cast<std::uint64_t>(p_ - 1) * (p_ - 1);
        delay_budget_ = step ? (~static_cast<std::uint64_t>(0) - p_) / step : ~static_cast<std::uint64_t>(0);
        if (delay_budget_ == 0) delay_budget_ = 1;
    }

    std::uint32_t characteristic() const { return p_; }
    std::uint64_t delay_budget() const { return delay_budget_; }

    // x mod p for any 64-bit x
    Elem reduce(std::uint64_t x) const {
        std::uint64_t q = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * barrett_) >> 64);
        std::uint64_t r = x - q * p_;
        while (r >= p_) r -= p_;
        return static_cast<Elem>(r);
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }
    Elem add(Elem a, Elem b) const {
        std::uint64_t s = static_cast<std::uint64_t>(a) + b;
        return s >= p_ ? static_cast<Elem>(s - p_) : static_cast<Elem>(s);
    }
    Elem sub(Elem a, Elem b) const { return a >= b ? a - b : a + p_ - b; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem mul(Elem a, Elem b) const { return reduce(static_cast<std::uint64_t>(a) * b); }
    Elem inv(Elem a) const {
        if (a == 0) throw FieldError("division by zero in F_" + std::to_string(p_));
        return pow(a, p_ - 2);
    }
    Elem pow(Elem a, std::uint64_t e) const {
        Elem r = 1, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }
    // canonical embedding of a signed integer
    Elem from_int(long long v) const {
        long long m = v % static_cast<long long>(p_);
        if (m < 0) m += p_;
        return static_cast<Elem>(m);
    }
    Elem from_fraction(long long num, long long den) const {
        if (den == 0) throw FieldError("zero denominator in coefficient");
        Elem d = from_int(den);
        if (d == 0)
            throw FieldError("coefficient denominator divisible by field characteristic " +
                             std::to_string(p_));
        return mul(from_int(num), inv(d));
    }

    std::string describe() const { return "prime:" + std::to_string(p_); }
    std::string format(Elem a) const { return std::to_string(a); }

    bool operator==(const PrimeField& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeField& o) const { return p_ != o.p_; }

private:
    std::uint32_t p_;
    std::uint64_t barrett_;
    std::uint64_t delay_budget_;
};

// Arbitrary-precision rationals. cpp_rational keeps num/den coprime with a
// positive denominator, so representatives are canonical and comparisons exact.
class RationalField {
public:
    using Elem = boost::multiprecision::cpp_rational;
    static constexpr bool is_prime_field = false;

    Elem zero() const { return Elem(0); }
    Elem one() const { return Elem(1); }
    bool is_zero(const Elem& a) const { return a == 0; }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw FieldError("division by zero in Q");
        return 1 / a;
    }
    Elem from_int(long long v) const { return Elem(v); }
    Elem from_fraction(long long num, long long den) const {
        if (den == 0) throw FieldError("zero denominator in coefficient");
        return Elem(num) / Elem(den);
    }

    std::string describe() const { return "rational"; }
    std::string format(const Elem& a) const { return a.str(); }

    bool operator==(const RationalField&) const { return true; }
    bool operator!=(const RationalField&) const { return false; }
};

}  // namespace koszul
