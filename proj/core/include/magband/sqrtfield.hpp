#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>

namespace magband {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact element of the form sum_i q_i * sqrt(r_i) with rational q_i and
// distinct squarefree radicands r_i >= 1.  Closed under +, -, *.  Radicands
// stay squarefree under multiplication via sqrt(a)sqrt(b) = g*sqrt((a/g)(b/g))
// with g = gcd(a,b), so no factorization is needed after construction.
class SqrtField {
public:
    SqrtField() = default;
    SqrtField(const Rational& q);          // NOLINT: implicit by design
    SqrtField(long long q) : SqrtField(Rational(q)) {}
    SqrtField(int q) : SqrtField(Rational(q)) {}

    // q * sqrt(n), n >= 0; n is reduced to s^2 * r with r squarefree.
    static SqrtField sqrt_of(std::int64_t n, const Rational& q = Rational(1));

    SqrtField& operator+=(const SqrtField& o);
    SqrtField& operator-=(const SqrtField& o);
    friend SqrtField operator+(SqrtField a, const SqrtField& b) { return a += b; }
    friend SqrtField operator-(SqrtField a, const SqrtField& b) { return a -= b; }
    friend SqrtField operator*(const SqrtField& a, const SqrtField& b);
    SqrtField operator-() const;
    SqrtField& operator*=(const SqrtField& o) { return *this = *this * o; }

    bool operator==(const SqrtField& o) const { return terms_ == o.terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_rational() const;

    // The coefficient of sqrt(1); requires is_rational().
    Rational rational_part() const;

    double to_double() const;
    std::string str() const;

    const std::map<std::int64_t, Rational>& terms() const { return terms_; }

private:
    void set(std::int64_t radicand, const Rational& q);
    std::map<std::int64_t, Rational> terms_;
};

// n = s^2 * r with r squarefree; returns (s, r).  Trial division; intended
// for the small radicands produced by ladder factors.
std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n);

} // namespace magband
