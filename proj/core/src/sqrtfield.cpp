#include "magband/sqrtfield.hpp"

#include "magband/errors.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace magband {

std::pair<std::int64_t, std::int64_t> squarefree_split(std::int64_t n) {
    if (n < 0) throw InvalidInput("squarefree_split: negative radicand");
    if (n == 0) return {0, 1};
    std::int64_t s = 1, r = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (int i = 0; i < e / 2; ++i) s *= p;
        if (e % 2) r *= p;
    }
    return {s, r * n}; // leftover n is prime (or 1), appears once
}

SqrtField::SqrtField(const Rational& q) {
    set(1, q);
}

SqrtField SqrtField::sqrt_of(std::int64_t n, const Rational& q) {
    auto [s, r] = squarefree_split(n);
    SqrtField v;
    if (s != 0) v.set(r, q * s);
    return v;
}

void SqrtField::set(std::int64_t radicand, const Rational& q) {
    if (q == 0) {
        terms_.erase(radicand);
    } else {
        terms_[radicand] = q;
    }
}

SqrtField& SqrtField::operator+=(const SqrtField& o) {
    for (const auto& [r, q] : o.terms_) {
        auto it = terms_.find(r);
        if (it == terms_.end()) {
            terms_.emplace(r, q);
        } else {
            it->second += q;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

SqrtField& SqrtField::operator-=(const SqrtField& o) {
    for (const auto& [r, q] : o.terms_) {
        auto it = terms_.find(r);
        if (it == terms_.end()) {
            terms_.emplace(r, -q);
        } else {
            it->second -= q;
            if (it->second == 0) terms_.erase(it);
        }
    }
    return *this;
}

SqrtField operator*(const SqrtField& a, const SqrtField& b) {
    SqrtField out;
    for (const auto& [ra, qa] : a.terms_) {
        for (const auto& [rb, qb] : b.terms_) {
            // sqrt(ra)*sqrt(rb) = g*sqrt(ra' * rb'), g = gcd, primed parts coprime.
            std::int64_t g = std::gcd(ra, rb);
            std::int64_t pa = ra / g, pb = rb / g;
            if (pa != 0 && pb > std::numeric_limits<std::int64_t>::max() / pa)
                throw NumericalFailure("SqrtField: radicand overflow");
            SqrtField term;
            term.set(pa * pb, qa * qb * g);
            out += term;
        }
    }
    return out;
}

SqrtField SqrtField::operator-() const {
    SqrtField out;
    for (const auto& [r, q] : terms_) out.terms_.emplace(r, -q);
    return out;
}

bool SqrtField::is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational SqrtField::rational_part() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational())
        throw NumericalFailure("SqrtField: irrational value where a rational was required: " + str());
    return terms_.begin()->second;
}

double SqrtField::to_double() const {
    double acc = 0.0;
    for (const auto& [r, q] : terms_)
        acc += q.convert_to<double>() * std::sqrt(static_cast<double>(r));
    return acc;
}

std::string SqrtField::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [r, q] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << q;
        if (r != 1) os << "*sqrt(" << r << ")";
    }
    return os.str();
}

} // namespace magband
