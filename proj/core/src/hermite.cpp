#include "magband/hermite.hpp"

#include "magband/errors.hpp"

namespace magband {

namespace {
const SqrtField kZero{};
}

HermiteVector HermiteVector::basis(int k) {
    if (k < 0) throw InvalidInput("HermiteVector::basis: negative index");
    HermiteVector v;
    v.c_.emplace(k, SqrtField(Rational(1)));
    return v;
}

const SqrtField& HermiteVector::coeff(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? kZero : it->second;
}

void HermiteVector::set_coeff(int k, SqrtField v) {
    if (k < 0) throw InvalidInput("HermiteVector::set_coeff: negative index");
    if (v.is_zero()) {
        c_.erase(k);
    } else {
        c_[k] = std::move(v);
    }
}

HermiteVector& HermiteVector::operator+=(const HermiteVector& o) {
    for (const auto& [k, v] : o.c_) set_coeff(k, coeff(k) + v);
    return *this;
}

HermiteVector& HermiteVector::operator-=(const HermiteVector& o) {
    for (const auto& [k, v] : o.c_) set_coeff(k, coeff(k) - v);
    return *this;
}

HermiteVector HermiteVector::scaled(const SqrtField& s) const {
    HermiteVector out;
    if (s.is_zero()) return out;
    for (const auto& [k, v] : c_) out.set_coeff(k, v * s);
    return out;
}

HermiteVector HermiteVector::apply_x() const {
    const Rational half(1, 2);
    HermiteVector out;
    for (const auto& [k, v] : c_) {
        out.set_coeff(k + 1, out.coeff(k + 1) + v * SqrtField::sqrt_of(2 * k + 2, half));
        if (k >= 1)
            out.set_coeff(k - 1, out.coeff(k - 1) + v * SqrtField::sqrt_of(2 * k, half));
    }
    return out;
}

HermiteVector HermiteVector::apply_iD() const {
    const Rational half(1, 2);
    HermiteVector out;
    for (const auto& [k, v] : c_) {
        if (k >= 1)
            out.set_coeff(k - 1, out.coeff(k - 1) + v * SqrtField::sqrt_of(2 * k, half));
        out.set_coeff(k + 1, out.coeff(k + 1) - v * SqrtField::sqrt_of(2 * k + 2, half));
    }
    return out;
}

HermiteVector HermiteVector::apply_D2() const {
    HermiteVector out = apply_iD().apply_iD();
    return out.scaled(SqrtField(Rational(-1)));
}

HermiteVector ladder_apply(const HermiteVector& v, const std::vector<LadderSymbol>& word) {
    int d_count = 0;
    for (auto s : word)
        if (s == LadderSymbol::D) ++d_count;
    if (d_count % 2 != 0)
        throw InvalidInput("ladder_apply: odd number of D symbols leaves the real span");

    // Words apply right to left; each D is applied as iD and the accumulated
    // (-i)^2 per D pair contributes a sign.
    HermiteVector out = v;
    for (auto it = word.rbegin(); it != word.rend(); ++it)
        out = (*it == LadderSymbol::X) ? out.apply_x() : out.apply_iD();
    if ((d_count / 2) % 2 != 0) out = out.scaled(SqrtField(Rational(-1)));
    return out;
}

SqrtField inner(const HermiteVector& a, const HermiteVector& b) {
    SqrtField acc;
    for (const auto& [k, v] : a.coeffs()) {
        const SqrtField& w = b.coeff(k);
        if (!w.is_zero()) acc += v * w;
    }
    return acc;
}

HermiteVector apply_x_polynomial(const HermiteVector& v, const std::map<int, Rational>& poly) {
    HermiteVector out;
    for (const auto& [power, coeff] : poly) {
        if (power < 0) throw InvalidInput("apply_x_polynomial: negative power");
        if (coeff == 0) continue;
        HermiteVector term = v;
        for (int i = 0; i < power; ++i) term = term.apply_x();
        out += term.scaled(SqrtField(coeff));
    }
    return out;
}

} // namespace magband
