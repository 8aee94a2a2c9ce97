#pragma once

#include "magband/sqrtfield.hpp"

#include <map>
#include <vector>

namespace magband {

// Finitely supported coefficient vector over the orthonormal eigenbasis
// {v_k} of D^2 + x^2 (eigenvalue 2k+1).  Ladder relations:
//   (x - iD) v_k = sqrt(2k+2) v_{k+1},   (x + iD) v_k = sqrt(2k) v_{k-1}.
class HermiteVector {
public:
    HermiteVector() = default;

    static HermiteVector basis(int k);

    const SqrtField& coeff(int k) const;           // zero if absent
    void set_coeff(int k, SqrtField v);            // erases on zero
    const std::map<int, SqrtField>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }

    HermiteVector& operator+=(const HermiteVector& o);
    HermiteVector& operator-=(const HermiteVector& o);
    friend HermiteVector operator+(HermiteVector a, const HermiteVector& b) { return a += b; }
    friend HermiteVector operator-(HermiteVector a, const HermiteVector& b) { return a -= b; }
    HermiteVector scaled(const SqrtField& s) const;

    bool operator==(const HermiteVector& o) const { return c_ == o.c_; }

    // x·v expanded as ½((x−iD) + (x+iD))·v.
    HermiteVector apply_x() const;
    // (iD)·v expanded as ½((x+iD) − (x−iD))·v.
    HermiteVector apply_iD() const;
    // D²·v = −(iD)(iD)·v.
    HermiteVector apply_D2() const;

private:
    std::map<int, SqrtField> c_;
};

enum class LadderSymbol { X, D };

// Applies the monomial word left to right as operators: word = (s1, s2, ...)
// means s1(s2(...(v))).  D is applied as the real combination D^2 = -(iD)^2,
// so words must contain an even number of D symbols to stay in the real span.
HermiteVector ladder_apply(const HermiteVector& v, const std::vector<LadderSymbol>& word);

// <a, b> in the orthonormal basis; exact.
SqrtField inner(const HermiteVector& a, const HermiteVector& b);

// Applies the polynomial sum_p poly[p]·x^p (map: power -> coefficient).
HermiteVector apply_x_polynomial(const HermiteVector& v, const std::map<int, Rational>& poly);

} // namespace magband
