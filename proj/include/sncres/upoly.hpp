#pragma once

// Dense univariate polynomials over an integral domain R, carrying the
// pseudo-division and subresultant PRS machinery that resultants, gcds and
// discriminants all share.  One implementation, several coefficient rings.

#include <vector>

#include "sncres/poly.hpp"
#include "sncres/support.hpp"

namespace sncres {

inline Rat ring_divexact(const Rat& a, const Rat& b) { return a / b; }
template <class K>
Poly<K> ring_divexact(const Poly<K>& a, const Poly<K>& b) {
    return divide_exact(a, b);
}

template <class R>
struct UPoly {
    std::vector<R> c;  // c[i] multiplies v^i; no trailing zeros

    UPoly() = default;
    explicit UPoly(std::vector<R> coeffs) : c(std::move(coeffs)) { trim(); }

    void trim() {
        while (!c.empty() && c.back() == R(0)) c.pop_back();
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    const R& lc() const {
        if (c.empty()) throw internal_error("upoly: lc of zero");
        return c.back();
    }
    R coeff(std::size_t i) const { return i < c.size() ? c[i] : R(0); }

    friend UPoly operator+(const UPoly& a, const UPoly& b) {
        std::vector<R> out(std::max(a.c.size(), b.c.size()), R(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] = out[i] + a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] + b.c[i];
        return UPoly(std::move(out));
    }
    friend UPoly operator-(const UPoly& a, const UPoly& b) {
        std::vector<R> out(std::max(a.c.size(), b.c.size()), R(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] = out[i] + a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] = out[i] - b.c[i];
        return UPoly(std::move(out));
    }
    friend UPoly operator*(const UPoly& a, const UPoly& b) {
        if (a.is_zero() || b.is_zero()) return UPoly();
        std::vector<R> out(a.c.size() + b.c.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] = out[i + j] + a.c[i] * b.c[j];
        return UPoly(std::move(out));
    }

    UPoly scaled(const R& s) const {
        UPoly out = *this;
        for (auto& ci : out.c) ci = ci * s;
        out.trim();
        return out;
    }

    UPoly shifted(std::size_t k) const {  // multiply by v^k
        if (is_zero()) return UPoly();
        std::vector<R> out(c.size() + k, R(0));
        for (std::size_t i = 0; i < c.size(); ++i) out[i + k] = c[i];
        return UPoly(std::move(out));
    }

    UPoly divexact_coeffwise(const R& s) const {
        UPoly out = *this;
        for (auto& ci : out.c) ci = ring_divexact(ci, s);
        return out;
    }

    UPoly derivative() const {
        if (c.size() <= 1) return UPoly();
        std::vector<R> out(c.size() - 1, R(0));
        for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = c[i] * R(static_cast<long>(i));
        return UPoly(std::move(out));
    }
};

// Pseudo-remainder: lc(B)^(deg A - deg B + 1) * A reduced mod B.
template <class R>
UPoly<R> prem(UPoly<R> A, const UPoly<R>& B) {
    if (B.is_zero()) throw internal_error("upoly: prem by zero");
    int e = A.degree() - B.degree() + 1;
    if (e < 0) e = 0;
    while (!A.is_zero() && A.degree() >= B.degree()) {
        std::size_t shift = static_cast<std::size_t>(A.degree() - B.degree());
        UPoly<R> t = B.shifted(shift).scaled(A.lc());
        A = A.scaled(B.lc()) - t;
        --e;
    }
    for (; e > 0; --e) A = A.scaled(B.lc());
    return A;
}

namespace detail {
template <class R>
R ring_pow(const R& b, int e) {
    R out(1);
    for (int i = 0; i < e; ++i) out = out * b;
    return out;
}
}  // namespace detail

// Resultant by the subresultant PRS.  Matches the Sylvester determinant with
// rows ordered so Res(f, g) = lc(f)^deg(g) * prod g(alpha_i) over roots of f.
template <class R>
R upoly_resultant(UPoly<R> A, UPoly<R> B) {
    if (A.is_zero() || B.is_zero()) return R(0);
    int sign = 1;
    if (A.degree() < B.degree()) {
        if ((A.degree() & 1) && (B.degree() & 1)) sign = -sign;
        std::swap(A, B);
    }
    if (B.degree() == 0) return detail::ring_pow(B.lc(), A.degree());
    R g(1), h(1);
    for (;;) {
        int dA = A.degree(), dB = B.degree();
        int d = dA - dB;
        if ((dA & 1) && (dB & 1)) sign = -sign;
        UPoly<R> Rm = prem(A, B);
        A = B;
        B = Rm.divexact_coeffwise(g * detail::ring_pow(h, d));
        g = A.lc();
        // h <- g^d / h^(d-1), kept exact by the subresultant invariants.
        R gd = detail::ring_pow(g, d);
        h = d == 0 ? h : ring_divexact(gd, detail::ring_pow(h, d - 1));
        if (B.is_zero()) return R(0);
        if (B.degree() == 0) {
            R num = detail::ring_pow(B.lc(), A.degree());
            R den = detail::ring_pow(h, A.degree() - 1);
            R out = ring_divexact(num, den);
            return sign == 1 ? out : R(0) - out;
        }
    }
}

}  // namespace sncres
