#pragma once

// Resultants, discriminants, multivariate gcd, squarefree parts.
// Convention, pinned: Res(f,g) = lc(f)^deg(g) * prod g(alpha_i) over the
// roots of f, equal to the Sylvester determinant; the test suite checks it
// against literal Sylvester expansions.

#include <string>
#include <vector>

#include "sncres/poly.hpp"
#include "sncres/support.hpp"
#include "sncres/upoly.hpp"

namespace sncres {

QPoly gcd_poly(const QPoly& a, const QPoly& b);

// gcd of the coefficients of f viewed in var; normalized primitive integer.
inline QPoly content_wrt(const QPoly& f, const std::string& var) {
    QPoly c;
    for (auto& coef : f.as_univariate(var)) {
        if (coef.is_zero()) continue;
        // A coefficient that is a nonzero rational is a unit: content is 1.
        if (coef.is_constant()) return QPoly(1);
        c = gcd_poly(c, coef);
        if (c.is_constant()) return QPoly(1);
    }
    return c;
}

inline QPoly resultant(const QPoly& f, const QPoly& g, const std::string& var) {
    int df = f.degree(var), dg = g.degree(var);
    if (df <= 0 && dg <= 0) throw input_error("resultant: no elimination variable");
    if (f.is_zero() || g.is_zero()) return QPoly();
    // Scale to integer coefficients for the PRS, divide the known factor back
    // out: Res(c*f, g) = c^deg(g) Res(f, g).
    Rat sf, sg;
    QPoly fi = primitive_integer(f, &sf);
    QPoly gi = primitive_integer(g, &sg);
    UPoly<QPoly> A(fi.as_univariate(var));
    UPoly<QPoly> B(gi.as_univariate(var));
    QPoly r = upoly_resultant(A, B);
    Rat scale = rat_pow(sf, static_cast<unsigned long>(dg)) *
                rat_pow(sg, static_cast<unsigned long>(df));
    return QPoly(Rat(1) / scale) * r;
}

// disc(f) = (-1)^(d(d-1)/2) Res(f, f') / lc(f).
inline QPoly discriminant(const QPoly& f, const std::string& var) {
    if (f.is_zero()) throw input_error("discriminant: zero polynomial");
    int d = f.degree(var);
    if (d < 1) throw input_error("discriminant: constant in '" + var + "'");
    QPoly r = resultant(f, f.derivative(var), var);
    QPoly q = divide_exact(r, f.as_univariate(var).back());
    return (d * (d - 1) / 2) % 2 ? -q : q;
}

// Normalized multivariate gcd over Q: primitive integer coefficients,
// positive leading (grlex) coefficient.  Primitive PRS.
inline QPoly gcd_poly(const QPoly& a, const QPoly& b) {
    if (a.is_zero() && b.is_zero()) return QPoly();
    if (a.is_zero()) return primitive_integer(b);
    if (b.is_zero()) return primitive_integer(a);
    if (a.is_constant() || b.is_constant()) return QPoly(1);
    // Pivot on the variable with the smallest PRS degree (ties: alphabetical).
    // The gcd is unique up to a rational scalar, and the normalization below
    // is pivot-independent, so this only affects cost, not the result.
    std::string v;
    int best = -1;
    for (const auto& vars : {a.variables(), b.variables()})
        for (const auto& cand : vars) {
            int h = std::max(a.degree(cand), b.degree(cand));
            if (best < 0 || h < best || (h == best && cand < v)) {
                v = cand;
                best = h;
            }
        }
    QPoly cont_a = content_wrt(a, v);
    QPoly cont_b = content_wrt(b, v);
    QPoly cg = gcd_poly(cont_a, cont_b);
    UPoly<QPoly> A(divide_exact(a, cont_a).as_univariate(v));
    UPoly<QPoly> B(divide_exact(b, cont_b).as_univariate(v));
    if (A.degree() < B.degree()) std::swap(A, B);
    if (B.degree() == 0) return primitive_integer(cg);
    // Subresultant PRS: the beta-divisions keep growth polynomial without
    // per-step content extraction; only the final remainder is primitivized.
    QPoly sg(1), sh(1);
    for (;;) {
        int d = A.degree() - B.degree();
        UPoly<QPoly> Rm = prem(A, B);
        if (Rm.is_zero()) break;  // B is the gcd up to content in v
        if (Rm.degree() == 0) return primitive_integer(cg);
        UPoly<QPoly> nB = Rm.divexact_coeffwise(sg * detail::ring_pow(sh, d));
        A = B;
        B = nB;
        sg = A.lc();
        sh = d == 0 ? sh : ring_divexact(detail::ring_pow(sg, d), detail::ring_pow(sh, d - 1));
    }
    QPoly g = QPoly::from_univariate(v, B.c);
    g = divide_exact(g, content_wrt(g, v));
    return primitive_integer(cg * g);
}

// f / gcd(f, df/dvar), primitive: kills multiplicities in var (and any
// var-free content, which the derivative annihilates).
inline QPoly squarefree_part(const QPoly& f, const std::string& var) {
    if (f.is_zero()) throw input_error("squarefree_part: zero polynomial");
    QPoly df = f.derivative(var);
    if (df.is_zero()) return QPoly(1);
    return primitive_integer(divide_exact(f, gcd_poly(f, df)));
}

// Product of the distinct irreducible factors, each once; primitive integer.
inline QPoly total_squarefree_part(const QPoly& f) {
    if (f.is_zero()) throw input_error("squarefree part: zero polynomial");
    if (f.is_constant()) return QPoly(1);
    std::string v = *f.variables().begin();
    QPoly cont = content_wrt(f, v);
    QPoly pp = divide_exact(f, cont);
    // Factors of pp all involve v, factors of cont never do: the two
    // squarefree parts are coprime.
    QPoly spart = divide_exact(pp, gcd_poly(pp, pp.derivative(v)));
    return primitive_integer(total_squarefree_part(cont) * spart);
}

// Multiplicity of the root 'at' in a univariate polynomial.
inline int valuation_at(const QPoly& f, const std::string& var, const Rat& at) {
    if (f.is_zero()) throw input_error("valuation: zero polynomial");
    std::vector<QPoly> cs = f.as_univariate(var);
    std::vector<Rat> c(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!cs[i].is_constant()) throw input_error("valuation: polynomial not univariate");
        c[i] = cs[i].constant_value();
    }
    int v = 0;
    for (;;) {
        // Horner walk computes the value and the quotient by (var - at) in
        // one pass.
        Rat acc = c.back();
        std::vector<Rat> quot(c.size() - 1);
        for (std::size_t i = c.size() - 1; i-- > 0;) {
            quot[i] = acc;
            acc = acc * at + c[i];
        }
        if (acc != 0) return v;
        ++v;
        if (quot.empty()) throw internal_error("valuation: exhausted polynomial");
        c = std::move(quot);
    }
}

}  // namespace sncres
