#pragma once

// Ruled surfaces P(O + O(e)) over P^1, their sections, and horizontal
// divisors in the coefficient presentation
//   sum_i phi_i x^(d-i) y^i,   phi_i a binary form of degree i*e.

#include <string>
#include <utility>
#include <vector>

#include "sncres/binform.hpp"
#include "sncres/factor.hpp"
#include "sncres/support.hpp"

namespace sncres {

struct RuledSurface {
    int twist_e = 0;
    // Coordinate names are fixed project-wide: base (t0, t1), fiber (x, y).
};

inline RuledSurface make_ruled_surface(int twist_e) {
    if (twist_e < 0) throw input_error("ruled surface: twist must be >= 0");
    return RuledSurface{twist_e};
}

// A section of the ruled surface: a degree-e binary form (graph x = s*y), or
// the marker for the infinity section y = 0.
struct Section {
    bool infinite = false;
    BinForm form;  // meaningful only when !infinite; hom degree = twist_e

    static Section finite(BinForm f) { return Section{false, std::move(f)}; }
    static Section at_infinity() { return Section{true, BinForm{}}; }

    friend bool operator==(const Section& a, const Section& b) {
        if (a.infinite != b.infinite) return false;
        return a.infinite || a.form == b.form;
    }
    friend bool operator!=(const Section& a, const Section& b) { return !(a == b); }

    std::string to_string() const { return infinite ? "infinity" : form.to_string(); }
};

inline void check_section(const RuledSurface& S, const Section& s) {
    if (s.infinite) return;
    if (s.form.deg != S.twist_e)
        throw input_error("section: form degree must equal the surface twist");
}

struct HorizontalDivisor {
    int twist_e = 0;
    std::vector<BinForm> phis;  // (phi_0, ..., phi_d)

    int fiber_degree() const { return static_cast<int>(phis.size()) - 1; }

    friend bool operator==(const HorizontalDivisor& a, const HorizontalDivisor& b) {
        return a.twist_e == b.twist_e && a.phis == b.phis;
    }
    friend bool operator!=(const HorizontalDivisor& a, const HorizontalDivisor& b) {
        return !(a == b);
    }
};

namespace detail {

// Jointly rescale a family of binary forms by one rational constant so that
// all coefficients become coprime integers; returns the content removed.
inline Rat joint_content(const std::vector<BinForm>& fs) {
    Int num(0), den(1);
    for (const auto& f : fs)
        for (const auto& q : f.c) {
            if (q == 0) continue;
            num = gcd(num, q.get_num());
            den = lcm(den, q.get_den());
        }
    if (num == 0) throw input_error("divisor: all coefficient forms are zero");
    return Rat(num) / Rat(den);
}

}  // namespace detail

inline HorizontalDivisor make_horizontal_divisor(int twist_e, std::vector<BinForm> phis) {
    if (twist_e < 0) throw input_error("divisor: twist must be >= 0");
    if (phis.size() < 2) throw input_error("divisor: fiber degree must be >= 1");
    for (std::size_t i = 0; i < phis.size(); ++i)
        if (phis[i].deg != static_cast<int>(i) * twist_e)
            throw input_error("divisor: phi_" + std::to_string(i) +
                              " must be a binary form of degree " +
                              std::to_string(static_cast<int>(i) * twist_e));
    if (phis[0].is_zero() || phis[0].affine_degree() > 0)
        throw input_error("divisor: phi_0 must be a nonzero constant");
    // Canonical form: one joint rational rescaling making every coefficient
    // an integer, the full family coprime, and phi_0 positive.
    Rat content = detail::joint_content(phis);
    if (phis[0].coeff(0) < 0) content = -content;
    Rat inv = Rat(1) / content;
    for (auto& f : phis) f = inv * f;
    return HorizontalDivisor{twist_e, std::move(phis)};
}

// --- divisor_from_sections -------------------------------------------------

inline HorizontalDivisor divisor_from_sections(int twist_e, const std::vector<Section>& sections) {
    if (sections.empty()) throw input_error("divisor: no sections");
    for (const auto& s : sections) {
        if (s.infinite) throw input_error("divisor: sections must be finite");
        if (s.form.deg != twist_e)
            throw input_error("section: form degree must equal the surface twist");
    }
    // Expand prod_i (x - s_i y) as coefficient forms phi_j of x^(d-j) y^j.
    std::vector<BinForm> phis{BinForm::constant(0, 1)};
    for (const auto& s : sections) {
        std::vector<BinForm> next(phis.size() + 1,
                                  BinForm{});  // placeholder; degrees set below
        for (std::size_t j = 0; j < next.size(); ++j) {
            BinForm acc(static_cast<int>(j) * twist_e, {});
            if (j < phis.size()) acc = acc + phis[j];
            if (j >= 1) acc = acc - (s.form * phis[j - 1]);
            next[j] = std::move(acc);
        }
        phis = std::move(next);
    }
    return make_horizontal_divisor(twist_e, std::move(phis));
}

// --- restrict_to_fiber -----------------------------------------------------

// Binary form in (x, y) cut out on the fiber over a rational point or over
// infinity of the base.
inline QPoly restrict_to_fiber(const HorizontalDivisor& H, const BasePoint& p) {
    if (p.kind == BasePoint::Kind::algebraic)
        throw input_error("restrict_to_fiber: use restrict_to_fiber_alg at algebraic points");
    int d = H.fiber_degree();
    QPoly out;
    for (int i = 0; i <= d; ++i) {
        AlgNum v = H.phis[static_cast<std::size_t>(i)].eval(p);
        Rat r = v.as_rational();
        if (r == 0) continue;
        Monomial m;
        if (d - i > 0) m["x"] = static_cast<unsigned>(d - i);
        if (i > 0) m["y"] = static_cast<unsigned>(i);
        out = out + QPoly::term(r, m);
    }
    return out;
}

inline Poly<AlgNum> restrict_to_fiber_alg(const HorizontalDivisor& H, const BasePoint& p) {
    int d = H.fiber_degree();
    Poly<AlgNum> out;
    for (int i = 0; i <= d; ++i) {
        AlgNum v = H.phis[static_cast<std::size_t>(i)].eval(p);
        if (v.is_zero()) continue;
        Monomial m;
        if (d - i > 0) m["x"] = static_cast<unsigned>(d - i);
        if (i > 0) m["y"] = static_cast<unsigned>(i);
        out = out + Poly<AlgNum>::term(v, m);
    }
    return out;
}

// --- zeros of a binary form -------------------------------------------------

// Zeros with multiplicity of a nonzero binary form, one representative per
// irreducible factor (conjugate points share a number field), canonically
// ordered.  Field names are deterministic within one call.
inline std::vector<std::pair<BasePoint, int>> zeros_with_multiplicity(
    const BinForm& G, const std::string& field_prefix = "r") {
    if (G.is_zero()) throw input_error("zeros: zero form");
    std::vector<std::pair<BasePoint, int>> out;
    if (G.affine_degree() >= 1) {
        auto factors = factor_rational(G.affine_poly("t"));
        int field_idx = 0;
        for (const auto& [fac, mult] : factors) {
            int fd = fac.degree("t");
            if (fd < 1) continue;  // constant unit
            auto dense = to_dense(fac, "t");
            if (fd == 1) {
                out.emplace_back(BasePoint::rational(-dense[0] / dense[1]), mult);
            } else {
                Rat lc = dense.back();
                for (auto& q : dense) q /= lc;
                auto F = make_field(dense, field_prefix + std::to_string(field_idx++));
                out.emplace_back(BasePoint::algebraic(F), mult);
            }
        }
    }
    int at_inf = G.ord_at_infinity();
    if (at_inf > 0) out.emplace_back(BasePoint::infinity(), at_inf);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return BasePoint::cmp(a.first, b.first) < 0;
    });
    return out;
}

// --- intersection_points ----------------------------------------------------

// The binary form obtained by substituting the section into the divisor's
// coefficient presentation: sum_i phi_i s^(d-i) (finite s), phi_0 for the
// infinity section.
inline BinForm substitute_section(const HorizontalDivisor& H, const Section& s) {
    int d = H.fiber_degree();
    if (s.infinite) return H.phis[0];
    if (s.form.deg != H.twist_e)
        throw input_error("section: form degree must equal the surface twist");
    BinForm acc(d * H.twist_e, {});
    for (int i = 0; i <= d; ++i)
        acc = acc + H.phis[static_cast<std::size_t>(i)] * s.form.pow(static_cast<unsigned>(d - i));
    return acc;
}

inline std::vector<std::pair<BasePoint, int>> intersection_points(const HorizontalDivisor& H,
                                                                  const Section& s) {
    BinForm G = substitute_section(H, s);
    if (G.is_zero()) throw input_error("section is a component");
    return zeros_with_multiplicity(G);
}

// Collision points of sections[i] with the remaining sections: intersect the
// divisor built from the others with sections[i].  This is the workflow that
// locates all pairwise collisions of a marked section inside a section list.
inline std::vector<std::pair<BasePoint, int>> collisions_with_others(
    int twist_e, const std::vector<Section>& sections, std::size_t i) {
    if (i >= sections.size()) throw input_error("collisions: index out of range");
    if (sections.size() < 2) return {};
    std::vector<Section> others;
    for (std::size_t j = 0; j < sections.size(); ++j)
        if (j != i) others.push_back(sections[j]);
    HorizontalDivisor H = divisor_from_sections(twist_e, others);
    BinForm G = substitute_section(H, sections[i]);
    if (G.is_zero()) throw input_error("section is a component");
    return zeros_with_multiplicity(G);
}

}  // namespace sncres
