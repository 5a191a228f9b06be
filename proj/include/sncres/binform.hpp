#pragma once

// Binary forms on P^1 in the affine presentation: a form of homogeneous
// degree D is stored by its affine coefficients c_j, meaning
// sum_j c_j t1^j t0^(D-j); order at infinity [0:1] = D - affine degree.

#include <string>
#include <vector>

#include "sncres/algebra.hpp"
#include "sncres/factor.hpp"
#include "sncres/jet.hpp"
#include "sncres/poly.hpp"
#include "sncres/support.hpp"

namespace sncres {

namespace detail {

// Dense rational synthetic division by (t - a); returns the value, leaves the
// quotient in c.
template <class K>
K taylor_step(std::vector<K>& c, const K& a) {
    if (c.empty()) return K(0);
    K acc = c.back();
    std::vector<K> quot(c.size() - 1, K(0));
    for (std::size_t i = c.size() - 1; i-- > 0;) {
        quot[i] = acc;
        acc = acc * a + c[i];
    }
    c = std::move(quot);
    return acc;
}

}  // namespace detail

struct BinForm {
    int deg = 0;          // homogeneous degree D
    std::vector<Rat> c;   // affine coefficients, trimmed

    BinForm() = default;
    BinForm(int hom_deg, std::vector<Rat> coeffs) : deg(hom_deg), c(std::move(coeffs)) {
        trim();
        if (hom_deg < 0) throw input_error("binary form: negative degree");
        if (affine_degree() > deg)
            throw input_error("binary form: affine degree exceeds homogeneous degree");
    }

    static BinForm constant(int hom_deg, const Rat& v) { return BinForm(hom_deg, {v}); }

    static BinForm from_affine(const QPoly& p, int hom_deg, const std::string& var = "t") {
        auto vars = p.variables();
        if (!vars.empty() && !(vars.size() == 1 && *vars.begin() == var))
            throw input_error("binary form: affine polynomial must use variable '" + var + "'");
        return BinForm(hom_deg, to_dense(p, var));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int affine_degree() const { return static_cast<int>(c.size()) - 1; }  // -1 for zero
    int ord_at_infinity() const {
        if (is_zero()) throw internal_error("binary form: order of zero form");
        return deg - affine_degree();
    }

    Rat coeff(int j) const {
        return j >= 0 && j < static_cast<int>(c.size()) ? c[static_cast<std::size_t>(j)] : Rat(0);
    }

    QPoly affine_poly(const std::string& var = "t") const { return from_dense(var, c); }

    QPoly homogeneous_poly(const std::string& v0 = "t0", const std::string& v1 = "t1") const {
        QPoly out;
        for (int j = 0; j < static_cast<int>(c.size()); ++j) {
            if (c[static_cast<std::size_t>(j)] == 0) continue;
            Monomial m;
            if (j > 0) m[v1] = static_cast<unsigned>(j);
            if (deg - j > 0) m[v0] = static_cast<unsigned>(deg - j);
            out = out + QPoly::term(c[static_cast<std::size_t>(j)], m);
        }
        return out;
    }

    friend BinForm operator+(const BinForm& a, const BinForm& b) {
        if (a.deg != b.deg) throw internal_error("binary form: degree mismatch in +");
        std::vector<Rat> out(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] += b.c[i];
        return BinForm(a.deg, std::move(out));
    }
    friend BinForm operator-(const BinForm& a, const BinForm& b) {
        if (a.deg != b.deg) throw internal_error("binary form: degree mismatch in -");
        std::vector<Rat> out(std::max(a.c.size(), b.c.size()), Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) out[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) out[i] -= b.c[i];
        return BinForm(a.deg, std::move(out));
    }
    friend BinForm operator*(const BinForm& a, const BinForm& b) {
        if (a.is_zero() || b.is_zero()) return BinForm(a.deg + b.deg, {});
        std::vector<Rat> out(a.c.size() + b.c.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
        return BinForm(a.deg + b.deg, std::move(out));
    }
    friend BinForm operator*(const Rat& s, const BinForm& a) {
        std::vector<Rat> out = a.c;
        for (auto& x : out) x *= s;
        return BinForm(a.deg, std::move(out));
    }

    BinForm pow(unsigned e) const {
        if (e == 0) return constant(0, 1);
        if (is_zero()) return BinForm(static_cast<int>(e) * deg, {});
        BinForm out = constant(0, 1);
        BinForm b = *this;
        unsigned k = e;
        while (k) {
            if (k & 1) out = out * b;
            b = b * b;
            k >>= 1;
        }
        return out;
    }

    friend bool operator==(const BinForm& a, const BinForm& b) {
        return a.deg == b.deg && a.c == b.c;
    }
    friend bool operator!=(const BinForm& a, const BinForm& b) { return !(a == b); }

    // Value in the standard trivialization: finite points use the affine
    // chart, infinity uses the reversed chart (coefficient of t1^deg).
    AlgNum eval(const BasePoint& p) const {
        switch (p.kind) {
            case BasePoint::Kind::rational: {
                AlgNum acc(Rat(0));
                for (std::size_t i = c.size(); i-- > 0;) acc = acc * AlgNum(p.a) + AlgNum(c[i]);
                return acc;
            }
            case BasePoint::Kind::infinity:
                return AlgNum(coeff(deg));
            case BasePoint::Kind::algebraic: {
                AlgNum theta = AlgNum::generator(p.field);
                AlgNum acc(Rat(0));
                for (std::size_t i = c.size(); i-- > 0;) acc = acc * theta + AlgNum(c[i]);
                return acc;
            }
        }
        throw internal_error("binary form: bad point kind");
    }

    // Order of vanishing at a base point.
    int valuation(const BasePoint& p) const {
        if (is_zero()) throw input_error("valuation: zero form");
        switch (p.kind) {
            case BasePoint::Kind::infinity:
                return ord_at_infinity();
            case BasePoint::Kind::rational: {
                std::vector<Rat> work = c;
                int v = 0;
                for (;;) {
                    std::vector<Rat> probe = work;
                    Rat val = detail::taylor_step(probe, p.a);
                    if (val != 0) return v;
                    work = std::move(probe);
                    ++v;
                    if (work.empty()) throw internal_error("valuation: exhausted form");
                }
            }
            case BasePoint::Kind::algebraic: {
                // Multiplicity of the minimal polynomial in the affine part.
                QPoly f = affine_poly("t");
                QPoly mp;
                for (std::size_t i = 0; i < p.field->minpoly.size(); ++i) {
                    Monomial m;
                    if (i > 0) m["t"] = static_cast<unsigned>(i);
                    mp = mp + QPoly::term(p.field->minpoly[i], m);
                }
                int v = 0;
                for (;;) {
                    if (f.degree("t") < mp.degree("t")) return v;
                    try {
                        f = divide_exact(f, mp);
                    } catch (const internal_error&) {
                        return v;
                    }
                    ++v;
                    if (f.is_zero()) throw internal_error("valuation: exhausted form");
                }
            }
        }
        throw internal_error("binary form: bad point kind");
    }

    // Truncated expansion in the local parameter at p.  The first
    // 'truncation' coefficients are produced; 'exact' is set when the whole
    // polynomial expansion fits inside the window.
    LocalJet jet(const BasePoint& p, int truncation) const {
        if (truncation < 1) throw input_error("jet: truncation_order must be >= 1");
        LocalJet out;
        out.center = p;
        out.truncation_order = truncation;
        std::vector<AlgNum> work;
        if (p.kind == BasePoint::Kind::infinity) {
            // reversed chart: coefficient of u^k is c_(deg-k)
            work.resize(static_cast<std::size_t>(deg) + 1, AlgNum(Rat(0)));
            for (int k = 0; k <= deg; ++k) work[static_cast<std::size_t>(k)] = AlgNum(coeff(deg - k));
        } else {
            AlgNum at = p.kind == BasePoint::Kind::rational ? AlgNum(p.a)
                                                            : AlgNum::generator(p.field);
            work.resize(c.size(), AlgNum(Rat(0)));
            for (std::size_t i = 0; i < c.size(); ++i) work[i] = AlgNum(c[i]);
            // Taylor shift: repeated synthetic division collects the
            // expansion coefficients in order.
            std::vector<AlgNum> shifted;
            while (!work.empty()) {
                shifted.push_back(detail::taylor_step(work, at));
            }
            work = std::move(shifted);
        }
        out.exact = static_cast<int>(work.size()) <= truncation;
        if (static_cast<int>(work.size()) > truncation)
            work.resize(static_cast<std::size_t>(truncation));
        while (!work.empty() && work.back().is_zero()) work.pop_back();
        out.coeffs = std::move(work);
        return out;
    }

    std::string to_string() const { return homogeneous_poly().to_string(); }
};

}  // namespace sncres
