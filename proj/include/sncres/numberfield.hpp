#pragma once

// Simple algebraic extensions Q(g) = Q[x]/(p) with p monic irreducible.
// No towers: every AlgNum lives over Q or over exactly one NumField, and
// values from different fields never mix.

#include <memory>
#include <string>
#include <vector>

#include "sncres/rational.hpp"
#include "sncres/support.hpp"

namespace sncres {

struct NumField {
    std::vector<Rat> minpoly;  // c0 + c1*x + ... + x^n, monic, irreducible over Q
    std::string name;          // generator symbol, used only for printing

    int degree() const { return static_cast<int>(minpoly.size()) - 1; }
};

inline std::shared_ptr<const NumField> make_field(std::vector<Rat> minpoly,
                                                  std::string name) {
    if (minpoly.size() < 2) throw input_error("number field: minpoly must have degree >= 1");
    if (minpoly.back() != 1) throw input_error("number field: minpoly must be monic");
    return std::make_shared<const NumField>(NumField{std::move(minpoly), std::move(name)});
}

namespace detail {

// Dense univariate helpers over Rat, for arithmetic mod the minpoly.
inline void trim_zeros(std::vector<Rat>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}

inline std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<Rat> out(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim_zeros(out);
    return out;
}

inline std::vector<Rat> poly_rem(std::vector<Rat> a, const std::vector<Rat>& m) {
    // m monic.
    while (a.size() >= m.size()) {
        Rat lead = a.back();
        std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] -= lead * m[i];
        trim_zeros(a);
        if (!a.empty() && a.size() >= m.size() && a.back() == 0) trim_zeros(a);
    }
    return a;
}

}  // namespace detail

class AlgNum {
   public:
    AlgNum() : c_{} {}
    AlgNum(const Rat& q) {  // NOLINT(google-explicit-constructor): Q embeds everywhere
        if (q != 0) c_.push_back(q);
    }
    AlgNum(long n) : AlgNum(Rat(n)) {}  // NOLINT(google-explicit-constructor)

    // The generator of F, or a general element with the given coordinates.
    static AlgNum generator(std::shared_ptr<const NumField> f) {
        AlgNum a;
        a.field_ = std::move(f);
        a.c_ = {Rat(0), Rat(1)};
        if (a.field_->degree() == 1) {  // Q itself in disguise: x = -c0
            Rat root = -a.field_->minpoly[0];
            return AlgNum(root);
        }
        return a;
    }

    static AlgNum from_coords(std::shared_ptr<const NumField> f, std::vector<Rat> coords) {
        if (static_cast<int>(coords.size()) > f->degree())
            throw internal_error("algnum: coordinate vector too long");
        AlgNum a;
        a.field_ = std::move(f);
        a.c_ = std::move(coords);
        detail::trim_zeros(a.c_);
        if (a.c_.size() <= 1) a.field_.reset();  // rational after all
        return a;
    }

    const std::shared_ptr<const NumField>& field() const { return field_; }
    const std::vector<Rat>& coords() const { return c_; }

    bool is_zero() const { return c_.empty(); }
    bool is_rational() const { return field_ == nullptr; }

    Rat as_rational() const {
        if (!is_rational()) throw internal_error("algnum: not rational");
        return c_.empty() ? Rat(0) : c_[0];
    }

    friend AlgNum operator+(const AlgNum& a, const AlgNum& b) {
        auto [f, x, y] = align(a, b);
        std::vector<Rat> out(std::max(x.size(), y.size()), Rat(0));
        for (std::size_t i = 0; i < x.size(); ++i) out[i] += x[i];
        for (std::size_t i = 0; i < y.size(); ++i) out[i] += y[i];
        return pack(f, std::move(out));
    }

    friend AlgNum operator-(const AlgNum& a, const AlgNum& b) {
        auto [f, x, y] = align(a, b);
        std::vector<Rat> out(std::max(x.size(), y.size()), Rat(0));
        for (std::size_t i = 0; i < x.size(); ++i) out[i] += x[i];
        for (std::size_t i = 0; i < y.size(); ++i) out[i] -= y[i];
        return pack(f, std::move(out));
    }

    friend AlgNum operator-(const AlgNum& a) { return AlgNum(Rat(0)) - a; }

    friend AlgNum operator*(const AlgNum& a, const AlgNum& b) {
        auto [f, x, y] = align(a, b);
        auto prod = detail::poly_mul(x, y);
        if (f) prod = detail::poly_rem(std::move(prod), f->minpoly);
        return pack(f, std::move(prod));
    }

    AlgNum inverse() const {
        if (is_zero()) throw input_error("algnum: division by zero");
        if (is_rational()) return AlgNum(Rat(1) / c_[0]);
        // Extended Euclid for u with u*self == gcd mod minpoly; the minpoly is
        // irreducible and self is a nonzero residue, so the gcd is a nonzero
        // constant.
        std::vector<Rat> r0 = field_->minpoly, r1 = c_;
        std::vector<Rat> t0 = {}, t1 = {Rat(1)};
        while (!r1.empty()) {
            // Divide r0 by r1.
            std::vector<Rat> q;
            std::vector<Rat> rem = r0;
            if (rem.size() >= r1.size()) {
                q.assign(rem.size() - r1.size() + 1, Rat(0));
                while (rem.size() >= r1.size() && !rem.empty()) {
                    Rat coef = rem.back() / r1.back();
                    std::size_t shift = rem.size() - r1.size();
                    q[shift] = coef;
                    for (std::size_t i = 0; i < r1.size(); ++i) rem[shift + i] -= coef * r1[i];
                    detail::trim_zeros(rem);
                }
            }
            std::vector<Rat> qt1 = detail::poly_mul(q, t1);
            std::vector<Rat> t2(std::max(t0.size(), qt1.size()), Rat(0));
            for (std::size_t i = 0; i < t0.size(); ++i) t2[i] += t0[i];
            for (std::size_t i = 0; i < qt1.size(); ++i) t2[i] -= qt1[i];
            detail::trim_zeros(t2);
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        if (r0.size() != 1) throw internal_error("algnum: minpoly not irreducible");
        Rat g = r0[0];
        for (auto& ci : t0) ci /= g;
        detail::trim_zeros(t0);
        return pack(field_, std::move(t0));
    }

    friend AlgNum operator/(const AlgNum& a, const AlgNum& b) { return a * b.inverse(); }

    friend bool operator==(const AlgNum& a, const AlgNum& b) { return (a - b).is_zero(); }
    friend bool operator!=(const AlgNum& a, const AlgNum& b) { return !(a == b); }

    std::string to_string() const {
        if (c_.empty()) return "0";
        if (is_rational()) return rat_to_string(c_[0]);
        std::string out;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (!first) out += " + ";
            first = false;
            if (i == 0) {
                out += rat_to_string(c_[i]);
            } else {
                std::string term;
                if (c_[i] != 1) term = rat_to_string(c_[i]) + "*";
                term += field_->name;
                if (i > 1) term += "^" + std::to_string(i);
                out += term;
            }
        }
        return out;
    }

   private:
    static AlgNum pack(std::shared_ptr<const NumField> f, std::vector<Rat> c) {
        detail::trim_zeros(c);
        AlgNum a;
        if (c.size() > 1) a.field_ = std::move(f);
        a.c_ = std::move(c);
        return a;
    }

    // Coerce both operands into a common field; mixing two distinct fields is
    // a program bug.
    static std::tuple<std::shared_ptr<const NumField>, std::vector<Rat>, std::vector<Rat>>
    align(const AlgNum& a, const AlgNum& b) {
        std::shared_ptr<const NumField> f;
        if (a.field_ && b.field_) {
            if (a.field_ != b.field_) throw internal_error("algnum: mixed number fields");
            f = a.field_;
        } else {
            f = a.field_ ? a.field_ : b.field_;
        }
        return {f, a.c_, b.c_};
    }

    std::shared_ptr<const NumField> field_;  // null: element of Q
    std::vector<Rat> c_;                     // coords in 1, g, g^2, ...; no trailing zeros
};

}  // namespace sncres
