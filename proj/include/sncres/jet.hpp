#pragma once

// Base points of P^1 (rational, algebraic, or infinity) and truncated local
// power series at them.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sncres/numberfield.hpp"
#include "sncres/rational.hpp"
#include "sncres/support.hpp"

namespace sncres {

struct BasePoint {
    enum class Kind { rational, algebraic, infinity };

    Kind kind = Kind::rational;
    Rat a;                                  // rational value
    std::shared_ptr<const NumField> field;  // algebraic: the generator's root

    static BasePoint rational(const Rat& v) {
        BasePoint p;
        p.kind = Kind::rational;
        p.a = v;
        return p;
    }
    static BasePoint algebraic(std::shared_ptr<const NumField> f) {
        BasePoint p;
        p.kind = Kind::algebraic;
        p.field = std::move(f);
        return p;
    }
    static BasePoint infinity() {
        BasePoint p;
        p.kind = Kind::infinity;
        return p;
    }

    bool is_infinity() const { return kind == Kind::infinity; }

    std::string to_string() const {
        switch (kind) {
            case Kind::rational:
                return "t=" + rat_to_string(a);
            case Kind::infinity:
                return "t=inf";
            case Kind::algebraic: {
                std::string out = "root(";
                bool first = true;
                for (std::size_t i = 0; i < field->minpoly.size(); ++i) {
                    if (field->minpoly[i] == 0) continue;
                    if (!first) out += "+";
                    first = false;
                    out += rat_to_string(field->minpoly[i]);
                    if (i >= 1) out += "*u^" + std::to_string(i);
                }
                return out + ")";
            }
        }
        return "?";
    }

    // Canonical order: rationals ascending, then algebraic points by
    // (minpoly degree, coefficient sequence), infinity last.
    static int cmp(const BasePoint& x, const BasePoint& y) {
        auto rank = [](const BasePoint& p) {
            switch (p.kind) {
                case Kind::rational: return 0;
                case Kind::algebraic: return 1;
                case Kind::infinity: return 2;
            }
            return 3;
        };
        if (rank(x) != rank(y)) return rank(x) < rank(y) ? -1 : 1;
        if (x.kind == Kind::rational) {
            if (x.a != y.a) return x.a < y.a ? -1 : 1;
            return 0;
        }
        if (x.kind == Kind::algebraic) {
            if (x.field->minpoly.size() != y.field->minpoly.size())
                return x.field->minpoly.size() < y.field->minpoly.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.field->minpoly.size(); ++i) {
                if (x.field->minpoly[i] != y.field->minpoly[i])
                    return x.field->minpoly[i] < y.field->minpoly[i] ? -1 : 1;
            }
            return 0;
        }
        return 0;
    }

    friend bool operator==(const BasePoint& x, const BasePoint& y) { return cmp(x, y) == 0; }
};

// Truncated power series in the local parameter u at a base point.
// truncation_order = how many coefficients are known (series known mod
// u^truncation_order); when 'exact' the series is known to terminate inside
// the stored window.
struct LocalJet {
    BasePoint center;
    std::vector<AlgNum> coeffs;  // c[k] multiplies u^k; size <= truncation_order
    int truncation_order = 1;
    bool exact = false;

    // Order of vanishing; nullopt encodes infinity (identically zero, only
    // decidable for exact jets).
    std::optional<int> valuation() const {
        for (std::size_t k = 0; k < coeffs.size(); ++k)
            if (!coeffs[k].is_zero()) return static_cast<int>(k);
        if (exact) return std::nullopt;
        throw input_error("valuation: increase truncation_order");
    }

    AlgNum coeff(int k) const {
        if (k < 0) throw internal_error("jet: negative index");
        if (k < static_cast<int>(coeffs.size())) return coeffs[static_cast<std::size_t>(k)];
        if (exact || k < truncation_order) return AlgNum(Rat(0));
        throw input_error("jet coefficient: increase truncation_order");
    }
};

}  // namespace sncres
