#pragma once

// Exact rationals.  Backed by GMP's mpq_class: always stored reduced with
// positive denominator, which is exactly the canonical form we promise.

#include <gmpxx.h>

#include <cstdlib>
#include <string>

#include "sncres/support.hpp"

namespace sncres {

using Rat = mpq_class;
using Int = mpz_class;

inline Rat rat_of(long n, long d = 1) {
    if (d == 0) throw input_error("rational: zero denominator");
    Rat q(n, d);
    q.canonicalize();
    return q;
}

inline int sign(const Rat& q) { return sgn(q); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// "p" when the denominator is 1, otherwise "p/q"; the sign rides on p.
inline std::string rat_to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// Accepts "p", "p/q", optional leading '-' or '+' on p.
inline Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw input_error("rational: empty literal");
    try {
        Rat q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw input_error("rational: bad literal '" + s + "'");
    }
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
    Rat out = 1;
    Rat b = base;
    unsigned long k = e;
    while (k) {
        if (k & 1) out *= b;
        b *= b;
        k >>= 1;
    }
    return out;
}

inline Int int_pow(const Int& base, unsigned long e) {
    Int out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

// Truncated integer square root (floor).
inline Int int_sqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

}  // namespace sncres
