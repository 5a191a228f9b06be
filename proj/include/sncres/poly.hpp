#pragma once

// Sparse multivariate polynomials over an exact field K.  Canonical term
// order is graded lex, descending, with variable precedence alphabetical
// ascending ("x" beats "y").  to_string/parse round-trip exactly; the text
// form is what lands in logs.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sncres/numberfield.hpp"
#include "sncres/rational.hpp"
#include "sncres/support.hpp"

namespace sncres {

using Monomial = std::map<std::string, unsigned>;  // var -> exponent > 0

inline unsigned mono_degree(const Monomial& m) {
    unsigned d = 0;
    for (auto& [v, e] : m) d += e;
    return d;
}

// < 0 when a precedes b in the canonical (descending grlex) order.
inline int mono_cmp(const Monomial& a, const Monomial& b) {
    unsigned da = mono_degree(a), db = mono_degree(b);
    if (da != db) return da > db ? -1 : 1;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
        if (ia->second != ib->second) return ia->second > ib->second ? -1 : 1;
        ++ia;
        ++ib;
    }
    if (ia != a.end()) return -1;
    if (ib != b.end()) return 1;
    return 0;
}

struct MonoBefore {
    bool operator()(const Monomial& a, const Monomial& b) const { return mono_cmp(a, b) < 0; }
};

inline std::string coef_to_string(const Rat& q) { return rat_to_string(q); }
inline std::string coef_to_string(const AlgNum& a) { return "(" + a.to_string() + ")"; }
inline bool coef_is_negative(const Rat& q) { return sgn(q) < 0; }
template <class K>
bool coef_is_negative(const K&) {
    return false;
}

template <class K>
class Poly {
   public:
    using Terms = std::map<Monomial, K, MonoBefore>;

    Poly() = default;
    Poly(const K& c) {  // NOLINT(google-explicit-constructor): constants embed
        if (!(c == K(0))) terms_.emplace(Monomial{}, c);
    }
    Poly(long n) : Poly(K(n)) {}  // NOLINT(google-explicit-constructor)

    static Poly variable(const std::string& name) {
        Poly p;
        p.terms_.emplace(Monomial{{name, 1}}, K(1));
        return p;
    }

    static Poly term(const K& c, Monomial m) {
        Poly p;
        if (!(c == K(0))) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    K constant_value() const {
        if (terms_.empty()) return K(0);
        if (!is_constant()) throw internal_error("poly: not a constant");
        return terms_.begin()->second;
    }

    // -1 for the zero polynomial.
    int total_degree() const {
        return terms_.empty() ? -1 : static_cast<int>(mono_degree(terms_.begin()->first));
    }

    int degree(const std::string& var) const {
        int d = -1;
        for (auto& [m, c] : terms_) {
            auto it = m.find(var);
            int e = it == m.end() ? 0 : static_cast<int>(it->second);
            d = std::max(d, e);
        }
        return d;
    }

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m) out.insert(v);
        return out;
    }

    K coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? K(0) : it->second;
    }

    const Monomial& leading_monomial() const {
        if (terms_.empty()) throw internal_error("poly: leading term of zero");
        return terms_.begin()->first;
    }
    const K& leading_coefficient() const {
        if (terms_.empty()) throw internal_error("poly: leading term of zero");
        return terms_.begin()->second;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        unsigned d = mono_degree(terms_.begin()->first);
        for (auto& [m, c] : terms_)
            if (mono_degree(m) != d) return false;
        return true;
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        Poly out = a;
        for (auto& [m, c] : b.terms_) out.add_term(m, c);
        return out;
    }
    friend Poly operator-(const Poly& a, const Poly& b) {
        Poly out = a;
        for (auto& [m, c] : b.terms_) out.add_term(m, K(0) - c);
        return out;
    }
    friend Poly operator-(const Poly& a) { return Poly() - a; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out;
        for (auto& [ma, ca] : a.terms_)
            for (auto& [mb, cb] : b.terms_) {
                Monomial m = ma;
                for (auto& [v, e] : mb) m[v] += e;
                out.add_term(m, ca * cb);
            }
        return out;
    }

    friend Poly operator*(const K& c, const Poly& a) { return Poly(c) * a; }

    Poly pow(unsigned e) const {
        Poly out(K(1));
        Poly b = *this;
        while (e) {
            if (e & 1) out = out * b;
            b = b * b;
            e >>= 1;
        }
        return out;
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib) {
            if (mono_cmp(ia->first, ib->first) != 0) return false;
            if (!(ia->second == ib->second)) return false;
        }
        return true;
    }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly derivative(const std::string& var) const {
        Poly out;
        for (auto& [m, c] : terms_) {
            auto it = m.find(var);
            if (it == m.end()) continue;
            Monomial n = m;
            unsigned e = it->second;
            if (e == 1)
                n.erase(var);
            else
                n[var] = e - 1;
            out.add_term(n, c * K(static_cast<long>(e)));
        }
        return out;
    }

    // Substitute polynomials for variables; unmentioned variables stay put.
    Poly substitute(const std::map<std::string, Poly>& repl) const {
        Poly out;
        for (auto& [m, c] : terms_) {
            Poly term(c);
            for (auto& [v, e] : m) {
                auto it = repl.find(v);
                Poly base = it == repl.end() ? variable(v) : it->second;
                term = term * base.pow(e);
            }
            out = out + term;
        }
        return out;
    }

    // Full evaluation; every variable present must be assigned.
    K evaluate(const std::map<std::string, K>& at) const {
        K out(0);
        for (auto& [m, c] : terms_) {
            K t = c;
            for (auto& [v, e] : m) {
                auto it = at.find(v);
                if (it == at.end()) throw input_error("poly: unassigned variable '" + v + "'");
                K p(1);
                for (unsigned i = 0; i < e; ++i) p = p * it->second;
                t = t * p;
            }
            out = out + t;
        }
        return out;
    }

    // Dense coefficient list in var: index = exponent, entries are polys in
    // the remaining variables.  Zero poly gives {}.
    std::vector<Poly> as_univariate(const std::string& var) const {
        int d = degree(var);
        if (d < 0) return {};
        std::vector<Poly> out(static_cast<std::size_t>(d) + 1);
        for (auto& [m, c] : terms_) {
            Monomial n = m;
            unsigned e = 0;
            auto it = n.find(var);
            if (it != n.end()) {
                e = it->second;
                n.erase(it);
            }
            out[e].add_term(n, c);
        }
        return out;
    }

    static Poly from_univariate(const std::string& var, const std::vector<Poly>& coeffs) {
        Poly out;
        for (std::size_t e = 0; e < coeffs.size(); ++e) {
            for (auto& [m, c] : coeffs[e].terms_) {
                Monomial n = m;
                if (n.count(var)) throw internal_error("poly: coefficient mentions main variable");
                if (e > 0) n[var] = static_cast<unsigned>(e);
                out.add_term(n, c);
            }
        }
        return out;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (auto& [m, c] : terms_) {
            K a = c;
            if (first) {
                if (coef_is_negative(c)) {
                    out += "-";
                    a = K(0) - c;
                }
            } else {
                if (coef_is_negative(c)) {
                    out += " - ";
                    a = K(0) - c;
                } else {
                    out += " + ";
                }
            }
            first = false;
            bool unit = (a == K(1));
            if (m.empty()) {
                out += coef_to_string(a);
            } else {
                if (!unit) out += coef_to_string(a) + "*";
                bool firstv = true;
                for (auto& [v, e] : m) {
                    if (!firstv) out += "*";
                    firstv = false;
                    out += v;
                    if (e > 1) out += "^" + std::to_string(e);
                }
            }
        }
        return out;
    }

    // Total-order on polynomials for deterministic sorting: term-by-term in
    // canonical order, monomials first, then coefficients.
    static int cmp(const Poly& a, const Poly& b) {
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end() && ib != b.terms_.end(); ++ia, ++ib) {
            int mc = mono_cmp(ia->first, ib->first);
            if (mc != 0) return mc;
            if (!(ia->second == ib->second)) return coef_cmp(ia->second, ib->second);
        }
        if (ia != a.terms_.end()) return -1;
        if (ib != b.terms_.end()) return 1;
        return 0;
    }

   private:
    static int coef_cmp(const Rat& x, const Rat& y) { return cmp(x, y) < 0 ? -1 : 1; }
    template <class K2>
    static int coef_cmp(const K2&, const K2&) {
        return -1;  // incomparable coefficients: keep stable order
    }

    void add_term(const Monomial& m, const K& c) {
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!(c == K(0))) terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second == K(0)) terms_.erase(it);
        }
    }

    Terms terms_;
};

using QPoly = Poly<Rat>;

// --- parsing ------------------------------------------------------------

namespace detail {

struct PolyParser {
    const std::string& s;
    std::size_t i = 0;

    explicit PolyParser(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    QPoly parse_expr() {
        QPoly out = parse_term();
        for (;;) {
            if (eat('+'))
                out = out + parse_term();
            else if (eat('-'))
                out = out - parse_term();
            else
                return out;
        }
    }

    QPoly parse_term() {
        QPoly out = parse_factor();
        for (;;) {
            if (eat('*')) {
                out = out * parse_factor();
            } else if (eat('/')) {
                QPoly d = parse_factor();
                if (!d.is_constant() || d.is_zero())
                    throw input_error("poly: '/' needs a nonzero constant divisor");
                out = QPoly(Rat(1) / d.constant_value()) * out;
            } else {
                return out;
            }
        }
    }

    QPoly parse_factor() {
        QPoly base = parse_base();
        if (eat('^')) {
            unsigned long e = parse_uint();
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }

    QPoly parse_base() {
        skip_ws();
        if (i >= s.size()) throw input_error("poly: unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            QPoly inner = parse_expr();
            if (!eat(')')) throw input_error("poly: missing ')'");
            return inner;
        }
        if (c == '-') {
            ++i;
            return -parse_factor();
        }
        if (c == '+') {
            ++i;
            return parse_factor();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                digits += s[i++];
            return QPoly(Rat(Int(digits)));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
                name += s[i++];
            return QPoly::variable(name);
        }
        throw input_error(std::string("poly: unexpected character '") + c + "'");
    }

    unsigned long parse_uint() {
        skip_ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            throw input_error("poly: expected a number");
        unsigned long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            v = v * 10 + static_cast<unsigned long>(s[i] - '0');
            if (v > 100000ul) throw input_error("poly: exponent too large");
            ++i;
        }
        return v;
    }
};

}  // namespace detail

inline QPoly parse_poly(const std::string& text) {
    detail::PolyParser p(text);
    QPoly out = p.parse_expr();
    p.skip_ws();
    if (p.i != text.size()) throw input_error("poly: trailing garbage in '" + text + "'");
    return out;
}

// Exact multivariate division; throws when b does not divide a.
template <class K>
Poly<K> divide_exact(const Poly<K>& a, const Poly<K>& b) {
    if (b.is_zero()) throw internal_error("poly: division by zero");
    Poly<K> q, r = a;
    while (!r.is_zero()) {
        const Monomial& mr = r.leading_monomial();
        const Monomial& mb = b.leading_monomial();
        Monomial mq;
        bool divisible = true;
        for (auto& [v, e] : mb) {
            auto it = mr.find(v);
            if (it == mr.end() || it->second < e) {
                divisible = false;
                break;
            }
        }
        if (divisible) {
            mq = mr;
            for (auto& [v, e] : mb) {
                if (mq[v] == e)
                    mq.erase(v);
                else
                    mq[v] -= e;
            }
        } else {
            throw internal_error("poly: inexact division");
        }
        Poly<K> t = Poly<K>::term(r.leading_coefficient() / b.leading_coefficient(), mq);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

// Scale to coprime integer coefficients with positive leading (grlex)
// coefficient.  Zero stays zero.  *scale receives the multiplier applied.
inline QPoly primitive_integer(const QPoly& p, Rat* scale = nullptr) {
    if (p.is_zero()) {
        if (scale) *scale = 1;
        return p;
    }
    Int den_lcm = 1, num_gcd = 0;
    for (auto& [m, c] : p.terms()) {
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    for (auto& [m, c] : p.terms()) {
        Int num = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), num.get_mpz_t());
    }
    Rat f(den_lcm, num_gcd);
    f.canonicalize();
    if (sgn(p.leading_coefficient()) < 0) f = -f;
    if (scale) *scale = f;
    return QPoly(f) * p;
}

}  // namespace sncres
