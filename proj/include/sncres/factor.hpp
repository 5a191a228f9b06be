#pragma once

// Univariate factorization over Q: Yun squarefree split, deterministic
// Berlekamp mod a small prime, quadratic Hensel lifting on a factor tree,
// subset recombination against a Mignotte-style bound.  Everything is
// deterministic: fixed prime scan, fixed kernel basis order, subsets by
// cardinality then lexicographic index.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "sncres/algebra.hpp"
#include "sncres/poly.hpp"
#include "sncres/rational.hpp"
#include "sncres/support.hpp"

namespace sncres {

namespace detail {

// ----- F_p dense polynomials, p small ------------------------------------

using FpV = std::vector<long>;  // coeffs in [0, p)

inline void fp_trim(FpV& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}
inline int fp_deg(const FpV& v) { return static_cast<int>(v.size()) - 1; }

inline long fp_inv(long a, long p) {
    long t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        long q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw internal_error("fp: not invertible");
    return ((t % p) + p) % p;
}

inline FpV fp_mul(const FpV& a, const FpV& b, long p) {
    if (a.empty() || b.empty()) return {};
    FpV out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] = (out[i + j] + a[i] * b[j]) % p;
    }
    fp_trim(out);
    return out;
}

inline FpV fp_rem(FpV a, const FpV& b, long p) {
    long linv = fp_inv(b.back(), p);
    while (fp_deg(a) >= fp_deg(b)) {
        long c = a.back() * linv % p;
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = ((a[shift + i] - c * b[i]) % p + p) % p;
        fp_trim(a);
    }
    return a;
}

inline FpV fp_monic(FpV a, long p) {
    if (a.empty()) return a;
    long inv = fp_inv(a.back(), p);
    for (auto& c : a) c = c * inv % p;
    return a;
}

inline FpV fp_gcd(FpV a, FpV b, long p) {
    while (!b.empty()) {
        FpV r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(a, p);
}

inline FpV fp_deriv(const FpV& a, long p) {
    if (a.size() <= 1) return {};
    FpV out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
        out[i - 1] = static_cast<long>(i % static_cast<std::size_t>(p)) * a[i] % p;
    fp_trim(out);
    return out;
}

// x^p mod g by square and multiply.
inline FpV fp_xpow_mod(long e, const FpV& g, long p) {
    FpV base = fp_rem(FpV{0, 1}, g, p);
    FpV out{1};
    while (e) {
        if (e & 1) out = fp_rem(fp_mul(out, base, p), g, p);
        base = fp_rem(fp_mul(base, base, p), g, p);
        e >>= 1;
    }
    return out;
}

// Extended Euclid: s*a + t*b = 1 for coprime a, b.
inline void fp_xgcd(const FpV& a, const FpV& b, long p, FpV& s, FpV& t) {
    FpV r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
    while (!r1.empty()) {
        // quotient of r0 by r1
        FpV q;
        FpV rem = r0;
        long linv = fp_inv(r1.back(), p);
        if (rem.size() >= r1.size()) q.assign(rem.size() - r1.size() + 1, 0);
        while (fp_deg(rem) >= fp_deg(r1)) {
            long c = rem.back() * linv % p;
            std::size_t shift = rem.size() - r1.size();
            q[shift] = c;
            for (std::size_t i = 0; i < r1.size(); ++i)
                rem[shift + i] = ((rem[shift + i] - c * r1[i]) % p + p) % p;
            fp_trim(rem);
        }
        auto comb = [&](const FpV& x0, const FpV& x1) {
            FpV qx = fp_mul(q, x1, p);
            FpV out(std::max(x0.size(), qx.size()), 0);
            for (std::size_t i = 0; i < x0.size(); ++i) out[i] = x0[i];
            for (std::size_t i = 0; i < qx.size(); ++i) out[i] = ((out[i] - qx[i]) % p + p) % p;
            fp_trim(out);
            return out;
        };
        FpV s2 = comb(s0, s1), t2 = comb(t0, t1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (fp_deg(r0) != 0) throw internal_error("fp: xgcd of non-coprime inputs");
    long inv = fp_inv(r0[0], p);
    for (auto& c : s0) c = c * inv % p;
    for (auto& c : t0) c = c * inv % p;
    s = std::move(s0);
    t = std::move(t0);
}

// Deterministic Berlekamp: monic squarefree g over F_p -> monic irreducible
// factors, sorted by (degree, coefficient tuple).
inline std::vector<FpV> berlekamp(const FpV& g, long p) {
    int n = fp_deg(g);
    if (n <= 1) return {g};
    // Petr matrix rows: x^(i*p) mod g.
    FpV xp = fp_xpow_mod(p, g, p);
    std::vector<FpV> rows(static_cast<std::size_t>(n));
    rows[0] = FpV{1};
    for (int i = 1; i < n; ++i) rows[static_cast<std::size_t>(i)] =
        fp_rem(fp_mul(rows[static_cast<std::size_t>(i - 1)], xp, p), g, p);
    // Null space of (Q - I)^T: v*Q = v with v as a row vector.
    std::vector<std::vector<long>> m(static_cast<std::size_t>(n),
                                     std::vector<long>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i) {
        const FpV& r = rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            long val = j < static_cast<int>(r.size()) ? r[static_cast<std::size_t>(j)] : 0;
            if (i == j) val = ((val - 1) % p + p) % p;
            m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = val;  // transpose
        }
    }
    // Row reduce; record pivot columns.
    std::vector<int> pivot_col(static_cast<std::size_t>(n), -1);
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int sel = -1;
        for (int row = rank; row < n; ++row)
            if (m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != 0) {
                sel = row;
                break;
            }
        if (sel < 0) continue;
        std::swap(m[static_cast<std::size_t>(sel)], m[static_cast<std::size_t>(rank)]);
        long inv = fp_inv(m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)], p);
        for (int j = 0; j < n; ++j)
            m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)] =
                m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)] * inv % p;
        for (int row = 0; row < n; ++row) {
            if (row == rank) continue;
            long f = m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
            if (f == 0) continue;
            for (int j = 0; j < n; ++j)
                m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] =
                    ((m[static_cast<std::size_t>(row)][static_cast<std::size_t>(j)] -
                      f * m[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)]) %
                         p +
                     p) %
                    p;
        }
        pivot_col[static_cast<std::size_t>(rank)] = col;
        ++rank;
    }
    std::vector<FpV> basis;
    for (int col = 0; col < n; ++col) {
        bool is_pivot = false;
        for (int r = 0; r < rank; ++r)
            if (pivot_col[static_cast<std::size_t>(r)] == col) is_pivot = true;
        if (is_pivot) continue;
        FpV v(static_cast<std::size_t>(n), 0);
        v[static_cast<std::size_t>(col)] = 1;
        for (int r = 0; r < rank; ++r) {
            int pc = pivot_col[static_cast<std::size_t>(r)];
            v[static_cast<std::size_t>(pc)] =
                ((-m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) % p + p) % p;
        }
        fp_trim(v);
        basis.push_back(std::move(v));
    }
    std::size_t want = basis.size();  // number of irreducible factors
    std::vector<FpV> factors{fp_monic(g, p)};
    for (const FpV& v : basis) {
        if (factors.size() == want) break;
        if (fp_deg(v) < 1) continue;  // the constants split nothing
        std::vector<FpV> next;
        for (FpV& u : factors) {
            if (fp_deg(u) == 1) {
                next.push_back(std::move(u));
                continue;
            }
            FpV w = std::move(u);
            FpV vr = fp_rem(v, w, p);
            for (long c = 0; c < p && fp_deg(w) > 0; ++c) {
                FpV shifted = vr;
                if (shifted.empty()) shifted.assign(1, 0);
                shifted[0] = ((shifted[0] - c) % p + p) % p;
                fp_trim(shifted);
                if (shifted.empty()) continue;  // v = c mod w: no split from this c
                FpV d = fp_gcd(w, shifted, p);
                if (fp_deg(d) > 0 && fp_deg(d) < fp_deg(w)) {
                    next.push_back(d);
                    // w /= d
                    FpV q;
                    {
                        FpV rem = w;
                        long linv = fp_inv(d.back(), p);
                        q.assign(rem.size() - d.size() + 1, 0);
                        while (fp_deg(rem) >= fp_deg(d)) {
                            long cc = rem.back() * linv % p;
                            std::size_t shift = rem.size() - d.size();
                            q[shift] = cc;
                            for (std::size_t i = 0; i < d.size(); ++i)
                                rem[shift + i] = ((rem[shift + i] - cc * d[i]) % p + p) % p;
                            fp_trim(rem);
                        }
                        if (!rem.empty()) throw internal_error("berlekamp: inexact split");
                    }
                    w = fp_monic(q, p);
                    vr = fp_rem(v, w, p);
                }
            }
            if (fp_deg(w) > 0) next.push_back(std::move(w));
        }
        factors = std::move(next);
    }
    std::sort(factors.begin(), factors.end(), [](const FpV& a, const FpV& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return factors;
}

inline bool is_prime_small(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ----- Z/M dense polynomials (M = p^k, Int coefficients) ------------------

using ZV = std::vector<Int>;

inline void zv_trim(ZV& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}
inline int zv_deg(const ZV& v) { return static_cast<int>(v.size()) - 1; }

inline Int zmod(const Int& a, const Int& M) {
    Int r = a % M;
    if (r < 0) r += M;
    return r;
}

inline ZV zv_mod(ZV a, const Int& M) {
    for (auto& c : a) c = zmod(c, M);
    zv_trim(a);
    return a;
}

inline ZV zv_mul(const ZV& a, const ZV& b) {
    if (a.empty() || b.empty()) return {};
    ZV out(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    zv_trim(out);
    return out;
}

inline ZV zv_sub(const ZV& a, const ZV& b) {
    ZV out(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] -= b[i];
    zv_trim(out);
    return out;
}

inline ZV zv_add(const ZV& a, const ZV& b) {
    ZV out(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    zv_trim(out);
    return out;
}

// Division by a monic divisor, coefficients taken mod M.
inline void zv_divmod_monic(const ZV& a, const ZV& b, const Int& M, ZV& q, ZV& r) {
    if (b.empty() || b.back() != 1) throw internal_error("hensel: divisor not monic");
    r = zv_mod(a, M);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, Int(0));
    while (zv_deg(r) >= zv_deg(b)) {
        Int c = r.back();
        std::size_t shift = r.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] = zmod(r[shift + i] - c * b[i], M);
        zv_trim(r);
    }
    zv_trim(q);
}

// Exact division over Z by a monic divisor; throws when inexact.
inline ZV zv_divexact_monic_z(const ZV& a, const ZV& b) {
    if (b.empty() || b.back() != 1) throw internal_error("divexact: divisor not monic");
    ZV r = a, q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Int(0));
    while (zv_deg(r) >= zv_deg(b)) {
        Int c = r.back();
        std::size_t shift = r.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
        zv_trim(r);
    }
    if (!r.empty()) throw internal_error("divexact: inexact");
    zv_trim(q);
    return q;
}

// One quadratic Hensel step: f = u*v and s*u + t*v = 1 mod m become the same
// mod m^2.  All inputs monic u, v; f monic.
inline void hensel_step(const ZV& f, ZV& u, ZV& v, ZV& s, ZV& t, Int& m) {
    Int m2 = m * m;
    ZV e = zv_mod(zv_sub(f, zv_mul(u, v)), m2);
    ZV q, r;
    zv_divmod_monic(zv_mul(s, e), v, m2, q, r);
    ZV dv = r;  // deg < deg v
    ZV du_num = zv_mod(zv_sub(e, zv_mul(u, dv)), m2);
    ZV du, rem;
    zv_divmod_monic(du_num, v, m2, du, rem);
    if (!rem.empty()) throw internal_error("hensel: update not divisible");
    u = zv_mod(zv_add(u, du), m2);
    v = zv_mod(zv_add(v, dv), m2);
    // Refresh the Bezout pair.
    ZV d = zv_mod(zv_sub(zv_add(zv_mul(s, u), zv_mul(t, v)), ZV{Int(1)}), m2);
    ZV one_minus_d = zv_mod(zv_sub(ZV{Int(1)}, d), m2);
    ZV s_raw = zv_mod(zv_mul(s, one_minus_d), m2);
    ZV q2, s_new;
    zv_divmod_monic(s_raw, v, m2, q2, s_new);
    ZV t_num = zv_mod(zv_sub(ZV{Int(1)}, zv_mul(s_new, u)), m2);
    ZV t_new, rem2;
    zv_divmod_monic(t_num, v, m2, t_new, rem2);
    if (!rem2.empty()) throw internal_error("hensel: bezout update not divisible");
    s = std::move(s_new);
    t = std::move(t_new);
    m = m2;
}

// Lift the factor list of a monic f from mod p to mod >= target via a
// balanced factor tree.  factors_p are monic mod p with product f mod p.
inline void hensel_tree(const ZV& f, const std::vector<FpV>& factors_p, std::size_t lo,
                        std::size_t hi, long p, const Int& target, std::vector<ZV>& out) {
    if (hi - lo == 1) {
        out.push_back(f);
        return;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    FpV u_p{1}, v_p{1};
    for (std::size_t i = lo; i < mid; ++i) u_p = fp_mul(u_p, factors_p[i], p);
    for (std::size_t i = mid; i < hi; ++i) v_p = fp_mul(v_p, factors_p[i], p);
    FpV s_p, t_p;
    fp_xgcd(u_p, v_p, p, s_p, t_p);
    auto to_zv = [](const FpV& a) {
        ZV out2(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out2[i] = Int(a[i]);
        return out2;
    };
    ZV u = to_zv(u_p), v = to_zv(v_p), s = to_zv(s_p), t = to_zv(t_p);
    Int m(p);
    while (m < target) hensel_step(f, u, v, s, t, m);
    hensel_tree(u, factors_p, lo, mid, p, target, out);
    hensel_tree(v, factors_p, mid, hi, p, target, out);
}

inline ZV zv_center(ZV a, const Int& M) {
    Int half = M / 2;
    for (auto& c : a) {
        c = zmod(c, M);
        if (c > half) c -= M;
    }
    zv_trim(a);
    return a;
}

// Factor a monic squarefree integer polynomial (deg >= 1) into monic
// irreducible integer factors.
inline std::vector<ZV> factor_monic_squarefree(const ZV& g) {
    int n = zv_deg(g);
    if (n == 1) return {g};
    // Prime scan: smallest odd p with g squarefree mod p.
    long p = 0;
    for (long cand = 3;; cand += 2) {
        if (!is_prime_small(cand)) continue;
        FpV gp(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            gp[i] = static_cast<long>(mpz_fdiv_ui(g[i].get_mpz_t(), static_cast<unsigned long>(cand)));
        fp_trim(gp);
        if (fp_deg(gp) != n) continue;  // cannot happen for monic g; keep the guard
        FpV d = fp_gcd(gp, fp_deriv(gp, cand), cand);
        if (fp_deg(d) == 0) {
            p = cand;
            break;
        }
        if (cand > 10000) throw internal_error("factor: no good prime found");
    }
    FpV gp(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        gp[i] = static_cast<long>(mpz_fdiv_ui(g[i].get_mpz_t(), static_cast<unsigned long>(p)));
    std::vector<FpV> fps = berlekamp(fp_monic(gp, p), p);
    if (fps.size() == 1) return {g};
    // Mignotte-style bound for coefficients of monic factors.
    Int H = 0;
    for (auto& c : g) H = std::max(H, Int(abs(c)));
    Int bound = (int_sqrt(Int(n + 1)) + 1) * int_pow(Int(2), static_cast<unsigned long>(n)) * H;
    Int target = 2 * bound + 1;
    std::vector<ZV> lifted;
    // Find the lift modulus actually used (shared by the whole tree).
    Int M(p);
    while (M < target) M = M * M;
    hensel_tree(zv_mod(g, M), fps, 0, fps.size(), p, target, lifted);
    for (auto& f : lifted) f = zv_mod(f, M);
    // Subset recombination over Z.
    std::vector<ZV> result;
    std::vector<ZV> pool = lifted;
    ZV remaining = g;
    std::size_t card = 1;
    while (2 * card <= pool.size()) {
        // Enumerate index subsets of this cardinality in lexicographic order.
        std::vector<std::size_t> idx(card);
        for (std::size_t i = 0; i < card; ++i) idx[i] = i;
        bool found = false;
        for (;;) {
            ZV cand{Int(1)};
            for (std::size_t i : idx) cand = zv_mod(zv_mul(cand, pool[i]), M);
            cand = zv_center(cand, M);
            bool divides = false;
            if (!cand.empty() && cand.back() == 1) {
                // Cheap filter: constant terms must divide (a zero constant
                // term divides only a zero constant term).
                Int c0 = cand.empty() ? Int(0) : cand[0];
                Int r0 = remaining.empty() ? Int(0) : remaining[0];
                bool c0_divides = c0 == 0 ? r0 == 0 : r0 % c0 == 0;
                if (c0_divides) {
                    try {
                        ZV quo = zv_divexact_monic_z(remaining, cand);
                        result.push_back(cand);
                        remaining = quo;
                        divides = true;
                    } catch (const internal_error&) {
                        divides = false;
                    }
                }
            }
            if (divides) {
                std::vector<ZV> np;
                for (std::size_t i = 0; i < pool.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), i) == idx.end())
                        np.push_back(pool[i]);
                pool = std::move(np);
                found = true;
                break;
            }
            // next subset
            std::size_t k = card;
            while (k > 0 && idx[k - 1] == pool.size() - card + (k - 1)) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < card; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++card;
    }
    if (zv_deg(remaining) >= 1) result.push_back(remaining);
    return result;
}

}  // namespace detail

// ----- public interface ---------------------------------------------------

// Dense rational coefficient vector of a univariate polynomial.
inline std::vector<Rat> to_dense(const QPoly& f, const std::string& var) {
    auto cs = f.as_univariate(var);
    std::vector<Rat> out(cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
        if (!cs[i].is_constant()) throw input_error("factor: polynomial not univariate");
        out[i] = cs[i].constant_value();
    }
    return out;
}

inline QPoly from_dense(const std::string& var, const std::vector<Rat>& c) {
    QPoly out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        Monomial m;
        if (i > 0) m[var] = static_cast<unsigned>(i);
        out = out + QPoly::term(c[i], m);
    }
    return out;
}

// Irreducible factors with multiplicities; the product of factor^mult equals
// f up to a rational constant.  Factors are primitive integer with positive
// leading coefficient, ordered by degree, then by the coefficient sequence
// (c0, c1, ...) ascending.
inline std::vector<std::pair<QPoly, int>> factor_rational(const QPoly& f) {
    if (f.is_zero()) throw input_error("factor: zero polynomial");
    auto vars = f.variables();
    if (vars.size() > 1) throw input_error("factor: not univariate");
    if (vars.empty()) return {};
    std::string var = *vars.begin();

    // Yun: squarefree decomposition f ~ prod b_i^i.
    std::vector<std::pair<QPoly, int>> sqfree;
    {
        QPoly fp = f.derivative(var);
        QPoly a = gcd_poly(f, fp);
        QPoly b = divide_exact(f, a);
        QPoly c = divide_exact(fp, a) - b.derivative(var);
        int i = 1;
        while (b.degree(var) > 0) {
            QPoly g = gcd_poly(b, c);
            if (g.degree(var) > 0) sqfree.emplace_back(g, i);
            b = divide_exact(b, g);
            c = divide_exact(c, g) - b.derivative(var);
            ++i;
        }
    }

    std::vector<std::pair<QPoly, int>> out;
    for (auto& [g, mult] : sqfree) {
        // Monic transform: ghat(y) = l^(n-1) g(y/l) is monic over Z.
        std::vector<Rat> dc = to_dense(primitive_integer(g), var);
        int n = static_cast<int>(dc.size()) - 1;
        if (n == 1) {
            out.emplace_back(primitive_integer(g), mult);
            continue;
        }
        Int l = dc.back().get_num();  // primitive integer, lc > 0
        detail::ZV ghat(dc.size());
        for (int i = 0; i < n; ++i) {
            // coefficient of y^i: c_i * l^(n-1-i)
            Int ci = dc[static_cast<std::size_t>(i)].get_num();
            ghat[static_cast<std::size_t>(i)] = ci * int_pow(l, static_cast<unsigned long>(n - 1 - i));
        }
        ghat[static_cast<std::size_t>(n)] = 1;  // c_n * l^(-1) with c_n = l
        auto monic_factors = detail::factor_monic_squarefree(ghat);
        for (auto& h : monic_factors) {
            // Undo y = l*x: h(l*x), then primitive part.
            std::vector<Rat> hc(h.size());
            for (std::size_t i = 0; i < h.size(); ++i)
                hc[i] = Rat(h[i] * int_pow(l, static_cast<unsigned long>(i)));
            out.emplace_back(primitive_integer(from_dense(var, hc)), mult);
        }
    }
    std::sort(out.begin(), out.end(), [&](const auto& A, const auto& B) {
        int da = A.first.degree(var), db = B.first.degree(var);
        if (da != db) return da < db;
        auto ca = to_dense(A.first, var), cb = to_dense(B.first, var);
        for (std::size_t i = 0; i < ca.size(); ++i) {
            int c = cmp(ca[i], cb[i]);
            if (c != 0) return c < 0;
        }
        return false;
    });
    return out;
}

inline bool is_irreducible_over_Q(const QPoly& f) {
    auto vars = f.variables();
    if (vars.size() != 1) throw input_error("irreducibility: not univariate");
    std::string var = *vars.begin();
    if (f.degree(var) < 1) return false;
    auto fs = factor_rational(f);
    return fs.size() == 1 && fs[0].second == 1 &&
           fs[0].first.degree(var) == f.degree(var);
}

// Rational roots of a univariate polynomial, ascending.
inline std::vector<Rat> rational_roots(const QPoly& f) {
    auto vars = f.variables();
    std::vector<Rat> roots;
    if (vars.empty()) return roots;
    std::string var = *vars.begin();
    for (auto& [g, mult] : factor_rational(f)) {
        if (g.degree(var) != 1) continue;
        auto c = to_dense(g, var);
        roots.push_back(-c[0] / c[1]);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace sncres
