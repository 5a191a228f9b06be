#pragma once

// Local toric resolution of the cyclic covers produced by the pipeline.
//
// At every crossing where the branch divisor has a normal-crossing local
// model z^m = u^a v^b, the normalized cover has (at worst) a cyclic quotient
// singularity.  Its type 1/m'(1, q) is computed exactly by enumerating the
// invariant monomial lattice, and the singularity is resolved by the
// Hirzebruch-Jung continued-fraction subdivision of the corresponding plane
// cone.  Everything is small integer arithmetic; all claims are re-verified
// internally (unimodularity, continued-fraction identity, endpoint match).

#include <algorithm>
#include <array>
#include <numeric>
#include <string>
#include <vector>

#include "stabilize.hpp"

namespace sncres {

// --- domain types -------------------------------------------------------------

// Local model z^m = u^a v^b at a named crossing of branch components (b = 0
// for a smooth point of the branch divisor, a = b = 0 when unbranched).
struct BranchingDatum {
    std::string crossing;  // deterministic serialization key of the location
    long long m = 1;
    long long a = 0, b = 0;
};

// Cyclic quotient type 1/m(1, q); (1, 0) denotes a smooth point.
struct CyclicQuotientType {
    long long m = 1;
    long long q = 0;

    friend bool operator==(const CyclicQuotientType& x, const CyclicQuotientType& y) {
        return x.m == y.m && x.q == y.q;
    }
};

// Plane fan: ordered primitive rays; the cones are consecutive pairs.
struct Fan2D {
    std::vector<std::array<long long, 2>> rays;

    std::string to_string() const {
        std::string out;
        for (std::size_t i = 0; i < rays.size(); ++i)
            out += (i ? " " : "") + std::string("(") + std::to_string(rays[i][0]) + "," +
                   std::to_string(rays[i][1]) + ")";
        return out;
    }
};

namespace detail {

inline long long ll_gcd(long long a, long long b) { return std::gcd(a, b); }

// Extended gcd: returns g = gcd(a,b) and sets s, t with s*a + t*b = g.
inline long long ll_xgcd(long long a, long long b, long long& s, long long& t) {
    long long r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
        long long qt = r0 / r1;
        r0 -= qt * r1;
        std::swap(r0, r1);
        s0 -= qt * s1;
        std::swap(s0, s1);
        t0 -= qt * t1;
        std::swap(t0, t1);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    s = s0;
    t = t0;
    return r0;
}

// Hermite-style basis of the sublattice of Z^2 generated by the given
// vectors: rows (d, e), (0, f) with d, f > 0 and 0 <= e < f.
inline std::array<std::array<long long, 2>, 2> lattice_basis(
    std::vector<std::array<long long, 2>> gens) {
    long long d = 0, e = 0, f = 0;
    for (const auto& g : gens) {
        long long x = g[0], y = g[1];
        if (x != 0) {
            if (d == 0) {
                d = x;
                e = y;
            } else {
                long long s, t;
                long long nd = ll_xgcd(d, x, s, t);
                long long ne = s * e + t * y;
                // the eliminated combination stays in the lattice
                long long ry = (d / nd) * y - (x / nd) * e;
                d = nd;
                e = ne;
                f = f == 0 ? std::abs(ry) : ll_gcd(f, std::abs(ry));
            }
        } else if (y != 0) {
            f = f == 0 ? std::abs(y) : ll_gcd(f, std::abs(y));
        }
    }
    if (d == 0 || f == 0) throw internal_error("lattice basis: degenerate sublattice");
    if (d < 0) {
        d = -d;
        e = -e;
    }
    e %= f;
    if (e < 0) e += f;
    return {{{d, e}, {0, f}}};
}

}  // namespace detail

// --- local branch data ---------------------------------------------------------

// Newton-polygon inspection of a local equation in the variables z, u, v.
// Accepts exactly the quasi-monomial shape c1*z^k + c2*u^a*v^b and returns
// the datum of one irreducible cyclic piece: the cover z^k = unit * u^a v^b
// splits into g = gcd(k, a, b) pieces z^(k/g) = unit * u^(a/g) v^(b/g).
inline BranchingDatum local_branch_data(const QPoly& local_eq, const std::string& crossing) {
    const auto unsupported = [] {
        return input_error("local model unsupported: supply branching data manually");
    };
    if (local_eq.is_zero()) throw unsupported();
    for (const auto& var : local_eq.variables())
        if (var != "z" && var != "u" && var != "v") throw unsupported();

    long long k = -1, a = -1, b = -1;
    int n_terms = 0;
    for (const auto& [mono, coef] : local_eq.terms()) {
        ++n_terms;
        (void)coef;
        unsigned ez = 0, eu = 0, ev = 0;
        for (const auto& [var, exp] : mono) {
            if (var == "z") ez = exp;
            if (var == "u") eu = exp;
            if (var == "v") ev = exp;
        }
        if (ez > 0) {
            // the cover term: a pure power of z
            if (eu > 0 || ev > 0 || k >= 0) throw unsupported();
            k = static_cast<long long>(ez);
        } else {
            if (a >= 0) throw unsupported();
            a = static_cast<long long>(eu);
            b = static_cast<long long>(ev);
        }
    }
    if (n_terms != 2 || k < 1 || a < 0) throw unsupported();

    long long g = detail::ll_gcd(k, detail::ll_gcd(a, b));
    if (g == 0) throw unsupported();
    return BranchingDatum{crossing, k / g, a / g, b / g};
}

// --- cyclic cover normalization --------------------------------------------------

// Type of the normalization of z^m = u^a v^b, by the invariant monomial
// lattice: the dual lattice is N' = {(x,y) : a x + b y = 0 (mod m)}, the
// singularity is the first-quadrant cone with respect to N', and the type is
// read off after mapping the primitive u-axis ray to (1, 0) by a determinant
// +1 change of basis (so that the (a,b) ordering fixes the orientation).
inline CyclicQuotientType local_cover_type(const BranchingDatum& d) {
    if (d.m < 1 || d.a < 0 || d.b < 0) throw input_error("branching datum: invalid exponents");
    if (d.m == 1) return CyclicQuotientType{1, 0};

    const long long m = d.m, a = d.a % m, b = d.b % m;

    // generators of N': a full residue box plus the scaled axes
    std::vector<std::array<long long, 2>> gens = {{m, 0}, {0, m}};
    for (long long x = 0; x < m; ++x)
        for (long long y = 0; y < m; ++y)
            if ((a * x + b * y) % m == 0 && (x | y) != 0) gens.push_back({x, y});
    auto basis = detail::lattice_basis(gens);
    const long long d11 = basis[0][0], d12 = basis[0][1], d22 = basis[1][1];

    // primitive generators of the quadrant edges inside N'
    const long long alpha = m / detail::ll_gcd(a == 0 ? m : a, m);
    const long long beta = m / detail::ll_gcd(b == 0 ? m : b, m);
    // coordinates of (alpha, 0) and (0, beta) in the basis rows
    const auto coords = [&](long long x, long long y) -> std::array<long long, 2> {
        if (x % d11 != 0) throw internal_error("cover type: vector outside lattice");
        long long c1 = x / d11;
        long long rest = y - c1 * d12;
        if (rest % d22 != 0) throw internal_error("cover type: vector outside lattice");
        return {c1, rest / d22};
    };
    const auto w1 = coords(alpha, 0);
    const auto w2 = coords(0, beta);
    if (detail::ll_gcd(std::abs(w1[0]), std::abs(w1[1])) != 1 ||
        detail::ll_gcd(std::abs(w2[0]), std::abs(w2[1])) != 1)
        throw internal_error("cover type: edge generator not primitive");

    // map w1 -> (1,0) by a determinant +1 unimodular matrix
    long long s, t;
    detail::ll_xgcd(w1[0], w1[1], s, t);
    const long long p = s * w2[0] + t * w2[1];
    const long long mp = -w1[1] * w2[0] + w1[0] * w2[1];
    if (mp <= 0) throw internal_error("cover type: cone not positively oriented");
    if (mp == 1) return CyclicQuotientType{1, 0};
    long long q = ((mp - p) % mp + mp) % mp;
    if (detail::ll_gcd(mp, q) != 1) throw internal_error("cover type: type not coprime");
    return CyclicQuotientType{mp, q};
}

// --- Hirzebruch-Jung resolution ---------------------------------------------------

struct HjResolution {
    std::vector<long long> chain;  // entries b_i >= 2; m/q = b1 - 1/(b2 - ...)
    Fan2D fan;                     // rays (1,0), inserted rays..., (m-q, m)
};

// Continued-fraction expansion m/q = b1 - 1/(b2 - 1/(...)) together with the
// unimodular subdivision of the cone <(1,0), (m-q, m)>.  Every adjacent ray
// pair has determinant one, the inserted ray count equals the chain length,
// and re-evaluating the continued fraction reproduces m/q exactly; all three
// facts are checked before returning.
inline HjResolution hj_resolve(const CyclicQuotientType& t) {
    if (t.m < 2 || t.q < 1 || t.q >= t.m || detail::ll_gcd(t.m, t.q) != 1)
        throw input_error("hj resolve: type must be singular with coprime invariants");

    HjResolution out;
    long long m = t.m, q = t.q;
    while (q > 0) {
        long long bi = (m + q - 1) / q;  // ceil(m/q)
        out.chain.push_back(bi);
        long long r = bi * q - m;
        m = q;
        q = r;
    }

    // fan rays by the three-term recursion u_{i+1} = b_{i+1} u_i - u_{i-1},
    // seeded with the boundary ray (1,0) and the first hull point (1,1)
    std::vector<std::array<long long, 2>> rays = {{1, 0}, {1, 1}};
    for (std::size_t i = 0; i + 1 < out.chain.size(); ++i) {
        const auto& u = rays[rays.size() - 1];
        const auto& w = rays[rays.size() - 2];
        rays.push_back({out.chain[i] * u[0] - w[0], out.chain[i] * u[1] - w[1]});
    }
    out.fan.rays = std::move(rays);
    out.fan.rays.push_back({t.m - t.q, t.m});

    // internal verification
    const auto& R = out.fan.rays;
    if (R.back()[0] != t.m - t.q || R.back()[1] != t.m)
        throw internal_error("hj resolve: endpoint mismatch");
    for (std::size_t i = 0; i + 1 < R.size(); ++i) {
        long long det = R[i][0] * R[i + 1][1] - R[i][1] * R[i + 1][0];
        if (det != 1) throw internal_error("hj resolve: non-unimodular cone");
    }
    for (std::size_t i = 1; i + 1 < R.size(); ++i) {
        // u_{i-1} + u_{i+1} = b_i u_i
        if (R[i - 1][0] + R[i + 1][0] != out.chain[i - 1] * R[i][0] ||
            R[i - 1][1] + R[i + 1][1] != out.chain[i - 1] * R[i][1])
            throw internal_error("hj resolve: chain/fan mismatch");
    }
    // re-evaluate the continued fraction bottom-up as an exact fraction
    long long num = out.chain.back(), den = 1;
    for (std::size_t i = out.chain.size() - 1; i-- > 0;) {
        long long nn = out.chain[i] * num - den;
        den = num;
        num = nn;
    }
    if (num != t.m || den != t.q) throw internal_error("hj resolve: continued fraction mismatch");
    for (long long bi : out.chain)
        if (bi < 2) throw internal_error("hj resolve: chain entry below two");
    return out;
}

// --- branching data from a stabilized family ---------------------------------------

// Derive the branching data of the degree-`cover_order` cyclic cover at
// every crossing of branch components recorded in the family's locus.  The
// flags mark which sections belong to the branch divisor; collisions whose
// cluster contains at most one branch component carry no cover singularity
// and produce no datum.  Two branch components meeting transversally
// (contact one, no third branch component through the same point) give the
// normal-crossing model z^k = u v.  Any deeper tangency or triple point of
// branch components is not a monomial model: it must be supplied through
// `overrides` (matched by crossing key) or the computation refuses.
inline std::vector<BranchingDatum> branching_data_from_family(
    const StableFamily& fam, int cover_order, const std::vector<bool>& is_branch,
    const std::vector<BranchingDatum>& overrides = {}) {
    if (cover_order < 1) throw input_error("branching data: cover order must be >= 1");
    if (is_branch.size() != fam.sections.size())
        throw input_error("branching data: branch flags do not match sections");
    std::vector<BranchingDatum> out;
    std::vector<bool> override_used(overrides.size(), false);

    for (std::size_t zi = 0; zi < fam.locus.points.size(); ++zi) {
        const auto& zp = fam.locus.points[zi];
        // cluster the sections colliding at this base point (union-find on
        // the recorded pairs: two sections in one cluster share the point)
        std::vector<std::size_t> involved;
        for (const auto& pr : zp.pairs) {
            for (std::size_t s : {pr.i, pr.j})
                if (std::find(involved.begin(), involved.end(), s) == involved.end())
                    involved.push_back(s);
        }
        std::sort(involved.begin(), involved.end());
        std::vector<std::size_t> root(fam.sections.size());
        for (std::size_t s : involved) root[s] = s;
        const auto find = [&](std::size_t s) {
            while (root[s] != s) s = root[s];
            return s;
        };
        for (const auto& pr : zp.pairs) root[find(pr.i)] = find(pr.j);

        std::vector<std::vector<std::size_t>> clusters;
        for (std::size_t s : involved) {
            std::size_t r = find(s);
            bool placed = false;
            for (auto& cl : clusters)
                if (find(cl.front()) == r) {
                    cl.push_back(s);
                    placed = true;
                }
            if (!placed) clusters.push_back({s});
        }

        for (const auto& cl : clusters) {
            std::string key = zp.at.to_string() + "#";
            for (std::size_t k = 0; k < cl.size(); ++k)
                key += (k ? "+" : "") + fam.section_names[cl[k]];

            bool overridden = false;
            for (std::size_t o = 0; o < overrides.size(); ++o)
                if (overrides[o].crossing == key) {
                    out.push_back(overrides[o]);
                    override_used[o] = true;
                    overridden = true;
                }
            if (overridden) continue;

            std::vector<std::size_t> branch_members;
            for (std::size_t s : cl)
                if (is_branch[s]) branch_members.push_back(s);
            if (branch_members.size() < 2) continue;  // cover unramified in codim 2 here

            int contact = 0;
            for (const auto& pr : zp.pairs)
                if (std::find(branch_members.begin(), branch_members.end(), pr.i) !=
                        branch_members.end() &&
                    std::find(branch_members.begin(), branch_members.end(), pr.j) !=
                        branch_members.end())
                    contact = std::max(contact, pr.contact);
            if (branch_members.size() == 2 && contact == 1) {
                // transverse crossing of two branch components
                out.push_back(local_branch_data(
                    parse_poly("z^" + std::to_string(cover_order) + " - u*v"), key));
            } else {
                throw input_error("local model unsupported: supply branching data manually");
            }
        }
    }
    // overrides for crossings invisible to the locus pass through verbatim
    for (std::size_t o = 0; o < overrides.size(); ++o)
        if (!override_used[o]) out.push_back(overrides[o]);
    std::sort(out.begin(), out.end(),
              [](const BranchingDatum& x, const BranchingDatum& y) { return x.crossing < y.crossing; });
    return out;
}

// Convenience form: every section is part of the branch divisor.
inline std::vector<BranchingDatum> branching_data_from_family(
    const StableFamily& fam, int cover_order, const std::vector<BranchingDatum>& overrides = {}) {
    return branching_data_from_family(fam, cover_order,
                                      std::vector<bool>(fam.sections.size(), true), overrides);
}

// --- assembled resolution ------------------------------------------------------------

struct QuotientChart {
    BranchingDatum datum;
    CyclicQuotientType type;
    std::vector<long long> chain;  // empty when the normalized cover is smooth
    Fan2D fan;
};

struct ResolutionManifest {
    StableFamily family;
    std::vector<QuotientChart> charts;        // singular crossings only, by key
    std::vector<std::string> components;      // the final divisor's components
    std::vector<std::string> steps;           // every modification, in order
    SncCertificate certificate;
};

// Resolve every local model and assemble the final manifest: all
// modification steps, every exceptional chain with self-intersection data,
// the component list of the final divisor, and the crossing certificate
// (the stable family's own checks extended by the chain adjacencies).
inline ResolutionManifest assemble_resolution(const StableFamily& fam,
                                              std::vector<BranchingDatum> data) {
    ResolutionManifest man;
    man.family = fam;
    std::sort(data.begin(), data.end(),
              [](const BranchingDatum& x, const BranchingDatum& y) { return x.crossing < y.crossing; });

    for (const auto& d : data) {
        CyclicQuotientType t = local_cover_type(d);
        std::string head = "crossing " + d.crossing + ": z^" + std::to_string(d.m) + " = u^" +
                           std::to_string(d.a) + " v^" + std::to_string(d.b);
        if (t.m == 1) {
            man.steps.push_back(head + " -> smooth after normalization");
            continue;
        }
        HjResolution hj = hj_resolve(t);
        std::string chain_str;
        for (std::size_t i = 0; i < hj.chain.size(); ++i)
            chain_str += (i ? "," : "") + std::to_string(hj.chain[i]);
        man.steps.push_back(head + " -> type (" + std::to_string(t.m) + "," + std::to_string(t.q) +
                            "), chain [" + chain_str + "]");
        man.charts.push_back(QuotientChart{d, t, hj.chain, hj.fan});
    }

    // final divisor components
    for (const auto& nm : fam.section_names) man.components.push_back("section " + nm);
    for (std::size_t f = 0; f < fam.special_fibers.size(); ++f)
        for (std::size_t v = 0; v < fam.special_fibers[f].vertices.size(); ++v)
            man.components.push_back("fiber " + fam.locus.points[f].at.to_string() + " component v" +
                                     std::to_string(v));
    for (const auto& ch : man.charts)
        for (std::size_t i = 0; i < ch.chain.size(); ++i)
            man.components.push_back("chain " + ch.datum.crossing + " E" + std::to_string(i + 1) +
                                     " (self-intersection -" + std::to_string(ch.chain[i]) + ")");

    // certificate: the family's own checks plus the chain adjacencies
    man.certificate = snc_certificate(fam);
    for (const auto& ch : man.charts) {
        for (std::size_t i = 0; i + 1 < ch.fan.rays.size(); ++i) {
            long long det = ch.fan.rays[i][0] * ch.fan.rays[i + 1][1] -
                            ch.fan.rays[i][1] * ch.fan.rays[i + 1][0];
            if (det != 1)
                man.certificate.violations.push_back(
                    SncViolation{"non-unimodular cone", "chain " + ch.datum.crossing + " cone " +
                                                            std::to_string(i)});
        }
        man.certificate.notes.push_back(
            "chain " + ch.datum.crossing + ": " + std::to_string(ch.chain.size()) +
            " exceptional component(s), consecutive pairs meet transversally once, ends attach to "
            "the two branch components at the former crossing");
    }
    man.certificate.pass = man.certificate.violations.empty();
    return man;
}

}  // namespace sncres
