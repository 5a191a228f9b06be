#pragma once

// Branch simplification on ruled surfaces: the canonical fiberwise map p_B
// collapsing a horizontal divisor to the zero section, its branch divisor,
// and the iteration that reduces arbitrary branch data to a union of
// pairwise-distinct sections plus the infinity section.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sncres/algebra.hpp"
#include "sncres/factor.hpp"
#include "sncres/ruled.hpp"
#include "sncres/support.hpp"

namespace sncres {

// eta -> phi_0 eta^d + phi_1 eta^(d-1) + ... + phi_d, fiberwise from twist e
// to twist e*d, normalized so phi_0 = 1.
struct FiberwiseMap {
    int source_twist = 0;
    std::vector<BinForm> phis;  // (phi_0, ..., phi_d), phi_0 = constant 1

    int degree() const { return static_cast<int>(phis.size()) - 1; }
    int target_twist() const { return source_twist * degree(); }
};

inline FiberwiseMap make_fiberwise_map(int source_twist, std::vector<BinForm> phis) {
    if (source_twist < 0) throw input_error("fiberwise map: twist must be >= 0");
    if (phis.size() < 2) throw input_error("fiberwise map: degree must be >= 1");
    if (phis[0] != BinForm::constant(0, 1))
        throw input_error("fiberwise map: phi_0 must be the constant 1");
    for (std::size_t i = 0; i < phis.size(); ++i)
        if (phis[i].deg != static_cast<int>(i) * source_twist)
            throw input_error("fiberwise map: phi_" + std::to_string(i) +
                              " has the wrong homogeneous degree");
    return FiberwiseMap{source_twist, std::move(phis)};
}

// --- build_pB ---------------------------------------------------------------

// The canonical map collapsing B to the zero section of the target:
// coefficients are B's tuple rescaled so phi_0 = 1.
inline FiberwiseMap build_pB(const HorizontalDivisor& B) {
    Rat lead = B.phis[0].coeff(0);
    if (lead == 0) throw input_error("divisor: phi_0 must be a nonzero constant");
    Rat inv = Rat(1) / lead;
    std::vector<BinForm> phis;
    phis.reserve(B.phis.size());
    for (const auto& f : B.phis) phis.push_back(inv * f);
    return make_fiberwise_map(B.twist_e, std::move(phis));
}

// Defining form of the divisor collapsed to the zero section by m; equals
// B's defining form up to the phi_0 normalization.
inline HorizontalDivisor divisor_of_map(const FiberwiseMap& m) {
    return make_horizontal_divisor(m.source_twist, m.phis);
}

// --- critical_divisor --------------------------------------------------------

// Divisor of the fiberwise derivative d*phi_0 eta^(d-1) + ... + phi_(d-1).
inline HorizontalDivisor critical_divisor(const FiberwiseMap& m) {
    int d = m.degree();
    if (d < 2) throw input_error("no critical locus");
    std::vector<BinForm> psis;
    psis.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j <= d - 1; ++j)
        psis.push_back(Rat(d - j) * m.phis[static_cast<std::size_t>(j)]);
    return make_horizontal_divisor(m.source_twist, std::move(psis));
}

// --- push_section ------------------------------------------------------------

inline Section push_section(const FiberwiseMap& m, const Section& s) {
    if (s.infinite) return Section::at_infinity();  // Cor-type bookkeeping: d-fold preimage
    if (s.form.deg != m.source_twist)
        throw input_error("section: form degree must equal the surface twist");
    int d = m.degree();
    BinForm acc(m.target_twist(), {});
    for (int i = 0; i <= d; ++i)
        acc = acc + m.phis[static_cast<std::size_t>(i)] * s.form.pow(static_cast<unsigned>(d - i));
    return Section::finite(std::move(acc));
}

// --- branch_image ------------------------------------------------------------

// Image of the critical divisor: eliminate eta from (m(eta) - w, m'(eta)).
// The result is a degree-(d-1) horizontal divisor in the target surface.
inline HorizontalDivisor branch_image(const FiberwiseMap& m) {
    int d = m.degree();
    if (d < 2) throw input_error("no critical locus");
    QPoly meta;  // m(eta) in the affine chart, eta and t as variables
    QPoly deta;  // m'(eta)
    for (int i = 0; i <= d; ++i) {
        QPoly phi = m.phis[static_cast<std::size_t>(i)].affine_poly("t");
        if (d - i > 0) {
            Monomial mo{{"eta", static_cast<unsigned>(d - i)}};
            meta = meta + phi * QPoly::term(Rat(1), mo);
        } else {
            meta = meta + phi;
        }
        if (i <= d - 1) {
            QPoly dphi = Rat(d - i) * phi;
            if (d - i - 1 > 0) {
                Monomial mo{{"eta", static_cast<unsigned>(d - i - 1)}};
                deta = deta + dphi * QPoly::term(Rat(1), mo);
            } else {
                deta = deta + dphi;
            }
        }
    }
    QPoly A = meta - QPoly::term(Rat(1), Monomial{{"w", 1}});
    QPoly R = resultant(A, deta, "eta");
    if (R.is_zero()) throw input_error("map is fiberwise non-separable");

    // R is (+-) d^d * prod (w - branch values): degree d-1 in w with a
    // constant leading coefficient.
    auto by_w = R.as_univariate("w");
    if (static_cast<int>(by_w.size()) - 1 != d - 1)
        throw internal_error("branch image: unexpected degree in the target coordinate");
    const QPoly& lead = by_w.back();
    if (!lead.is_constant()) throw internal_error("branch image: non-constant leading term");

    int e_t = m.target_twist();
    std::vector<BinForm> phis;
    phis.reserve(static_cast<std::size_t>(d));
    for (int j = 0; j <= d - 1; ++j) {
        // phi'_j multiplies w^(d-1-j)
        const QPoly& cf = by_w[static_cast<std::size_t>(d - 1 - j)];
        phis.push_back(BinForm::from_affine(cf, j * e_t, "t"));
    }
    return make_horizontal_divisor(e_t, std::move(phis));
}

// --- splitting test ----------------------------------------------------------

// Attempt to write the divisor as a union of sections over Q: the fiber form
// sum phi_i x^(d-i) y^i must factor as phi_0 * prod (x - s_j y) with every
// s_j a polynomial section.  Returns the distinct sections on success.
inline std::optional<std::vector<Section>> split_into_sections(const HorizontalDivisor& B) {
    int d = B.fiber_degree();
    int e = B.twist_e;
    // Normalize: monic fiber polynomial over Q[t].
    FiberwiseMap m = build_pB(B);

    if (d == 1) {
        BinForm s = Rat(-1) * m.phis[1];
        return std::vector<Section>{Section::finite(std::move(s))};
    }

    // Squarefree part (monic in x) of f = x^d + phi_1 x^(d-1) + ... + phi_d.
    QPoly f;
    for (int i = 0; i <= d; ++i) {
        QPoly phi = m.phis[static_cast<std::size_t>(i)].affine_poly("t");
        if (d - i > 0)
            f = f + phi * QPoly::term(Rat(1), Monomial{{"x", static_cast<unsigned>(d - i)}});
        else
            f = f + phi;
    }
    QPoly g = gcd_poly(f, f.derivative("x"));
    QPoly h = g.is_constant() ? f : divide_exact(f, g);
    auto hc = h.as_univariate("x");
    if (!hc.back().is_constant()) throw internal_error("split: non-constant leading term");
    {
        Rat lcv = hc.back().constant_value();
        if (lcv != 1) {
            Rat inv = Rat(1) / lcv;
            for (auto& c : hc) c = inv * c;
        }
    }
    int dh = static_cast<int>(hc.size()) - 1;

    // Sample screen + Newton lift at a center where the specialization stays
    // squarefree of full degree.
    for (long t0 = 0;; ++t0) {
        if (t0 > 64) throw internal_error("split: no squarefree specialization found");
        std::vector<Rat> spec(hc.size());
        for (std::size_t i = 0; i < hc.size(); ++i)
            spec[i] = hc[i].evaluate({{"t", Rat(t0)}});
        // squarefree check of the specialized polynomial
        QPoly sp = from_dense("x", spec);
        if (sp.degree("x") != dh) continue;  // cannot happen (monic); keep the guard
        QPoly sg = gcd_poly(sp, sp.derivative("x"));
        if (!sg.is_constant()) continue;

        auto roots = rational_roots(sp);
        if (static_cast<int>(roots.size()) != dh) return std::nullopt;  // not split over Q

        // Newton-lift each simple root to a power series in u = t - t0 of
        // length e+1, then verify the truncation exactly.
        std::vector<Section> out;
        for (const Rat& r0 : roots) {
            // series arithmetic mod u^(e+1) on dense coefficient vectors
            int prec = e + 1;
            auto mul = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
                std::vector<Rat> c(static_cast<std::size_t>(prec), Rat(0));
                for (int i = 0; i < prec; ++i)
                    for (int j = 0; i + j < prec; ++j)
                        if (static_cast<std::size_t>(i) < a.size() &&
                            static_cast<std::size_t>(j) < b.size())
                            c[static_cast<std::size_t>(i + j)] += a[static_cast<std::size_t>(i)] *
                                                                  b[static_cast<std::size_t>(j)];
                return c;
            };
            // coefficients of h recentered: h(x, t0 + u), each hc[i] expanded in u
            std::vector<std::vector<Rat>> hcu(hc.size());
            for (std::size_t i = 0; i < hc.size(); ++i) {
                std::vector<Rat> work = to_dense(hc[i], "t");
                std::vector<Rat> outc;
                while (!work.empty()) outc.push_back(detail::taylor_step(work, Rat(t0)));
                outc.resize(static_cast<std::size_t>(prec), Rat(0));
                hcu[i] = std::move(outc);
            }
            auto add_into = [&](std::vector<Rat>& a, const std::vector<Rat>& b, const Rat& scale) {
                for (int k = 0; k < prec; ++k)
                    a[static_cast<std::size_t>(k)] += scale * b[static_cast<std::size_t>(k)];
            };
            auto eval_h = [&](const std::vector<Rat>& x) {
                std::vector<Rat> acc = hcu.back();
                for (std::size_t i = hcu.size() - 1; i-- > 0;) {
                    acc = mul(acc, x);
                    add_into(acc, hcu[i], Rat(1));
                }
                return acc;
            };
            auto eval_dh = [&](const std::vector<Rat>& x) {
                // derivative in x: Horner on i * hcu[i]
                std::vector<Rat> acc = hcu.back();
                for (auto& q : acc) q *= Rat(static_cast<long>(hcu.size() - 1));
                for (std::size_t i = hcu.size() - 1; i-- > 1;) {
                    acc = mul(acc, x);
                    add_into(acc, hcu[i], Rat(static_cast<long>(i)));
                }
                return acc;
            };
            auto inv_series = [&](const std::vector<Rat>& a) {
                if (a.empty() || a[0] == 0) throw internal_error("split: series not invertible");
                std::vector<Rat> r(static_cast<std::size_t>(prec), Rat(0));
                r[0] = Rat(1) / a[0];
                for (int k = 1; k < prec; ++k) {
                    Rat s(0);
                    for (int j = 1; j <= k; ++j)
                        if (static_cast<std::size_t>(j) < a.size())
                            s += a[static_cast<std::size_t>(j)] *
                                 r[static_cast<std::size_t>(k - j)];
                    r[static_cast<std::size_t>(k)] = -s * r[0];
                }
                return r;
            };
            std::vector<Rat> x(static_cast<std::size_t>(prec), Rat(0));
            x[0] = r0;
            // Newton: precision doubles each round; e+1 coefficients needed.
            for (int have = 1; have < prec; have *= 2) {
                auto fx = eval_h(x);
                auto dfx = eval_dh(x);
                auto corr = mul(fx, inv_series(dfx));
                for (int k = 0; k < prec; ++k)
                    x[static_cast<std::size_t>(k)] -= corr[static_cast<std::size_t>(k)];
            }
            // Re-center to t: candidate section form c(t) with c(t0 + u) = x(u).
            // Since deg <= e the recentred polynomial is exact.
            QPoly um = QPoly::term(Rat(1), Monomial{{"t", 1}}) - QPoly::term(Rat(t0), Monomial{});
            QPoly cand;
            for (int k = prec - 1; k >= 0; --k)
                cand = cand * um + QPoly::term(x[static_cast<std::size_t>(k)], Monomial{});
            // Exact verification: h(cand(t), t) == 0.
            QPoly check;
            for (std::size_t i = hc.size(); i-- > 0;) check = check * cand + hc[i];
            if (!check.is_zero()) return std::nullopt;
            out.push_back(Section::finite(BinForm::from_affine(cand, e, "t")));
        }
        // distinct by construction (roots of the squarefree part)
        return out;
    }
}

// --- belyi_reduce ------------------------------------------------------------

struct BelyiStep {
    FiberwiseMap map;   // includes the generic translation in its last coefficient
    Section translation;
    std::vector<Section> marked_after;
    HorizontalDivisor residual_after;
};

struct BelyiTrace {
    RuledSurface initial_surface;
    RuledSurface final_surface;
    std::vector<BelyiStep> steps;
    std::vector<Section> final_sections;  // pairwise distinct; last entry is infinity
};

struct BelyiOptions {
    int degree_cap = 512;  // cap on the target twist
    int retry_cap = 32;    // redraws of the generic translation per step
};

namespace detail {

inline Section draw_sparse_section(Rng& rng, int twist) {
    // c0 + c1 t + c2 t^twist with small integer coefficients
    std::vector<Rat> c(static_cast<std::size_t>(twist) + 1, Rat(0));
    c[0] = Rat(static_cast<long>(rng.next_int(-4, 4)));
    if (twist >= 1) c[1] = Rat(static_cast<long>(rng.next_int(-4, 4)));
    if (twist >= 2) c[static_cast<std::size_t>(twist)] =
        Rat(static_cast<long>(rng.next_int(-4, 4)));
    return Section::finite(BinForm(twist, std::move(c)));
}

inline bool pairwise_distinct(const std::vector<Section>& ss) {
    for (std::size_t i = 0; i < ss.size(); ++i)
        for (std::size_t j = i + 1; j < ss.size(); ++j)
            if (ss[i] == ss[j]) return false;
    return true;
}

inline void dedupe_sections(std::vector<Section>& ss) {
    std::vector<Section> out;
    for (auto& s : ss) {
        bool seen = false;
        for (auto& t : out)
            if (s == t) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(std::move(s));
    }
    ss = std::move(out);
}

}  // namespace detail

inline BelyiTrace belyi_reduce(const HorizontalDivisor& B, const std::vector<Section>& marked,
                               std::uint64_t rng_seed, const BelyiOptions& opt = {}) {
    int N = B.fiber_degree();
    std::vector<Section> tracked;
    for (const auto& s : marked) {
        if (s.infinite) throw input_error("belyi: marked sections must be finite");
        if (s.form.deg != B.twist_e)
            throw input_error("section: form degree must equal the surface twist");
        tracked.push_back(s);
    }
    detail::dedupe_sections(tracked);

    BelyiTrace trace;
    trace.initial_surface = RuledSurface{B.twist_e};
    Rng rng(rng_seed);

    HorizontalDivisor residual = B;
    int twist = B.twist_e;
    std::vector<Section> split;

    for (;;) {
        auto sections = split_into_sections(residual);
        if (sections) {
            split = std::move(*sections);
            break;
        }
        int d = residual.fiber_degree();
        if (static_cast<int>(trace.steps.size()) >= N - 1)
            throw internal_error("belyi: step bound exceeded");
        long long target = static_cast<long long>(twist) * d;
        if (target > opt.degree_cap) throw cap_error("degree guard exceeded");

        FiberwiseMap base = build_pB(residual);
        bool accepted = false;
        for (int attempt = 0; attempt < opt.retry_cap && !accepted; ++attempt) {
            Section sigma = detail::draw_sparse_section(rng, static_cast<int>(target));
            FiberwiseMap m = base;
            m.phis.back() = m.phis.back() + sigma.form;
            std::vector<Section> new_tracked;
            for (const auto& s : tracked) new_tracked.push_back(push_section(m, s));
            new_tracked.push_back(sigma);
            if (!detail::pairwise_distinct(new_tracked)) continue;
            HorizontalDivisor next = branch_image(m);
            if (next.fiber_degree() != d - 1)
                throw internal_error("belyi: branch image degree mismatch");
            tracked = std::move(new_tracked);
            residual = next;
            twist = static_cast<int>(target);
            trace.steps.push_back(BelyiStep{std::move(m), sigma, tracked, residual});
            accepted = true;
        }
        if (!accepted) throw cap_error("genericity failure");
    }

    trace.final_surface = RuledSurface{twist};
    std::vector<Section> fin = tracked;
    fin.insert(fin.end(), split.begin(), split.end());
    detail::dedupe_sections(fin);
    if (!detail::pairwise_distinct(fin))
        throw internal_error("belyi: final sections not distinct");
    fin.push_back(Section::at_infinity());
    trace.final_sections = std::move(fin);
    return trace;
}

// Distinctness certificate: every pairwise difference of finite sections is a
// nonzero form, and at most one infinity marker is present.
inline bool certify_distinct_sections(const std::vector<Section>& ss) {
    int inf = 0;
    for (const auto& s : ss)
        if (s.infinite) ++inf;
    if (inf > 1) return false;
    for (std::size_t i = 0; i < ss.size(); ++i)
        for (std::size_t j = i + 1; j < ss.size(); ++j) {
            if (ss[i].infinite || ss[j].infinite) continue;
            if ((ss[i].form - ss[j].form).is_zero()) return false;
        }
    return true;
}

}  // namespace sncres
