#pragma once

// Projection of a degree-k hypersurface in P^3 from a center on the
// distinguished hyperplane {w = 0}: the center is chosen off the hypersurface
// so the projection to P^2 is a finite k-sheeted cover, a base point in the
// plane is drawn and verified against the branch curve, and the blow-up at
// that point turns the plane into a ruled surface over P^1 carrying the
// branch divisor in fiberwise presentation.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sncres/algebra.hpp"
#include "sncres/factor.hpp"
#include "sncres/poly.hpp"
#include "sncres/ruled.hpp"
#include "sncres/support.hpp"

namespace sncres {

inline const std::vector<std::string> kAmbientVars = {"x0", "x1", "x2", "w"};
inline const std::vector<std::string> kPlaneVars = {"x0", "x1", "x2"};

// ---- exact integer linear algebra for coordinate changes -------------------

namespace detail {

using IMat = std::vector<std::vector<Int>>;

inline IMat imat_identity(int n) {
    IMat m(static_cast<std::size_t>(n), std::vector<Int>(static_cast<std::size_t>(n), Int(0)));
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1;
    return m;
}

inline IMat imat_mul(const IMat& a, const IMat& b) {
    std::size_t n = a.size();
    IMat out(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
    return out;
}

inline std::vector<Int> imat_apply(const IMat& a, const std::vector<Int>& v) {
    std::size_t n = a.size();
    std::vector<Int> out(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += a[i][j] * v[j];
    return out;
}

inline Int imat_det(const IMat& a) {
    std::size_t n = a.size();
    if (n == 1) return a[0][0];
    Int det(0);
    int sign = 1;
    for (std::size_t c = 0; c < n; ++c) {
        IMat minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Int> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[i][j]);
            minor.push_back(std::move(row));
        }
        det += Int(sign) * a[0][c] * imat_det(minor);
        sign = -sign;
    }
    return det;
}

// Inverse of a matrix with det = +-1, exact over the integers (adjugate).
inline IMat imat_inverse(const IMat& a) {
    std::size_t n = a.size();
    Int det = imat_det(a);
    if (det != 1 && det != -1) throw internal_error("coordinate change is not unimodular");
    IMat inv(n, std::vector<Int>(n, Int(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            IMat minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<Int> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(a[r][c]);
                minor.push_back(std::move(row));
            }
            Int cof = imat_det(minor);
            if ((i + j) % 2 == 1) cof = -cof;
            inv[i][j] = cof * det;  // det = +-1: dividing and multiplying agree
        }
    return inv;
}

inline void make_primitive_vector(std::vector<Int>& v) {
    Int g(0);
    for (const auto& x : v) g = gcd(g, x);
    if (g == 0) throw input_error("projective point must be nonzero");
    for (auto& x : v) x /= g;
    for (const auto& x : v) {
        if (x == 0) continue;
        if (x < 0)
            for (auto& y : v) y = -y;
        break;
    }
}

inline Int int_xgcd(const Int& a, const Int& b, Int& s, Int& t) {
    Int g;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

// Unimodular U with U p = e_last, for primitive integer p.
inline IMat unimodular_to_last(std::vector<Int> p) {
    std::size_t n = p.size();
    IMat u = imat_identity(static_cast<int>(n));
    std::size_t last = n - 1;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (p[i] == 0) continue;
        Int s, t;
        Int g = int_xgcd(p[last], p[i], s, t);
        Int a = p[last] / g, b = p[i] / g;
        std::vector<Int> row_last(n), row_i(n);
        for (std::size_t j = 0; j < n; ++j) {
            row_last[j] = s * u[last][j] + t * u[i][j];
            row_i[j] = -b * u[last][j] + a * u[i][j];
        }
        u[last] = std::move(row_last);
        u[i] = std::move(row_i);
        p[last] = g;
        p[i] = 0;
    }
    if (p[last] == -1)
        for (auto& x : u[last]) x = -x;
    else if (p[last] != 1)
        throw internal_error("unimodular completion: point not primitive");
    return u;
}

// var_i -> sum_j M[i][j] * var_j, as a simultaneous substitution map.
inline std::map<std::string, QPoly> linear_substitution(const IMat& m,
                                                        const std::vector<std::string>& vars) {
    std::map<std::string, QPoly> repl;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        QPoly lin;
        for (std::size_t j = 0; j < vars.size(); ++j)
            if (m[i][j] != 0)
                lin = lin + QPoly::term(Rat(m[i][j]), Monomial{{vars[j], 1}});
        repl[vars[i]] = std::move(lin);
    }
    return repl;
}

}  // namespace detail

// A projective coordinate change y = U x by a unimodular integer matrix,
// stored with its exact inverse so it can be replayed both ways.
struct LinearChange {
    detail::IMat U;
    detail::IMat U_inv;
};

inline LinearChange make_change_to_last(std::vector<Int> p) {
    detail::make_primitive_vector(p);
    detail::IMat u = detail::unimodular_to_last(p);
    LinearChange ch{u, detail::imat_inverse(u)};
    std::vector<Int> img = detail::imat_apply(ch.U, p);
    for (std::size_t i = 0; i + 1 < img.size(); ++i)
        if (img[i] != 0) throw internal_error("coordinate change failed to center the point");
    if (img.back() != 1) throw internal_error("coordinate change failed to center the point");
    return ch;
}

// ---- input --------------------------------------------------------------

struct HypersurfaceInput {
    QPoly F;                    // homogeneous in x0,x1,x2,w, degree k >= 2
    std::vector<QPoly> D_desc;  // homogeneous forms in x0,x1,x2 cutting the
                                // marked curve inside {w = 0}
};

inline HypersurfaceInput make_hypersurface_input(QPoly F, std::vector<QPoly> D_desc) {
    if (F.is_zero()) throw input_error("hypersurface: F must be nonzero");
    for (const auto& v : F.variables())
        if (v != "x0" && v != "x1" && v != "x2" && v != "w")
            throw input_error("hypersurface: F must use variables x0, x1, x2, w only");
    if (!F.is_homogeneous()) throw input_error("hypersurface: F must be homogeneous");
    if (F.total_degree() < 2) throw input_error("hypersurface: F must have degree at least 2");
    if (F.degree("w") < 1) throw input_error("hypersurface: F must depend on w");
    for (const auto& d : D_desc) {
        if (d.is_zero()) throw input_error("hypersurface: marked-curve forms must be nonzero");
        for (const auto& v : d.variables())
            if (v != "x0" && v != "x1" && v != "x2")
                throw input_error(
                    "hypersurface: marked-curve forms must use variables x0, x1, x2 only");
        if (!d.is_homogeneous())
            throw input_error("hypersurface: marked-curve forms must be homogeneous");
    }
    return HypersurfaceInput{std::move(F), std::move(D_desc)};
}

// ---- projection from a verified center ------------------------------------

struct ProjectedCover {
    QPoly G;      // monic in w of degree k, in the re-centered coordinates
    QPoly Delta;  // squarefree part of disc_w(G): the branch curve in P^2
    std::vector<Int> center_q;  // accepted center, original coordinates
    int degree_k = 0;
    LinearChange change;  // 4x4, sends center_q to [0:0:0:1]
    QPoly image_of_H;     // linear form in x0,x1,x2: the image line of {w=0}
};

inline ProjectedCover project_from_center(const HypersurfaceInput& inp, std::vector<Int> q) {
    if (q.size() != 4) throw input_error("projection center must have 4 coordinates");
    if (q[3] != 0) throw input_error("projection center must lie on the hyperplane w = 0");
    detail::make_primitive_vector(q);
    std::map<std::string, Rat> at;
    for (std::size_t i = 0; i < 4; ++i) at[kAmbientVars[i]] = Rat(q[i]);
    Rat fq = inp.F.evaluate(at);
    if (fq == 0) throw input_error("projection center lies on the hypersurface");

    LinearChange ch = make_change_to_last(q);
    QPoly g_full = inp.F.substitute(detail::linear_substitution(ch.U_inv, kAmbientVars));
    int k = inp.F.total_degree();
    Rat lc = g_full.coeff(Monomial{{"w", static_cast<unsigned>(k)}});
    if (lc != fq) throw internal_error("projection: fiber leading coefficient mismatch");
    QPoly g = (Rat(1) / lc) * g_full;

    QPoly disc = discriminant(g, "w");
    if (disc.is_zero()) throw input_error("F not squarefree in w");
    QPoly delta = total_squarefree_part(disc);

    // The original w, read in the new coordinates, is the linear form whose
    // zero locus is the image line of the distinguished hyperplane (its w
    // component vanishes because the center lies on that hyperplane).
    QPoly image_of_h;
    for (std::size_t j = 0; j < 3; ++j)
        if (ch.U_inv[3][j] != 0)
            image_of_h = image_of_h + QPoly::term(Rat(ch.U_inv[3][j]), Monomial{{kPlaneVars[j], 1}});
    if (ch.U_inv[3][3] != 0) throw internal_error("projection: hyperplane image is not a plane line");
    if (image_of_h.is_zero()) throw internal_error("projection: hyperplane image degenerated");
    image_of_h = primitive_integer(image_of_h);

    return ProjectedCover{std::move(g), std::move(delta), std::move(q), k, std::move(ch),
                          std::move(image_of_h)};
}

inline ProjectedCover choose_projection_center(const HypersurfaceInput& inp,
                                               std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    std::map<std::string, Rat> at;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Int> q = {Int(static_cast<long>(rng.next_int(-4, 4))),
                              Int(static_cast<long>(rng.next_int(-4, 4))),
                              Int(static_cast<long>(rng.next_int(-4, 4))), Int(0)};
        if (q[0] == 0 && q[1] == 0 && q[2] == 0) continue;
        for (std::size_t i = 0; i < 4; ++i) at[kAmbientVars[i]] = Rat(q[i]);
        if (inp.F.evaluate(at) == 0) continue;
        return project_from_center(inp, std::move(q));
    }
    throw input_error("center search failed");
}

// ---- base point selection and verification --------------------------------

// Smoothness screen: the fiber over o consists of k distinct reduced points
// exactly when the branch curve misses o.  This also certifies that no
// factor of Delta -- linear or otherwise -- passes through o.
inline bool smooth_fiber_check(const QPoly& delta, const std::vector<Int>& o) {
    if (o.size() != 3) throw input_error("plane point must have 3 coordinates");
    std::map<std::string, Rat> at;
    for (std::size_t i = 0; i < 3; ++i) at[kPlaneVars[i]] = Rat(o[i]);
    return delta.evaluate(at) != 0;
}

// Restriction of the cover to the line through o with direction dir,
// affinely parametrized as o + u * dir: a polynomial in (u, w), monic in w.
inline QPoly restrict_to_line(const QPoly& g, const std::vector<Int>& o,
                              const std::vector<Int>& dir) {
    if (o.size() != 3 || dir.size() != 3) throw input_error("line data must have 3 coordinates");
    Int c0 = o[1] * dir[2] - o[2] * dir[1];
    Int c1 = o[2] * dir[0] - o[0] * dir[2];
    Int c2 = o[0] * dir[1] - o[1] * dir[0];
    if (c0 == 0 && c1 == 0 && c2 == 0) throw input_error("line direction degenerate");
    std::map<std::string, QPoly> repl;
    for (std::size_t i = 0; i < 3; ++i)
        repl[kPlaneVars[i]] = QPoly(Rat(o[i])) + QPoly::term(Rat(dir[i]), Monomial{{"u", 1}});
    return g.substitute(repl);
}

// Squarefreeness of the line restriction.  The restriction is monic in w, so
// every irreducible factor involves w and one gcd against the w-derivative
// decides squarefreeness of the whole bivariate polynomial.
inline bool line_restriction_squarefree(const QPoly& g_line) {
    if (g_line.degree("w") < 1) throw input_error("line restriction must depend on w");
    return gcd_poly(g_line, g_line.derivative("w")).is_constant();
}

// Sufficient certificate of irreducibility over Q for the line restriction:
// the restriction is monic in w, so any bivariate factorization specializes
// at u = u0 with fiber degrees preserved; one irreducible specialization
// therefore certifies irreducibility of the restriction over Q.  (It says
// nothing about absolute irreducibility.)
inline bool certify_line_irreducible_over_Q(const QPoly& g_line) {
    if (g_line.degree("w") < 1) throw input_error("line restriction must depend on w");
    for (long u0 : {0L, 1L, -1L, 2L, -2L, 3L, -3L}) {
        QPoly spec = g_line.substitute({{"u", QPoly(Rat(u0))}});
        if (spec.degree("w") != g_line.degree("w"))
            throw internal_error("line restriction lost fiber degree");
        if (is_irreducible_over_Q(spec)) return true;
    }
    return false;
}

struct VerifiedBasePoint {
    std::vector<Int> o;  // primitive integer coordinates in the cover's frame
    // The irreducibility certificate is over Q only; downstream consumers log
    // a warning while this stays false.
    bool absolute_irreducibility_certified = false;
    QPoly fiber_polynomial;  // G restricted over o: monic degree-k in w
};

inline VerifiedBasePoint choose_base_point(const ProjectedCover& pc, std::uint64_t rng_seed) {
    Rng rng(rng_seed);
    auto draw_triple = [&](int bound) {
        return std::vector<Int>{Int(static_cast<long>(rng.next_int(-bound, bound))),
                                Int(static_cast<long>(rng.next_int(-bound, bound))),
                                Int(static_cast<long>(rng.next_int(-bound, bound)))};
    };
    auto independent = [](const std::vector<Int>& a, const std::vector<Int>& b) {
        return a[1] * b[2] - a[2] * b[1] != 0 || a[2] * b[0] - a[0] * b[2] != 0 ||
               a[0] * b[1] - a[1] * b[0] != 0;
    };
    std::map<std::string, Rat> at;
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Int> o = draw_triple(4);
        if (o[0] == 0 && o[1] == 0 && o[2] == 0) continue;
        detail::make_primitive_vector(o);
        for (std::size_t i = 0; i < 3; ++i) at[kPlaneVars[i]] = Rat(o[i]);

        // (a) the branch curve misses o: the fiber over o is k reduced points.
        if (pc.Delta.evaluate(at) == 0) continue;
        // The image line of the distinguished hyperplane must also miss o,
        // otherwise its strict transform fails to be a section over the
        // blown-up plane (the published graph formula would divide by zero).
        if (pc.image_of_H.evaluate(at) == 0) continue;

        // (b) three sampled lines through o restrict the cover squarefree.
        bool lines_ok = true;
        std::vector<std::vector<Int>> used;
        for (int line = 0; line < 3 && lines_ok; ++line) {
            bool drawn = false;
            for (int tries = 0; tries < 50 && !drawn; ++tries) {
                std::vector<Int> dir = draw_triple(3);
                if (dir[0] == 0 && dir[1] == 0 && dir[2] == 0) continue;
                if (!independent(o, dir)) continue;
                detail::make_primitive_vector(dir);
                bool repeat = false;
                for (const auto& d : used) repeat = repeat || d == dir;
                if (repeat) continue;
                used.push_back(dir);
                drawn = true;
                if (!line_restriction_squarefree(restrict_to_line(pc.G, o, dir)))
                    lines_ok = false;
            }
            if (!drawn) lines_ok = false;
        }
        if (!lines_ok) continue;

        // (c) one sampled line restricts irreducibly over Q.
        bool certified = false;
        for (int line = 0; line < 3 && !certified; ++line) {
            std::vector<Int> dir = draw_triple(3);
            if (dir[0] == 0 && dir[1] == 0 && dir[2] == 0) continue;
            if (!independent(o, dir)) continue;
            if (certify_line_irreducible_over_Q(restrict_to_line(pc.G, o, dir))) certified = true;
        }
        if (!certified) continue;

        // Exact realization of the smoothness statement: the fiber polynomial
        // over o is monic of degree k with nonzero discriminant.
        std::map<std::string, QPoly> fix;
        for (std::size_t i = 0; i < 3; ++i) fix[kPlaneVars[i]] = QPoly(Rat(o[i]));
        QPoly fiber = pc.G.substitute(fix);
        if (fiber.degree("w") != pc.degree_k)
            throw internal_error("base point: fiber polynomial degree mismatch");
        QPoly fiber_disc = discriminant(fiber, "w");
        if (fiber_disc.is_zero() || !fiber_disc.is_constant() ||
            fiber_disc.constant_value() == 0)
            throw internal_error("base point: fiber discriminant vanished despite the screen");

        return VerifiedBasePoint{std::move(o), false, std::move(fiber)};
    }
    throw input_error("no verified center found");
}

// ---- blow-up at the base point ---------------------------------------------

// Fiberwise presentation of a plane curve around the origin o = [0:0:1]:
// lines through o are parametrized by [t0:t1], the point (u t0, u t1, v) has
// fiber coordinate v/u, and the exceptional section sits at infinity.  A
// degree-N form with Delta(o) != 0 becomes a fiber-degree-N horizontal
// divisor with constant phi_0 = Delta(o), missing the infinity section.
inline HorizontalDivisor rewrite_at_origin(const QPoly& delta) {
    if (delta.is_zero()) throw input_error("branch rewrite: zero form");
    for (const auto& v : delta.variables())
        if (v != "x0" && v != "x1" && v != "x2")
            throw input_error("branch rewrite: form must use variables x0, x1, x2 only");
    if (!delta.is_homogeneous()) throw input_error("branch rewrite: form must be homogeneous");
    int n = delta.total_degree();
    std::vector<QPoly> phi_t(static_cast<std::size_t>(n) + 1);
    for (const auto& [mono, coef] : delta.terms()) {
        unsigned a = 0, b = 0;
        if (auto it = mono.find("x0"); it != mono.end()) a = it->second;
        if (auto it = mono.find("x1"); it != mono.end()) b = it->second;
        std::size_t i = a + b;
        phi_t[i] = phi_t[i] + QPoly::term(coef, b == 0 ? Monomial{} : Monomial{{"t", b}});
    }
    if (phi_t[0].is_zero())
        throw internal_error("branch rewrite: divisor meets the infinity section");
    std::vector<BinForm> phis;
    phis.reserve(phi_t.size());
    for (std::size_t i = 0; i < phi_t.size(); ++i)
        phis.push_back(phi_t[i].is_zero() ? BinForm(static_cast<int>(i), {})
                                          : BinForm::from_affine(phi_t[i], static_cast<int>(i), "t"));
    return make_horizontal_divisor(1, std::move(phis));
}

struct BlownUpBase {
    RuledSurface surface;          // twist 1: the blown-up plane over P^1
    HorizontalDivisor B1;          // the branch divisor, fiber degree N
    std::vector<Section> marked;   // the image line of the distinguished hyperplane
    LinearChange base_change;      // 3x3, sends o to [0:0:1]
    QPoly fiber_over_o;            // monic degree-k polynomial in w: the cover over o
};

inline BlownUpBase blow_up_base(const ProjectedCover& pc, const VerifiedBasePoint& vbp) {
    LinearChange ch = make_change_to_last(vbp.o);
    auto repl = detail::linear_substitution(ch.U_inv, kPlaneVars);
    QPoly delta_centered = pc.Delta.substitute(repl);
    HorizontalDivisor b1 = rewrite_at_origin(delta_centered);

    QPoly line = pc.image_of_H.substitute(repl);
    Rat a = line.coeff(Monomial{{"x0", 1}});
    Rat b = line.coeff(Monomial{{"x1", 1}});
    Rat c = line.coeff(Monomial{{"x2", 1}});
    if (c == 0) throw internal_error("blow-up: hyperplane image passes through the base point");
    Section s0 = Section::finite(BinForm(1, {-a / c, -b / c}));

    return BlownUpBase{make_ruled_surface(1), std::move(b1), {std::move(s0)}, std::move(ch),
                       vbp.fiber_polynomial};
}

}  // namespace sncres
