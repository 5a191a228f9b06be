#pragma once

// Stabilization of a ruled surface with a finite list of marked sections.
//
// The pipeline stage implemented here locates every base point where two
// sections collide (the discriminant locus), replaces the fiber over each
// such point by a tree of rational components on which the sections land at
// pairwise-distinct smooth points, inserts the chain components that smooth
// the total space at every node, and finally certifies the configuration of
// fiber components and section graphs as a simple-normal-crossing divisor.
//
// All computations are exact.  Collisions at conjugate algebraic base points
// are processed once per irreducible factor: the single representative tree
// is recorded together with the field degree (the number of conjugate fibers
// sharing that shape).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ruled.hpp"

namespace sncres {

// --- discriminant locus ------------------------------------------------------

// One unordered pair of sections meeting over a base point, with the contact
// order (the valuation of the difference of the two sections there).
struct CollidingPair {
    std::size_t i = 0, j = 0;  // indices into the section list, i < j
    int contact = 1;

    friend bool operator==(const CollidingPair& a, const CollidingPair& b) {
        return a.i == b.i && a.j == b.j && a.contact == b.contact;
    }
};

struct DiscriminantPoint {
    BasePoint at;
    std::vector<CollidingPair> pairs;  // sorted by (i, j)
    // Number of conjugate base points represented by this entry: 1 for
    // rational points and the point at infinity, the minimal-polynomial
    // degree for an algebraic point.
    int galois_multiplicity = 1;

    int max_contact() const {
        int m = 0;
        for (const auto& p : pairs) m = std::max(m, p.contact);
        return m;
    }
};

struct DiscriminantLocus {
    std::vector<DiscriminantPoint> points;  // sorted by BasePoint::cmp
    // Squarefree form whose zero set is exactly the locus: the squarefree
    // part of the product of all pairwise differences of finite sections
    // (the unit form of degree 0 when fewer than two finite sections exist).
    BinForm defining_form;
};

namespace detail {

// Squarefree part of a nonzero binary form: squarefree part of the affine
// polynomial, with the vanishing order at infinity reduced to at most one.
inline BinForm squarefree_form(const BinForm& G) {
    if (G.is_zero()) throw input_error("squarefree form: zero form");
    QPoly aff = G.affine_poly("t");
    QPoly sq = aff.is_constant() ? QPoly(1) : primitive_integer(squarefree_part(aff, "t"));
    int hom = sq.degree("t") + (G.ord_at_infinity() > 0 ? 1 : 0);
    return BinForm::from_affine(sq, hom, "t");
}

}  // namespace detail

// All base points over which at least two of the given sections meet, with
// the colliding pairs and their contact orders.  Sections must be pairwise
// distinct; the infinity section (at most one — duplicates are rejected as
// indistinct) meets no finite section and contributes no pairs.
inline DiscriminantLocus discriminant_locus(int twist_e, const std::vector<Section>& sections) {
    for (std::size_t i = 0; i < sections.size(); ++i) {
        for (std::size_t j = i + 1; j < sections.size(); ++j)
            if (sections[i] == sections[j]) throw input_error("sections not distinct");
        if (!sections[i].infinite && sections[i].form.deg != twist_e)
            throw input_error("section: form degree must equal the surface twist");
    }

    DiscriminantLocus out;
    BinForm product = BinForm::constant(0, Rat(1));
    bool have_pair = false;

    for (std::size_t i = 0; i < sections.size(); ++i) {
        if (sections[i].infinite) continue;
        for (std::size_t j = i + 1; j < sections.size(); ++j) {
            if (sections[j].infinite) continue;
            BinForm diff = sections[i].form - sections[j].form;
            if (diff.is_zero()) throw internal_error("discriminant locus: zero difference");
            product = have_pair ? product * diff : diff;
            have_pair = true;
            std::string prefix = "d" + std::to_string(i) + "_" + std::to_string(j) + "_";
            for (const auto& [pt, mult] : zeros_with_multiplicity(diff, prefix)) {
                auto it = std::find_if(out.points.begin(), out.points.end(), [&](const auto& q) {
                    return BasePoint::cmp(q.at, pt) == 0;
                });
                if (it == out.points.end()) {
                    DiscriminantPoint q;
                    q.at = pt;
                    q.galois_multiplicity =
                        pt.kind == BasePoint::Kind::algebraic ? pt.field->degree() : 1;
                    out.points.push_back(std::move(q));
                    it = std::prev(out.points.end());
                }
                it->pairs.push_back(CollidingPair{i, j, mult});
            }
        }
    }

    out.defining_form =
        have_pair ? detail::squarefree_form(product) : BinForm::constant(0, Rat(1));
    std::sort(out.points.begin(), out.points.end(), [](const auto& a, const auto& b) {
        return BasePoint::cmp(a.at, b.at) < 0;
    });
    for (auto& p : out.points)
        std::sort(p.pairs.begin(), p.pairs.end(), [](const auto& a, const auto& b) {
            return a.i != b.i ? a.i < b.i : a.j < b.j;
        });
    return out;
}

// --- fiber trees -------------------------------------------------------------

// A section landing on a fiber component, at a chart position on that
// component.  The infinity section is flagged: it sits at the pole of the
// root component's chart and never carries a finite position.
struct MarkedPoint {
    std::string name;
    AlgNum position;
    bool at_infinity = false;

    friend bool operator==(const MarkedPoint& a, const MarkedPoint& b) {
        return a.name == b.name && a.position == b.position && a.at_infinity == b.at_infinity;
    }
};

// One rational component of a special fiber.  The root (index 0) is the
// strict transform of the original fiber; every other vertex was created by
// a cluster-separation event.
//
// 'depth' is the distance label: the sum of the node multiplicities along
// the path to the root (equivalently the t-adic separation depth).  The
// 'approach' vector stores the agreed jet coefficients of the cluster from
// the parent's depth up to depth-1; its front entry is the chart position on
// the parent where this component is attached, and its length is the node
// multiplicity m of the parent node (local equation u*v = s^m on the base
// parameter s).  After smooth_total_space every approach has length one and
// depth equals the graph distance from the root.
struct FiberVertex {
    int parent = -1;  // -1 for the root
    int depth = 0;
    std::vector<AlgNum> approach;
    std::vector<MarkedPoint> marks;

    int node_multiplicity() const { return static_cast<int>(approach.size()); }

    friend bool operator==(const FiberVertex& a, const FiberVertex& b) {
        return a.parent == b.parent && a.depth == b.depth && a.approach == b.approach &&
               a.marks == b.marks;
    }
};

struct FiberTree {
    std::vector<FiberVertex> vertices;  // root first; every parent precedes its children

    int edge_count() const { return static_cast<int>(vertices.size()) - 1; }

    friend bool operator==(const FiberTree& a, const FiberTree& b) {
        return a.vertices == b.vertices;
    }
    friend bool operator!=(const FiberTree& a, const FiberTree& b) { return !(a == b); }

    // Deterministic one-line rendering, used for logs and for structural
    // comparison against the independent chart oracle in the test suite.
    std::string to_string() const {
        std::string out;
        for (std::size_t v = 0; v < vertices.size(); ++v) {
            const auto& V = vertices[v];
            if (v) out += " ";
            out += "v" + std::to_string(v) + "{p=" + std::to_string(V.parent) +
                   ",d=" + std::to_string(V.depth) + ",a=[";
            for (std::size_t k = 0; k < V.approach.size(); ++k)
                out += (k ? "," : "") + V.approach[k].to_string();
            out += "],m=[";
            for (std::size_t k = 0; k < V.marks.size(); ++k) {
                out += (k ? "," : "") + V.marks[k].name + "@";
                out += V.marks[k].at_infinity ? "inf" : V.marks[k].position.to_string();
            }
            out += "]}";
        }
        return out;
    }
};

namespace detail {

// First index at which two jets differ; nullopt when they agree as exact
// series.  Throws when the window is exhausted before a decision is reached.
inline std::optional<int> jet_separation(const LocalJet& a, const LocalJet& b) {
    int window = std::max(static_cast<int>(a.coeffs.size()), static_cast<int>(b.coeffs.size()));
    if (!a.exact || !b.exact)
        window = std::max(window, std::min(a.truncation_order, b.truncation_order));
    LocalJet diff;
    diff.center = a.center;
    diff.exact = a.exact && b.exact;
    diff.truncation_order = a.exact && b.exact ? window
                                               : std::min(a.truncation_order, b.truncation_order);
    for (int k = 0; k < window; ++k) diff.coeffs.push_back(a.coeff(k) - b.coeff(k));
    auto v = diff.valuation();  // throws "valuation: increase truncation_order" when undecidable
    return v;
}

}  // namespace detail

// The tree of rational components replacing the fiber over z, given the
// local expansions of the (finite) sections there.  Sections agreeing to
// order m form a cluster; every cluster-separation event inserts one
// component whose depth label is the separation order and whose marked
// points are the next-order coefficients of the separating sections.
inline FiberTree collision_tree(const BasePoint& z, const std::vector<LocalJet>& jets,
                                const std::vector<std::string>& names) {
    if (jets.size() != names.size())
        throw internal_error("collision tree: names do not match jets");
    for (const auto& j : jets)
        if (BasePoint::cmp(j.center, z) != 0)
            throw internal_error("collision tree: jet centered elsewhere");

    // Pairwise separation indices (valuations of differences).
    const std::size_t n = jets.size();
    std::vector<std::vector<std::optional<int>>> sep(n, std::vector<std::optional<int>>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            auto v = detail::jet_separation(jets[i], jets[j]);
            if (!v) throw input_error("sections not distinct");
            sep[i][j] = sep[j][i] = v;
        }

    FiberTree tree;
    tree.vertices.push_back(FiberVertex{});  // root: the fiber itself, depth 0

    // place(group, vertex, level): the sections in 'group' all agree on
    // coefficients below 'level' and sit on 'vertex'; read their positions
    // at 'level' and either mark the vertex or recurse into a deeper cluster.
    struct Frame {
        std::vector<std::size_t> group;
        int vertex;
        int level;
    };
    std::vector<Frame> stack;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    stack.push_back(Frame{std::move(all), 0, 0});

    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();

        // Partition by the coefficient at the current level, preserving the
        // first-occurrence order of the input.
        std::vector<std::vector<std::size_t>> parts;
        for (std::size_t idx : fr.group) {
            AlgNum pos = jets[idx].coeff(fr.level);
            bool placed = false;
            for (auto& part : parts)
                if (jets[part.front()].coeff(fr.level) == pos) {
                    part.push_back(idx);
                    placed = true;
                    break;
                }
            if (!placed) parts.push_back({idx});
        }

        std::vector<Frame> children;  // collected to keep vertex order deterministic
        for (auto& part : parts) {
            if (part.size() == 1) {
                tree.vertices[static_cast<std::size_t>(fr.vertex)].marks.push_back(
                    MarkedPoint{names[part.front()], jets[part.front()].coeff(fr.level), false});
                continue;
            }
            // A cluster: find the first level at which it separates.
            int split = -1;
            for (std::size_t a = 0; a < part.size(); ++a)
                for (std::size_t b = a + 1; b < part.size(); ++b) {
                    int v = *sep[part[a]][part[b]];
                    if (split < 0 || v < split) split = v;
                }
            if (split <= fr.level)
                throw internal_error("collision tree: cluster fails to separate");

            FiberVertex child;
            child.parent = fr.vertex;
            child.depth = split;
            for (int k = fr.level; k < split; ++k)
                child.approach.push_back(jets[part.front()].coeff(k));
            tree.vertices.push_back(std::move(child));
            children.push_back(
                Frame{std::move(part), static_cast<int>(tree.vertices.size()) - 1, split});
        }
        // Depth-first in reverse so the first child is processed first.
        for (auto it = children.rbegin(); it != children.rend(); ++it)
            stack.push_back(std::move(*it));
    }
    return tree;
}

// --- stable families ---------------------------------------------------------

struct StableFamily {
    RuledSurface base_surface;
    std::vector<Section> sections;
    std::vector<std::string> section_names;  // parallel to sections
    DiscriminantLocus locus;
    std::vector<FiberTree> special_fibers;  // parallel to locus.points
    std::vector<std::string> blowup_schedule;  // deterministic modification log
};

// Default section names: "S0", "S1", ... in input order.
inline std::vector<std::string> default_section_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("S" + std::to_string(i));
    return names;
}

// Replace the fiber over every discriminant point by its collision tree.
// Sections are processed in input order; the schedule records every inserted
// component.  Base points are left untouched away from the locus.
inline StableFamily stabilize(const RuledSurface& S, const std::vector<Section>& sections,
                              std::vector<std::string> names = {}) {
    if (names.empty()) names = default_section_names(sections.size());
    if (names.size() != sections.size())
        throw input_error("stabilize: section names do not match sections");

    StableFamily fam;
    fam.base_surface = S;
    fam.sections = sections;
    fam.section_names = names;
    fam.locus = discriminant_locus(S.twist_e, sections);

    for (const auto& zp : fam.locus.points) {
        int trunc = zp.max_contact() + 1;
        std::vector<LocalJet> jets;
        std::vector<std::string> finite_names;
        std::string inf_name;
        bool has_inf = false;
        for (std::size_t i = 0; i < sections.size(); ++i) {
            if (sections[i].infinite) {
                has_inf = true;
                inf_name = names[i];
                continue;
            }
            jets.push_back(sections[i].form.jet(zp.at, trunc));
            finite_names.push_back(names[i]);
        }
        FiberTree tree = collision_tree(zp.at, jets, finite_names);
        if (has_inf)
            tree.vertices[0].marks.push_back(MarkedPoint{inf_name, AlgNum(Rat(0)), true});
        for (std::size_t v = 1; v < tree.vertices.size(); ++v) {
            const auto& V = tree.vertices[v];
            fam.blowup_schedule.push_back(
                "fiber " + zp.at.to_string() + ": insert v" + std::to_string(v) + " at depth " +
                std::to_string(V.depth) + " on v" + std::to_string(V.parent) + " (node m=" +
                std::to_string(V.node_multiplicity()) + ")");
        }
        fam.special_fibers.push_back(std::move(tree));
    }
    return fam;
}

// Insert the m-1 unmarked chain components that resolve every node with
// local equation u*v = s^m.  Afterwards every node multiplicity is one and
// depth labels coincide with graph distance from the root.  Idempotent.
inline FiberTree smooth_tree(const FiberTree& tree) {
    FiberTree out;
    std::vector<int> image(tree.vertices.size(), -1);
    for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
        const auto& V = tree.vertices[v];
        if (V.parent < 0) {
            out.vertices.push_back(V);
            image[v] = static_cast<int>(out.vertices.size()) - 1;
            continue;
        }
        int prev = image[static_cast<std::size_t>(V.parent)];
        int depth = out.vertices[static_cast<std::size_t>(prev)].depth;
        const int m = V.node_multiplicity();
        for (int k = 0; k + 1 < m; ++k) {
            FiberVertex chain;
            chain.parent = prev;
            chain.depth = ++depth;
            chain.approach = {V.approach[static_cast<std::size_t>(k)]};
            out.vertices.push_back(std::move(chain));
            prev = static_cast<int>(out.vertices.size()) - 1;
        }
        FiberVertex last;
        last.parent = prev;
        last.depth = depth + 1;
        last.approach = {V.approach.back()};
        last.marks = V.marks;
        out.vertices.push_back(std::move(last));
        image[v] = static_cast<int>(out.vertices.size()) - 1;
    }
    return out;
}

inline StableFamily smooth_total_space(const StableFamily& fam) {
    StableFamily out = fam;
    for (std::size_t i = 0; i < out.special_fibers.size(); ++i) {
        FiberTree smoothed = smooth_tree(out.special_fibers[i]);
        for (std::size_t v = 0; v < smoothed.vertices.size(); ++v) {
            // Log only genuinely new chain components.
            if (smoothed.vertices.size() != out.special_fibers[i].vertices.size() &&
                smoothed.vertices[v].marks.empty() && smoothed.vertices[v].parent >= 0) {
                bool is_new = true;
                for (const auto& V : out.special_fibers[i].vertices)
                    if (V.marks.empty() && V.parent >= 0 && V.depth == smoothed.vertices[v].depth &&
                        V.approach == smoothed.vertices[v].approach)
                        is_new = false;
                if (is_new)
                    out.blowup_schedule.push_back(
                        "fiber " + out.locus.points[i].at.to_string() + ": chain component at depth " +
                        std::to_string(smoothed.vertices[v].depth));
            }
        }
        out.special_fibers[i] = std::move(smoothed);
    }
    return out;
}

// --- simple-normal-crossing certificate --------------------------------------

struct SncViolation {
    std::string kind;    // "triple point" | "node multiplicity" | "sections not distinct" | ...
    std::string detail;  // human-readable description naming the offenders

    friend bool operator==(const SncViolation& a, const SncViolation& b) {
        return a.kind == b.kind && a.detail == b.detail;
    }
};

struct SncCertificate {
    bool pass = false;
    std::vector<SncViolation> violations;
    std::vector<std::string> notes;  // recorded per-component smoothness facts
};

// Certify that the configuration consisting of all fiber-tree components and
// all section graphs is a simple-normal-crossing divisor: every component is
// smooth, every intersection is transverse of multiplicity one, and no three
// components pass through one point.  The checks recompute the pairwise
// section collisions from scratch, so a family that skipped stabilization
// (or smoothing) is caught and the offending triple reported.
inline SncCertificate snc_certificate(const StableFamily& fam) {
    SncCertificate cert;
    const auto& names = fam.section_names;

    // (0) sections pairwise distinct.
    for (std::size_t i = 0; i < fam.sections.size(); ++i)
        for (std::size_t j = i + 1; j < fam.sections.size(); ++j)
            if (fam.sections[i] == fam.sections[j])
                cert.violations.push_back(
                    SncViolation{"sections not distinct",
                                 names[i] + " and " + names[j] + " coincide"});

    // (1) component smoothness: every component is a section graph or a
    // rational fiber component; both are smooth by construction.
    for (const auto& nm : names) cert.notes.push_back("component " + nm + ": smooth section graph");
    for (std::size_t f = 0; f < fam.special_fibers.size(); ++f)
        cert.notes.push_back("fiber " + fam.locus.points[f].at.to_string() + ": " +
                             std::to_string(fam.special_fibers[f].vertices.size()) +
                             " smooth rational component(s)");

    // (2) total-space smoothness at the nodes: every node multiplicity must
    // be one, otherwise the ambient surface is singular where the two
    // components meet and the configuration is not simple normal crossing.
    for (std::size_t f = 0; f < fam.special_fibers.size(); ++f) {
        const auto& tree = fam.special_fibers[f];
        for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
            const auto& V = tree.vertices[v];
            if (V.parent >= 0 && V.node_multiplicity() != 1)
                cert.violations.push_back(SncViolation{
                    "node multiplicity",
                    "fiber " + fam.locus.points[f].at.to_string() + ": node between v" +
                        std::to_string(V.parent) + " and v" + std::to_string(v) +
                        " has local equation u*v = s^" + std::to_string(V.node_multiplicity())});
            if (V.parent >= static_cast<int>(v))
                cert.violations.push_back(SncViolation{
                    "malformed tree", "fiber " + fam.locus.points[f].at.to_string() +
                                          ": vertex v" + std::to_string(v) + " precedes its parent"});
        }
    }

    // (3) marked points: distinct smooth positions on each component, never
    // at a node, the infinity mark only on a root.
    for (std::size_t f = 0; f < fam.special_fibers.size(); ++f) {
        const auto& tree = fam.special_fibers[f];
        std::string at = fam.locus.points[f].at.to_string();
        for (std::size_t v = 0; v < tree.vertices.size(); ++v) {
            const auto& V = tree.vertices[v];
            for (std::size_t a = 0; a < V.marks.size(); ++a) {
                if (V.marks[a].at_infinity && v != 0)
                    cert.violations.push_back(
                        SncViolation{"misplaced infinity mark",
                                     "fiber " + at + ": " + V.marks[a].name + " on v" +
                                         std::to_string(v)});
                for (std::size_t b = a + 1; b < V.marks.size(); ++b)
                    if (V.marks[a].at_infinity == V.marks[b].at_infinity &&
                        (V.marks[a].at_infinity || V.marks[a].position == V.marks[b].position))
                        cert.violations.push_back(SncViolation{
                            "triple point", "fiber " + at + ": sections " + V.marks[a].name +
                                                " and " + V.marks[b].name + " meet component v" +
                                                std::to_string(v) + " at one point"});
            }
            // marks must avoid the attachment points of children
            for (std::size_t w = 0; w < tree.vertices.size(); ++w) {
                const auto& W = tree.vertices[w];
                if (W.parent != static_cast<int>(v)) continue;
                for (const auto& mk : V.marks)
                    if (!mk.at_infinity && !W.approach.empty() && mk.position == W.approach.front())
                        cert.violations.push_back(SncViolation{
                            "triple point", "fiber " + at + ": section " + mk.name +
                                                ", component v" + std::to_string(v) +
                                                " and component v" + std::to_string(w) +
                                                " pass through one point"});
            }
        }
    }

    // (4) every pairwise section collision must be resolved by a recorded
    // fiber tree in which the two sections land at different places.
    for (std::size_t i = 0; i < fam.sections.size(); ++i) {
        if (fam.sections[i].infinite) continue;
        for (std::size_t j = i + 1; j < fam.sections.size(); ++j) {
            if (fam.sections[j].infinite) continue;
            BinForm diff = fam.sections[i].form - fam.sections[j].form;
            if (diff.is_zero()) continue;  // already reported under (0)
            for (const auto& [pt, mult] : zeros_with_multiplicity(diff, "c")) {
                (void)mult;
                // locate the tree over this point
                std::optional<std::size_t> fidx;
                for (std::size_t f = 0; f < fam.locus.points.size(); ++f)
                    if (BasePoint::cmp(fam.locus.points[f].at, pt) == 0 &&
                        f < fam.special_fibers.size())
                        fidx = f;
                if (!fidx) {
                    cert.violations.push_back(SncViolation{
                        "triple point", "sections " + names[i] + ", " + names[j] +
                                            " and the fiber over " + pt.to_string() +
                                            " pass through one point"});
                    continue;
                }
                // the marks must exist and be separated (different component,
                // or different positions on one component)
                const auto& tree = fam.special_fibers[*fidx];
                std::optional<std::pair<std::size_t, AlgNum>> ma, mb;
                for (std::size_t v = 0; v < tree.vertices.size(); ++v)
                    for (const auto& mk : tree.vertices[v].marks) {
                        if (mk.name == names[i]) ma = {v, mk.position};
                        if (mk.name == names[j]) mb = {v, mk.position};
                    }
                if (!ma || !mb) {
                    cert.violations.push_back(SncViolation{
                        "missing mark", "fiber " + pt.to_string() + ": section " +
                                            (!ma ? names[i] : names[j]) + " has no marked point"});
                    continue;
                }
                if (ma->first == mb->first && ma->second == mb->second)
                    cert.violations.push_back(SncViolation{
                        "triple point", "fiber " + pt.to_string() + ": sections " + names[i] +
                                            " and " + names[j] + " meet component v" +
                                            std::to_string(ma->first) + " at one point"});
            }
        }
    }

    cert.notes.push_back("infinity section meets no finite section (disjoint charts)");
    cert.pass = cert.violations.empty();
    return cert;
}

}  // namespace sncres
