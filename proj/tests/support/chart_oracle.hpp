#pragma once

// Independent oracle for collision trees: a literal simulation of iterated
// single-level blow-up charts.  At every step the sections sitting on one
// chart are grouped by their position coefficient; any group of two or more
// is blown up once, moving the group one level deeper.  The resulting tree
// has one vertex per level; passthrough vertices (unmarked, with a single
// child) are then contracted, concatenating their approach coefficients, so
// the result is directly comparable with the production collision_tree.
//
// This path shares no clustering logic with the production code: it never
// looks at pairwise valuations, only at one coefficient at a time.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "sncres/stabilize.hpp"

namespace oracles {

using sncres::AlgNum;
using sncres::FiberTree;
using sncres::FiberVertex;
using sncres::LocalJet;
using sncres::MarkedPoint;

// Full tree with one vertex per blow-up level (every edge has approach
// length one), built by the literal chart iteration.
inline FiberTree chart_blowup_full(const std::vector<LocalJet>& jets,
                                   const std::vector<std::string>& names) {
    FiberTree tree;
    tree.vertices.push_back(FiberVertex{});

    struct Frame {
        std::vector<std::size_t> group;
        int vertex;
        int level;
    };
    std::vector<Frame> stack;
    std::vector<std::size_t> all(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i) all[i] = i;
    stack.push_back(Frame{std::move(all), 0, 0});

    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (fr.level > 256) throw sncres::internal_error("chart oracle: sections fail to separate");

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

        std::vector<Frame> children;
        for (auto& part : parts) {
            if (part.size() == 1) {
                tree.vertices[static_cast<std::size_t>(fr.vertex)].marks.push_back(
                    MarkedPoint{names[part.front()], jets[part.front()].coeff(fr.level), false});
                continue;
            }
            // one single-level blow-up: the whole group moves one level down
            FiberVertex child;
            child.parent = fr.vertex;
            child.depth = fr.level + 1;
            child.approach = {jets[part.front()].coeff(fr.level)};
            tree.vertices.push_back(std::move(child));
            children.push_back(
                Frame{std::move(part), static_cast<int>(tree.vertices.size()) - 1, fr.level + 1});
        }
        for (auto it = children.rbegin(); it != children.rend(); ++it)
            stack.push_back(std::move(*it));
    }
    return tree;
}

// Contract every non-root vertex that carries no marks and has exactly one
// child: its single approach coefficient is prepended to the child's.
inline FiberTree contract_passthrough(const FiberTree& full) {
    const std::size_t n = full.vertices.size();
    std::vector<int> nchildren(n, 0);
    for (const auto& v : full.vertices)
        if (v.parent >= 0) ++nchildren[static_cast<std::size_t>(v.parent)];

    // A vertex survives unless it is a non-root, unmarked, single-child
    // passthrough.  Approach prefixes accumulate along dropped runs.
    std::vector<bool> keep(n, true);
    for (std::size_t v = 1; v < n; ++v)
        if (full.vertices[v].marks.empty() && nchildren[v] == 1) keep[v] = false;

    FiberTree out;
    std::vector<int> image(n, -1);
    std::vector<std::vector<AlgNum>> prefix(n);  // approach inherited from dropped ancestors
    for (std::size_t v = 0; v < n; ++v) {
        const auto& V = full.vertices[v];
        std::vector<AlgNum> approach = V.approach;
        if (V.parent >= 0) {
            const auto& inherited = prefix[static_cast<std::size_t>(V.parent)];
            approach.insert(approach.begin(), inherited.begin(), inherited.end());
        }
        if (!keep[v]) {
            prefix[v] = std::move(approach);
            // effective parent: walk up to the nearest kept ancestor
            int p = V.parent;
            while (p >= 0 && !keep[static_cast<std::size_t>(p)])
                p = full.vertices[static_cast<std::size_t>(p)].parent;
            image[v] = image[static_cast<std::size_t>(p)];
            continue;
        }
        FiberVertex W;
        W.parent = V.parent < 0 ? -1 : image[static_cast<std::size_t>(V.parent)];
        W.depth = V.depth;
        W.approach = std::move(approach);
        W.marks = V.marks;
        out.vertices.push_back(std::move(W));
        image[v] = static_cast<int>(out.vertices.size()) - 1;
    }
    return out;
}

inline FiberTree chart_blowup_tree(const std::vector<LocalJet>& jets,
                                   const std::vector<std::string>& names) {
    return contract_passthrough(chart_blowup_full(jets, names));
}

// Structural rendering that is independent of sibling creation order: the
// production tree materializes a deep cluster's component as soon as the
// cluster is recognized, while the chart iteration only creates it at its
// separation level, so sibling indices differ although the trees coincide.
inline std::string canonical_tree_string(const FiberTree& tree, std::size_t v = 0) {
    const auto& V = tree.vertices[v];
    std::string out = "{d=" + std::to_string(V.depth) + ",a=[";
    for (std::size_t k = 0; k < V.approach.size(); ++k)
        out += (k ? "," : "") + V.approach[k].to_string();
    out += "],m=[";
    for (std::size_t k = 0; k < V.marks.size(); ++k) {
        out += (k ? "," : "") + V.marks[k].name + "@";
        out += V.marks[k].at_infinity ? "inf" : V.marks[k].position.to_string();
    }
    out += "],c=[";
    std::vector<std::string> kids;
    for (std::size_t w = 0; w < tree.vertices.size(); ++w)
        if (tree.vertices[w].parent == static_cast<int>(v))
            kids.push_back(canonical_tree_string(tree, w));
    std::sort(kids.begin(), kids.end());
    for (std::size_t k = 0; k < kids.size(); ++k) out += (k ? "|" : "") + kids[k];
    return out + "]}";
}

}  // namespace oracles
