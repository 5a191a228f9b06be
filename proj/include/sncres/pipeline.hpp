#pragma once

// Pipeline orchestration.
//
// `run` executes the four stages (projection, fiberwise reduction,
// stabilization, toric resolution) on a parsed input and returns a
// ResolutionLog: a list of canonical JSON lines that records the seeded
// draws, every modification, and every certificate.  The log is built by a
// deterministic replay (`build_log`) that consumes only the input and the
// drawn values, so the same function reproduces the log bit-exactly from
// the log's own data; `verify` exploits that to audit a log without
// re-running any seeded search.  `emit_diagram` renders fiber trees and
// resolution fans from a log in DOT or SVG form.

#include <sncres/belyi.hpp>
#include <sncres/projection.hpp>
#include <sncres/stabilize.hpp>
#include <sncres/toric.hpp>

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sncres {

using Json = nlohmann::ordered_json;

// --- configuration and input -------------------------------------------------

struct PipelineConfig {
    std::uint64_t seed = 0;
    int degree_cap = 512;  // cap on the ruled-surface twist during reduction
    int retry_cap = 32;    // redraws of a generic translation per step
    // Default truncation order for jet expansions.  The stages compute the
    // exact truncation they need pointwise; the configured default is
    // recorded in the log header so a replay sees the full configuration.
    int truncation = 24;
};

struct PipelineInput {
    char mode = 'B';  // 'A': projective hypersurface; 'B': fibered branch data
    // mode A
    QPoly F;
    std::vector<QPoly> D;
    // mode B
    int twist_e = 0;
    std::vector<BinForm> phis;
    std::vector<Section> marked;
    // both modes
    std::vector<BranchingDatum> overrides;
    std::optional<std::uint64_t> seed;  // seed carried by the input file, if any
};

// Values produced by the seeded searches.  Everything downstream of these is
// a deterministic function of (input, config, draws).
struct ChosenDraws {
    std::vector<Int> center;      // mode A: 4 projective coordinates
    std::vector<Int> base_point;  // mode A: 3 projective coordinates
    std::vector<BinForm> translations;  // one accepted translation per step
};

// --- resolution log ------------------------------------------------------------

struct ResolutionLog {
    std::vector<std::string> lines;  // one canonical JSON object per line

    std::string to_text() const {
        std::string out;
        for (const auto& l : lines) {
            out += l;
            out += '\n';
        }
        return out;
    }

    static ResolutionLog from_text(const std::string& text) {
        ResolutionLog log;
        std::string cur;
        for (char c : text) {
            if (c == '\n') {
                log.lines.push_back(cur);
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!cur.empty()) log.lines.push_back(cur);
        if (log.lines.empty()) throw input_error("log: empty");
        return log;
    }

    Json entry(std::size_t i) const {
        if (i >= lines.size()) throw input_error("log: entry index out of range");
        Json j = Json::parse(lines[i], nullptr, false);
        if (j.is_discarded())
            throw input_error("log: line " + std::to_string(i + 1) + " is not valid JSON");
        return j;
    }

    // Final verdict as recorded; false on anything malformed.
    bool pass() const {
        if (lines.empty()) return false;
        Json j = Json::parse(lines.back(), nullptr, false);
        return j.is_object() && j.value("entry", "") == "result" && j.contains("pass") &&
               j["pass"].is_boolean() && j["pass"].get<bool>();
    }
};

// --- stage error prefixes ------------------------------------------------------

namespace detail {

[[noreturn]] inline void rethrow_with_stage(const std::string& stage) {
    auto prefixed = [&](const char* what) {
        std::string msg(what);
        std::string pre = stage + ": ";
        return msg.compare(0, std::min(pre.size(), msg.size()), pre) == 0 ? msg : pre + msg;
    };
    try {
        throw;
    } catch (const input_error& e) {
        throw input_error(prefixed(e.what()));
    } catch (const cap_error& e) {
        throw cap_error(prefixed(e.what()));
    } catch (const certificate_error& e) {
        throw certificate_error(prefixed(e.what()));
    } catch (const internal_error& e) {
        throw internal_error(prefixed(e.what()));
    }
}

}  // namespace detail

template <typename Fn>
auto with_stage(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (...) {
        detail::rethrow_with_stage(stage);
    }
}

// --- serialization helpers -----------------------------------------------------

namespace detail {

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

inline Json json_of_binform(const BinForm& f) {
    Json j;
    j["deg"] = f.deg;
    j["affine"] = f.affine_poly("t").to_string();
    return j;
}

inline Json json_of_divisor(const HorizontalDivisor& B) {
    Json j;
    j["twist"] = B.twist_e;
    Json arr = Json::array();
    for (const auto& p : B.phis) arr.push_back(json_of_binform(p));
    j["phis"] = arr;
    return j;
}

inline Json json_of_ints(const std::vector<Int>& v) {
    Json arr = Json::array();
    for (const auto& x : v) arr.push_back(x.get_str());
    return arr;
}

inline Json json_of_override(const BranchingDatum& d) {
    Json j;
    j["crossing"] = d.crossing;
    j["m"] = d.m;
    j["a"] = d.a;
    j["b"] = d.b;
    return j;
}

inline long long ll_of_json(const Json& j, const std::string& what, long long lo, long long hi) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw input_error(what + " must be an integer");
    long long v;
    if (j.is_number_unsigned()) {
        std::uint64_t u = j.get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(hi)) throw input_error(what + " out of range");
        v = static_cast<long long>(u);
    } else {
        v = j.get<long long>();
    }
    if (v < lo || v > hi) throw input_error(what + " out of range");
    return v;
}

inline std::uint64_t u64_of_json(const Json& j, const std::string& what) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::uint64_t>(j.get<long long>());
    throw input_error(what + " must be a nonnegative integer");
}

inline std::string string_of_json(const Json& j, const std::string& what) {
    if (!j.is_string()) throw input_error(what + " must be a string");
    return j.get<std::string>();
}

inline Int int_of_string(const std::string& s) {
    if (s.empty()) throw input_error("log: empty integer literal");
    try {
        return Int(s);
    } catch (const std::invalid_argument&) {
        throw input_error("log: bad integer literal '" + s + "'");
    }
}

inline std::vector<Int> ints_of_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw input_error(what + " must be an array");
    std::vector<Int> out;
    for (const auto& e : j) out.push_back(int_of_string(string_of_json(e, what)));
    return out;
}

inline BinForm binform_of_json(const Json& j, const std::string& what) {
    if (!j.is_object()) throw input_error(what + " must be an object");
    if (!j.contains("deg") || !j.contains("affine"))
        throw input_error(what + " must carry 'deg' and 'affine'");
    int deg = static_cast<int>(ll_of_json(j["deg"], what + " degree", 0, 1 << 20));
    QPoly p = parse_poly(string_of_json(j["affine"], what + " affine part"));
    return BinForm::from_affine(p, deg);
}

// Kind tag of a log line, for diagnostics; never throws.
inline std::string entry_kind(const std::string& line) {
    Json j = Json::parse(line, nullptr, false);
    if (!j.is_object() || !j.contains("entry") || !j["entry"].is_string()) return "unparseable";
    return j["entry"].get<std::string>();
}

struct StageSeeds {
    std::uint64_t center = 0;
    std::uint64_t base = 0;
    std::uint64_t belyi = 0;
};

// All stage randomness flows from one master generator; the derivation is
// fixed so a header seed determines every search seed.
inline StageSeeds derive_stage_seeds(std::uint64_t seed) {
    Rng master(seed);
    StageSeeds s;
    s.center = master.next_u64();
    s.base = master.next_u64();
    s.belyi = master.next_u64();
    return s;
}

}  // namespace detail

// --- input parsing --------------------------------------------------------------

namespace detail {

inline BranchingDatum override_of_json(const Json& j) {
    if (!j.is_object()) throw input_error("branching override must be an object");
    for (const char* key : {"crossing", "m", "a", "b"})
        if (!j.contains(key))
            throw input_error(std::string("branching override is missing '") + key + "'");
    BranchingDatum d;
    d.crossing = string_of_json(j["crossing"], "branching override crossing");
    if (d.crossing.empty()) throw input_error("branching override crossing must be nonempty");
    // Desk-scale bound: the cover-type computation enumerates O(m^2) lattice
    // residues, so unbounded exponents would turn a log entry into a denial
    // of service.
    d.m = ll_of_json(j["m"], "branching override m", 1, 4096);
    d.a = ll_of_json(j["a"], "branching override a", 0, 4096);
    d.b = ll_of_json(j["b"], "branching override b", 0, 4096);
    return d;
}

inline PipelineInput input_of_json(const Json& j) {
    return with_stage("input", [&]() -> PipelineInput {
        if (!j.is_object()) throw input_error("document must be a JSON object");
        if (!j.contains("mode")) throw input_error("missing 'mode'");
        std::string mode = string_of_json(j["mode"], "'mode'");
        if (mode != "A" && mode != "B") throw input_error("'mode' must be \"A\" or \"B\"");

        PipelineInput in;
        in.mode = mode[0];
        if (in.mode == 'A') {
            if (!j.contains("F")) throw input_error("mode A requires 'F'");
            in.F = parse_poly(string_of_json(j["F"], "'F'"));
            if (!in.F.is_homogeneous()) throw input_error("F not homogeneous");
            if (j.contains("D")) {
                if (!j["D"].is_array()) throw input_error("'D' must be an array");
                for (const auto& e : j["D"]) in.D.push_back(parse_poly(string_of_json(e, "'D' entry")));
            }
            make_hypersurface_input(in.F, in.D);  // full validation, result rebuilt later
        } else {
            if (!j.contains("twist_e")) throw input_error("mode B requires 'twist_e'");
            in.twist_e = static_cast<int>(ll_of_json(j["twist_e"], "'twist_e'", 0, 1 << 20));
            if (!j.contains("phis") || !j["phis"].is_array())
                throw input_error("mode B requires a 'phis' array");
            const auto& phis = j["phis"];
            if (phis.size() < 2) throw input_error("'phis' must define a positive fiber degree");
            for (std::size_t i = 0; i < phis.size(); ++i) {
                QPoly p = parse_poly(string_of_json(phis[i], "'phis' entry"));
                in.phis.push_back(
                    BinForm::from_affine(p, static_cast<int>(i) * in.twist_e));
            }
            make_horizontal_divisor(in.twist_e, in.phis);  // validation
            if (j.contains("marked_sections")) {
                if (!j["marked_sections"].is_array())
                    throw input_error("'marked_sections' must be an array");
                for (const auto& e : j["marked_sections"]) {
                    QPoly p = parse_poly(string_of_json(e, "'marked_sections' entry"));
                    in.marked.push_back(Section::finite(BinForm::from_affine(p, in.twist_e)));
                }
            }
        }
        if (j.contains("branching_overrides")) {
            if (!j["branching_overrides"].is_array())
                throw input_error("'branching_overrides' must be an array");
            for (const auto& e : j["branching_overrides"])
                in.overrides.push_back(override_of_json(e));
            for (std::size_t a = 0; a < in.overrides.size(); ++a)
                for (std::size_t b = a + 1; b < in.overrides.size(); ++b)
                    if (in.overrides[a].crossing == in.overrides[b].crossing)
                        throw input_error("duplicate branching override for crossing '" +
                                          in.overrides[a].crossing + "'");
        }
        if (j.contains("seed")) in.seed = u64_of_json(j["seed"], "'seed'");
        return in;
    });
}

// The canonical input entry: the mathematical content re-serialized from the
// parsed values.  The seed is configuration, not input, and lives in the
// header; the input hash covers exactly this line.
inline Json canonical_input_json(const PipelineInput& in) {
    Json j;
    j["entry"] = "input";
    j["mode"] = in.mode == 'A' ? "A" : "B";
    if (in.mode == 'A') {
        j["F"] = in.F.to_string();
        Json d = Json::array();
        for (const auto& q : in.D) d.push_back(q.to_string());
        j["D"] = d;
    } else {
        j["twist_e"] = in.twist_e;
        Json p = Json::array();
        for (const auto& f : in.phis) p.push_back(f.affine_poly("t").to_string());
        j["phis"] = p;
        Json m = Json::array();
        for (const auto& s : in.marked) m.push_back(s.form.affine_poly("t").to_string());
        j["marked_sections"] = m;
    }
    Json ov = Json::array();
    for (const auto& o : in.overrides) ov.push_back(json_of_override(o));
    j["branching_overrides"] = ov;
    return j;
}

}  // namespace detail

inline PipelineInput parse_input(const std::string& json_text) {
    Json j = Json::parse(json_text, nullptr, false);
    if (j.is_discarded()) throw input_error("input: malformed JSON");
    return detail::input_of_json(j);
}

// --- deterministic log construction ----------------------------------------------

// The fiberwise-reduction state replayed by build_log, exposed so `run` can
// compare it against the generating BelyiTrace (two independently maintained
// routes to the same data).
struct ReplayArtifacts {
    RuledSurface final_surface;
    std::vector<BelyiStep> steps;
    std::vector<Section> final_sections;  // pairwise distinct; last entry infinity
};

// Deterministic function of (input, config, draws): executes the pipeline
// with every seeded choice replaced by the recorded draw and emits the
// canonical log.  `run` calls it after the searches; `verify` calls it with
// the draws parsed back out of the log under audit.
inline ResolutionLog build_log(const PipelineInput& in, const PipelineConfig& cfg,
                               const ChosenDraws& draws, ReplayArtifacts* artifacts = nullptr) {
    if (cfg.degree_cap < 1 || cfg.retry_cap < 1 || cfg.truncation < 1)
        throw input_error("input: caps must be positive");
    const detail::StageSeeds seeds = detail::derive_stage_seeds(cfg.seed);
    const bool mode_a = in.mode == 'A';

    ResolutionLog log;
    const std::string input_text = detail::canonical_input_json(in).dump();
    {
        Json h;
        h["entry"] = "header";
        h["tool"] = "sncres";
        h["format"] = 1;
        h["mode"] = mode_a ? "A" : "B";
        h["seed"] = cfg.seed;
        h["input_hash"] = detail::hex64(fnv1a64(input_text));
        h["degree_cap"] = cfg.degree_cap;
        h["retry_cap"] = cfg.retry_cap;
        h["truncation"] = cfg.truncation;
        log.lines.push_back(h.dump());
    }
    log.lines.push_back(input_text);

    // --- stage 1: projection and base locus (mode A only) ----------------------
    HorizontalDivisor B;
    std::vector<Section> marked0;
    int cover_degree = 0;

    if (mode_a) {
        HypersurfaceInput hin =
            with_stage("input", [&] { return make_hypersurface_input(in.F, in.D); });
        ProjectedCover pc = with_stage("projection", [&] {
            if (draws.center.size() != 4)
                throw certificate_error("replayed center must have 4 coordinates");
            return project_from_center(hin, draws.center);
        });
        {
            Json j;
            j["entry"] = "projection";
            j["seed"] = seeds.center;
            j["center"] = detail::json_of_ints(pc.center_q);
            j["degree"] = pc.degree_k;
            j["cover"] = pc.G.to_string();
            j["branch"] = pc.Delta.to_string();
            j["image_line"] = pc.image_of_H.to_string();
            log.lines.push_back(j.dump());
        }
        cover_degree = pc.degree_k;

        VerifiedBasePoint vbp = with_stage("base point", [&]() -> VerifiedBasePoint {
            if (draws.base_point.size() != 3)
                throw certificate_error("replayed point must have 3 coordinates");
            std::vector<Int> o = draws.base_point;
            detail::make_primitive_vector(o);
            std::map<std::string, Rat> at;
            for (std::size_t i = 0; i < 3; ++i) at[kPlaneVars[i]] = Rat(o[i]);
            if (pc.Delta.evaluate(at) == 0)
                throw certificate_error("branch curve passes through the replayed point");
            if (pc.image_of_H.evaluate(at) == 0)
                throw certificate_error("hyperplane image passes through the replayed point");
            std::map<std::string, QPoly> fix;
            for (std::size_t i = 0; i < 3; ++i) fix[kPlaneVars[i]] = QPoly(Rat(o[i]));
            QPoly fiber = pc.G.substitute(fix);
            if (fiber.degree("w") != pc.degree_k)
                throw certificate_error("fiber polynomial degree mismatch");
            QPoly d = discriminant(fiber, "w");
            if (d.is_zero() || !d.is_constant() || d.constant_value() == 0)
                throw certificate_error("fiber discriminant vanishes at the replayed point");
            return VerifiedBasePoint{std::move(o), false, std::move(fiber)};
        });
        {
            Json j;
            j["entry"] = "base_point";
            j["seed"] = seeds.base;
            j["point"] = detail::json_of_ints(vbp.o);
            j["fiber"] = vbp.fiber_polynomial.to_string();
            j["note"] =
                "line screens are search-time certificates; irreducibility certified over Q only";
            log.lines.push_back(j.dump());
        }

        BlownUpBase bb = with_stage("blow-up", [&] { return blow_up_base(pc, vbp); });
        {
            Json j;
            j["entry"] = "blow_up";
            j["twist"] = bb.surface.twist_e;
            j["branch_divisor"] = detail::json_of_divisor(bb.B1);
            Json m = Json::array();
            for (const auto& s : bb.marked) m.push_back(detail::json_of_binform(s.form));
            j["marked"] = m;
            log.lines.push_back(j.dump());
        }
        B = std::move(bb.B1);
        marked0 = std::move(bb.marked);
    } else {
        B = with_stage("input", [&] { return make_horizontal_divisor(in.twist_e, in.phis); });
        marked0 = in.marked;
    }

    // --- stage 2: fiberwise reduction, replaying the logged translations -------
    std::vector<Section> tracked = marked0;
    detail::dedupe_sections(tracked);
    const std::size_t n_marked = tracked.size();
    ReplayArtifacts rep;
    std::vector<Section> splits;
    with_stage("belyi", [&] {
        for (const auto& s : tracked) {
            if (s.infinite) throw input_error("marked sections must be finite");
            if (s.form.deg != B.twist_e)
                throw input_error("section: form degree must equal the surface twist");
        }
        HorizontalDivisor residual = B;
        int twist = B.twist_e;
        const int N = B.fiber_degree();
        if (N < 1) throw input_error("branch divisor must have positive fiber degree");
        std::size_t used = 0;
        for (;;) {
            auto sp = split_into_sections(residual);
            if (sp) {
                splits = std::move(*sp);
                break;
            }
            if (static_cast<int>(rep.steps.size()) >= N - 1)
                throw internal_error("belyi: step bound exceeded");
            const int d = residual.fiber_degree();
            const long long target = static_cast<long long>(twist) * d;
            if (target > cfg.degree_cap) throw cap_error("degree guard exceeded");
            if (used >= draws.translations.size())
                throw certificate_error("log is missing a fiberwise translation");
            BinForm sig = draws.translations[used++];
            if (sig.deg != static_cast<int>(target))
                throw certificate_error("replayed translation has the wrong twist");
            FiberwiseMap m = build_pB(residual);
            m.phis.back() = m.phis.back() + sig;
            std::vector<Section> next_tracked;
            for (const auto& s : tracked) next_tracked.push_back(push_section(m, s));
            next_tracked.push_back(Section::finite(sig));
            if (!certify_distinct_sections(next_tracked))
                throw certificate_error("tracked sections are not pairwise distinct");
            HorizontalDivisor next = branch_image(m);
            if (next.fiber_degree() != d - 1)
                throw internal_error("belyi: branch image degree mismatch");
            tracked = std::move(next_tracked);
            residual = std::move(next);
            twist = static_cast<int>(target);
            rep.steps.push_back(BelyiStep{m, Section::finite(sig), tracked, residual});
            Json j;
            j["entry"] = "belyi_step";
            j["index"] = rep.steps.size() - 1;
            j["source_twist"] = m.source_twist;
            Json phis = Json::array();
            for (const auto& p : m.phis) phis.push_back(detail::json_of_binform(p));
            j["map"] = phis;
            j["translation"] = detail::json_of_binform(sig);
            Json tr = Json::array();
            for (const auto& s : tracked) tr.push_back(detail::json_of_binform(s.form));
            j["tracked_after"] = tr;
            j["residual_after"] = detail::json_of_divisor(residual);
            log.lines.push_back(j.dump());
        }
        if (used != draws.translations.size())
            throw certificate_error("log carries unused fiberwise translations");
        rep.final_surface = RuledSurface{twist};
    });

    // --- final section configuration, named by provenance ----------------------
    // D*: images of the initially marked sections (not part of the branch
    // divisor).  T*: the per-step translations, i.e. images of the previous
    // residual branch divisor.  B*: the sections the final residual divisor
    // splits into.  Minf: the infinity section (disjoint from every finite
    // section, so it enters no crossing cluster).  Sections that coincide are
    // merged with concatenated names.
    struct NamedSection {
        std::string name;
        Section s;
        bool branch = false;
    };
    std::vector<NamedSection> named;
    auto add_named = [&](const std::string& nm, const Section& s, bool branch) {
        for (auto& k : named)
            if (k.s == s) {
                k.name += "+" + nm;
                k.branch = k.branch || branch;
                return;
            }
        named.push_back({nm, s, branch});
    };
    for (std::size_t i = 0; i < tracked.size(); ++i) {
        if (i < n_marked)
            add_named("D" + std::to_string(i), tracked[i], false);
        else
            add_named("T" + std::to_string(i - n_marked + 1), tracked[i], true);
    }
    for (std::size_t jx = 0; jx < splits.size(); ++jx)
        add_named("B" + std::to_string(jx), splits[jx], true);
    named.push_back({"Minf", Section::at_infinity(), false});

    std::vector<Section> all_sections;
    std::vector<std::string> all_names;
    std::vector<bool> is_branch;
    for (const auto& k : named) {
        all_sections.push_back(k.s);
        all_names.push_back(k.name);
        is_branch.push_back(k.branch);
    }
    rep.final_sections = all_sections;
    {
        Json j;
        j["entry"] = "sections";
        j["twist"] = rep.final_surface.twist_e;
        Json arr = Json::array();
        for (const auto& k : named) {
            Json e;
            e["name"] = k.name;
            e["branch"] = k.branch;
            if (k.s.infinite) {
                e["infinite"] = true;
            } else {
                e["deg"] = k.s.form.deg;
                e["affine"] = k.s.form.affine_poly("t").to_string();
            }
            arr.push_back(e);
        }
        j["list"] = arr;
        log.lines.push_back(j.dump());
    }
    with_stage("belyi", [&] {
        if (!certify_distinct_sections(all_sections))
            throw certificate_error("distinctness certificate failed");
    });
    {
        Json j;
        j["entry"] = "certificate";
        j["kind"] = "distinctness";
        j["pass"] = true;
        j["sections"] = all_sections.size();
        log.lines.push_back(j.dump());
    }

    // --- stage 3: stabilization --------------------------------------------------
    StableFamily fam = with_stage("stabilization", [&] {
        return smooth_total_space(stabilize(rep.final_surface, all_sections, all_names));
    });
    {
        Json j;
        j["entry"] = "stabilization";
        j["points"] = fam.locus.points.size();
        Json sch = Json::array();
        for (const auto& s : fam.blowup_schedule) sch.push_back(s);
        j["schedule"] = sch;
        log.lines.push_back(j.dump());
    }
    for (std::size_t i = 0; i < fam.locus.points.size(); ++i) {
        const auto& zp = fam.locus.points[i];
        Json j;
        j["entry"] = "fiber_tree";
        j["fiber"] = zp.at.to_string();
        j["galois_multiplicity"] = zp.galois_multiplicity;
        Json pairs = Json::array();
        for (const auto& pr : zp.pairs) {
            Json p = Json::array();
            p.push_back(fam.section_names[pr.i]);
            p.push_back(fam.section_names[pr.j]);
            p.push_back(pr.contact);
            pairs.push_back(p);
        }
        j["pairs"] = pairs;
        Json verts = Json::array();
        for (const auto& v : fam.special_fibers[i].vertices) {
            Json e;
            e["parent"] = v.parent;
            e["depth"] = v.depth;
            Json app = Json::array();
            for (const auto& a : v.approach) app.push_back(a.to_string());
            e["approach"] = app;
            Json marks = Json::array();
            for (const auto& m : v.marks) {
                Json mk;
                mk["name"] = m.name;
                mk["at"] = m.at_infinity ? std::string("inf") : m.position.to_string();
                marks.push_back(mk);
            }
            e["marks"] = marks;
            verts.push_back(e);
        }
        j["tree"] = Json{{"vertices", verts}};
        log.lines.push_back(j.dump());
    }

    // --- stage 4: toric resolution of the local cover models ----------------------
    // Branching data carries cover semantics only in mode A, where the
    // upstream object is an honest cyclic cover of the base; there the
    // transverse branch-branch crossings produce the double-point model
    // z^2 = u v.  In mode B the divisor is abstract branch data, so only
    // explicit overrides are resolved.
    std::vector<BranchingDatum> data = with_stage("toric", [&] {
        std::vector<BranchingDatum> out;
        if (mode_a) {
            out = branching_data_from_family(fam, 2, is_branch, in.overrides);
        } else {
            out = in.overrides;
            std::sort(out.begin(), out.end(), [](const BranchingDatum& x, const BranchingDatum& y) {
                return x.crossing < y.crossing;
            });
        }
        return out;
    });
    auto from_override = [&](const BranchingDatum& d) {
        for (const auto& o : in.overrides)
            if (o.crossing == d.crossing) return true;
        return false;
    };
    bool any_derived = false;
    for (const auto& d : data) {
        const bool ov = from_override(d);
        any_derived = any_derived || !ov;
        Json j;
        j["entry"] = "branch_datum";
        j["crossing"] = d.crossing;
        j["m"] = d.m;
        j["a"] = d.a;
        j["b"] = d.b;
        j["origin"] = ov ? "override" : "derived";
        log.lines.push_back(j.dump());
    }
    ResolutionManifest man = with_stage("toric", [&] { return assemble_resolution(fam, data); });
    if (mode_a && cover_degree > 2 && any_derived)
        man.certificate.notes.push_back(
            "branch crossings use the double-point model z^2 = u v; coincident simple branch "
            "transpositions assumed; supply branching overrides to refine");
    long long cones = 0;
    for (const auto& ch : man.charts) {
        Json j;
        j["entry"] = "chain";
        j["crossing"] = ch.datum.crossing;
        j["type"] = Json::array({ch.type.m, ch.type.q});
        Json chain = Json::array();
        for (long long b : ch.chain) chain.push_back(b);
        j["chain"] = chain;
        Json fan = Json::array();
        for (const auto& r : ch.fan.rays) fan.push_back(Json::array({r[0], r[1]}));
        j["fan"] = fan;
        log.lines.push_back(j.dump());
        if (!ch.fan.rays.empty()) cones += static_cast<long long>(ch.fan.rays.size()) - 1;
    }
    {
        bool uni = true;
        for (const auto& v : man.certificate.violations)
            if (v.kind == "non-unimodular cone") uni = false;
        Json j;
        j["entry"] = "certificate";
        j["kind"] = "unimodularity";
        j["pass"] = uni;
        j["cones"] = cones;
        log.lines.push_back(j.dump());
    }
    {
        Json j;
        j["entry"] = "manifest";
        Json comp = Json::array();
        for (const auto& c : man.components) comp.push_back(c);
        j["components"] = comp;
        Json steps = Json::array();
        for (const auto& s : man.steps) steps.push_back(s);
        j["steps"] = steps;
        log.lines.push_back(j.dump());
    }
    {
        Json j;
        j["entry"] = "certificate";
        j["kind"] = "snc";
        j["pass"] = man.certificate.pass;
        Json viol = Json::array();
        for (const auto& v : man.certificate.violations)
            viol.push_back(Json{{"kind", v.kind}, {"detail", v.detail}});
        j["violations"] = viol;
        Json notes = Json::array();
        for (const auto& n : man.certificate.notes) notes.push_back(n);
        j["notes"] = notes;
        log.lines.push_back(j.dump());
    }
    {
        Json j;
        j["entry"] = "result";
        j["pass"] = man.certificate.pass;
        log.lines.push_back(j.dump());
    }

    if (artifacts) *artifacts = std::move(rep);
    return log;
}

// --- run --------------------------------------------------------------------------

namespace detail {

// The generating run and the log replay maintain the reduction state through
// different code paths; any disagreement is a defect, never a tolerance.
inline void check_replay_drift(const BelyiTrace& trace, const ReplayArtifacts& rep) {
    bool ok = trace.final_surface.twist_e == rep.final_surface.twist_e &&
              trace.steps.size() == rep.steps.size() &&
              trace.final_sections == rep.final_sections;
    for (std::size_t i = 0; ok && i < trace.steps.size(); ++i) {
        const auto& a = trace.steps[i];
        const auto& b = rep.steps[i];
        ok = a.map.source_twist == b.map.source_twist && a.map.phis == b.map.phis &&
             a.translation == b.translation && a.marked_after == b.marked_after &&
             a.residual_after == b.residual_after;
    }
    if (!ok) throw internal_error("pipeline: replay diverged from the generating run");
}

}  // namespace detail

inline ResolutionLog run(const PipelineInput& in, const PipelineConfig& cfg) {
    if (cfg.degree_cap < 1 || cfg.retry_cap < 1 || cfg.truncation < 1)
        throw input_error("input: caps must be positive");
    const detail::StageSeeds seeds = detail::derive_stage_seeds(cfg.seed);
    const BelyiOptions opts{cfg.degree_cap, cfg.retry_cap};

    ChosenDraws draws;
    BelyiTrace trace;
    if (in.mode == 'A') {
        HypersurfaceInput hin =
            with_stage("input", [&] { return make_hypersurface_input(in.F, in.D); });
        ProjectedCover pc =
            with_stage("projection", [&] { return choose_projection_center(hin, seeds.center); });
        VerifiedBasePoint vbp =
            with_stage("base point", [&] { return choose_base_point(pc, seeds.base); });
        BlownUpBase bb = with_stage("blow-up", [&] { return blow_up_base(pc, vbp); });
        trace = with_stage(
            "belyi", [&] { return belyi_reduce(bb.B1, bb.marked, seeds.belyi, opts); });
        draws.center = pc.center_q;
        draws.base_point = vbp.o;
    } else {
        HorizontalDivisor B =
            with_stage("input", [&] { return make_horizontal_divisor(in.twist_e, in.phis); });
        trace = with_stage("belyi", [&] { return belyi_reduce(B, in.marked, seeds.belyi, opts); });
    }
    for (const auto& st : trace.steps) draws.translations.push_back(st.translation.form);

    ReplayArtifacts rep;
    ResolutionLog log = build_log(in, cfg, draws, &rep);
    detail::check_replay_drift(trace, rep);
    return log;
}

// --- verify -------------------------------------------------------------------------

struct VerifyReport {
    bool pass = false;        // consistent and the final certificate records a pass
    bool consistent = false;  // every line reproduced bit-exactly from the logged draws
    long long divergence = -1;  // 0-based index of the first divergent line, -1 if none
    std::string detail;
};

// Audits a log by replaying it against itself: the header and input lines fix
// the configuration, the draw-bearing lines fix the seeded choices, and
// everything else must reproduce bit-exactly.  No seeded search is re-run.
inline VerifyReport verify(const ResolutionLog& log) {
    VerifyReport report;
    ResolutionLog rebuilt;
    try {
        if (log.lines.size() < 2) throw input_error("log: too short to verify");
        Json header = log.entry(0);
        if (!header.is_object() || header.value("entry", "") != "header")
            throw input_error("log: first line is not a header");
        if (!header.contains("format") ||
            detail::ll_of_json(header["format"], "log format", 1, 1) != 1)
            throw input_error("log: unsupported format");
        PipelineConfig cfg;
        if (!header.contains("seed")) throw input_error("log: header is missing 'seed'");
        cfg.seed = detail::u64_of_json(header["seed"], "log seed");
        cfg.degree_cap = static_cast<int>(
            detail::ll_of_json(header.value("degree_cap", Json(0)), "log degree_cap", 1, 1 << 30));
        cfg.retry_cap = static_cast<int>(
            detail::ll_of_json(header.value("retry_cap", Json(0)), "log retry_cap", 1, 1 << 30));
        cfg.truncation = static_cast<int>(
            detail::ll_of_json(header.value("truncation", Json(0)), "log truncation", 1, 1 << 30));

        Json jin = log.entry(1);
        if (!jin.is_object() || jin.value("entry", "") != "input")
            throw input_error("log: second line is not the input");
        PipelineInput in = detail::input_of_json(jin);

        ChosenDraws draws;
        for (std::size_t i = 2; i < log.lines.size(); ++i) {
            Json e = Json::parse(log.lines[i], nullptr, false);
            if (!e.is_object() || !e.contains("entry") || !e["entry"].is_string())
                continue;  // the line diff reports malformed entries
            const std::string kind = e["entry"].get<std::string>();
            if (kind == "projection" && e.contains("center"))
                draws.center = detail::ints_of_json(e["center"], "logged center");
            else if (kind == "base_point" && e.contains("point"))
                draws.base_point = detail::ints_of_json(e["point"], "logged point");
            else if (kind == "belyi_step" && e.contains("translation"))
                draws.translations.push_back(
                    detail::binform_of_json(e["translation"], "logged translation"));
        }
        rebuilt = build_log(in, cfg, draws, nullptr);
    } catch (const std::exception& e) {
        report.detail = std::string("replay error: ") + e.what();
        return report;
    }

    const std::size_t n = std::min(log.lines.size(), rebuilt.lines.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (log.lines[i] != rebuilt.lines[i]) {
            report.divergence = static_cast<long long>(i);
            report.detail = "first divergent entry at line " + std::to_string(i + 1) +
                            " (logged: " + detail::entry_kind(log.lines[i]) +
                            ", replayed: " + detail::entry_kind(rebuilt.lines[i]) + ")";
            return report;
        }
    }
    if (log.lines.size() != rebuilt.lines.size()) {
        report.divergence = static_cast<long long>(n);
        report.detail = log.lines.size() > rebuilt.lines.size()
                            ? "log carries entries beyond the replayed run"
                            : "log is truncated before the replayed run ends";
        return report;
    }
    report.consistent = true;
    report.pass = log.pass();
    report.detail = report.pass ? "all entries reproduced; certificates pass"
                                : "all entries reproduced; the final certificate records a failure";
    return report;
}

// --- diagram emission -----------------------------------------------------------------

struct EmitTargets {
    std::vector<std::string> trees;  // fiber identifiers, in log order
    std::vector<std::string> fans;   // crossing identifiers, in log order
};

inline EmitTargets emit_targets(const ResolutionLog& log) {
    EmitTargets t;
    for (std::size_t i = 0; i < log.lines.size(); ++i) {
        Json e = log.entry(i);
        if (!e.is_object() || !e.contains("entry") || !e["entry"].is_string()) continue;
        const std::string kind = e["entry"].get<std::string>();
        if (kind == "fiber_tree" && e.contains("fiber") && e["fiber"].is_string())
            t.trees.push_back(e["fiber"].get<std::string>());
        else if (kind == "chain" && e.contains("crossing") && e["crossing"].is_string())
            t.fans.push_back(e["crossing"].get<std::string>());
    }
    return t;
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Vertex layout shared by the tree renderers: components as boxes indexed in
// log order, finite marks as leaf nodes hanging off their component, an
// infinity mark as an annotation on its component.
struct TreeNodeView {
    int parent = -1;
    int depth = 0;
    bool has_inf = false;
    std::vector<std::pair<std::string, std::string>> finite_marks;  // (name, position)
};

inline std::vector<TreeNodeView> tree_views(const Json& tree_entry) {
    if (!tree_entry.contains("tree") || !tree_entry["tree"].is_object() ||
        !tree_entry["tree"].contains("vertices") || !tree_entry["tree"]["vertices"].is_array())
        throw input_error("emit: fiber tree entry is malformed");
    std::vector<TreeNodeView> views;
    for (const auto& v : tree_entry["tree"]["vertices"]) {
        TreeNodeView tv;
        tv.parent = static_cast<int>(ll_of_json(v.value("parent", Json(-1)), "tree parent",
                                                -1, 1 << 20));
        tv.depth =
            static_cast<int>(ll_of_json(v.value("depth", Json(0)), "tree depth", 0, 1 << 20));
        if (v.contains("marks") && v["marks"].is_array())
            for (const auto& m : v["marks"]) {
                std::string nm = m.value("name", "?");
                std::string at = m.value("at", "?");
                if (at == "inf")
                    tv.has_inf = true;
                else
                    tv.finite_marks.emplace_back(nm, at);
            }
        views.push_back(std::move(tv));
    }
    if (views.empty()) throw input_error("emit: fiber tree entry has no vertices");
    return views;
}

inline std::string dot_tree(const Json& e) {
    const std::string fiber = e.value("fiber", "?");
    const auto views = tree_views(e);
    std::string out = "digraph fiber_tree {\n";
    out += "  label=\"fiber " + dot_escape(fiber) + "\";\n";
    out += "  rankdir=TB;\n";
    for (std::size_t v = 0; v < views.size(); ++v) {
        std::string label = "v" + std::to_string(v) + " d=" + std::to_string(views[v].depth);
        if (views[v].has_inf) label += " [inf]";
        out += "  c" + std::to_string(v) + " [shape=box, label=\"" + dot_escape(label) + "\"];\n";
    }
    for (std::size_t v = 0; v < views.size(); ++v)
        if (views[v].parent >= 0)
            out += "  c" + std::to_string(views[v].parent) + " -> c" + std::to_string(v) + ";\n";
    int mark_id = 0;
    for (std::size_t v = 0; v < views.size(); ++v)
        for (const auto& [nm, at] : views[v].finite_marks) {
            out += "  m" + std::to_string(mark_id) + " [shape=ellipse, label=\"" +
                   dot_escape(nm + " @ " + at) + "\"];\n";
            out += "  c" + std::to_string(v) + " -> m" + std::to_string(mark_id) + ";\n";
            ++mark_id;
        }
    out += "}\n";
    return out;
}

inline std::string svg_tree(const Json& e) {
    const std::string fiber = e.value("fiber", "?");
    const auto views = tree_views(e);
    // Grid layout: depth picks the row, order within a depth picks the column.
    std::vector<int> col(views.size(), 0);
    std::map<int, int> row_fill;
    int max_depth = 0, max_col = 0;
    for (std::size_t v = 0; v < views.size(); ++v) {
        col[v] = row_fill[views[v].depth]++;
        max_depth = std::max(max_depth, views[v].depth);
        max_col = std::max(max_col, col[v]);
    }
    auto x_of = [&](std::size_t v) { return 30 + col[v] * 170; };
    auto y_of = [&](std::size_t v) { return 30 + views[v].depth * 110; };
    const int width = 30 + (max_col + 1) * 170 + 60;
    const int height = 30 + (max_depth + 1) * 110 + 80;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
    out += "<text x=\"10\" y=\"16\" font-size=\"13\">fiber " + xml_escape(fiber) + "</text>\n";
    for (std::size_t v = 0; v < views.size(); ++v)
        if (views[v].parent >= 0) {
            std::size_t p = static_cast<std::size_t>(views[v].parent);
            out += "<line x1=\"" + std::to_string(x_of(p) + 60) + "\" y1=\"" +
                   std::to_string(y_of(p) + 24) + "\" x2=\"" + std::to_string(x_of(v) + 60) +
                   "\" y2=\"" + std::to_string(y_of(v)) + "\" stroke=\"gray\"/>\n";
        }
    for (std::size_t v = 0; v < views.size(); ++v) {
        const int x = x_of(v), y = y_of(v);
        out += "<rect x=\"" + std::to_string(x) + "\" y=\"" + std::to_string(y) +
               "\" width=\"120\" height=\"24\" fill=\"none\" stroke=\"black\"/>\n";
        std::string label = "v" + std::to_string(v) + " d=" + std::to_string(views[v].depth);
        if (views[v].has_inf) label += " [inf]";
        out += "<text x=\"" + std::to_string(x + 6) + "\" y=\"" + std::to_string(y + 16) +
               "\" font-size=\"12\">" + xml_escape(label) + "</text>\n";
        int k = 0;
        for (const auto& [nm, at] : views[v].finite_marks) {
            out += "<text x=\"" + std::to_string(x + 6) + "\" y=\"" +
                   std::to_string(y + 40 + k * 15) + "\" font-size=\"11\">" +
                   xml_escape(nm + " @ " + at) + "</text>\n";
            ++k;
        }
    }
    out += "</svg>\n";
    return out;
}

inline std::vector<std::array<long long, 2>> fan_rays(const Json& e) {
    if (!e.contains("fan") || !e["fan"].is_array())
        throw input_error("emit: chain entry is malformed");
    std::vector<std::array<long long, 2>> rays;
    for (const auto& r : e["fan"]) {
        if (!r.is_array() || r.size() != 2)
            throw input_error("emit: chain entry carries a malformed ray");
        rays.push_back({ll_of_json(r[0], "ray coordinate", -(1ll << 40), 1ll << 40),
                        ll_of_json(r[1], "ray coordinate", -(1ll << 40), 1ll << 40)});
    }
    if (rays.empty()) throw input_error("emit: chain entry has no rays");
    return rays;
}

inline std::string dot_fan(const Json& e) {
    const std::string crossing = e.value("crossing", "?");
    const auto rays = fan_rays(e);
    std::string out = "graph fan {\n";
    out += "  label=\"crossing " + dot_escape(crossing) + "\";\n";
    out += "  rankdir=LR;\n";
    for (std::size_t i = 0; i < rays.size(); ++i)
        out += "  r" + std::to_string(i) + " [shape=plaintext, label=\"(" +
               std::to_string(rays[i][0]) + "," + std::to_string(rays[i][1]) + ")\"];\n";
    for (std::size_t i = 0; i + 1 < rays.size(); ++i)
        out += "  r" + std::to_string(i) + " -- r" + std::to_string(i + 1) + ";\n";
    out += "}\n";
    return out;
}

inline std::string svg_fan(const Json& e) {
    const std::string crossing = e.value("crossing", "?");
    const auto rays = fan_rays(e);
    const int ox = 40, oy = 260;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"420\" height=\"300\">\n";
    out += "<text x=\"10\" y=\"16\" font-size=\"13\">crossing " + xml_escape(crossing) +
           "</text>\n";
    for (std::size_t i = 0; i < rays.size(); ++i) {
        long long x = rays[i][0], y = rays[i][1];
        long long m = std::max(std::max(x < 0 ? -x : x, y < 0 ? -y : y), 1ll);
        long long ex = ox + x * 220 / m;
        long long ey = oy - y * 220 / m;
        out += "<line x1=\"" + std::to_string(ox) + "\" y1=\"" + std::to_string(oy) + "\" x2=\"" +
               std::to_string(ex) + "\" y2=\"" + std::to_string(ey) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + std::to_string(ex + 4) + "\" y=\"" + std::to_string(ey) +
               "\" font-size=\"11\">(" + std::to_string(x) + "," + std::to_string(y) +
               ")</text>\n";
    }
    out += "</svg>\n";
    return out;
}

inline std::optional<std::size_t> pick_target(const std::vector<std::string>& ids,
                                              const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return i;
    if (!id.empty() && id.size() <= 9 && id.find_first_not_of("0123456789") == std::string::npos) {
        std::size_t idx = static_cast<std::size_t>(std::stoull(id));
        if (idx < ids.size()) return idx;
    }
    return std::nullopt;
}

}  // namespace detail

// Renders one fiber tree ("tree") or one resolution fan ("fan") from the log.
// The id is the fiber/crossing identifier as logged, or a 0-based index.
inline std::string emit_diagram(const ResolutionLog& log, const std::string& kind,
                                const std::string& id, const std::string& format) {
    if (kind != "tree" && kind != "fan")
        throw input_error("emit: unknown target kind '" + kind + "'");
    if (format != "dot" && format != "svg")
        throw input_error("emit: unknown format '" + format + "'");
    const char* entry_kind = kind == "tree" ? "fiber_tree" : "chain";
    const char* id_key = kind == "tree" ? "fiber" : "crossing";
    std::vector<Json> entries;
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < log.lines.size(); ++i) {
        Json e = log.entry(i);
        if (e.is_object() && e.value("entry", "") == entry_kind) {
            entries.push_back(e);
            ids.push_back(e.value(id_key, ""));
        }
    }
    auto idx = detail::pick_target(ids, id);
    if (!idx) throw input_error("emit: target not found: " + id);
    const Json& e = entries[*idx];
    if (kind == "tree") return format == "dot" ? detail::dot_tree(e) : detail::svg_tree(e);
    return format == "dot" ? detail::dot_fan(e) : detail::svg_fan(e);
}

}  // namespace sncres
