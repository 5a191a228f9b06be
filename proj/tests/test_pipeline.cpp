#include <catch2/catch_amalgamated.hpp>

#include "sncres/pipeline.hpp"

#include <string>
#include <vector>

using namespace sncres;

namespace {

ResolutionLog run_text(const std::string& input_json) {
    PipelineInput in = parse_input(input_json);
    PipelineConfig cfg;
    cfg.seed = in.seed.value_or(0);
    return run(in, cfg);
}

std::vector<Json> entries_of_kind(const ResolutionLog& log, const std::string& kind) {
    std::vector<Json> out;
    for (std::size_t i = 0; i < log.lines.size(); ++i) {
        Json e = log.entry(i);
        if (e.value("entry", "") == kind) out.push_back(e);
    }
    return out;
}

long long line_index_of_kind(const ResolutionLog& log, const std::string& kind) {
    for (std::size_t i = 0; i < log.lines.size(); ++i)
        if (log.entry(i).value("entry", "") == kind) return static_cast<long long>(i);
    return -1;
}

std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos;
         pos = hay.find(needle, pos + needle.size()))
        ++count;
    return count;
}

std::string replace_first(std::string hay, const std::string& from, const std::string& to) {
    auto pos = hay.find(from);
    REQUIRE(pos != std::string::npos);
    hay.replace(pos, from.size(), to);
    return hay;
}

const char* kNodeInput =
    R"({"mode":"B","twist_e":1,"phis":["1","0","-t"],"marked_sections":["0"],"seed":0})";
const char* kCuspInput =
    R"({"mode":"B","twist_e":2,"phis":["1","0","-4*t^3"],"marked_sections":[],"seed":7})";
const char* kQuadricConeInput = R"({"mode":"A","F":"w^2 - x0*x1","D":["x2"],"seed":1})";

}  // namespace

TEST_CASE("mode B node: one reduction step, crossings at zero and infinity") {
    ResolutionLog log = run_text(kNodeInput);
    CHECK(log.pass());

    // The quadratic divisor needs exactly one fiberwise reduction step.
    auto steps = entries_of_kind(log, "belyi_step");
    REQUIRE(steps.size() == 1);
    CHECK(steps[0]["source_twist"] == 1);

    // The marked zero section is the critical section of the squaring map, so
    // its image coincides with the branch image the residual splits into.
    auto sections = entries_of_kind(log, "sections");
    REQUIRE(sections.size() == 1);
    CHECK(sections[0]["twist"] == 2);
    REQUIRE(sections[0]["list"].size() == 3);
    CHECK(sections[0]["list"][0]["name"] == "D0+B0");
    CHECK(sections[0]["list"][0]["branch"] == true);
    CHECK(sections[0]["list"][1]["name"] == "T1");
    CHECK(sections[0]["list"][2]["name"] == "Minf");

    // Two sections of a twist-2 surface meet twice: the difference of the two
    // finite sections here is t times a form, so once at t=0 and once at
    // t=inf.  Both crossings are recorded, each with contact one.
    auto trees = entries_of_kind(log, "fiber_tree");
    REQUIRE(trees.size() == 2);
    CHECK(trees[0]["fiber"] == "t=0");
    CHECK(trees[1]["fiber"] == "t=inf");
    for (const auto& tr : trees) {
        REQUIRE(tr["pairs"].size() == 1);
        CHECK(tr["pairs"][0][2] == 1);
        REQUIRE(tr["tree"]["vertices"].size() == 2);  // root + one inserted component
        CHECK(tr["tree"]["vertices"][1]["marks"].size() == 2);
    }

    // Transverse double points resolve without quotient charts.
    CHECK(entries_of_kind(log, "chain").empty());
    auto certs = entries_of_kind(log, "certificate");
    bool snc_pass = false;
    for (const auto& c : certs)
        if (c.value("kind", "") == "snc") snc_pass = c["pass"].get<bool>();
    CHECK(snc_pass);
}

TEST_CASE("mode A quadric cone: split branch conic and one quotient chart") {
    ResolutionLog log = run_text(kQuadricConeInput);
    CHECK(log.pass());

    // The branch conic of the double cover splits into two rational lines, so
    // no reduction step is needed.
    CHECK(entries_of_kind(log, "belyi_step").empty());
    auto proj = entries_of_kind(log, "projection");
    REQUIRE(proj.size() == 1);
    CHECK(proj[0]["degree"] == 2);

    // The two branch lines cross the image of the distinguished hyperplane at
    // the blown-up point; the double cover over that crossing is the ordinary
    // double point, type (2,1), resolved by a single (-2)-curve.
    auto chains = entries_of_kind(log, "chain");
    REQUIRE(chains.size() == 1);
    CHECK(chains[0]["type"] == Json::array({2, 1}));
    CHECK(chains[0]["chain"] == Json::array({2}));
    REQUIRE(chains[0]["fan"].size() == 3);

    auto data = entries_of_kind(log, "branch_datum");
    REQUIRE(data.size() == 1);
    CHECK(data[0]["m"] == 2);
    CHECK(data[0]["origin"] == "derived");

    VerifyReport rep = verify(log);
    CHECK(rep.consistent);
    CHECK(rep.pass);
}

TEST_CASE("input validation") {
    CHECK_THROWS_WITH(parse_input(R"({"mode":"A","F":"w^2 - x0","D":["x2"]})"),
                      "input: F not homogeneous");
    CHECK_THROWS_AS(parse_input(R"({"mode":"A","F":"w^2 - x0"})"), input_error);
    CHECK_THROWS_WITH(parse_input(R"({"mode":"C"})"), "input: 'mode' must be \"A\" or \"B\"");
    CHECK_THROWS_AS(parse_input("not json at all"), input_error);
    CHECK_THROWS_AS(parse_input(R"({"mode":"B","twist_e":1})"), input_error);
    CHECK_THROWS_AS(parse_input(R"({"mode":"B","twist_e":1,"phis":["1"]})"), input_error);
    CHECK_THROWS_AS(parse_input(R"({"mode":"B","twist_e":-1,"phis":["1","0"]})"), input_error);
    CHECK_THROWS_AS(
        parse_input(
            R"({"mode":"B","twist_e":1,"phis":["1","0"],"branching_overrides":[{"crossing":"x","m":0,"a":1,"b":1}]})"),
        input_error);
    CHECK_THROWS_AS(
        parse_input(
            R"({"mode":"B","twist_e":1,"phis":["1","0"],"branching_overrides":[{"crossing":"x","m":5000,"a":1,"b":1}]})"),
        input_error);
    CHECK_THROWS_WITH(
        parse_input(
            R"({"mode":"B","twist_e":1,"phis":["1","0"],"branching_overrides":[{"crossing":"x","m":2,"a":1,"b":1},{"crossing":"x","m":3,"a":1,"b":1}]})"),
        "input: duplicate branching override for crossing 'x'");
    CHECK_THROWS_AS(parse_input(R"({"mode":"B","twist_e":1,"phis":["1","0"],"seed":-3})"),
                    input_error);

    PipelineInput in = parse_input(kCuspInput);
    REQUIRE(in.seed.has_value());
    CHECK(*in.seed == 7);
    CHECK(in.twist_e == 2);
    CHECK(in.phis.size() == 3);
    CHECK(in.marked.empty());

    PipelineConfig bad;
    bad.degree_cap = 0;
    CHECK_THROWS_AS(run(in, bad), input_error);
}

TEST_CASE("degree cap stops runaway reduction as a resource error") {
    PipelineInput in = parse_input(kCuspInput);
    PipelineConfig cfg;
    cfg.seed = 7;
    cfg.degree_cap = 3;  // first step needs twist 2*2 = 4
    CHECK_THROWS_AS(run(in, cfg), cap_error);
    CHECK_THROWS_WITH(run(in, cfg), "belyi: degree guard exceeded");
}

TEST_CASE("same seed reproduces the log byte for byte") {
    PipelineInput in = parse_input(kCuspInput);
    PipelineConfig cfg;
    cfg.seed = 7;
    std::string a = run(in, cfg).to_text();
    std::string b = run(in, cfg).to_text();
    CHECK(a == b);
    cfg.seed = 8;
    CHECK(run(in, cfg).to_text() != a);
}

TEST_CASE("cusp run: reduction succeeds and the family is certified") {
    ResolutionLog log = run_text(kCuspInput);
    CHECK(log.pass());
    auto steps = entries_of_kind(log, "belyi_step");
    CHECK(steps.size() == 1);
    // Triple contact at t=0, simple contact at t=inf.
    auto trees = entries_of_kind(log, "fiber_tree");
    REQUIRE(trees.size() == 2);
    CHECK(trees[0]["pairs"][0][2] == 3);
    CHECK(trees[1]["pairs"][0][2] == 1);
    // The t=0 tree is a chain down to depth 3, filled in by the smoothing.
    CHECK(trees[0]["tree"]["vertices"].size() == 4);
    CHECK(entries_of_kind(log, "chain").empty());
    VerifyReport rep = verify(log);
    CHECK(rep.pass);
}

TEST_CASE("verify replays the log and flags tampering") {
    ResolutionLog log = run_text(kQuadricConeInput);
    const std::string text = log.to_text();

    SECTION("intact log verifies") {
        VerifyReport rep = verify(ResolutionLog::from_text(text));
        CHECK(rep.pass);
        CHECK(rep.consistent);
        CHECK(rep.divergence == -1);
    }

    SECTION("edited resolution chain is caught at its line") {
        std::string bad = replace_first(text, "\"chain\":[2]", "\"chain\":[3]");
        VerifyReport rep = verify(ResolutionLog::from_text(bad));
        CHECK_FALSE(rep.pass);
        CHECK_FALSE(rep.consistent);
        CHECK(rep.divergence == line_index_of_kind(log, "chain"));
    }

    SECTION("edited input invalidates the replay") {
        // The logged center and base point were screened against the original
        // hypersurface; replaying them against an edited one fails outright.
        std::string bad = replace_first(text, "w^2 - x0*x1", "w^2 - x0*x2");
        VerifyReport rep = verify(ResolutionLog::from_text(bad));
        CHECK_FALSE(rep.pass);
        CHECK(rep.detail.find("replay error") != std::string::npos);
    }

    SECTION("edited input that replays cleanly is caught by the header hash") {
        ResolutionLog cusp = run_text(kCuspInput);
        std::string bad = replace_first(cusp.to_text(), "-4*t^3", "-5*t^3");
        VerifyReport rep = verify(ResolutionLog::from_text(bad));
        CHECK_FALSE(rep.pass);
        CHECK(rep.divergence == 0);
    }

    SECTION("truncated log fails") {
        std::string bad = text.substr(0, text.rfind("{\"entry\":\"result\""));
        VerifyReport rep = verify(ResolutionLog::from_text(bad));
        CHECK_FALSE(rep.pass);
        CHECK(rep.detail.find("truncated") != std::string::npos);
    }

    SECTION("appended entries fail") {
        std::string bad = text + "{\"entry\":\"result\",\"pass\":true}\n";
        VerifyReport rep = verify(ResolutionLog::from_text(bad));
        CHECK_FALSE(rep.pass);
        CHECK(rep.detail.find("beyond") != std::string::npos);
    }

    SECTION("empty and header-less logs are replay errors") {
        CHECK_THROWS_WITH(ResolutionLog::from_text(""), "log: empty");
        VerifyReport rep = verify(ResolutionLog::from_text("{\"entry\":\"result\"}\n"));
        CHECK_FALSE(rep.pass);
        CHECK(rep.detail.find("replay error") != std::string::npos);
    }
}

TEST_CASE("verify flags a tampered drawn translation") {
    ResolutionLog log = run_text(kCuspInput);
    const std::string text = log.to_text();
    std::string bad = replace_first(
        text, "\"translation\":{\"deg\":4,\"affine\":\"-3*t^4 + 4*t - 1\"}",
        "\"translation\":{\"deg\":4,\"affine\":\"-3*t^4 + 4*t - 2\"}");
    VerifyReport rep = verify(ResolutionLog::from_text(bad));
    CHECK_FALSE(rep.pass);
    CHECK(rep.divergence == line_index_of_kind(log, "belyi_step"));
}

TEST_CASE("verify accepts an honest run that records a certificate failure") {
    // A tangent branch crossing has no transverse double point model, so the
    // derived branching data is refused; with an override of the wrong shape
    // the run still completes and the certificates decide.  Overrides are
    // trusted input here: the point is only that verify distinguishes
    // "consistent log" from "passing log"; an inconsistent edit of the result
    // line must stay caught.
    ResolutionLog log = run_text(kQuadricConeInput);
    std::string flipped =
        replace_first(log.to_text(), "{\"entry\":\"result\",\"pass\":true}",
                      "{\"entry\":\"result\",\"pass\":false}");
    VerifyReport rep = verify(ResolutionLog::from_text(flipped));
    CHECK_FALSE(rep.pass);
    CHECK(rep.divergence == line_index_of_kind(log, "result"));
}

TEST_CASE("branching overrides feed the quotient chart directly") {
    PipelineInput in = parse_input(
        R"({"mode":"B","twist_e":2,"phis":["1","0","-4*t^3"],"marked_sections":[],
            "branching_overrides":[{"crossing":"t=0#T1+B0","m":5,"a":1,"b":2}]})");
    PipelineConfig cfg;
    cfg.seed = 7;
    ResolutionLog log = run(in, cfg);
    auto data = entries_of_kind(log, "branch_datum");
    REQUIRE(data.size() == 1);
    CHECK(data[0]["origin"] == "override");
    auto chains = entries_of_kind(log, "chain");
    REQUIRE(chains.size() == 1);
    CHECK(chains[0]["type"] == Json::array({5, 3}));
    CHECK(chains[0]["chain"] == Json::array({2, 3}));
    REQUIRE(chains[0]["fan"].size() == 4);
    CHECK(verify(log).pass);
}

TEST_CASE("emit renders fiber trees with components as boxes and marks as leaves") {
    // Four sections 0, t, 2t, 1 of the twist-1 surface: the first three meet
    // at t=0 with pairwise contact one, the constant section passes by.
    ResolutionLog log = run_text(
        R"({"mode":"B","twist_e":1,"phis":["1","-3*t","2*t^2","0"],"marked_sections":["1"],"seed":0})");
    CHECK(entries_of_kind(log, "belyi_step").empty());

    std::string dot = emit_diagram(log, "tree", "t=0", "dot");
    CHECK(count_substr(dot, "shape=box") == 2);      // root + one inserted component
    CHECK(count_substr(dot, "shape=ellipse") == 4);  // every finite section marks the tree
    CHECK(count_substr(dot, "[inf]") == 1);          // infinity annotates the root
    CHECK(dot.find("B0 @ 0") != std::string::npos);
    CHECK(dot.find("B1 @ 1") != std::string::npos);
    CHECK(dot.find("B2 @ 2") != std::string::npos);
    CHECK(dot.find("D0 @ 1") != std::string::npos);

    std::string svg = emit_diagram(log, "tree", "t=0", "svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(count_substr(svg, "<rect") == 2);

    // Index fallback addresses the same target.
    CHECK(emit_diagram(log, "tree", "0", "dot") == dot);
}

TEST_CASE("emit renders resolution fans with one node per ray") {
    PipelineInput in = parse_input(
        R"({"mode":"B","twist_e":2,"phis":["1","0","-4*t^3"],"marked_sections":[],
            "branching_overrides":[{"crossing":"t=0#T1+B0","m":5,"a":1,"b":2}]})");
    PipelineConfig cfg;
    cfg.seed = 7;
    ResolutionLog log = run(in, cfg);
    std::string dot = emit_diagram(log, "fan", "t=0#T1+B0", "dot");
    CHECK(count_substr(dot, "shape=plaintext") == 4);
    CHECK(count_substr(dot, " -- ") == 3);
    CHECK(dot.find("(1,0)") != std::string::npos);
    CHECK(dot.find("(2,5)") != std::string::npos);
    std::string svg = emit_diagram(log, "fan", "t=0#T1+B0", "svg");
    CHECK(count_substr(svg, "<line") == 4);
}

TEST_CASE("emit targets and failure modes") {
    // Twist 0 with constant split sections: no collisions, no charts.
    ResolutionLog flat =
        run_text(R"({"mode":"B","twist_e":0,"phis":["1","0","-1"],"marked_sections":[]})");
    EmitTargets t = emit_targets(flat);
    CHECK(t.trees.empty());
    CHECK(t.fans.empty());

    ResolutionLog log = run_text(kNodeInput);
    EmitTargets nt = emit_targets(log);
    REQUIRE(nt.trees.size() == 2);
    CHECK(nt.trees[0] == "t=0");
    CHECK(nt.trees[1] == "t=inf");
    CHECK(nt.fans.empty());

    CHECK_THROWS_WITH(emit_diagram(log, "tree", "bogus", "dot"),
                      "emit: target not found: bogus");
    CHECK_THROWS_WITH(emit_diagram(log, "fan", "t=0", "dot"), "emit: target not found: t=0");
    CHECK_THROWS_AS(emit_diagram(log, "tree", "t=0", "png"), input_error);
    CHECK_THROWS_AS(emit_diagram(log, "blob", "t=0", "dot"), input_error);
}

TEST_CASE("log round-trips through text form") {
    ResolutionLog log = run_text(kNodeInput);
    ResolutionLog again = ResolutionLog::from_text(log.to_text());
    CHECK(again.lines == log.lines);
    CHECK(again.pass() == log.pass());
}
