// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.  Every check is exact (rational/integer identities); the
// end-to-end criteria drive the installed CLI binary on the shipped inputs.

#include "sncres/pipeline.hpp"

#include "support/chart_oracle.hpp"
#include "support/hull_oracle.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

using namespace sncres;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (detail.empty()) detail = why;  // keep the first failure
    }
    void expect(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- shared generators ---------------------------------------------------------

HorizontalDivisor random_divisor(Rng& rng, int e, int d) {
    std::vector<BinForm> phis;
    long c0 = 0;
    while (c0 == 0) c0 = static_cast<long>(rng.next_int(-3, 3));
    phis.push_back(BinForm::constant(0, Rat(c0)));
    for (int i = 1; i <= d; ++i) {
        std::vector<Rat> c(static_cast<std::size_t>(i * e) + 1, Rat(0));
        for (auto& q : c) q = Rat(static_cast<long>(rng.next_int(-3, 3)));
        phis.push_back(BinForm(i * e, std::move(c)));
    }
    return make_horizontal_divisor(e, std::move(phis));
}

BinForm random_form(Rng& rng, int deg, int bound) {
    std::vector<Rat> c(static_cast<std::size_t>(deg) + 1, Rat(0));
    for (auto& q : c) q = Rat(static_cast<long>(rng.next_int(-bound, bound)));
    return BinForm(deg, std::move(c));
}

// --- criterion 1: fiberwise reduction degree-drop law ---------------------------

Outcome criterion_degree_drop() {
    Outcome out;
    Rng rng(2026);
    for (int trial = 0; trial < 100; ++trial) {
        const int e = static_cast<int>(rng.next_int(0, 3));
        const int N = static_cast<int>(rng.next_int(2, 5));
        HorizontalDivisor B = random_divisor(rng, e, N);
        std::vector<Section> marked;
        const int k = static_cast<int>(rng.next_int(0, 2));
        for (int i = 0; i < k; ++i) marked.push_back(Section::finite(random_form(rng, e, 3)));

        BelyiTrace trace;
        try {
            trace = belyi_reduce(B, marked, rng.next_u64());
        } catch (const std::exception& ex) {
            out.fail("trial " + std::to_string(trial) + ": reduction failed: " + ex.what());
            continue;
        }
        out.expect(static_cast<int>(trace.steps.size()) <= N - 1,
                   "trial " + std::to_string(trial) + ": step bound exceeded");
        int degree = N;
        int twist = e;
        for (std::size_t s = 0; s < trace.steps.size(); ++s) {
            const BelyiStep& st = trace.steps[s];
            out.expect(st.map.degree() == degree,
                       "trial " + std::to_string(trial) + ": map degree drifted");
            out.expect(st.residual_after.fiber_degree() == degree - 1,
                       "trial " + std::to_string(trial) + ": branch image degree is not d-1");
            out.expect(st.residual_after.twist_e == twist * degree,
                       "trial " + std::to_string(trial) + ": twist law violated");
            twist *= degree;
            --degree;
        }
        out.expect(trace.final_surface.twist_e == twist,
                   "trial " + std::to_string(trial) + ": final twist mismatch");
        out.expect(certify_distinct_sections(trace.final_sections),
                   "trial " + std::to_string(trial) + ": distinctness certificate failed");
        out.expect(!trace.final_sections.empty() && trace.final_sections.back().infinite,
                   "trial " + std::to_string(trial) + ": infinity section missing");
    }
    if (out.pass) out.detail = "100 seeded divisors, N in [2,5], twist in [0,3]";
    return out;
}

// --- criterion 2: collapse-map expansion identity --------------------------------

Outcome criterion_map_roundtrip() {
    Outcome out;
    Rng rng(4049);
    for (int trial = 0; trial < 100; ++trial) {
        const int e = static_cast<int>(rng.next_int(0, 3));
        const int d = static_cast<int>(rng.next_int(2, 5));
        HorizontalDivisor B = random_divisor(rng, e, d);
        FiberwiseMap m = build_pB(B);

        // Coefficient-by-coefficient: the map's tuple is B's tuple rescaled to
        // a monic leading form, so scaling back must reproduce B exactly.
        const Rat lead = B.phis[0].coeff(0);
        out.expect(m.phis[0] == BinForm::constant(0, 1),
                   "trial " + std::to_string(trial) + ": map is not monic");
        bool coeffs_ok = m.phis.size() == B.phis.size();
        for (std::size_t i = 0; coeffs_ok && i < B.phis.size(); ++i)
            coeffs_ok = (lead * m.phis[i]) == B.phis[i];
        out.expect(coeffs_ok, "trial " + std::to_string(trial) + ": expansion coefficients differ");
        out.expect(divisor_of_map(m) == B,
                   "trial " + std::to_string(trial) + ": divisor roundtrip failed");

        // Monic of fiber degree d on every fiber: the preimage of the infinity
        // section is the infinity section with multiplicity exactly d.
        out.expect(m.degree() == d, "trial " + std::to_string(trial) + ": map degree wrong");
        out.expect(push_section(m, Section::at_infinity()).infinite,
                   "trial " + std::to_string(trial) + ": infinity is not preserved");
    }
    if (out.pass) out.detail = "100 seeded maps; exact tuple and roundtrip identities";
    return out;
}

// --- criterion 3: collision trees against the chart oracle -----------------------

Outcome criterion_tree_oracle() {
    Outcome out;
    Rng rng(101);
    int families = 0, nf_cases = 0;
    while (families < 200) {
        const int twist = static_cast<int>(rng.next_int(2, 4));
        const int n = static_cast<int>(rng.next_int(2, 6));
        std::vector<Section> secs;
        for (int k = 0; k < n; ++k) {
            Section s = Section::finite(random_form(rng, twist, 3));
            if (std::find(secs.begin(), secs.end(), s) == secs.end()) secs.push_back(s);
        }
        if (secs.size() < 2) continue;
        DiscriminantLocus L = discriminant_locus(twist, secs);
        bool contact_ok = true;
        for (const auto& zp : L.points) contact_ok = contact_ok && zp.max_contact() <= 4;
        if (!contact_ok) continue;
        ++families;

        auto names = default_section_names(secs.size());
        for (const auto& zp : L.points) {
            if (zp.at.kind == BasePoint::Kind::algebraic) ++nf_cases;
            const int trunc = zp.max_contact() + 1;
            std::vector<LocalJet> jets;
            for (const auto& s : secs) jets.push_back(s.form.jet(zp.at, trunc));

            FiberTree production = collision_tree(zp.at, jets, names);
            FiberTree oracle = oracles::chart_blowup_tree(jets, names);
            if (oracles::canonical_tree_string(production) !=
                oracles::canonical_tree_string(oracle)) {
                out.fail("family " + std::to_string(families) + " at " + zp.at.to_string() +
                         ": tree differs from the chart oracle");
                continue;
            }
            // Tree invariants: parents precede children, depth accumulates the
            // node multiplicities, every section is marked exactly once.
            std::size_t total_marks = 0;
            for (std::size_t v = 0; v < production.vertices.size(); ++v) {
                const auto& V = production.vertices[v];
                total_marks += V.marks.size();
                if (V.parent < 0) {
                    out.expect(V.depth == 0, "root depth nonzero");
                    continue;
                }
                out.expect(V.parent < static_cast<int>(v), "child precedes its parent");
                out.expect(
                    V.depth == production.vertices[static_cast<std::size_t>(V.parent)].depth +
                                   V.node_multiplicity(),
                    "depth does not accumulate node multiplicities");
            }
            out.expect(total_marks == secs.size(), "marks lost or duplicated in the tree");
        }

        // Away from the collision locus the fiber stays a single component
        // with one mark per section.
        BasePoint off = BasePoint::rational(Rat(7919));
        bool on_locus = false;
        for (const auto& zp : L.points)
            if (BasePoint::cmp(zp.at, off) == 0) on_locus = true;
        if (!on_locus) {
            std::vector<LocalJet> jets;
            for (const auto& s : secs) jets.push_back(s.form.jet(off, 1));
            FiberTree tree = collision_tree(off, jets, names);
            out.expect(tree.vertices.size() == 1 && tree.vertices[0].marks.size() == secs.size(),
                       "off-locus fiber is not a single marked component");
        }
    }
    out.expect(nf_cases >= 20, "fewer than 20 number-field collision points (" +
                                   std::to_string(nf_cases) + ")");
    if (out.pass)
        out.detail = "200 families, contact <= 4, " + std::to_string(nf_cases) +
                     " number-field points";
    return out;
}

// --- criterion 4: quotient chain resolution against the hull oracle ---------------

Outcome criterion_hj_fans() {
    Outcome out;
    int types = 0;
    for (long long m = 2; m <= 40; ++m)
        for (long long q = 1; q < m; ++q) {
            if (std::gcd(m, q) != 1) continue;
            ++types;
            HjResolution r = hj_resolve(CyclicQuotientType{m, q});
            const std::string tag = "(" + std::to_string(m) + "," + std::to_string(q) + ")";

            for (long long b : r.chain)
                out.expect(b >= 2, "type " + tag + ": chain entry below 2");

            // Continued fraction re-evaluates to m/q exactly.
            Rat value(0);
            for (auto it = r.chain.rbegin(); it != r.chain.rend(); ++it)
                value = Rat(static_cast<long>(*it)) - (value == 0 ? Rat(0) : Rat(1) / value);
            out.expect(value == Rat(static_cast<long>(m)) / Rat(static_cast<long>(q)),
                       "type " + tag + ": continued fraction drifted");

            // Unimodular consecutive cones.
            bool uni = r.fan.rays.size() >= 2;
            for (std::size_t i = 0; i + 1 < r.fan.rays.size(); ++i)
                uni = uni && (r.fan.rays[i][0] * r.fan.rays[i + 1][1] -
                                  r.fan.rays[i][1] * r.fan.rays[i + 1][0] ==
                              1);
            out.expect(uni, "type " + tag + ": non-unimodular cone");

            // The rays are exactly the hull-boundary lattice points.
            std::vector<oracles::Vec2> expected =
                oracles::hull_chain({1, 0}, {m - q, m});
            bool rays_ok = r.fan.rays.size() == expected.size();
            for (std::size_t i = 0; rays_ok && i < expected.size(); ++i)
                rays_ok = r.fan.rays[i] == expected[i];
            out.expect(rays_ok, "type " + tag + ": rays differ from the hull oracle");
            out.expect(r.fan.rays.size() == r.chain.size() + 2,
                       "type " + tag + ": ray count does not match the chain length");
        }
    if (out.pass) out.detail = std::to_string(types) + " coprime types, 2 <= m <= 40";
    return out;
}

// --- CLI plumbing for the end-to-end criteria --------------------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + SNCRES_CLI_PATH + "\" " + args +
                            " >/dev/null 2>&1";
    const int st = std::system(cmd.c_str());
    if (st == -1) return -1;
    return WIFEXITED(st) ? WEXITSTATUS(st) : -2;
}

std::string input_path(const std::string& name) {
    return std::string(SNCRES_INPUT_DIR) + "/" + name;
}

std::string replace_first(std::string hay, const std::string& from, const std::string& to) {
    auto pos = hay.find(from);
    if (pos != std::string::npos) hay.replace(pos, from.size(), to);
    return hay;
}

std::vector<Json> log_entries(const std::string& text, const std::string& kind) {
    std::vector<Json> out;
    ResolutionLog log = ResolutionLog::from_text(text);
    for (std::size_t i = 0; i < log.lines.size(); ++i) {
        Json e = Json::parse(log.lines[i], nullptr, false);
        if (e.is_object() && e.value("entry", "") == kind) out.push_back(e);
    }
    return out;
}

// --- criterion 5: end-to-end quadric cone ------------------------------------------

Outcome criterion_quadric_cone() {
    Outcome out;
    const std::string log_path = "acceptance_qc.log";
    const int rc = run_cli("resolve \"" + input_path("quadric_cone.json") + "\" --out " + log_path);
    out.expect(rc == 0, "resolve exited with " + std::to_string(rc));
    if (!out.pass) return out;

    const std::string text = slurp(log_path);
    bool found = false;
    for (const auto& c : log_entries(text, "chain"))
        if (c["type"] == Json::array({2, 1}) && c["chain"] == Json::array({2})) found = true;
    out.expect(found, "no cyclic-quotient chain of type (2,1) -> [2] in the log");

    out.expect(run_cli("verify " + log_path) == 0, "verify rejected the untouched log");

    const struct {
        const char* name;
        std::string text;
    } faults[] = {
        {"edited chain", replace_first(text, "\"chain\":[2]", "\"chain\":[3]")},
        {"flipped result",
         replace_first(text, "{\"entry\":\"result\",\"pass\":true}",
                       "{\"entry\":\"result\",\"pass\":false}")},
        {"truncated log", text.substr(0, text.rfind("{\"entry\":\"result\""))},
    };
    for (const auto& f : faults) {
        spit("acceptance_fault.log", f.text);
        out.expect(run_cli("verify acceptance_fault.log") != 0,
                   std::string("verify accepted a fault-injected log (") + f.name + ")");
    }
    std::remove("acceptance_fault.log");
    if (out.pass) out.detail = "exit 0, chain (2,1) -> [2], verify passes, 3 injected faults fail";
    return out;
}

// --- criterion 6: end-to-end fibered cusp -------------------------------------------

Outcome criterion_fibered_cusp() {
    Outcome out;
    const std::string log_path = "acceptance_cusp.log";
    const int rc =
        run_cli("resolve \"" + input_path("fibered_cusp.json") + "\" --out " + log_path);
    out.expect(rc == 0, "resolve exited with " + std::to_string(rc));
    if (!out.pass) return out;

    const std::string text = slurp(log_path);
    out.expect(!log_entries(text, "belyi_step").empty(), "no fiberwise reduction step recorded");
    out.expect(!log_entries(text, "stabilization").empty(), "no stabilization stage recorded");
    out.expect(!log_entries(text, "fiber_tree").empty(), "no special fiber recorded");
    bool toric_ran = false, snc_pass = false;
    for (const auto& c : log_entries(text, "certificate")) {
        if (c.value("kind", "") == "unimodularity") toric_ran = true;
        if (c.value("kind", "") == "snc" && c.value("pass", false)) snc_pass = true;
    }
    out.expect(toric_ran, "no toric stage certificate recorded");
    out.expect(snc_pass, "final SNC certificate did not pass");
    auto results = log_entries(text, "result");
    out.expect(results.size() == 1 && results[0].value("pass", false),
               "final result line does not record a pass");
    if (out.pass) out.detail = "exit 0 through reduction, stabilization, toric; SNC pass";
    return out;
}

// --- criterion 7: byte-identical reruns ---------------------------------------------

Outcome criterion_determinism() {
    Outcome out;
    const char* inputs[] = {"quadric_cone.json", "fibered_cusp.json", "simple_node.json"};
    for (const char* name : inputs) {
        const std::string a = "acceptance_det_a.log", b = "acceptance_det_b.log";
        out.expect(run_cli("resolve \"" + input_path(name) + "\" --out " + a) == 0,
                   std::string(name) + ": first run failed");
        out.expect(run_cli("resolve \"" + input_path(name) + "\" --out " + b) == 0,
                   std::string(name) + ": second run failed");
        out.expect(!slurp(a).empty() && slurp(a) == slurp(b),
                   std::string(name) + ": reruns differ byte for byte");
        std::remove(a.c_str());
        std::remove(b.c_str());
    }
    // An explicit seed on the command line is just as reproducible.
    out.expect(run_cli("resolve \"" + input_path("fibered_cusp.json") +
                       "\" --seed 123 --out acceptance_det_a.log") == 0,
               "seeded rerun failed");
    out.expect(run_cli("resolve \"" + input_path("fibered_cusp.json") +
                       "\" --seed 123 --out acceptance_det_b.log") == 0,
               "seeded rerun failed");
    out.expect(slurp("acceptance_det_a.log") == slurp("acceptance_det_b.log"),
               "seeded reruns differ byte for byte");
    std::remove("acceptance_det_a.log");
    std::remove("acceptance_det_b.log");
    if (out.pass) out.detail = "3 inputs re-run byte-identically, plus an explicit seed";
    return out;
}

struct Criterion {
    const char* name;
    Outcome (*run)();
    double budget_s;  // stated runtime budget; exceeding it fails the criterion
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {"fiberwise reduction degree-drop law", criterion_degree_drop, 60.0},
        {"collapse-map expansion and roundtrip", criterion_map_roundtrip, 10.0},
        {"collision trees vs chart-blowup oracle", criterion_tree_oracle, 120.0},
        {"quotient chains and fans vs hull oracle", criterion_hj_fans, 30.0},
        {"end-to-end quadric cone with fault injection", criterion_quadric_cone, 300.0},
        {"end-to-end fibered cusp", criterion_fibered_cusp, 300.0},
        {"byte-identical deterministic reruns", criterion_determinism, 300.0},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& ex) {
            out.pass = false;
            out.detail = std::string("unexpected exception: ") + ex.what();
        }
        const double dt = seconds_since(t0);
        if (out.pass && dt > c.budget_s) {
            out.pass = false;
            out.detail = "runtime budget exceeded";
        }
        std::printf("[%s] criterion %d (%s): %s (%.2fs)\n", out.pass ? "PASS" : "FAIL", index,
                    c.name, out.detail.c_str(), dt);
        if (!out.pass) ++failures;
    }
    std::remove("acceptance_qc.log");
    std::remove("acceptance_cusp.log");
    return failures;
}
