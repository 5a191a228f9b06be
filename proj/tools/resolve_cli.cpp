// sncres — command-line driver for the surface resolution pipeline.
//
//   sncres resolve <input.json> [--seed N] [--degree-cap N] [--retry-cap N]
//                  [--truncation N] [--out LOG] [--emit-tree ID]... [--emit-fan ID]...
//                  [--emit-format dot|svg]
//   sncres verify <LOG>
//   sncres emit <LOG> [--tree ID] [--fan ID] [--format dot|svg] [--out FILE]
//
// Exit codes: 0 all certificates pass, 1 certificate failure, 2 input error,
// 3 resource cap exceeded.

#include <sncres/pipeline.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sncres::input_error("cannot read file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sncres::input_error("cannot write file '" + path + "'");
    out << text;
    if (!out) throw sncres::input_error("cannot write file '" + path + "'");
}

struct ResolveArgs {
    std::string input_path;
    std::string out_path;
    std::vector<std::string> emit_trees;
    std::vector<std::string> emit_fans;
    std::string emit_format = "dot";
    long long seed = -1;  // -1: take the input file's seed, default 0
    int degree_cap = 512;
    int retry_cap = 32;
    int truncation = 24;
};

int run_resolve(const ResolveArgs& a) {
    sncres::PipelineInput in = sncres::parse_input(read_file(a.input_path));
    sncres::PipelineConfig cfg;
    cfg.seed = a.seed >= 0 ? static_cast<std::uint64_t>(a.seed)
                           : in.seed.value_or(std::uint64_t{0});
    cfg.degree_cap = a.degree_cap;
    cfg.retry_cap = a.retry_cap;
    cfg.truncation = a.truncation;

    sncres::ResolutionLog log = sncres::run(in, cfg);
    if (a.out_path.empty())
        std::cout << log.to_text();
    else
        write_file(a.out_path, log.to_text());
    for (const auto& id : a.emit_trees)
        std::cout << sncres::emit_diagram(log, "tree", id, a.emit_format);
    for (const auto& id : a.emit_fans)
        std::cout << sncres::emit_diagram(log, "fan", id, a.emit_format);
    return log.pass() ? 0 : 1;
}

int run_verify(const std::string& log_path) {
    sncres::ResolutionLog log = sncres::ResolutionLog::from_text(read_file(log_path));
    sncres::VerifyReport report = sncres::verify(log);
    if (report.pass) {
        std::cout << "verify: pass — " << report.detail << "\n";
        return 0;
    }
    std::cout << "verify: fail — " << report.detail;
    if (report.divergence >= 0)
        std::cout << " [line " << report.divergence + 1 << "]";
    std::cout << "\n";
    return 1;
}

struct EmitArgs {
    std::string log_path;
    std::string tree_id;
    std::string fan_id;
    std::string format = "dot";
    std::string out_path;
    bool tree_set = false;
    bool fan_set = false;
};

int run_emit(const EmitArgs& a) {
    sncres::ResolutionLog log = sncres::ResolutionLog::from_text(read_file(a.log_path));
    if (!a.tree_set && !a.fan_set) {
        // No target requested: list what the log offers.
        sncres::EmitTargets t = sncres::emit_targets(log);
        std::string out;
        for (const auto& id : t.trees) out += "tree " + id + "\n";
        for (const auto& id : t.fans) out += "fan " + id + "\n";
        if (out.empty()) out = "no targets\n";
        if (a.out_path.empty())
            std::cout << out;
        else
            write_file(a.out_path, out);
        return 0;
    }
    std::string out;
    if (a.tree_set) out += sncres::emit_diagram(log, "tree", a.tree_id, a.format);
    if (a.fan_set) out += sncres::emit_diagram(log, "fan", a.fan_id, a.format);
    if (a.out_path.empty())
        std::cout << out;
    else
        write_file(a.out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sncres: certified resolution of surface singularities via "
                 "fibered branch simplification"};
    app.require_subcommand(1);

    ResolveArgs ra;
    CLI::App* resolve = app.add_subcommand(
        "resolve", "Run the pipeline on an input description and write the log");
    resolve->add_option("input", ra.input_path, "Input JSON file")->required();
    resolve->add_option("--seed", ra.seed, "Seed for all randomized searches")
        ->check(CLI::NonNegativeNumber);
    resolve->add_option("--degree-cap", ra.degree_cap, "Cap on the ruled-surface twist")
        ->check(CLI::PositiveNumber);
    resolve->add_option("--retry-cap", ra.retry_cap, "Redraws per reduction step")
        ->check(CLI::PositiveNumber);
    resolve->add_option("--truncation", ra.truncation, "Default jet truncation order")
        ->check(CLI::PositiveNumber);
    resolve->add_option("--out", ra.out_path, "Write the log here instead of stdout");
    resolve->add_option("--emit-tree", ra.emit_trees, "Also render this fiber tree");
    resolve->add_option("--emit-fan", ra.emit_fans, "Also render this resolution fan");
    resolve->add_option("--emit-format", ra.emit_format, "Diagram format")
        ->check(CLI::IsMember({"dot", "svg"}));

    std::string verify_log;
    CLI::App* verify = app.add_subcommand("verify", "Audit a log by deterministic replay");
    verify->add_option("log", verify_log, "Log file to verify")->required();

    EmitArgs ea;
    CLI::App* emit = app.add_subcommand("emit", "Render diagrams from a log");
    emit->add_option("log", ea.log_path, "Log file to read")->required();
    CLI::Option* tree_opt = emit->add_option("--tree", ea.tree_id, "Fiber tree to render");
    CLI::Option* fan_opt = emit->add_option("--fan", ea.fan_id, "Resolution fan to render");
    emit->add_option("--format", ea.format, "Diagram format")
        ->check(CLI::IsMember({"dot", "svg"}));
    emit->add_option("--out", ea.out_path, "Write the diagram here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (resolve->parsed()) return run_resolve(ra);
        if (verify->parsed()) return run_verify(verify_log);
        ea.tree_set = tree_opt->count() > 0;
        ea.fan_set = fan_opt->count() > 0;
        return run_emit(ea);
    } catch (const sncres::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sncres::cap_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
