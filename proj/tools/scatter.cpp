#include "scatter/scatter.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace scatter;

// --out wins; otherwise $SCATTER_OUT_DIR/<command>.<ext>; otherwise stdout.
std::string resolve_output(const RunConfig& cfg, const std::string& command) {
    if (!cfg.output.empty()) return cfg.output;
    if (const char* dir = std::getenv("SCATTER_OUT_DIR"); dir && *dir)
        return (std::filesystem::path(dir) / (command + (cfg.format == Format::Csv ? ".csv" : ".json"))).string();
    return {};
}

int emit(const Report& rep, const RunConfig& cfg) {
    std::string path = resolve_output(cfg, rep.command);
    std::string text = rep.render(cfg.format);
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << path << "\n";
            return 2;
        }
        out << text;
    }
    for (const auto& c : rep.checks)
        if (!c.passed) std::cerr << "FAIL " << c.id << ": " << c.detail << "\n";
    return rep.exit_code();
}

void add_run_flags(CLI::App* app, RunConfig& cfg) {
    static const std::map<std::string, Example> examples{{"bundle", Example::Bundle}, {"selfsim", Example::Selfsim}};
    static const std::map<std::string, Format> formats{{"json", Format::Json}, {"csv", Format::Csv}};
    app->add_option("--example", cfg.example, "bundle or selfsim")->transform(CLI::CheckedTransformer(examples, CLI::ignore_case));
    // Strings, so that a bare --indices means the empty list.
    app->add_option_function<std::vector<std::string>>(
           "--indices",
           [&cfg](const std::vector<std::string>& raw) {
               cfg.indices.clear();
               for (const auto& s : raw) {
                   if (s.empty()) continue;
                   int v = 0;
                   auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
                   if (ec != std::errc{} || end != s.data() + s.size()) throw CLI::ValidationError("--indices", "not an integer: " + s);
                   cfg.indices.push_back(v);
               }
           },
           "scattering indices, e.g. 2,4,6")
        ->delimiter(',')
        ->expected(0, -1);
    app->add_option("--radius", cfg.radius, "truncation radius (>= 1)");
    app->add_option("--tol", cfg.tol, "power-iteration tolerance (> 0)");
    app->add_option("--seed", cfg.seed, "seed for randomized suites");
    app->add_option("--out", cfg.output, "output file (default: $SCATTER_OUT_DIR or stdout)");
    app->add_option("--format", cfg.format, "json or csv")->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of two scattering counterexamples"};
    app.require_subcommand(1);

    RunConfig verify_cfg, scatter_cfg;
    auto* verify = app.add_subcommand("verify", "run identity suites and the three scattering steps");
    add_run_flags(verify, verify_cfg);
    auto* scat = app.add_subcommand("scatter", "tabulate rho(sphere(n)) against the Haagerup bound");
    add_run_flags(scat, scatter_cfg);
    std::string expression;
    auto* eval = app.add_subcommand("eval", "evaluate an expression");
    eval->add_option("expression", expression, "S-element, Steinberg element, or 'f @ germ'")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*verify) return emit(cmd_verify(verify_cfg), verify_cfg);
        if (*scat) return emit(cmd_scatter(scatter_cfg), scatter_cfg);
        auto r = cmd_eval(expression);
        (r.exit_code == 0 ? std::cout : std::cerr) << r.output << "\n";
        return r.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    }
}
