// dissfield — command-line front end

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "dissfield/commands.hpp"

int main(int argc, char** argv) {
    using namespace dissfield;
    CLI::App app{"Dissipative field mode: response, thermodynamics, correlators and Langevin checks"};
    app.set_version_flag("--version", std::string("dissfield ") + kToolVersion);
    app.require_subcommand(0, 1);

    CommandOptions opts;
    std::string out, pi_sign = "subtract";
    int threads = 0;
    std::string chosen;

    const std::vector<std::pair<std::string, std::string>> help{
        {"kk-check", "Compare closed-form and Kramers-Kronig Re chi"},
        {"greens", "Tabulate G_k and evaluate the commutator sum rule"},
        {"thermo", "Mean-force thermodynamics over a temperature grid"},
        {"correlate", "Thermal and coherent-state field correlators"},
        {"langevin", "Classical Langevin ensemble with fluctuation-dissipation checks"},
    };
    for (const auto& [name, desc] : help) {
        auto* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opts.config, "INI run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "Output directory (overrides [output] directory)");
        sub->add_option("--threads", threads, "Worker threads (overrides [threads] count)")->check(CLI::PositiveNumber);
        sub->add_option("--pi-mean-sign", pi_sign, "Sign of the <pi>^2 term in coherent correlators")
            ->check(CLI::IsMember({"subtract", "add"}));
        sub->callback([&chosen, n = name] { chosen = n; });
    }
    auto* schema = app.add_subcommand("schema", "Print every config key with its default");
    schema->callback([&chosen] { chosen = "schema"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }
    if (chosen.empty()) {
        std::cout << app.help();
        return kExitConfig;
    }
    if (chosen == "schema") {
        for (const auto& f : config_schema())
            std::printf("[%s] %s = %s  ; %s\n", f.section, f.key, f.default_value ? f.default_value : "(required)",
                        f.description);
        return kExitOk;
    }

    if (!out.empty()) opts.out = out;
    if (threads > 0) opts.threads = threads;
    opts.pi_mean_sign = pi_sign == "add" ? PiMeanSign::add : PiMeanSign::subtract;

    const RunReport rep = run_command(chosen, opts);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& o : rep.outputs) std::cout << o.sha256 << "  " << o.path << "\n";
    if (rep.exit_code != kExitOk) std::cerr << "error: " << rep.message << "\n";
    return rep.exit_code;
}
