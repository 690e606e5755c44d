#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "polya/cli.hpp"

using namespace polya;
using polya::cli::Command;
using polya::cli::OutputFormat;

int main(int argc, char** argv) {
    cli::RunConfig cfg;
    CLI::App app{"Weyl counting, Riesz means and Polya-inequality checks for model domains"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string output = "json";
    std::optional<std::string> seeley, two_term, threshold;
    app.add_option("--output", output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", cfg.out_path, "write the result here instead of stdout");
    app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    app.add_option("--seed", cfg.seed, "seed for sampled lambdas");
    app.add_flag("--no-timestamp", [&](std::int64_t) { cfg.timestamp = false; }, "omit generated_at");
    app.add_flag("--exact", cfg.exact, "integer-only verification for exact spectra");
    app.add_option("--dump", cfg.dump_path, "CSV of per-point margins");
    app.add_option("--k-max", cfg.k_max, "number of eigenvalues to check");
    app.add_option("--cutoff", cfg.cutoff, "spectral cutoff Lambda");

    auto add_spec = [&](CLI::App* sub) { sub->add_option("--spec", cfg.spec, "domain as JSON")->required(); };

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues below --cutoff");
    add_spec(spectrum);

    auto* count = app.add_subcommand("count", "counting function N(lambda)");
    add_spec(count);
    count->add_option("--lambda", cfg.lambdas, "evaluation points")->delimiter(',');
    count->add_option("--samples", cfg.samples, "random points in (0, cutoff) drawn with --seed");
    count->add_option("--seeley", seeley, "estimate the remainder constant: upper or lower")
        ->check(CLI::IsMember({"upper", "lower"}));

    auto* riesz = app.add_subcommand("riesz", "Riesz means and Berezin/Laptev margins");
    add_spec(riesz);
    riesz->add_option("--gamma", cfg.gamma, "Riesz exponent");
    riesz->add_option("--lambda", cfg.lambdas, "evaluation points")->delimiter(',');
    riesz->add_option("--two-term", two_term, "scan the two-term bound: upper or lower")
        ->check(CLI::IsMember({"upper", "lower"}));

    auto* constants = app.add_subcommand("constants", "Weyl constants, H1/H2 and thresholds");
    constants->add_option("--d", cfg.dimension, "dimension")->required();
    constants->add_option("--gamma", cfg.gamma, "Riesz exponent");
    constants->add_option("--volume", cfg.volume, "domain volume");
    constants->add_option("--remainder", cfg.remainder, "two-term remainder constant C");
    constants->add_option("--weyl-onset", cfg.weyl_onset, "onset constant C_1 of the Neumann cases");
    constants->add_option("--case", threshold, "threshold case");

    auto* verify = app.add_subcommand("verify", "Polya's inequality eigenvalue by eigenvalue");
    add_spec(verify);
    verify->add_flag("--counting", cfg.counting_form, "counting form against the Weyl term up to --cutoff");

    auto* reproduce = app.add_subcommand("reproduce", "worked examples");
    reproduce->add_option("example", cfg.example, "square-triangle or sphere-thin")->required();

    try {
        app.parse(argc, argv);
        const std::map<CLI::App*, Command> commands{{spectrum, Command::Spectrum}, {count, Command::Count},
                                                    {riesz, Command::Riesz},       {constants, Command::Constants},
                                                    {verify, Command::Verify},     {reproduce, Command::Reproduce}};
        cfg.command = commands.at(app.get_subcommands().front());
        cfg.output = output == "csv" ? OutputFormat::Csv : OutputFormat::Json;
        if (seeley) cfg.seeley = bound_side_from_string(*seeley);
        if (two_term) cfg.two_term = bound_side_from_string(*two_term);
        if (threshold) cfg.threshold = threshold_case_from_string(*threshold);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << cli::error_json("config_error", e.what()).dump() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << cli::error_json(e.code(), e.what()).dump() << '\n';
        return 2;
    }
    return cli::run(cfg, std::cout, std::cerr);
}
