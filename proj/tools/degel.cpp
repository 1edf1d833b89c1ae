#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "degel/config.hpp"
#include "degel/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"degel: degenerate fully nonlinear elliptic experiments"};
    app.require_subcommand(1);

    std::string config;
    std::string out = "out";
    std::uint64_t seed = 0;
    for (const auto& tag : degel::experiment_tags()) {
        auto* sub = app.add_subcommand(tag, "run the " + tag + " pipeline");
        sub->add_option("--config", config, "experiment config file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory for CSV artifacts");
        sub->add_option("--seed", seed, "random seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : degel::kExitError;
    }

#ifdef _OPENMP
    if (const char* env = std::getenv("DEGEL_THREADS")) {
        const int threads = std::atoi(env);
        if (threads > 0) omp_set_num_threads(threads);
    }
#endif

    const std::string tag = app.get_subcommands().front()->get_name();
    return degel::run_cli(tag, config, out, seed, std::cout, std::cerr);
}
