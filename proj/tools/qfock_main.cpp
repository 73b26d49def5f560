#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qfock/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"quadratic Fock space kernels, oracles and projection "
                 "certification"};
    app.name("qfock");

    std::string job_path;
    app.add_option("job", job_path, "JSON job description")->required();

    qfock::CliOverrides overrides;
    std::string out_dir;
    std::uint64_t seed = 0;
    double tol = 0.0;
    auto* out_opt = app.add_option("--out", out_dir, "report directory");
    auto* seed_opt = app.add_option("--seed", seed, "sampling seed override");
    auto* tol_opt = app.add_option("--tol", tol, "tolerance override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*out_opt) overrides.out_dir = out_dir;
    if (*seed_opt) overrides.seed = seed;
    if (*tol_opt) overrides.tol = tol;

    return qfock::run_job(job_path, overrides, std::cout, std::cerr);
}
