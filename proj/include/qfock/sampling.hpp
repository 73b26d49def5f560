#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qfock/fock.hpp"
#include "qfock/grid.hpp"

namespace qfock {

/// Sampling plan shared by the certification batteries.
struct SampleConfig {
    std::uint64_t seed = 42;
    int num_pairs = 50;
    int n_max = 4;
    double amp = 0.35;
    std::vector<double> t_grid = {0.25, 0.5, 1.0};
    ModelParams params;
    double tol = 1e-9;
};

void validate(const SampleConfig& cfg);

/// Deterministic generator: explicit 53-bit uniforms from mt19937_64 so
/// streams are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    double uniform();          // [0, 1)
    Cx disk(double radius);    // uniform on the closed complex disk

private:
    std::mt19937_64 state_;
};

struct NamedFunction {
    std::string name;
    StepFunction fn;
};

/// Random step function with values in the complex disk of the given radius.
StepFunction sample_function(const GridPtr& grid, double amp, Rng& rng);

/// Deterministic structured inputs: single-cell indicators (first 8
/// cells), the full-grid indicator, a real constant, a real ramp and the
/// zero function. Indicators are scaled by amp when scale_indicators is
/// set (needed wherever the exponential-domain bound applies).
std::vector<NamedFunction> corner_functions(const GridPtr& grid, double amp,
                                            bool scale_indicators);

/// Battery input list: diagonal corner pairs first, then num_pairs
/// random pairs named sample:<i>. The random stream depends only on the
/// seed, never on the corner scaling.
std::vector<std::pair<NamedFunction, NamedFunction>> battery_inputs(
    const GridPtr& grid, const SampleConfig& cfg, bool scale_indicators);

}  // namespace qfock
