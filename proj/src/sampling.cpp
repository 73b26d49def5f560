#include "qfock/sampling.hpp"

#include <cmath>
#include <numbers>

namespace qfock {

void validate(const SampleConfig& cfg) {
    if (!(cfg.amp > 0.0 && cfg.amp < 0.5))
        throw InputError("sample amp must lie in (0, 0.5)");
    if (cfg.n_max < 1) throw InputError("sample n_max must be >= 1");
    if (!(cfg.tol > 0.0)) throw InputError("sample tol must be positive");
    if (cfg.num_pairs < 0) throw InputError("sample num_pairs must be >= 0");
    if (cfg.t_grid.empty()) throw InputError("sample t_grid must be nonempty");
    for (double t : cfg.t_grid)
        if (!(t > 0.0 && t <= 1.0))
            throw InputError("sample t_grid values must lie in (0, 1]");
    validate(cfg.params);
}

double Rng::uniform() {
    return double(state_() >> 11) * 0x1.0p-53;
}

Cx Rng::disk(double radius) {
    double r = radius * std::sqrt(uniform());
    double theta = 2.0 * std::numbers::pi * uniform();
    return Cx(r * std::cos(theta), r * std::sin(theta));
}

StepFunction sample_function(const GridPtr& grid, double amp, Rng& rng) {
    std::vector<Cx> vals(grid->num_cells());
    for (Cx& v : vals) v = rng.disk(amp);
    return StepFunction(grid, std::move(vals));
}

std::vector<NamedFunction> corner_functions(const GridPtr& grid, double amp,
                                            bool scale_indicators) {
    std::vector<NamedFunction> out;
    std::size_t cells = grid->num_cells();
    double ind_scale = scale_indicators ? amp : 1.0;

    std::size_t singles = std::min<std::size_t>(cells, 8);
    for (std::size_t k = 0; k < singles; ++k) {
        std::vector<bool> mask(cells, false);
        mask[k] = true;
        out.push_back({"corner:indicator_cell" + std::to_string(k),
                       scale(ind_scale, StepFunction::indicator(grid, mask))});
    }
    out.push_back({"corner:indicator_full",
                   scale(ind_scale, StepFunction::constant(grid, Cx(1.0, 0.0)))});
    out.push_back({"corner:constant",
                   StepFunction::constant(grid, Cx(amp, 0.0))});
    std::vector<Cx> ramp(cells);
    for (std::size_t k = 0; k < cells; ++k)
        ramp[k] = Cx(amp * double(k + 1) / double(cells), 0.0);
    out.push_back({"corner:ramp", StepFunction(grid, std::move(ramp))});
    out.push_back({"corner:zero", StepFunction::zero(grid)});
    return out;
}

std::vector<std::pair<NamedFunction, NamedFunction>> battery_inputs(
    const GridPtr& grid, const SampleConfig& cfg, bool scale_indicators) {
    validate(cfg);
    std::vector<std::pair<NamedFunction, NamedFunction>> out;
    for (NamedFunction& c : corner_functions(grid, cfg.amp, scale_indicators))
        out.push_back({c, c});
    Rng rng(cfg.seed);
    for (int i = 0; i < cfg.num_pairs; ++i) {
        std::string id = "sample:" + std::to_string(i);
        NamedFunction f{id + ":f", sample_function(grid, cfg.amp, rng)};
        NamedFunction g{id + ":g", sample_function(grid, cfg.amp, rng)};
        out.push_back({std::move(f), std::move(g)});
    }
    return out;
}

}  // namespace qfock
