#include "qfock/grid.hpp"

#include <cmath>
#include <string>

namespace qfock {

Grid::Grid(int dim, std::vector<double> volumes)
    : dim_(dim), volumes_(std::move(volumes)), total_volume_(0.0) {
    if (dim_ < 1) throw InputError("grid dimension must be >= 1");
    if (volumes_.empty()) throw InputError("grid needs at least one cell");
    for (double v : volumes_) {
        if (!std::isfinite(v) || v <= 0.0)
            throw InputError("cell volumes must be finite and positive");
        total_volume_ += v;
    }
}

double Grid::volume(std::size_t k) const {
    if (k >= volumes_.size())
        throw IndexOutOfRange("cell index " + std::to_string(k) +
                              " out of range for grid with " +
                              std::to_string(volumes_.size()) + " cells");
    return volumes_[k];
}

GridPtr make_grid(int dim, std::vector<double> volumes) {
    return std::make_shared<const Grid>(dim, std::move(volumes));
}

GridPtr make_uniform_grid(int dim, std::size_t n, double total_volume) {
    if (n == 0) throw InputError("grid needs at least one cell");
    if (!(total_volume > 0.0))
        throw InputError("total volume must be positive");
    return make_grid(dim, std::vector<double>(n, total_volume / double(n)));
}

StepFunction::StepFunction(GridPtr grid, std::vector<Cx> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw InputError("step function needs a grid");
    if (values_.size() != grid_->num_cells())
        throw GridMismatch("value count " + std::to_string(values_.size()) +
                           " does not match cell count " +
                           std::to_string(grid_->num_cells()));
    for (const Cx& v : values_) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw InputError("step function values must be finite");
    }
}

StepFunction StepFunction::zero(GridPtr grid) {
    std::size_t n = grid->num_cells();
    return StepFunction(std::move(grid), std::vector<Cx>(n, Cx(0.0, 0.0)));
}

StepFunction StepFunction::indicator(GridPtr grid,
                                     const std::vector<bool>& mask) {
    if (mask.size() != grid->num_cells())
        throw GridMismatch("indicator mask size does not match cell count");
    std::vector<Cx> vals(mask.size());
    for (std::size_t k = 0; k < mask.size(); ++k)
        vals[k] = mask[k] ? Cx(1.0, 0.0) : Cx(0.0, 0.0);
    return StepFunction(std::move(grid), std::move(vals));
}

StepFunction StepFunction::constant(GridPtr grid, Cx value) {
    std::size_t n = grid->num_cells();
    return StepFunction(std::move(grid), std::vector<Cx>(n, value));
}

const Cx& StepFunction::operator[](std::size_t k) const {
    if (k >= values_.size())
        throw IndexOutOfRange("cell index " + std::to_string(k) +
                              " out of range");
    return values_[k];
}

void require_same_grid(const StepFunction& f, const StepFunction& g,
                       const char* where) {
    if (!f.same_grid(g))
        throw GridMismatch(std::string(where) +
                           ": operands live on different grids");
}

Cx inner(const StepFunction& f, const StepFunction& g) {
    require_same_grid(f, g, "inner");
    Cx acc(0.0, 0.0);
    const auto& vols = f.grid()->volumes();
    for (std::size_t k = 0; k < vols.size(); ++k)
        acc += std::conj(f[k]) * g[k] * vols[k];
    return acc;
}

double linf_norm(const StepFunction& f) {
    double m = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
        m = std::max(m, std::abs(f[k]));
    return m;
}

double l2_norm(const StepFunction& f) {
    double acc = 0.0;
    const auto& vols = f.grid()->volumes();
    for (std::size_t k = 0; k < vols.size(); ++k)
        acc += std::norm(f[k]) * vols[k];
    return std::sqrt(acc);
}

StepFunction pointwise_mul(const StepFunction& f, const StepFunction& g) {
    require_same_grid(f, g, "pointwise_mul");
    std::vector<Cx> vals(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) vals[k] = f[k] * g[k];
    return StepFunction(f.grid(), std::move(vals));
}

StepFunction conjugate(const StepFunction& f) {
    std::vector<Cx> vals(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) vals[k] = std::conj(f[k]);
    return StepFunction(f.grid(), std::move(vals));
}

StepFunction pointwise_pow(const StepFunction& f, int n) {
    if (n < 0) throw InputError("pointwise_pow needs n >= 0");
    std::vector<Cx> vals(f.size(), Cx(1.0, 0.0));
    for (int j = 0; j < n; ++j)
        for (std::size_t k = 0; k < f.size(); ++k) vals[k] *= f[k];
    return StepFunction(f.grid(), std::move(vals));
}

StepFunction add(const StepFunction& f, const StepFunction& g) {
    require_same_grid(f, g, "add");
    std::vector<Cx> vals(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) vals[k] = f[k] + g[k];
    return StepFunction(f.grid(), std::move(vals));
}

StepFunction scale(Cx a, const StepFunction& f) {
    std::vector<Cx> vals(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) vals[k] = a * f[k];
    return StepFunction(f.grid(), std::move(vals));
}

}  // namespace qfock
