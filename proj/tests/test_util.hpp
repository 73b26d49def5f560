#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qfock/grid.hpp"

namespace qfock::testutil {

inline GridPtr unit_cells(std::size_t n) {
    return make_grid(1, std::vector<double>(n, 1.0));
}

inline GridPtr mixed_grid() {
    return make_grid(2, {0.5, 1.0, 1.5, 1.0});
}

inline StepFunction fn(GridPtr grid, std::vector<Cx> values) {
    return StepFunction(std::move(grid), std::move(values));
}

inline StepFunction ind(const GridPtr& grid,
                        std::initializer_list<std::size_t> cells) {
    std::vector<bool> mask(grid->num_cells(), false);
    for (std::size_t c : cells) mask[c] = true;
    return StepFunction::indicator(grid, mask);
}

inline StepFunction diff(const StepFunction& a, const StepFunction& b) {
    return add(a, scale(Cx(-1.0, 0.0), b));
}

inline bool close(Cx a, Cx b, double tol) { return std::abs(a - b) <= tol; }

inline double rel_err(Cx a, Cx b) {
    double mag = std::max(std::abs(a), std::abs(b));
    return mag == 0.0 ? 0.0 : std::abs(a - b) / mag;
}

}  // namespace qfock::testutil
