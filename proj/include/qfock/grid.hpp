#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "qfock/errors.hpp"

namespace qfock {

using Cx = std::complex<double>;

/// Finite partition of a measure space into cells of positive volume.
/// Step functions are constant on each cell, so integrals reduce to
/// volume-weighted sums over cells.
class Grid {
public:
    Grid(int dim, std::vector<double> volumes);

    int dim() const { return dim_; }
    std::size_t num_cells() const { return volumes_.size(); }
    double volume(std::size_t k) const;
    const std::vector<double>& volumes() const { return volumes_; }
    double total_volume() const { return total_volume_; }

    bool operator==(const Grid& other) const {
        return dim_ == other.dim_ && volumes_ == other.volumes_;
    }

private:
    int dim_;
    std::vector<double> volumes_;
    double total_volume_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, std::vector<double> volumes);

/// Uniform partition of a d-dimensional box into n cells of volume
/// total/n each. Convenience for tests and samplers.
GridPtr make_uniform_grid(int dim, std::size_t n, double total_volume = 1.0);

/// Complex-valued step function on a fixed grid: one value per cell.
class StepFunction {
public:
    StepFunction(GridPtr grid, std::vector<Cx> values);

    /// Zero function on the grid.
    static StepFunction zero(GridPtr grid);

    /// Indicator of the cell set {k : mask[k]}.
    static StepFunction indicator(GridPtr grid, const std::vector<bool>& mask);

    /// Constant function value  on every cell.
    static StepFunction constant(GridPtr grid, Cx value);

    const GridPtr& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    const Cx& operator[](std::size_t k) const;
    const std::vector<Cx>& values() const { return values_; }

    bool same_grid(const StepFunction& other) const {
        return grid_ == other.grid_ || *grid_ == *other.grid_;
    }

private:
    GridPtr grid_;
    std::vector<Cx> values_;
};

/// <f, g> = sum_k conj(f_k) g_k vol_k  (conjugate-linear in the first slot).
Cx inner(const StepFunction& f, const StepFunction& g);

/// Essential sup norm: max_k |f_k|.
double linf_norm(const StepFunction& f);

/// L^2 norm: sqrt(sum_k |f_k|^2 vol_k).
double l2_norm(const StepFunction& f);

StepFunction pointwise_mul(const StepFunction& f, const StepFunction& g);
StepFunction conjugate(const StepFunction& f);

/// f^n cellwise; n = 0 gives the constant 1.
StepFunction pointwise_pow(const StepFunction& f, int n);

StepFunction add(const StepFunction& f, const StepFunction& g);
StepFunction scale(Cx a, const StepFunction& f);

void require_same_grid(const StepFunction& f, const StepFunction& g,
                       const char* where);

}  // namespace qfock
