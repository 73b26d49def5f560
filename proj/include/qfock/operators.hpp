#pragma once

#include <Eigen/Dense>
#include <optional>

#include "qfock/grid.hpp"

namespace qfock {

using Matrix = Eigen::MatrixXcd;

enum class OperatorKind { Multiplication, Dense, RankOneProjection };

/// Candidate operator p on the step-function space: multiplication by a
/// symbol, a dense matrix in the cell basis, or a rank-one orthogonal
/// projection onto a unit axis (kept in dense-convertible form).
class Operator {
public:
    static Operator multiplication(StepFunction symbol);
    static Operator dense(GridPtr grid, Matrix m);
    static Operator rank_one_projection(StepFunction axis);
    static Operator identity(GridPtr grid);

    OperatorKind kind() const { return kind_; }
    const GridPtr& grid() const { return grid_; }
    /// Multiplication symbol or projection axis; empty otherwise.
    const std::optional<StepFunction>& symbol() const { return symbol_; }

    StepFunction apply(const StepFunction& f) const;
    /// Matrix of the action in the cell basis: column k holds the image
    /// of the k-th indicator, so multiplication gives diag(symbol) and
    /// the rank-one form gives M[j,k] = e_j conj(e_k) vol_k.
    const Matrix& to_dense() const;

private:
    Operator(OperatorKind kind, GridPtr grid, std::optional<StepFunction> sym,
             Matrix m);

    OperatorKind kind_;
    GridPtr grid_;
    std::optional<StepFunction> symbol_;
    Matrix dense_;
};

/// Adjoint w.r.t. the volume-weighted inner product:
/// M*[j,k] = conj(M[k,j]) vol_k / vol_j.
Operator adjoint(const Operator& p);

/// apply(compose(p,q), f) = apply(p, apply(q, f)). Multiplication
/// composed with multiplication stays in multiplication form.
Operator compose(const Operator& p, const Operator& q);

/// Upper bound B with ||p f||_inf <= B ||f||_inf: the symbol sup norm
/// for multiplications, the maximum absolute row sum otherwise.
double infnorm_bound(const Operator& p);

/// Volume-weighted Frobenius norm sqrt(sum_{j,k} |M[j,k]|^2 vol_j);
/// agrees with the L2 norm of the symbol difference for multiplications.
double vol_frobenius(const Matrix& m, const Grid& grid);

struct StructuralReport {
    bool is_contraction_inf = false;
    double contraction_bound = 0.0;
    bool is_idempotent = false;
    double idempotent_residual = 0.0;
    bool is_selfadjoint = false;
    double selfadjoint_residual = 0.0;
    bool is_char_mult = false;
    /// Max distance of symbol values from {0,1}; absent for non-multiplication forms.
    std::optional<double> char_mult_deviation;
    bool commutes_with_conjugation = false;
    double conjugation_residual = 0.0;
};

StructuralReport structural_report(const Operator& p, double tol);

}  // namespace qfock
