#include "qfock/operators.hpp"

#include <cmath>
#include <utility>

namespace qfock {

namespace {

Matrix mult_matrix(const StepFunction& a) {
    Eigen::Index n = Eigen::Index(a.size());
    Matrix m = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) m(k, k) = a[std::size_t(k)];
    return m;
}

Matrix rank_one_matrix(const StepFunction& e) {
    Eigen::Index n = Eigen::Index(e.size());
    const auto& vols = e.grid()->volumes();
    Matrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index k = 0; k < n; ++k)
            m(j, k) = e[std::size_t(j)] * std::conj(e[std::size_t(k)]) *
                      vols[std::size_t(k)];
    return m;
}

}  // namespace

Operator::Operator(OperatorKind kind, GridPtr grid,
                   std::optional<StepFunction> sym, Matrix m)
    : kind_(kind), grid_(std::move(grid)), symbol_(std::move(sym)),
      dense_(std::move(m)) {}

Operator Operator::multiplication(StepFunction symbol) {
    GridPtr grid = symbol.grid();
    Matrix m = mult_matrix(symbol);
    return Operator(OperatorKind::Multiplication, std::move(grid),
                    std::move(symbol), std::move(m));
}

Operator Operator::dense(GridPtr grid, Matrix m) {
    Eigen::Index n = Eigen::Index(grid->num_cells());
    if (m.rows() != n || m.cols() != n)
        throw GridMismatch("dense operator matrix must be cells x cells");
    if (!m.allFinite()) throw InputError("dense operator entries must be finite");
    return Operator(OperatorKind::Dense, std::move(grid), std::nullopt,
                    std::move(m));
}

Operator Operator::rank_one_projection(StepFunction axis) {
    double norm = l2_norm(axis);
    if (std::abs(norm - 1.0) > 1e-12)
        throw InputError("rank-one projection axis must satisfy "
                         "| ||e||_2 - 1 | <= 1e-12");
    GridPtr grid = axis.grid();
    Matrix m = rank_one_matrix(axis);
    return Operator(OperatorKind::RankOneProjection, std::move(grid),
                    std::move(axis), std::move(m));
}

Operator Operator::identity(GridPtr grid) {
    return multiplication(StepFunction::constant(std::move(grid), Cx(1.0, 0.0)));
}

StepFunction Operator::apply(const StepFunction& f) const {
    if (!(f.grid() == grid_ || *f.grid() == *grid_))
        throw GridMismatch("apply: operand grid differs from operator grid");
    switch (kind_) {
        case OperatorKind::Multiplication:
            return pointwise_mul(*symbol_, f);
        case OperatorKind::RankOneProjection:
            return scale(inner(*symbol_, f), *symbol_);
        case OperatorKind::Dense: {
            std::vector<Cx> out(f.size(), Cx(0.0, 0.0));
            for (std::size_t j = 0; j < f.size(); ++j) {
                Cx acc(0.0, 0.0);
                for (std::size_t k = 0; k < f.size(); ++k)
                    acc += dense_(Eigen::Index(j), Eigen::Index(k)) * f[k];
                out[j] = acc;
            }
            return StepFunction(f.grid(), std::move(out));
        }
    }
    throw InputError("unknown operator kind");
}

const Matrix& Operator::to_dense() const { return dense_; }

Operator adjoint(const Operator& p) {
    switch (p.kind()) {
        case OperatorKind::Multiplication:
            return Operator::multiplication(conjugate(*p.symbol()));
        case OperatorKind::RankOneProjection:
            return p;
        case OperatorKind::Dense: {
            const Matrix& m = p.to_dense();
            const auto& vols = p.grid()->volumes();
            Matrix out(m.rows(), m.cols());
            for (Eigen::Index j = 0; j < m.rows(); ++j)
                for (Eigen::Index k = 0; k < m.cols(); ++k)
                    out(j, k) = std::conj(m(k, j)) * vols[std::size_t(k)] /
                                vols[std::size_t(j)];
            return Operator::dense(p.grid(), std::move(out));
        }
    }
    throw InputError("unknown operator kind");
}

Operator compose(const Operator& p, const Operator& q) {
    if (!(p.grid() == q.grid() || *p.grid() == *q.grid()))
        throw GridMismatch("compose: operators live on different grids");
    if (p.kind() == OperatorKind::Multiplication &&
        q.kind() == OperatorKind::Multiplication)
        return Operator::multiplication(pointwise_mul(*p.symbol(), *q.symbol()));
    return Operator::dense(p.grid(), p.to_dense() * q.to_dense());
}

double infnorm_bound(const Operator& p) {
    if (p.kind() == OperatorKind::Multiplication) return linf_norm(*p.symbol());
    const Matrix& m = p.to_dense();
    double bound = 0.0;
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
        double row = 0.0;
        for (Eigen::Index k = 0; k < m.cols(); ++k) row += std::abs(m(j, k));
        bound = std::max(bound, row);
    }
    return bound;
}

double vol_frobenius(const Matrix& m, const Grid& grid) {
    if (m.rows() != Eigen::Index(grid.num_cells()))
        throw GridMismatch("vol_frobenius: matrix rows must match cell count");
    double acc = 0.0;
    for (Eigen::Index j = 0; j < m.rows(); ++j)
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            acc += std::norm(m(j, k)) * grid.volume(std::size_t(j));
    return std::sqrt(acc);
}

StructuralReport structural_report(const Operator& p, double tol) {
    if (!(tol > 0.0)) throw InputError("structural tolerance must be positive");
    StructuralReport rep;
    const Grid& grid = *p.grid();
    const Matrix& d = p.to_dense();

    rep.contraction_bound = infnorm_bound(p);
    rep.is_contraction_inf = rep.contraction_bound <= 1.0 + tol;

    rep.idempotent_residual = vol_frobenius(d * d - d, grid);
    rep.is_idempotent = rep.idempotent_residual <= tol;

    rep.selfadjoint_residual = vol_frobenius(adjoint(p).to_dense() - d, grid);
    rep.is_selfadjoint = rep.selfadjoint_residual <= tol;

    if (p.kind() == OperatorKind::Multiplication) {
        double dev = 0.0;
        const StepFunction& a = *p.symbol();
        for (std::size_t k = 0; k < a.size(); ++k)
            dev = std::max(dev, std::min(std::abs(a[k]),
                                         std::abs(a[k] - Cx(1.0, 0.0))));
        rep.char_mult_deviation = dev;
        rep.is_char_mult = dev <= tol;
    } else {
        rep.char_mult_deviation = std::nullopt;
        rep.is_char_mult = false;
    }

    // p(conj(f)) = conj(p(f)) tested on the cell indicators: column by
    // column this measures the imaginary part of the matrix.
    double conj_res = 0.0;
    for (std::size_t k = 0; k < grid.num_cells(); ++k) {
        std::vector<bool> mask(grid.num_cells(), false);
        mask[k] = true;
        StepFunction chi = StepFunction::indicator(p.grid(), mask);
        StepFunction lhs = p.apply(conjugate(chi));
        StepFunction rhs = conjugate(p.apply(chi));
        conj_res = std::max(conj_res, l2_norm(add(lhs, scale(-1.0, rhs))));
    }
    rep.conjugation_residual = conj_res;
    rep.commutes_with_conjugation = conj_res <= tol;
    return rep;
}

}  // namespace qfock
