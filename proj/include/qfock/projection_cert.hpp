#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfock/operators.hpp"
#include "qfock/sampling.hpp"

namespace qfock {

/// One identity family evaluated over the battery inputs, with the
/// argmax input kept so a failure can be pointed at concretely.
struct CheckReport {
    std::string check;
    double max_residual = 0.0;
    bool pass = true;
    int num_evals = 0;
    std::string worst_f;
    std::string worst_g;
    std::optional<int> worst_n;
    std::optional<double> worst_t;
};

struct ResidualReport {
    std::vector<CheckReport> checks;
};

struct Witness {
    std::string check;
    std::string f;
    std::string g;
    std::optional<int> n;
    std::optional<double> t;
    double residual = 0.0;
};

struct Certificate {
    OperatorKind operator_kind;
    StructuralReport structural;
    std::vector<CheckReport> checks;
    std::optional<Witness> witness;
    bool projection = false;  // verdict
    bool theorem_agreement = false;
    SampleConfig config;
};

/// Kernel identity K(sqrt(t) pf, sqrt(t) pg) = K(sqrt(t) pf, sqrt(t) g)
/// = K(sqrt(t) f, sqrt(t) pg) over sampled pairs and the t grid.
/// Requires an inf-norm contraction (throws NotAContraction otherwise).
ResidualReport battery_exponential(const Operator& p, const SampleConfig& cfg);

/// Power identity <(pf)^n,(pg)^n> = <f^n,(pg)^n> = <(pf)^n,g^n> for
/// n = 1..n_max, plus the n-particle inner product version for
/// n <= min(n_max, 6) as a separate check row.
ResidualReport battery_powers(const Operator& p, const SampleConfig& cfg);

/// Necessary pointwise conditions: p(conj(f)) = conj(p(f)) and
/// |pg|^2 pg = (pg)^2 conj(g).
ResidualReport pointwise_checks(const Operator& p, const SampleConfig& cfg);

/// Operator identities as dense matrices: M_{(pg)^2} = p M_{g^2} p and
/// M_{p(f) conj(g)} p = p M_{f conj(p(g))}, plus the p = p* = p^2
/// residuals.
ResidualReport operator_checks(const Operator& p, const SampleConfig& cfg);

/// Runs the structural report and all batteries; verdict Projection iff
/// every check passes at cfg.tol; the witness is the argmax input of the
/// first failing check in the fixed check order.
Certificate certify(const Operator& p, const SampleConfig& cfg);

/// G[i,j] = exp_kernel_closed(f_i, f_j); all functions need sup norm < 1/2.
Matrix gram_matrix(const std::vector<StepFunction>& functions,
                   const ModelParams& params);

/// Named non-examples used by the completeness tests: a rank-one
/// projection, a non-idempotent multiplication, a complex-symbol
/// multiplication and a dense non-normal contraction. Needs >= 2 cells.
std::vector<std::pair<std::string, Operator>> counterexample_zoo(
    const GridPtr& grid);

}  // namespace qfock
