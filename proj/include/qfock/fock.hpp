#pragma once

#include <vector>

#include "qfock/grid.hpp"

namespace qfock {

/// Model constant c appearing in the commutation relations.
struct ModelParams {
    double c = 1.0;
};

void validate(const ModelParams& params);

/// <B+^n_f Phi, B+^n_g Phi> via the two-argument recursion over
/// mixed-power inner products <f^j, g^j>, bottom-up from the vacuum.
/// n = 0 returns exactly 1 (vacuum normalization).
/// The result is assembled from the normalized quantity S_n / (n!)^2,
/// which keeps the recursion in range; the factorial factor is applied
/// last, in log space when it would overflow on its own.
Cx nparticle_inner(const StepFunction& f, const StepFunction& g, int n,
                   const ModelParams& params);

/// Kernel of two exponential vectors:
/// exp(-c/2 sum_k vol_k ln(1 - 4 conj(f_k) g_k)), principal branch.
/// Requires ||f||_inf < 1/2 and ||g||_inf < 1/2.
Cx exp_kernel_closed(const StepFunction& f, const StepFunction& g,
                     const ModelParams& params);

/// Truncated series value with a rigorous tail bound.
struct SeriesResult {
    Cx value;
    int terms_used = 0;
    double tail_bound = 0.0;
    std::vector<double> term_magnitudes;  // per-term upper bounds
};

/// Same kernel as exp_kernel_closed, summed as
/// sum_m <B+^m_f Phi, B+^m_g Phi> / (m!)^2 with a geometric tail bound
/// built from the norm growth estimate
/// ||B+^m_f Phi||^2 <= [4m(m-1)||f||_inf^2 + 2m||f||_2^2] ||B+^(m-1)_f Phi||^2.
/// Requires ||f||_inf * ||g||_inf < 1/4; stops once the bound ratio
/// drops below 1 and the tail is below rel_tol * |partial sum|.
SeriesResult exp_kernel_series(const StepFunction& f, const StepFunction& g,
                               const ModelParams& params,
                               double rel_tol = 1e-10);

/// Taylor coefficients a_0..a_N of t -> <Psi(sqrt(t) f), Psi(sqrt(t) g)>,
/// so (n!)^2 a_n is the n-particle inner product. Exact power-series
/// arithmetic: per-cell log series, then exp of the summed series.
std::vector<Cx> kernel_taylor(const StepFunction& f, const StepFunction& g,
                              const ModelParams& params, int N);

}  // namespace qfock
