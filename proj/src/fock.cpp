#include "qfock/fock.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qfock/power_series.hpp"

namespace qfock {

namespace {

constexpr int kMaxParticles = 150;
constexpr int kMaxSeriesTerms = 500;

// Mixed-power moments M_j = <f^j, g^j> for j = 1..n.
std::vector<Cx> mixed_moments(const StepFunction& f, const StepFunction& g,
                              int n) {
    std::vector<Cx> M(std::size_t(n) + 1, Cx(0.0, 0.0));
    const auto& vols = f.grid()->volumes();
    std::vector<Cx> fp(f.size()), gp(g.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        fp[k] = Cx(1.0, 0.0);
        gp[k] = Cx(1.0, 0.0);
    }
    for (int j = 1; j <= n; ++j) {
        Cx acc(0.0, 0.0);
        for (std::size_t k = 0; k < f.size(); ++k) {
            fp[k] *= f[k];
            gp[k] *= g[k];
            acc += std::conj(fp[k]) * gp[k] * vols[k];
        }
        M[std::size_t(j)] = acc;
    }
    return M;
}

// sigma_m = <B+^m_f Phi, B+^m_g Phi> / (m!)^2 satisfies
// sigma_m = (c/m) sum_{k=0}^{m-1} 2^(2k+1) M_{k+1} sigma_{m-k-1}.
// Extends sigma in place up to index n given moments M up to n.
void extend_sigma(std::vector<Cx>& sigma, const std::vector<Cx>& M, int n,
                  double c) {
    if (sigma.empty()) sigma.push_back(Cx(1.0, 0.0));
    for (int m = int(sigma.size()); m <= n; ++m) {
        Cx acc(0.0, 0.0);
        double w = 2.0;  // 2^(2k+1)
        for (int k = 0; k < m; ++k) {
            acc += w * M[std::size_t(k) + 1] * sigma[std::size_t(m - k - 1)];
            w *= 4.0;
        }
        sigma.push_back(c / double(m) * acc);
    }
}

void check_existence_single(const StepFunction& f, const StepFunction& g) {
    if (linf_norm(f) >= 0.5 || linf_norm(g) >= 0.5)
        throw ExistenceViolation(
            "existence condition violated: ||f||_inf >= 0.5");
}

void check_existence_product(const StepFunction& f, const StepFunction& g) {
    if (linf_norm(f) * linf_norm(g) >= 0.25)
        throw ExistenceViolation(
            "existence condition violated: ||f||_inf * ||g||_inf >= 0.25");
}

// Per-step growth factor of the normalized norm bound:
// q_m^2 <= G(m) q_{m-1}^2 with G(m) = (4(m-1) linf^2 + 2 l2^2) / m.
double growth_factor(int m, double linf2, double l22) {
    return (4.0 * double(m - 1) * linf2 + 2.0 * l22) / double(m);
}

}  // namespace

void validate(const ModelParams& params) {
    if (!(params.c > 0.0) || !std::isfinite(params.c))
        throw InputError("model constant c must be positive and finite");
}

Cx nparticle_inner(const StepFunction& f, const StepFunction& g, int n,
                   const ModelParams& params) {
    require_same_grid(f, g, "nparticle_inner");
    validate(params);
    if (n < 0) throw InputError("particle number n must be >= 0");
    if (n > kMaxParticles)
        throw Overflow("n-particle recursion capped at n = " +
                       std::to_string(kMaxParticles));
    if (n == 0) return Cx(1.0, 0.0);

    std::vector<Cx> M = mixed_moments(f, g, n);
    std::vector<Cx> sigma;
    extend_sigma(sigma, M, n, params.c);
    Cx s = sigma[std::size_t(n)];
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw Overflow("n-particle recursion exceeded double range");

    double fact2 = 1.0;  // (n!)^2
    for (int j = 1; j <= n; ++j) fact2 *= double(j) * double(j);
    if (std::isfinite(fact2)) {
        Cx out = s * fact2;
        if (std::isfinite(out.real()) && std::isfinite(out.imag())) return out;
    }
    double mag = std::abs(s);
    if (mag == 0.0) return Cx(0.0, 0.0);
    double ln_out = std::log(mag) + 2.0 * std::lgamma(double(n) + 1.0);
    if (ln_out >= std::log(std::numeric_limits<double>::max()))
        throw Overflow("n-particle inner product exceeds double range");
    return (s / mag) * std::exp(ln_out);
}

Cx exp_kernel_closed(const StepFunction& f, const StepFunction& g,
                     const ModelParams& params) {
    require_same_grid(f, g, "exp_kernel_closed");
    validate(params);
    check_existence_single(f, g);
    const auto& vols = f.grid()->volumes();
    Cx acc(0.0, 0.0);
    for (std::size_t k = 0; k < vols.size(); ++k)
        acc += std::log(Cx(1.0, 0.0) - 4.0 * std::conj(f[k]) * g[k]) * vols[k];
    return std::exp(-0.5 * params.c * acc);
}

SeriesResult exp_kernel_series(const StepFunction& f, const StepFunction& g,
                               const ModelParams& params, double rel_tol) {
    require_same_grid(f, g, "exp_kernel_series");
    validate(params);
    if (!(rel_tol > 0.0)) throw InputError("rel_tol must be positive");
    check_existence_product(f, g);

    double lf2 = linf_norm(f) * linf_norm(f);
    double lg2 = linf_norm(g) * linf_norm(g);
    double af2 = l2_norm(f) * l2_norm(f);
    double ag2 = l2_norm(g) * l2_norm(g);

    SeriesResult res;
    std::vector<Cx> M;   // extended lazily: M_j = <f^j, g^j>
    std::vector<Cx> fp;  // running cell powers
    std::vector<Cx> gp;
    M.push_back(Cx(0.0, 0.0));  // index 0 unused
    fp.assign(f.size(), Cx(1.0, 0.0));
    gp.assign(g.size(), Cx(1.0, 0.0));
    const auto& vols = f.grid()->volumes();

    std::vector<Cx> sigma;
    Cx partial(0.0, 0.0);
    double term_bound = 1.0;  // T_m, upper bound on |sigma_m|; T_0 = 1

    for (int m = 0; m < kMaxSeriesTerms; ++m) {
        if (m >= 1) {
            Cx acc(0.0, 0.0);
            for (std::size_t k = 0; k < f.size(); ++k) {
                fp[k] *= f[k];
                gp[k] *= g[k];
                acc += std::conj(fp[k]) * gp[k] * vols[k];
            }
            M.push_back(acc);
        }
        extend_sigma(sigma, M, m, params.c);
        partial += sigma[std::size_t(m)];
        res.term_magnitudes.push_back(term_bound);

        // T_{m+1} and the worst-case ratio for all later steps; the
        // growth factor is monotone toward its limit 4 linf^2, so the
        // max of the next value and the limit dominates every
        // subsequent step.
        double gf = growth_factor(m + 1, lf2, af2);
        double gg = growth_factor(m + 1, lg2, ag2);
        double next_bound = term_bound * std::sqrt(gf * gg);
        double rho = std::sqrt(std::max(gf, 4.0 * lf2) *
                               std::max(gg, 4.0 * lg2));
        if (rho < 1.0) {
            double tail = next_bound / (1.0 - rho);
            if (tail <= rel_tol * std::abs(partial)) {
                res.value = partial;
                res.terms_used = m + 1;
                res.tail_bound = tail;
                return res;
            }
        }
        term_bound = next_bound;
    }
    throw NoConvergence("kernel series did not converge within " +
                        std::to_string(kMaxSeriesTerms) + " terms");
}

std::vector<Cx> kernel_taylor(const StepFunction& f, const StepFunction& g,
                              const ModelParams& params, int N) {
    require_same_grid(f, g, "kernel_taylor");
    validate(params);
    if (N < 0) throw InputError("taylor order N must be >= 0");
    check_existence_product(f, g);

    // Log of the kernel as a series in t:
    // phi(t) = -c/2 sum_k vol_k ln(1 - 4 conj(f_k) g_k t).
    PowerSeries phi = PowerSeries::zero(std::size_t(N));
    const auto& vols = f.grid()->volumes();
    for (std::size_t k = 0; k < f.size(); ++k) {
        Cx z = 4.0 * std::conj(f[k]) * g[k];
        PowerSeries cell = log_one_minus(z, std::size_t(N));
        for (std::size_t n = 1; n <= std::size_t(N); ++n)
            phi[n] += 0.5 * params.c * vols[k] * cell[n];
    }
    return exp_series(phi).coeffs();
}

}  // namespace qfock
