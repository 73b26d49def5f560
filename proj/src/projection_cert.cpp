#include "qfock/projection_cert.hpp"

#include <cmath>

#include "qfock/fock.hpp"

namespace qfock {

namespace {

// Residual of a should-be-equal triple: absolute near zero, relative
// above magnitude one (kernel values grow near the existence boundary).
double triple_residual(Cx v1, Cx v2, Cx v3) {
    double diff = std::max({std::abs(v1 - v2), std::abs(v1 - v3),
                            std::abs(v2 - v3)});
    double mag = std::max({std::abs(v1), std::abs(v2), std::abs(v3)});
    return diff / std::max(1.0, mag);
}

struct MaxTracker {
    CheckReport rep;

    explicit MaxTracker(std::string name) { rep.check = std::move(name); }

    void feed(double r, const std::string& f, const std::string& g,
              std::optional<int> n, std::optional<double> t) {
        ++rep.num_evals;
        if (rep.num_evals == 1 || r > rep.max_residual) {
            rep.max_residual = r;
            rep.worst_f = f;
            rep.worst_g = g;
            rep.worst_n = n;
            rep.worst_t = t;
        }
    }

    CheckReport finish(double tol) {
        rep.pass = rep.max_residual <= tol;
        return rep;
    }
};

void require_contraction(const Operator& p, double tol) {
    double bound = infnorm_bound(p);
    if (bound > 1.0 + tol)
        throw NotAContraction("operator inf-norm bound " +
                              std::to_string(bound) +
                              " exceeds 1; second quantization undefined");
}

}  // namespace

ResidualReport battery_exponential(const Operator& p, const SampleConfig& cfg) {
    validate(cfg);
    require_contraction(p, cfg.tol);
    auto inputs = battery_inputs(p.grid(), cfg, /*scale_indicators=*/true);

    MaxTracker exp_check("exponential");
    for (const auto& [nf, ng] : inputs) {
        for (double t : cfg.t_grid) {
            double s = std::sqrt(t);
            StepFunction sf = scale(s, nf.fn);
            StepFunction sg = scale(s, ng.fn);
            StepFunction psf = p.apply(sf);
            StepFunction psg = p.apply(sg);
            Cx v1 = exp_kernel_closed(psf, psg, cfg.params);
            Cx v2 = exp_kernel_closed(psf, sg, cfg.params);
            Cx v3 = exp_kernel_closed(sf, psg, cfg.params);
            exp_check.feed(triple_residual(v1, v2, v3), nf.name, ng.name,
                           std::nullopt, t);
        }
    }
    return {{exp_check.finish(cfg.tol)}};
}

ResidualReport battery_powers(const Operator& p, const SampleConfig& cfg) {
    validate(cfg);
    require_contraction(p, cfg.tol);
    auto inputs = battery_inputs(p.grid(), cfg, /*scale_indicators=*/false);

    MaxTracker pw("powers");
    MaxTracker np("powers_nparticle");
    int np_depth = std::min(cfg.n_max, 6);
    for (const auto& [nf, ng] : inputs) {
        StepFunction pf = p.apply(nf.fn);
        StepFunction pg = p.apply(ng.fn);
        for (int n = 1; n <= cfg.n_max; ++n) {
            Cx v1 = inner(pointwise_pow(pf, n), pointwise_pow(pg, n));
            Cx v2 = inner(pointwise_pow(nf.fn, n), pointwise_pow(pg, n));
            Cx v3 = inner(pointwise_pow(pf, n), pointwise_pow(ng.fn, n));
            pw.feed(triple_residual(v1, v2, v3), nf.name, ng.name, n,
                    std::nullopt);
        }
        for (int n = 1; n <= np_depth; ++n) {
            Cx v1 = nparticle_inner(pf, pg, n, cfg.params);
            Cx v2 = nparticle_inner(pf, ng.fn, n, cfg.params);
            Cx v3 = nparticle_inner(nf.fn, pg, n, cfg.params);
            np.feed(triple_residual(v1, v2, v3), nf.name, ng.name, n,
                    std::nullopt);
        }
    }
    return {{pw.finish(cfg.tol), np.finish(cfg.tol)}};
}

ResidualReport pointwise_checks(const Operator& p, const SampleConfig& cfg) {
    validate(cfg);
    auto inputs = battery_inputs(p.grid(), cfg, /*scale_indicators=*/false);

    MaxTracker reality("pointwise_reality");
    MaxTracker cubic("pointwise_cubic");
    auto feed_one = [&](const NamedFunction& nf) {
        StepFunction pf = p.apply(nf.fn);
        StepFunction lhs = p.apply(conjugate(nf.fn));
        double r = l2_norm(add(lhs, scale(-1.0, conjugate(pf))));
        reality.feed(r, nf.name, "", std::nullopt, std::nullopt);

        // |pg|^2 pg = (pg)^2 conj(g), cellwise.
        StepFunction abs2 = pointwise_mul(conjugate(pf), pf);
        StepFunction lhs3 = pointwise_mul(abs2, pf);
        StepFunction rhs3 = pointwise_mul(pointwise_pow(pf, 2),
                                          conjugate(nf.fn));
        double rc = l2_norm(add(lhs3, scale(-1.0, rhs3)));
        cubic.feed(rc, nf.name, "", std::nullopt, std::nullopt);
    };
    for (const auto& [nf, ng] : inputs) {
        feed_one(nf);
        if (ng.name != nf.name) feed_one(ng);
    }
    return {{reality.finish(cfg.tol), cubic.finish(cfg.tol)}};
}

ResidualReport operator_checks(const Operator& p, const SampleConfig& cfg) {
    validate(cfg);
    auto inputs = battery_inputs(p.grid(), cfg, /*scale_indicators=*/false);
    const Grid& grid = *p.grid();

    MaxTracker war("operator_war");
    MaxTracker dual("operator_dual");
    for (const auto& [nf, ng] : inputs) {
        StepFunction pf = p.apply(nf.fn);
        StepFunction pg = p.apply(ng.fn);

        Operator lhs_war =
            Operator::multiplication(pointwise_pow(pg, 2));
        Operator rhs_war = compose(
            p, compose(Operator::multiplication(pointwise_pow(ng.fn, 2)), p));
        war.feed(vol_frobenius(lhs_war.to_dense() - rhs_war.to_dense(), grid),
                 nf.name, ng.name, std::nullopt, std::nullopt);

        Operator lhs_dual = compose(
            Operator::multiplication(pointwise_mul(pf, conjugate(ng.fn))), p);
        Operator rhs_dual = compose(
            p, Operator::multiplication(pointwise_mul(nf.fn, conjugate(pg))));
        dual.feed(
            vol_frobenius(lhs_dual.to_dense() - rhs_dual.to_dense(), grid),
            nf.name, ng.name, std::nullopt, std::nullopt);
    }

    StructuralReport rep = structural_report(p, cfg.tol);
    CheckReport idem;
    idem.check = "operator_idempotent";
    idem.max_residual = rep.idempotent_residual;
    idem.pass = rep.is_idempotent;
    idem.num_evals = 1;
    CheckReport sa;
    sa.check = "operator_selfadjoint";
    sa.max_residual = rep.selfadjoint_residual;
    sa.pass = rep.is_selfadjoint;
    sa.num_evals = 1;

    return {{war.finish(cfg.tol), dual.finish(cfg.tol), idem, sa}};
}

Certificate certify(const Operator& p, const SampleConfig& cfg) {
    validate(cfg);
    Certificate cert;
    cert.operator_kind = p.kind();
    cert.config = cfg;
    cert.structural = structural_report(p, cfg.tol);

    CheckReport contraction;
    contraction.check = "contraction";
    contraction.num_evals = 1;
    contraction.max_residual =
        std::max(0.0, cert.structural.contraction_bound - 1.0);
    contraction.pass = cert.structural.is_contraction_inf;
    cert.checks.push_back(contraction);

    if (contraction.pass) {
        ResidualReport powers = battery_powers(p, cfg);
        ResidualReport expo = battery_exponential(p, cfg);
        cert.checks.push_back(powers.checks[0]);       // powers
        cert.checks.push_back(expo.checks[0]);         // exponential
        ResidualReport pointwise = pointwise_checks(p, cfg);
        ResidualReport oper = operator_checks(p, cfg);
        for (auto& c : pointwise.checks) cert.checks.push_back(std::move(c));
        for (auto& c : oper.checks) cert.checks.push_back(std::move(c));
        cert.checks.push_back(powers.checks[1]);       // powers_nparticle
    } else {
        ResidualReport pointwise = pointwise_checks(p, cfg);
        ResidualReport oper = operator_checks(p, cfg);
        for (auto& c : pointwise.checks) cert.checks.push_back(std::move(c));
        for (auto& c : oper.checks) cert.checks.push_back(std::move(c));
    }

    cert.projection = true;
    for (const CheckReport& c : cert.checks) cert.projection &= c.pass;

    // Witness priority: identity batteries first, then the pointwise and
    // operator forms, then the cross-module check, then the precondition.
    static const char* kWitnessOrder[] = {
        "powers",        "exponential",          "pointwise_reality",
        "pointwise_cubic", "operator_war",       "operator_dual",
        "operator_idempotent", "operator_selfadjoint", "powers_nparticle",
        "contraction"};
    if (!cert.projection) {
        for (const char* name : kWitnessOrder) {
            for (const CheckReport& c : cert.checks) {
                if (c.check == name && !c.pass) {
                    cert.witness = Witness{c.check, c.worst_f, c.worst_g,
                                           c.worst_n, c.worst_t,
                                           c.max_residual};
                    break;
                }
            }
            if (cert.witness) break;
        }
    }
    cert.theorem_agreement = (cert.projection == cert.structural.is_char_mult);
    return cert;
}

Matrix gram_matrix(const std::vector<StepFunction>& functions,
                   const ModelParams& params) {
    if (functions.empty()) throw InputError("gram_matrix needs >= 1 function");
    Eigen::Index n = Eigen::Index(functions.size());
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            g(i, j) = exp_kernel_closed(functions[std::size_t(i)],
                                        functions[std::size_t(j)], params);
    return g;
}

std::vector<std::pair<std::string, Operator>> counterexample_zoo(
    const GridPtr& grid) {
    if (grid->num_cells() < 2)
        throw InputError("counterexample zoo needs a grid with >= 2 cells");
    std::vector<std::pair<std::string, Operator>> zoo;

    std::vector<bool> first_two(grid->num_cells(), false);
    first_two[0] = first_two[1] = true;
    StepFunction axis = StepFunction::indicator(grid, first_two);
    axis = scale(1.0 / l2_norm(axis), axis);
    zoo.emplace_back("rank_one_projection",
                     Operator::rank_one_projection(axis));

    zoo.emplace_back("non_idempotent_mult",
                     Operator::multiplication(
                         StepFunction::constant(grid, Cx(0.5, 0.0))));

    std::vector<bool> first(grid->num_cells(), false);
    first[0] = true;
    zoo.emplace_back("complex_symbol_mult",
                     Operator::multiplication(scale(
                         Cx(0.0, 1.0), StepFunction::indicator(grid, first))));

    Eigen::Index n = Eigen::Index(grid->num_cells());
    Matrix shift = Matrix::Zero(n, n);
    for (Eigen::Index j = 1; j < n; ++j) shift(j, j - 1) = Cx(0.8, 0.0);
    zoo.emplace_back("dense_shift", Operator::dense(grid, std::move(shift)));
    return zoo;
}

}  // namespace qfock
