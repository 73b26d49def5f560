#include "qfock/json_io.hpp"

#include <cstdio>

namespace qfock {

namespace {

std::string ctx_of(const char* ctx, const char* name) {
    return std::string(ctx) + "." + name;
}

double number_field(const Json& j, const char* name, const char* ctx) {
    const Json& v = require_field(j, name, ctx);
    if (!v.is_number())
        throw InputError("field '" + ctx_of(ctx, name) + "' must be a number");
    return v.get<double>();
}

Cx complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
        !j[1].is_number())
        throw InputError("field '" + where + "' must be a [re, im] pair");
    return Cx(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

const Json& require_field(const Json& j, const char* name, const char* ctx) {
    if (!j.is_object())
        throw InputError("field '" + std::string(ctx) + "' must be an object");
    auto it = j.find(name);
    if (it == j.end())
        throw InputError("missing field '" + ctx_of(ctx, name) + "'");
    return *it;
}

GridPtr grid_from_json(const Json& j, const char* ctx) {
    double dim = number_field(j, "dim", ctx);
    const Json& vols = require_field(j, "volumes", ctx);
    if (!vols.is_array() || vols.empty())
        throw InputError("field '" + ctx_of(ctx, "volumes") +
                         "' must be a nonempty array");
    std::vector<double> volumes;
    volumes.reserve(vols.size());
    for (const Json& v : vols) {
        if (!v.is_number())
            throw InputError("field '" + ctx_of(ctx, "volumes") +
                             "' must contain numbers only");
        volumes.push_back(v.get<double>());
    }
    if (dim != double(int(dim)) || dim < 1)
        throw InputError("field '" + ctx_of(ctx, "dim") +
                         "' must be a positive integer");
    return make_grid(int(dim), std::move(volumes));
}

StepFunction function_from_json(const GridPtr& grid, const Json& j,
                                const char* ctx) {
    const Json& vals = require_field(j, "values", ctx);
    if (!vals.is_array())
        throw InputError("field '" + ctx_of(ctx, "values") +
                         "' must be an array of [re, im] pairs");
    std::vector<Cx> values;
    values.reserve(vals.size());
    for (const Json& v : vals)
        values.push_back(complex_from_json(v, ctx_of(ctx, "values")));
    if (values.size() != grid->num_cells())
        throw InputError("field '" + ctx_of(ctx, "values") + "' has " +
                         std::to_string(values.size()) +
                         " entries but the grid has " +
                         std::to_string(grid->num_cells()) + " cells");
    return StepFunction(grid, std::move(values));
}

Operator operator_from_json(const GridPtr& grid, const Json& j,
                            const char* ctx) {
    const Json& kind = require_field(j, "kind", ctx);
    if (!kind.is_string())
        throw InputError("field '" + ctx_of(ctx, "kind") +
                         "' must be a string");
    std::string k = kind.get<std::string>();
    if (k == "mult") {
        return Operator::multiplication(function_from_json(
            grid, require_field(j, "symbol", ctx), ctx_of(ctx, "symbol").c_str()));
    }
    if (k == "rank1") {
        return Operator::rank_one_projection(function_from_json(
            grid, require_field(j, "axis", ctx), ctx_of(ctx, "axis").c_str()));
    }
    if (k == "dense") {
        const Json& rows = require_field(j, "matrix", ctx);
        std::size_t n = grid->num_cells();
        if (!rows.is_array() || rows.size() != n)
            throw InputError("field '" + ctx_of(ctx, "matrix") +
                             "' must be an array of " + std::to_string(n) +
                             " rows");
        Matrix m = Matrix::Zero(Eigen::Index(n), Eigen::Index(n));
        for (std::size_t r = 0; r < n; ++r) {
            const Json& row = rows[r];
            if (!row.is_array() || row.size() != n)
                throw InputError("field '" + ctx_of(ctx, "matrix") + "' row " +
                                 std::to_string(r) + " must have " +
                                 std::to_string(n) + " entries");
            for (std::size_t c = 0; c < n; ++c)
                m(Eigen::Index(r), Eigen::Index(c)) = complex_from_json(
                    row[c], ctx_of(ctx, "matrix"));
        }
        return Operator::dense(grid, std::move(m));
    }
    throw InputError("field '" + ctx_of(ctx, "kind") +
                     "' must be one of mult, dense, rank1");
}

ModelParams params_from_json(const Json& j) {
    ModelParams params;
    if (j.is_null()) return params;
    if (!j.is_object()) throw InputError("field 'params' must be an object");
    if (j.contains("c")) params.c = number_field(j, "c", "params");
    validate(params);
    return params;
}

SampleConfig sample_from_json(const Json& j, const ModelParams& params) {
    SampleConfig cfg;
    cfg.params = params;
    if (j.is_null()) return cfg;
    if (!j.is_object()) throw InputError("field 'sample' must be an object");
    if (j.contains("seed")) {
        const Json& s = j.at("seed");
        if (!s.is_number_integer() && !s.is_number_unsigned())
            throw InputError("field 'sample.seed' must be an integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("num_pairs"))
        cfg.num_pairs = int(number_field(j, "num_pairs", "sample"));
    if (j.contains("n_max")) cfg.n_max = int(number_field(j, "n_max", "sample"));
    if (j.contains("amp")) cfg.amp = number_field(j, "amp", "sample");
    if (j.contains("tol")) cfg.tol = number_field(j, "tol", "sample");
    if (j.contains("t_grid")) {
        const Json& tg = j.at("t_grid");
        if (!tg.is_array() || tg.empty())
            throw InputError("field 'sample.t_grid' must be a nonempty array");
        cfg.t_grid.clear();
        for (const Json& t : tg) {
            if (!t.is_number())
                throw InputError("field 'sample.t_grid' must contain numbers");
            cfg.t_grid.push_back(t.get<double>());
        }
    }
    validate(cfg);
    return cfg;
}

Json grid_to_json(const Grid& grid) {
    Json j;
    j["dim"] = grid.dim();
    j["volumes"] = grid.volumes();
    return j;
}

Json function_to_json(const StepFunction& f) {
    Json vals = Json::array();
    for (std::size_t k = 0; k < f.size(); ++k)
        vals.push_back(Json::array({f[k].real(), f[k].imag()}));
    Json j;
    j["values"] = std::move(vals);
    return j;
}

namespace {

const char* kind_name(OperatorKind k) {
    switch (k) {
        case OperatorKind::Multiplication: return "mult";
        case OperatorKind::Dense: return "dense";
        case OperatorKind::RankOneProjection: return "rank1";
    }
    return "unknown";
}

}  // namespace

Json certificate_to_json(const Certificate& cert) {
    Json j;
    j["verdict"] = cert.projection ? "Projection" : "NotProjection";
    j["theorem_agreement"] = cert.theorem_agreement;
    j["operator_kind"] = kind_name(cert.operator_kind);

    Json st;
    st["is_contraction_inf"] = cert.structural.is_contraction_inf;
    st["contraction_bound"] = cert.structural.contraction_bound;
    st["is_idempotent"] = cert.structural.is_idempotent;
    st["idempotent_residual"] = cert.structural.idempotent_residual;
    st["is_selfadjoint"] = cert.structural.is_selfadjoint;
    st["selfadjoint_residual"] = cert.structural.selfadjoint_residual;
    st["is_char_mult"] = cert.structural.is_char_mult;
    if (cert.structural.char_mult_deviation)
        st["char_mult_deviation"] = *cert.structural.char_mult_deviation;
    else
        st["char_mult_deviation"] = nullptr;
    st["commutes_with_conjugation"] =
        cert.structural.commutes_with_conjugation;
    st["conjugation_residual"] = cert.structural.conjugation_residual;
    j["structural"] = std::move(st);

    Json checks = Json::array();
    for (const CheckReport& c : cert.checks) {
        Json row;
        row["check"] = c.check;
        row["max_residual"] = c.max_residual;
        row["pass"] = c.pass;
        row["num_evals"] = c.num_evals;
        checks.push_back(std::move(row));
    }
    j["checks"] = std::move(checks);

    if (cert.witness) {
        Json w;
        w["check"] = cert.witness->check;
        w["f"] = cert.witness->f;
        w["g"] = cert.witness->g;
        if (cert.witness->n) w["n"] = *cert.witness->n;
        else w["n"] = nullptr;
        if (cert.witness->t) w["t"] = *cert.witness->t;
        else w["t"] = nullptr;
        w["residual"] = cert.witness->residual;
        j["witness"] = std::move(w);
    } else {
        j["witness"] = nullptr;
    }

    Json cfg;
    cfg["seed"] = cert.config.seed;
    cfg["num_pairs"] = cert.config.num_pairs;
    cfg["n_max"] = cert.config.n_max;
    cfg["amp"] = cert.config.amp;
    cfg["t_grid"] = cert.config.t_grid;
    cfg["c"] = cert.config.params.c;
    cfg["tol"] = cert.config.tol;
    j["config"] = std::move(cfg);
    return j;
}

std::string format_float(double v) {
    if (v == 0.0) v = 0.0;  // canonicalize -0
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace qfock
