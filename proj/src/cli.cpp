#include "qfock/cli.hpp"

#include <Eigen/Eigenvalues>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "qfock/fock.hpp"
#include "qfock/json_io.hpp"
#include "qfock/normal_order.hpp"
#include "qfock/projection_cert.hpp"
#include "qfock/sampling.hpp"

namespace qfock {

namespace {

namespace fs = std::filesystem;

struct OutFile {
    std::string name;
    std::string content;
};

struct JobResult {
    int status = 0;
    std::vector<OutFile> files;
    std::string stdout_text;
};

using FunctionMap = std::map<std::string, StepFunction>;

const char* csv_bool(bool b) { return b ? "true" : "false"; }

const StepFunction& resolve(const FunctionMap& functions,
                            const std::string& name, const char* field) {
    auto it = functions.find(name);
    if (it == functions.end())
        throw InputError("field '" + std::string(field) +
                         "' references unknown function '" + name + "'");
    return it->second;
}

double opt_number(const Json& job, const char* name, double fallback) {
    if (!job.contains(name)) return fallback;
    const Json& v = job.at(name);
    if (!v.is_number())
        throw InputError("field '" + std::string(name) +
                         "' must be a number");
    return v.get<double>();
}

int opt_int(const Json& job, const char* name, int fallback) {
    double v = opt_number(job, name, double(fallback));
    if (v != double(int(v)))
        throw InputError("field '" + std::string(name) +
                         "' must be an integer");
    return int(v);
}

std::string opt_string(const Json& job, const char* name,
                       const std::string& fallback) {
    if (!job.contains(name)) return fallback;
    const Json& v = job.at(name);
    if (!v.is_string())
        throw InputError("field '" + std::string(name) +
                         "' must be a string");
    return v.get<std::string>();
}

double rel_error(Cx a, Cx b) {
    double mag = std::max(std::abs(a), std::abs(b));
    if (mag == 0.0) return 0.0;
    return std::abs(a - b) / mag;
}

JobResult run_kernel(const Json& job, const FunctionMap& functions,
                     const ModelParams& params) {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (job.contains("pairs")) {
        const Json& p = job.at("pairs");
        if (!p.is_array() || p.empty())
            throw InputError("field 'pairs' must be a nonempty array");
        for (const Json& e : p) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_string() ||
                !e[1].is_string())
                throw InputError(
                    "field 'pairs' entries must be [f_name, g_name]");
            pairs.emplace_back(e[0].get<std::string>(),
                               e[1].get<std::string>());
        }
    } else {
        pairs.emplace_back("f", "g");
    }
    std::string method = opt_string(job, "method", "closed");
    if (method != "closed" && method != "series" && method != "both")
        throw InputError("field 'method' must be closed, series or both");
    double rel_tol = opt_number(job, "rel_tol", 1e-10);

    std::ostringstream csv;
    std::ostringstream text;
    csv << "f_name,g_name,c,value_re,value_im,method,tail_bound\n";
    for (const auto& [fname, gname] : pairs) {
        const StepFunction& f = resolve(functions, fname, "pairs");
        const StepFunction& g = resolve(functions, gname, "pairs");
        if (method == "closed" || method == "both") {
            Cx v = exp_kernel_closed(f, g, params);
            csv << fname << ',' << gname << ',' << format_float(params.c)
                << ',' << format_float(v.real()) << ','
                << format_float(v.imag()) << ",closed,"
                << format_float(0.0) << '\n';
            text << "kernel closed " << fname << ' ' << gname << " = "
                 << format_float(v.real()) << ' ' << format_float(v.imag())
                 << '\n';
        }
        if (method == "series" || method == "both") {
            SeriesResult r = exp_kernel_series(f, g, params, rel_tol);
            csv << fname << ',' << gname << ',' << format_float(params.c)
                << ',' << format_float(r.value.real()) << ','
                << format_float(r.value.imag()) << ",series,"
                << format_float(r.tail_bound) << '\n';
            text << "kernel series " << fname << ' ' << gname << " = "
                 << format_float(r.value.real()) << ' '
                 << format_float(r.value.imag()) << " terms "
                 << r.terms_used << '\n';
        }
    }
    JobResult res;
    res.files.push_back({"kernel.csv", csv.str()});
    res.stdout_text = text.str();
    return res;
}

JobResult run_nparticle(const Json& job, const FunctionMap& functions,
                        const ModelParams& params) {
    std::string fname = opt_string(job, "f", "f");
    std::string gname = opt_string(job, "g", "g");
    int n_lo = 0;
    int n_hi;
    if (job.contains("n")) {
        n_hi = opt_int(job, "n", 0);
        n_lo = n_hi;
    } else if (job.contains("n_max")) {
        n_hi = opt_int(job, "n_max", 0);
    } else {
        throw InputError("missing field 'n_max' (or 'n')");
    }
    if (n_hi < n_lo || n_lo < 0)
        throw InputError("field 'n_max' must be a nonnegative integer");
    const StepFunction& f = resolve(functions, fname, "f");
    const StepFunction& g = resolve(functions, gname, "g");

    std::ostringstream csv;
    std::ostringstream text;
    csv << "f,g,n,c,value_re,value_im\n";
    for (int n = n_lo; n <= n_hi; ++n) {
        Cx v = nparticle_inner(f, g, n, params);
        csv << fname << ',' << gname << ',' << n << ','
            << format_float(params.c) << ',' << format_float(v.real()) << ','
            << format_float(v.imag()) << '\n';
        text << "nparticle " << fname << ' ' << gname << " n=" << n << " = "
             << format_float(v.real()) << ' ' << format_float(v.imag())
             << '\n';
    }
    JobResult res;
    res.files.push_back({"nparticle.csv", csv.str()});
    res.stdout_text = text.str();
    return res;
}

JobResult run_verify_recursion(const Json& job, const GridPtr& grid,
                               const ModelParams& params,
                               const CliOverrides& overrides) {
    int n_max = opt_int(job, "n_max", 6);
    int num_pairs = opt_int(job, "num_pairs", 20);
    double amp = opt_number(job, "amp", 0.35);
    std::uint64_t seed = overrides.seed
                             ? *overrides.seed
                             : std::uint64_t(opt_number(job, "seed", 42.0));
    double tol = overrides.tol ? *overrides.tol
                               : opt_number(job, "tol", 1e-9);
    double budget_d = opt_number(job, "budget", 1e7);
    std::size_t budget = std::size_t(budget_d);
    std::vector<double> c_values = {0.5, 1.0, 2.0};
    if (job.contains("c_values")) {
        const Json& cv = job.at("c_values");
        if (!cv.is_array() || cv.empty())
            throw InputError("field 'c_values' must be a nonempty array");
        c_values.clear();
        for (const Json& v : cv) {
            if (!v.is_number() || !(v.get<double>() > 0.0))
                throw InputError(
                    "field 'c_values' must contain positive numbers");
            c_values.push_back(v.get<double>());
        }
    }
    if (n_max < 0 || num_pairs < 1)
        throw InputError("field 'n_max'/'num_pairs' out of range");
    if (!(amp > 0.0) || !(tol > 0.0))
        throw InputError("field 'amp'/'tol' must be positive");
    (void)params;

    Rng rng(seed);
    std::vector<std::pair<StepFunction, StepFunction>> pairs;
    pairs.reserve(std::size_t(num_pairs));
    for (int i = 0; i < num_pairs; ++i) {
        StepFunction f = sample_function(grid, amp, rng);
        StepFunction g = sample_function(grid, amp, rng);
        pairs.emplace_back(std::move(f), std::move(g));
    }

    // rel errors per pair, flattened [c_idx][n]; computed in parallel
    // over pairs, reduced in fixed order afterwards.
    auto compute_pair = [&](std::size_t idx) {
        std::vector<double> errs;
        errs.reserve(c_values.size() * std::size_t(n_max + 1));
        for (double c : c_values) {
            ModelParams mp{c};
            for (int n = 0; n <= n_max; ++n) {
                Cx s = nparticle_inner(pairs[idx].first, pairs[idx].second, n,
                                       mp);
                Cx o = bb_inner(pairs[idx].first, pairs[idx].second, n, n, mp,
                                budget);
                errs.push_back(rel_error(s, o));
            }
        }
        return errs;
    };

    const std::size_t pair_count = std::size_t(num_pairs);
    std::vector<std::vector<double>> per_pair(pair_count);
    int workers = std::min(thread_budget(), num_pairs);
    if (workers <= 1) {
        for (std::size_t i = 0; i < per_pair.size(); ++i)
            per_pair[i] = compute_pair(i);
    } else {
        std::vector<std::future<void>> futs;
        futs.reserve(std::size_t(workers));
        std::size_t chunk =
            (per_pair.size() + std::size_t(workers) - 1) / std::size_t(workers);
        for (int w = 0; w < workers; ++w) {
            std::size_t lo = std::size_t(w) * chunk;
            std::size_t hi = std::min(per_pair.size(), lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i)
                    per_pair[i] = compute_pair(i);
            }));
        }
        for (auto& f : futs) f.get();
    }

    std::vector<double> max_err(std::size_t(n_max + 1), 0.0);
    for (const auto& errs : per_pair)
        for (std::size_t ci = 0; ci < c_values.size(); ++ci)
            for (int n = 0; n <= n_max; ++n)
                max_err[std::size_t(n)] =
                    std::max(max_err[std::size_t(n)],
                             errs[ci * std::size_t(n_max + 1) + std::size_t(n)]);

    std::ostringstream csv;
    std::ostringstream text;
    csv << "n,max_rel_err,pass\n";
    bool all_pass = true;
    for (int n = 0; n <= n_max; ++n) {
        bool pass = max_err[std::size_t(n)] <= tol;
        all_pass &= pass;
        csv << n << ',' << format_float(max_err[std::size_t(n)]) << ','
            << csv_bool(pass) << '\n';
        text << "verify-recursion n=" << n
             << " max_rel_err=" << format_float(max_err[std::size_t(n)])
             << " pass=" << csv_bool(pass) << '\n';
    }
    JobResult res;
    res.status = all_pass ? 0 : 1;
    res.files.push_back({"verify_recursion.csv", csv.str()});
    res.stdout_text = text.str();
    return res;
}

JobResult run_taylor_check(const Json& job, const FunctionMap& functions,
                           const ModelParams& params,
                           const CliOverrides& overrides) {
    std::string fname = opt_string(job, "f", "f");
    std::string gname = opt_string(job, "g", "g");
    int n_max = opt_int(job, "n_max", 8);
    double tol = overrides.tol ? *overrides.tol
                               : opt_number(job, "tol", 1e-9);
    if (n_max < 0) throw InputError("field 'n_max' must be >= 0");
    const StepFunction& f = resolve(functions, fname, "f");
    const StepFunction& g = resolve(functions, gname, "g");

    std::vector<Cx> a = kernel_taylor(f, g, params, n_max);
    std::ostringstream csv;
    std::ostringstream text;
    csv << "n,lhs_re,lhs_im,rhs_re,rhs_im,rel_err,pass\n";
    bool all_pass = true;
    double fact2 = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) fact2 *= double(n) * double(n);
        Cx lhs = a[std::size_t(n)] * fact2;
        Cx rhs = nparticle_inner(f, g, n, params);
        double err = rel_error(lhs, rhs);
        bool pass = err <= tol;
        all_pass &= pass;
        csv << n << ',' << format_float(lhs.real()) << ','
            << format_float(lhs.imag()) << ',' << format_float(rhs.real())
            << ',' << format_float(rhs.imag()) << ',' << format_float(err)
            << ',' << csv_bool(pass) << '\n';
        text << "taylor-check n=" << n << " rel_err=" << format_float(err)
             << " pass=" << csv_bool(pass) << '\n';
    }
    JobResult res;
    res.status = all_pass ? 0 : 1;
    res.files.push_back({"taylor_check.csv", csv.str()});
    res.stdout_text = text.str();
    return res;
}

std::string certificate_markdown(const Certificate& cert) {
    std::ostringstream md;
    md << "# Certificate\n\n";
    md << "- operator kind: "
       << (cert.operator_kind == OperatorKind::Multiplication ? "mult"
           : cert.operator_kind == OperatorKind::Dense        ? "dense"
                                                              : "rank1")
       << '\n';
    md << "- verdict: **"
       << (cert.projection ? "Projection" : "NotProjection") << "**\n";
    md << "- theorem agreement: "
       << (cert.theorem_agreement ? "true" : "false") << '\n';
    md << "- is_char_mult: "
       << (cert.structural.is_char_mult ? "true" : "false") << '\n';
    md << "\n| check | max residual | evals | pass |\n";
    md << "|---|---|---|---|\n";
    for (const CheckReport& c : cert.checks)
        md << "| " << c.check << " | " << format_float(c.max_residual)
           << " | " << c.num_evals << " | " << csv_bool(c.pass) << " |\n";
    if (cert.witness) {
        md << "\nWorst failure: check " << cert.witness->check << ", f = "
           << cert.witness->f;
        if (!cert.witness->g.empty()) md << ", g = " << cert.witness->g;
        if (cert.witness->n) md << ", n = " << *cert.witness->n;
        if (cert.witness->t) md << ", t = " << format_float(*cert.witness->t);
        md << ", residual = " << format_float(cert.witness->residual) << '\n';
    }
    return md.str();
}

JobResult run_certify(const Json& job, const GridPtr& grid,
                      const ModelParams& params,
                      const CliOverrides& overrides) {
    Operator op = operator_from_json(grid, require_field(job, "operator", "job"),
                                     "operator");
    SampleConfig cfg = sample_from_json(
        job.contains("sample") ? job.at("sample") : Json(nullptr), params);
    if (overrides.seed) cfg.seed = *overrides.seed;
    if (overrides.tol) cfg.tol = *overrides.tol;
    validate(cfg);

    Certificate cert = certify(op, cfg);

    std::ostringstream csv;
    csv << "check,max_residual,pass\n";
    for (const CheckReport& c : cert.checks)
        csv << c.check << ',' << format_float(c.max_residual) << ','
            << csv_bool(c.pass) << '\n';

    std::ostringstream text;
    text << "verdict " << (cert.projection ? "Projection" : "NotProjection")
         << '\n';
    text << "theorem_agreement " << csv_bool(cert.theorem_agreement) << '\n';
    if (cert.witness) {
        text << "witness check=" << cert.witness->check
             << " f=" << cert.witness->f;
        if (!cert.witness->g.empty()) text << " g=" << cert.witness->g;
        if (cert.witness->n) text << " n=" << *cert.witness->n;
        if (cert.witness->t)
            text << " t=" << format_float(*cert.witness->t);
        text << " residual=" << format_float(cert.witness->residual) << '\n';
    }

    JobResult res;
    res.status = (cert.projection && cert.theorem_agreement) ? 0 : 1;
    res.files.push_back(
        {"certificate.json", certificate_to_json(cert).dump(2) + "\n"});
    res.files.push_back({"certificate.md", certificate_markdown(cert)});
    res.files.push_back({"certificate_summary.csv", csv.str()});
    res.stdout_text = text.str();
    return res;
}

JobResult run_gram(const Json& job, const GridPtr& grid,
                   const FunctionMap& functions, const ModelParams& params,
                   const CliOverrides& overrides) {
    std::vector<StepFunction> fns;
    if (job.contains("functions_list")) {
        const Json& list = job.at("functions_list");
        if (!list.is_array() || list.empty())
            throw InputError(
                "field 'functions_list' must be a nonempty array");
        for (const Json& e : list) {
            if (!e.is_string())
                throw InputError(
                    "field 'functions_list' must contain function names");
            fns.push_back(
                resolve(functions, e.get<std::string>(), "functions_list"));
        }
    } else {
        const Json sample = job.contains("sample") ? job.at("sample") : Json();
        int num = sample.is_object() ? opt_int(sample, "num", 6) : 6;
        double amp = sample.is_object() ? opt_number(sample, "amp", 0.35)
                                        : 0.35;
        std::uint64_t seed =
            overrides.seed
                ? *overrides.seed
                : (sample.is_object()
                       ? std::uint64_t(opt_number(sample, "seed", 42.0))
                       : 42u);
        if (num < 1) throw InputError("field 'sample.num' must be >= 1");
        if (!(amp > 0.0 && amp < 0.5))
            throw InputError("field 'sample.amp' must lie in (0, 0.5)");
        Rng rng(seed);
        for (int i = 0; i < num; ++i)
            fns.push_back(sample_function(grid, amp, rng));
    }

    Matrix g = gram_matrix(fns, params);

    double herm = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            herm = std::max(herm, std::abs(g(i, j) - std::conj(g(j, i))));
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (g + g.adjoint()));
    double min_eig = es.eigenvalues().minCoeff();
    double det_mod = std::abs(g.determinant());

    bool pass = herm <= 1e-13 && min_eig >= -1e-10 && det_mod > 1e-12;

    std::ostringstream mat_csv;
    mat_csv << "i,j,re,im\n";
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            mat_csv << i << ',' << j << ',' << format_float(g(i, j).real())
                    << ',' << format_float(g(i, j).imag()) << '\n';

    std::ostringstream sum_csv;
    sum_csv << "metric,value\n";
    sum_csv << "hermitian_residual," << format_float(herm) << '\n';
    sum_csv << "min_eigenvalue," << format_float(min_eig) << '\n';
    sum_csv << "det_modulus," << format_float(det_mod) << '\n';
    sum_csv << "pass," << csv_bool(pass) << '\n';

    std::ostringstream text;
    text << "min_eigenvalue " << format_float(min_eig) << '\n';
    text << "det_modulus " << format_float(det_mod) << '\n';
    text << "gram " << (pass ? "pass" : "fail") << '\n';

    JobResult res;
    res.status = pass ? 0 : 1;
    res.files.push_back({"gram.csv", mat_csv.str()});
    res.files.push_back({"gram_summary.csv", sum_csv.str()});
    res.stdout_text = text.str();
    return res;
}

}  // namespace

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const char* env = std::getenv("QFOCK_THREADS");
    if (!env || !*env) return int(hw);
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return 1;
    return int(std::min<long>(v, 256));
}

int run_job(const std::string& job_path, const CliOverrides& overrides,
            std::ostream& out, std::ostream& err) {
    try {
        std::ifstream in(job_path);
        if (!in) throw InputError("cannot open job file '" + job_path + "'");
        Json job;
        try {
            job = Json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw InputError("job file is not valid JSON: " +
                             std::string(e.what()));
        }

        const Json& cmd_field = require_field(job, "command", "job");
        if (!cmd_field.is_string())
            throw InputError("field 'command' must be a string");
        std::string command = cmd_field.get<std::string>();

        GridPtr grid =
            grid_from_json(require_field(job, "grid", "job"), "grid");
        FunctionMap functions;
        if (job.contains("functions")) {
            const Json& fns = job.at("functions");
            if (!fns.is_object())
                throw InputError("field 'functions' must be an object");
            for (const auto& [name, body] : fns.items()) {
                std::string ctx = "functions." + name;
                functions.emplace(
                    name, function_from_json(grid, body, ctx.c_str()));
            }
        }
        ModelParams params = params_from_json(
            job.contains("params") ? job.at("params") : Json(nullptr));

        JobResult result;
        if (command == "kernel") {
            result = run_kernel(job, functions, params);
        } else if (command == "nparticle") {
            result = run_nparticle(job, functions, params);
        } else if (command == "verify-recursion") {
            result = run_verify_recursion(job, grid, params, overrides);
        } else if (command == "taylor-check") {
            result = run_taylor_check(job, functions, params, overrides);
        } else if (command == "certify") {
            result = run_certify(job, grid, params, overrides);
        } else if (command == "gram") {
            result = run_gram(job, grid, functions, params, overrides);
        } else {
            throw InputError("field 'command' must be one of kernel, "
                             "nparticle, verify-recursion, taylor-check, "
                             "certify, gram");
        }

        std::string out_dir = overrides.out_dir
                                  ? *overrides.out_dir
                                  : opt_string(job, "out_dir", ".");
        fs::path dir(out_dir);
        if (!dir.empty()) fs::create_directories(dir);
        for (const OutFile& f : result.files) {
            std::ofstream ofs(dir / f.name, std::ios::binary);
            if (!ofs)
                throw Error("cannot write report file '" +
                            (dir / f.name).string() + "'");
            ofs << f.content;
        }
        out << result.stdout_text;
        for (const OutFile& f : result.files)
            out << "wrote " << (dir / f.name).generic_string() << '\n';
        return result.status;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace qfock
