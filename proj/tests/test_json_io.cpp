#include <doctest.h>

#include <cmath>
#include <string>

#include "qfock/json_io.hpp"
#include "test_util.hpp"

using namespace qfock;
using namespace qfock::testutil;

TEST_CASE("grid round trip and validation") {
    GridPtr g = mixed_grid();
    Json j = grid_to_json(*g);
    GridPtr back = grid_from_json(j, "grid");
    CHECK(*back == *g);

    CHECK_THROWS_WITH_AS(grid_from_json(Json::object(), "grid"),
                         "missing field 'grid.dim'", InputError);
    Json bad = j;
    bad["dim"] = 1.5;
    CHECK_THROWS_AS(grid_from_json(bad, "grid"), InputError);
    bad = j;
    bad["volumes"] = Json::array();
    CHECK_THROWS_AS(grid_from_json(bad, "grid"), InputError);
}

TEST_CASE("function round trip and validation") {
    GridPtr g = mixed_grid();
    StepFunction f = fn(g, {Cx(0.1, -0.2), Cx(0.0, 0.0), Cx(-0.3, 0.4),
                            Cx(0.25, 0.0)});
    StepFunction back = function_from_json(g, function_to_json(f), "f");
    for (std::size_t k = 0; k < f.size(); ++k) CHECK(back[k] == f[k]);

    Json short_values = {{"values", {{0.1, 0.0}}}};
    CHECK_THROWS_AS(function_from_json(g, short_values, "f"), InputError);
    Json bad_pair = {{"values", {{0.1}, {0.2}, {0.3}, {0.4}}}};
    CHECK_THROWS_AS(function_from_json(g, bad_pair, "f"), InputError);
    CHECK_THROWS_WITH_AS(function_from_json(g, Json::object(), "f"),
                         "missing field 'f.values'", InputError);
}

TEST_CASE("operator parsing covers the three kinds") {
    GridPtr g = unit_cells(2);
    Json mult = {{"kind", "mult"},
                 {"symbol", {{"values", {{1.0, 0.0}, {0.0, 0.0}}}}}};
    Operator pm = operator_from_json(g, mult, "operator");
    CHECK(pm.kind() == OperatorKind::Multiplication);

    double isq = 1.0 / std::sqrt(2.0);
    Json rank1 = {{"kind", "rank1"},
                  {"axis", {{"values", {{isq, 0.0}, {isq, 0.0}}}}}};
    Operator pr = operator_from_json(g, rank1, "operator");
    CHECK(pr.kind() == OperatorKind::RankOneProjection);

    Json dense = {{"kind", "dense"},
                  {"matrix",
                   {{{0.0, 0.0}, {0.5, 0.0}}, {{0.5, 0.0}, {0.0, 0.0}}}}};
    Operator pd = operator_from_json(g, dense, "operator");
    CHECK(pd.kind() == OperatorKind::Dense);
    CHECK(pd.to_dense()(0, 1) == Cx(0.5, 0.0));

    Json bad = {{"kind", "spectral"}};
    CHECK_THROWS_AS(operator_from_json(g, bad, "operator"), InputError);
    Json short_matrix = {{"kind", "dense"}, {"matrix", {{{0.0, 0.0}}}}};
    CHECK_THROWS_AS(operator_from_json(g, short_matrix, "operator"),
                    InputError);
}

TEST_CASE("model params default and validation") {
    CHECK(params_from_json(Json(nullptr)).c == 1.0);
    CHECK(params_from_json(Json::object()).c == 1.0);
    CHECK(params_from_json({{"c", 2.5}}).c == 2.5);
    CHECK_THROWS_AS(params_from_json({{"c", 0.0}}), InputError);
    CHECK_THROWS_AS(params_from_json({{"c", -1.0}}), InputError);
}

TEST_CASE("sample config parsing applies defaults and checks ranges") {
    ModelParams c{2.0};
    SampleConfig def = sample_from_json(Json(nullptr), c);
    CHECK(def.seed == 42);
    CHECK(def.num_pairs == 50);
    CHECK(def.n_max == 4);
    CHECK(def.amp == 0.35);
    CHECK(def.t_grid == std::vector<double>{0.25, 0.5, 1.0});
    CHECK(def.params.c == 2.0);
    CHECK(def.tol == 1e-9);

    Json j = {{"seed", 7},
              {"num_pairs", 12},
              {"n_max", 3},
              {"amp", 0.2},
              {"tol", 1e-8},
              {"t_grid", {0.5, 1.0}}};
    SampleConfig cfg = sample_from_json(j, c);
    CHECK(cfg.seed == 7);
    CHECK(cfg.num_pairs == 12);
    CHECK(cfg.n_max == 3);
    CHECK(cfg.amp == 0.2);
    CHECK(cfg.tol == 1e-8);
    CHECK(cfg.t_grid == std::vector<double>{0.5, 1.0});

    CHECK_THROWS_AS(sample_from_json({{"amp", 0.7}}, c), InputError);
    CHECK_THROWS_AS(sample_from_json({{"t_grid", {0.0}}}, c), InputError);
    CHECK_THROWS_AS(sample_from_json({{"seed", 1.5}}, c), InputError);
}

TEST_CASE("certificate serialization for a passing operator") {
    GridPtr g = mixed_grid();
    SampleConfig cfg;
    cfg.num_pairs = 5;
    Certificate cert = certify(Operator::multiplication(ind(g, {1, 3})), cfg);
    Json j = certificate_to_json(cert);

    CHECK(j["verdict"] == "Projection");
    CHECK(j["theorem_agreement"] == true);
    CHECK(j["operator_kind"] == "mult");
    CHECK(j["witness"].is_null());
    CHECK(j["structural"]["is_char_mult"] == true);
    CHECK(j["structural"]["char_mult_deviation"] == 0.0);
    REQUIRE(j["checks"].is_array());
    CHECK(j["checks"].size() == 10);
    for (const Json& row : j["checks"]) {
        CHECK(row.contains("check"));
        CHECK(row.contains("max_residual"));
        CHECK(row.contains("pass"));
        CHECK(row.contains("num_evals"));
        CHECK(row["pass"] == true);
    }
    CHECK(j["config"]["seed"] == 42);
    CHECK(j["config"]["c"] == 1.0);
}

TEST_CASE("certificate serialization keeps the witness of a failure") {
    GridPtr g = unit_cells(8);
    SampleConfig cfg;
    cfg.num_pairs = 5;
    auto zoo = counterexample_zoo(g);
    Certificate cert = certify(zoo[0].second, cfg);  // rank-one projection
    Json j = certificate_to_json(cert);

    CHECK(j["verdict"] == "NotProjection");
    CHECK(j["operator_kind"] == "rank1");
    REQUIRE(j["witness"].is_object());
    CHECK(j["witness"]["check"] == "powers");
    CHECK(j["witness"]["f"] == "corner:indicator_cell0");
    CHECK(j["witness"]["n"] == 2);
    CHECK(j["witness"]["t"].is_null());
    CHECK(std::abs(j["witness"]["residual"].get<double>() - 0.125) <= 1e-12);
    CHECK(j["structural"]["char_mult_deviation"].is_null());
}

TEST_CASE("float formatting is fixed at 17 significant digits") {
    CHECK(format_float(1.0) == "1");
    CHECK(format_float(0.5) == "0.5");
    CHECK(format_float(0.125) == "0.125");
    CHECK(format_float(0.1) == "0.10000000000000001");
    CHECK(format_float(1.1547005383792515) == "1.1547005383792515");
    CHECK(format_float(0.0) == "0");
    CHECK(format_float(-0.0) == "0");
    CHECK(format_float(-2.5e-11) == "-2.5000000000000001e-11");
}
