#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "modlab/runner.hpp"

using namespace modlab;
using namespace modlab::cli;

TEST_CASE("config parsing and validation") {
    ExperimentConfig cfg = parse_config(Json{{"experiment", "kms-check"}});
    CHECK(cfg.experiment == "kms-check");
    CHECK(cfg.seed == 7);
    CHECK_FALSE(cfg.dim.has_value());

    // short aliases
    CHECK(parse_config(Json{{"experiment", "kms"}}).experiment == "kms-check");
    CHECK(parse_config(Json{{"experiment", "modular"}}).experiment == "modular-report");

    CHECK_THROWS_AS(parse_config(Json{{"experiment", "unknown-thing"}}), UsageError);
    CHECK_THROWS_AS(parse_config(Json::array()), UsageError);
    CHECK_THROWS_AS(parse_config(Json{{"dim", 8}}), UsageError);  // experiment required

    // unknown fields are rejected with their path
    try {
        parse_config(Json{{"experiment", "kms-check"}, {"dimm", 12}});
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("config.dimm") != std::string::npos);
    }

    // range validation names the field
    try {
        parse_config(Json{{"experiment", "kms-check"}, {"beta", -1.0}});
        FAIL("expected UsageError");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("config.beta") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config(Json{{"experiment", "kms-check"}, {"dim", 1}}), UsageError);
    CHECK_THROWS_AS(parse_config(Json{{"experiment", "kms-check"}, {"seed", -4}}), UsageError);
    CHECK_THROWS_AS(parse_config(Json{{"experiment", "kms-check"}, {"tolScale", 0.0}}),
                    UsageError);

    ExperimentConfig full = parse_config(Json{{"experiment", "kms-check"},
                                              {"dim", 10},
                                              {"beta", 2.0},
                                              {"tGrid", Json::array({-3.0, 3.0, 31})},
                                              {"seed", 99},
                                              {"tolScale", 2.0}});
    CHECK(full.dim == 10);
    CHECK(full.beta == 2.0);
    CHECK(full.tGrid->count == 31);
    CHECK(full.seed == 99);
    CHECK(full.tolScale == 2.0);

    ExperimentConfig withGrid = parse_config(
        Json{{"experiment", "wigner-verify"},
             {"grid", Json{{"xMin", -2.0}, {"xMax", 2.0}, {"yMin", -2.0}, {"yMax", 2.0},
                           {"pointsPerAxis", 41}}}});
    CHECK(withGrid.grid->pointsPerAxis == 41);
    CHECK_THROWS_AS(parse_config(Json{{"experiment", "wigner-verify"},
                                      {"grid", Json{{"xMinn", -2.0}}}}),
                    UsageError);

    ExperimentConfig withWeights = parse_config(Json{{"experiment", "quasi-kms"},
                                                     {"weightKind", "zeta"},
                                                     {"weightParams", Json{{"s", 3.0}}}});
    REQUIRE(withWeights.weights.has_value());
    CHECK(withWeights.weights->kind == quasi::WeightKind::zeta);
    CHECK_THROWS_AS(parse_config(Json{{"experiment", "quasi-kms"},
                                      {"weightParams", Json{{"s", 3.0}}}}),
                    UsageError);
}

TEST_CASE("weight family json round trip") {
    quasi::WeightFamily custom = weight_family_from_json(
        Json{{"kind", "custom"}, {"weights", Json::array({0.5, 0.3, 0.2})}, {"beta", 2.0}});
    CHECK(custom.kind == quasi::WeightKind::custom);
    CHECK(custom.beta == 2.0);
    CHECK(custom.customWeights.size() == 3);

    CHECK_THROWS_AS(weight_family_from_json(Json{{"kind", "nope"}}), std::invalid_argument);
    CHECK_THROWS_AS(weight_family_from_json(Json{{"kind", "custom"}}), std::invalid_argument);
}

TEST_CASE("hs element serialization is row-major re/im pairs") {
    OscillatorBasis b(2);
    HsElement x = matrix_unit(0, 1, b) + Complex(0, 2) * matrix_unit(1, 0, b);
    Json j = to_json(x);
    CHECK(j["dim"] == 2);
    CHECK(j["entries"].size() == 4);
    CHECK(j["entries"][1][0] == 1.0);  // (0,1) real part
    CHECK(j["entries"][2][1] == 2.0);  // (1,0) imaginary part
}

TEST_CASE("grid csv export") {
    wigner::GridSpec grid(-1.0, 1.0, -1.0, 1.0, 3);
    Matrix values = Matrix::Zero(3, 3);
    values(1, 2) = Complex(0.25, -0.5);
    wigner::GridFunction f{grid, values};
    const std::string path = "/tmp/modlab_test_grid.csv";
    write_grid_csv(f, path);

    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,y,re,im");
    int rows = 0;
    std::string line, hit;
    while (std::getline(in, line)) {
        ++rows;
        if (line.rfind("0,1,", 0) == 0) hit = line;
    }
    CHECK(rows == 9);
    CHECK(hit == "0,1,0.25,-0.5");
    std::remove(path.c_str());
}

TEST_CASE("landau spectrum run passes its criteria") {
    ExperimentConfig cfg = parse_config(
        Json{{"experiment", "landau-spectrum"}, {"levels", 6}, {"degeneracy", 6}});
    RunOutcome outcome = run(cfg);
    CHECK(outcome.pass);
    CHECK(outcome.envelope["experiment"] == "landau-spectrum");
    CHECK(outcome.envelope["results"]["jointSimple"] == true);
    CHECK(outcome.envelope["summary"]["pass"] == true);
    for (const Json& item : outcome.envelope["summary"]["criteria"])
        CHECK(item["pass"] == true);
}

TEST_CASE("runs are deterministic given config and seed") {
    Json config = Json{{"experiment", "kms-check"},
                       {"dim", 8},
                       {"beta", 1.0},
                       {"tGrid", Json::array({-2.0, 2.0, 11})},
                       {"seed", 21}};
    RunOutcome first = run(parse_config(config));
    RunOutcome second = run(parse_config(config));
    CHECK(first.envelope["results"].dump() == second.envelope["results"].dump());
    CHECK(first.envelope["summary"].dump() == second.envelope["summary"].dump());

    Json other = config;
    other["seed"] = 22;
    RunOutcome third = run(parse_config(other));
    CHECK(first.envelope["results"].dump() != third.envelope["results"].dump());
}

TEST_CASE("config echo reproduces the input verbatim") {
    Json config = Json{{"experiment", "landau-spectrum"}, {"levels", 4}, {"degeneracy", 5},
                       {"seed", 11}};
    RunOutcome outcome = run(parse_config(config));
    CHECK(outcome.envelope["configEcho"] == config);
}

TEST_CASE("tolerance scaling tightens upper bounds only") {
    Json config = Json{{"experiment", "kms-check"},
                       {"dim", 8},
                       {"beta", 1.0},
                       {"tGrid", Json::array({-2.0, 2.0, 11})},
                       {"seed", 5},
                       {"tolScale", 1e-12}};
    RunOutcome outcome = run(parse_config(config));
    CHECK_FALSE(outcome.pass);
    bool controlStillPasses = false;
    for (const Json& item : outcome.envelope["summary"]["criteria"])
        if (item["name"].get<std::string>().rfind("kms-negative-control", 0) == 0)
            controlStillPasses = item["pass"].get<bool>();
    CHECK(controlStillPasses);
}

TEST_CASE("report files are written") {
    const std::string dir = "/tmp/modlab_test_out";
    Json config = Json{{"experiment", "landau-spectrum"}, {"levels", 4}, {"degeneracy", 4}};
    run(parse_config(config), dir);
    std::ifstream in(dir + "/report.json");
    REQUIRE(in.good());
    Json report;
    in >> report;
    CHECK(report["schemaVersion"] == 1);
    CHECK(report.contains("startedAt"));
    CHECK(report.contains("durationSeconds"));
    std::remove((dir + "/report.json").c_str());
}
