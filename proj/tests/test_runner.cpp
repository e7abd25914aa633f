#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "config.hpp"
#include "covid.hpp"
#include "errors.hpp"
#include "runner.hpp"
#include "support_covid.hpp"

using namespace epifit;
using nlohmann::json;

namespace {

const std::string* find_doc(const std::vector<ResultDoc>& docs, const std::string& name)
{
    for (const auto& d : docs) {
        if (d.name == name) {
            return &d.content;
        }
    }
    return nullptr;
}

// Z3 scan config with the published-count fitness settings.
std::string z3_scan_config(double r)
{
    json cfg;
    cfg["model"] = "sir";
    cfg["grid"]["dims"] = {
        {{"name", "beta"}, {"lo", 0.1}, {"hi", 0.5}, {"step", 0.001}, {"endpoints", "closed"}},
        {{"name", "gamma"}, {"lo", 0.0}, {"hi", 0.2}, {"step", 0.001}, {"endpoints", "half-open"}}};
    cfg["q"] = {{"kind", "uniform"}};
    cfg["fitness"] = {{"kind", "pointwise-relative-band"},
                      {"r", r},
                      {"window", {2, 10}},
                      {"components", {"S", "I", "R"}},
                      {"reference", "simulated"}};
    cfg["observed"]["generator"]["params"] = {{"beta", 0.25}, {"gamma", 1.0 / 21.0}};
    cfg["initial_state"] = {0.95, 0.05, 0.0};
    cfg["horizon"] = 60;
    cfg["sampling"] = {{"n", 5000}, {"seed", 3}};
    return cfg.dump();
}

} // namespace

TEST_CASE("config parsing and overrides")
{
    auto cfg = RunConfig::from_json_text(z3_scan_config(0.05));
    CHECK(cfg.model() == Model::Sir);
    CHECK(cfg.sampling_n() == 5000);
    CHECK(cfg.sampling_seed() == 3);

    cfg.override_value("/sampling/seed", "99");
    cfg.override_value("/workers", "4");
    CHECK(cfg.sampling_seed() == 99);
    CHECK(cfg.workers() == 4);

    CHECK_THROWS_AS(RunConfig::from_json_text("not json"), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_json_text("{\"model\": \"seirs\"}"), ArgumentError);
    CHECK_THROWS_AS(RunConfig::from_file("/nonexistent.json"), ArgumentError);
    CHECK_THROWS_AS(cfg.override_value("/sampling/seed", "}{"), ArgumentError);
}

TEST_CASE("config validation errors")
{
    // Grid dimensions must match the model's parameters.
    json cfg = json::parse(z3_scan_config(0.05));
    cfg["grid"]["dims"][0]["name"] = "alpha";
    CHECK_THROWS_AS(RunConfig::from_json_text(cfg.dump()).grid(), ArgumentError);

    json cfg2 = json::parse(z3_scan_config(0.05));
    cfg2["fitness"]["components"] = {"S", "X"};
    CHECK_THROWS_AS(RunConfig::from_json_text(cfg2.dump()).fitness(), ArgumentError);

    json cfg3 = json::parse(z3_scan_config(0.05));
    cfg3["initial_state"] = {0.95, 0.05};
    CHECK_THROWS_AS(RunConfig::from_json_text(cfg3.dump()).initial_state(), ArgumentError);
}

TEST_CASE("simulate command emits a day-labelled trajectory")
{
    json cfg;
    cfg["model"] = "sir";
    cfg["initial_state"] = {0.95, 0.05, 0.0};
    cfg["simulate"] = {{"params", {{"beta", 0.25}, {"gamma", 1.0 / 21.0}}},
                       {"horizon", 40}};
    const auto docs = run_command(RunConfig::from_json_text(cfg.dump()), "simulate");
    const auto* traj = find_doc(docs, "trajectory.csv");
    REQUIRE(traj != nullptr);
    CHECK(find_doc(docs, "config.json") != nullptr);

    // 41 data rows plus the header; the max-I row carries t = 24.
    std::size_t rows = 0;
    std::istringstream lines(*traj);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,S,I,R");
    int best_t = -1;
    double best_i = -1;
    while (std::getline(lines, line)) {
        ++rows;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        const int t = std::stoi(line.substr(0, c1));
        const double infected = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
        if (infected > best_i) {
            best_i = infected;
            best_t = t;
        }
    }
    CHECK(rows == 41);
    CHECK(best_t == 24);

    // Array-form parameters (the CLI flag path) behave identically.
    cfg["simulate"]["params"] = {0.25, 1.0 / 21.0};
    const auto docs2 = run_command(RunConfig::from_json_text(cfg.dump()), "simulate");
    CHECK(*find_doc(docs2, "trajectory.csv") == *traj);

    // Wrong arity is a usage error.
    cfg["simulate"]["params"] = {0.25};
    CHECK_THROWS_AS(run_command(RunConfig::from_json_text(cfg.dump()), "simulate"),
                    ArgumentError);

    // Horizon 0 keeps only the initial state.
    cfg["simulate"]["params"] = {0.25, 1.0 / 21.0};
    cfg["simulate"]["horizon"] = 0;
    const auto docs3 = run_command(RunConfig::from_json_text(cfg.dump()), "simulate");
    CHECK(find_doc(docs3, "trajectory.csv")->substr(0, 8) == "t,S,I,R\n");
    CHECK(std::count(find_doc(docs3, "trajectory.csv")->begin(),
                     find_doc(docs3, "trajectory.csv")->end(), '\n') == 2);
}

TEST_CASE("scan command over Z3 reproduces the published count")
{
    const auto docs = run_command(RunConfig::from_json_text(z3_scan_config(0.05)), "scan");
    const auto* scan = find_doc(docs, "scan.json");
    REQUIRE(scan != nullptr);
    const json result = json::parse(*scan);
    CHECK(result.at("p").get<int>() == 68);
    CHECK(result.at("cardinality").get<std::uint64_t>() == 80200);
    CHECK(result.at("G").get<double>() == doctest::Approx(68.0 / 80200).epsilon(1e-9));
    const auto* csv = find_doc(docs, "good_params.csv");
    REQUIRE(csv != nullptr);
    CHECK(std::count(csv->begin(), csv->end(), '\n') == 69); // header + 68 rows
}

TEST_CASE("scan guard maps to a guard error")
{
    auto cfg = RunConfig::from_json_text(z3_scan_config(0.05));
    cfg.override_value("/scan_guard", "1000");
    CHECK_THROWS_AS(run_command(cfg, "scan"), GuardError);
}

TEST_CASE("estimate command: deterministic documents for any worker count")
{
    auto one = RunConfig::from_json_text(z3_scan_config(0.05));
    one.override_value("/workers", "1");
    auto four = RunConfig::from_json_text(z3_scan_config(0.05));
    four.override_value("/workers", "4");

    const auto docs1 = run_command(one, "estimate");
    const auto docs4 = run_command(four, "estimate");
    const auto* set1 = find_doc(docs1, "goodset.json");
    const auto* set4 = find_doc(docs4, "goodset.json");
    REQUIRE(set1 != nullptr);
    REQUIRE(set4 != nullptr);
    CHECK(*set1 == *set4); // byte identical
    CHECK(*find_doc(docs1, "goodset.csv") == *find_doc(docs4, "goodset.csv"));

    const json set = json::parse(*set1);
    CHECK(set.at("n_sampled").get<int>() == 5000);
    CHECK(set.at("seed").get<int>() == 3);
    CHECK(set.at("n_distinct_good").get<std::size_t>() == set.at("accepted").size());

    // Different seeds give a different sample.
    auto other = RunConfig::from_json_text(z3_scan_config(0.05));
    other.override_value("/sampling/seed", "4");
    const auto docs_other = run_command(other, "estimate");
    CHECK(*find_doc(docs_other, "goodset.json") != *set1);
}

TEST_CASE("bounds command evaluates requested operations and the curve")
{
    json cfg;
    cfg["bounds"]["query"] = {{"c", 0.9}, {"delta", 0.01}, {"g", 0.000136}, {"p", 68}};
    const auto docs = run_command(RunConfig::from_json_text(cfg.dump()), "bounds");
    const json result = json::parse(*find_doc(docs, "bounds.json"));
    CHECK(result.at("index_rule") == "nearest");
    CHECK(result.at("results").at("eq10_m").at("ceil").get<double>() == 211220.0);
    CHECK(result.at("results").at("eq10_m").at("value").get<double>() ==
          doctest::Approx(211219.325).epsilon(1e-6));
    CHECK(result.at("results").at("eq9_m").at("value").get<double>() ==
          doctest::Approx(422705.7).epsilon(1e-4));
    CHECK(result.at("results").at("min_c").get<double>() ==
          doctest::Approx(0.76087).epsilon(1e-4));

    json curve_cfg;
    curve_cfg["bounds"]["curve"] = {{"delta", 0.1}, {"g", 0.001}, {"p", 1000},
                                    {"c_min", 0.7}, {"c_max", 0.9}, {"c_step", 0.05}};
    const auto curve_docs = run_command(RunConfig::from_json_text(curve_cfg.dump()), "bounds");
    const auto* curve = find_doc(curve_docs, "curve.csv");
    REQUIRE(curve != nullptr);
    CHECK(std::count(curve->begin(), curve->end(), '\n') == 6); // header + 5 rows

    // Unsatisfiable query: eq10 explicitly requested without its fields.
    json bad;
    bad["bounds"]["ops"] = {"eq10"};
    bad["bounds"]["query"] = {{"c", 0.9}};
    CHECK_THROWS_AS(run_command(RunConfig::from_json_text(bad.dump()), "bounds"),
                    ArgumentError);

    // Monte-Carlo verification is an explicit opt-in operation.
    json mc;
    mc["bounds"]["ops"] = {"montecarlo"};
    mc["bounds"]["query"] = {{"z", 500}, {"p", 5}, {"n", 2000}, {"epsilon", 0.002},
                             {"trials", 200}};
    const auto mc_docs = run_command(RunConfig::from_json_text(mc.dump()), "bounds");
    const json mc_result = json::parse(*find_doc(mc_docs, "bounds.json"));
    const double rate = mc_result.at("results").at("montecarlo").at("violation_rate");
    CHECK(rate >= 0.0);
    CHECK(rate <= 1.0);
}

TEST_CASE("estimate command on the SEIR model recovers the generator")
{
    json cfg;
    cfg["model"] = "seir-covid";
    cfg["population"] = 1e6;
    cfg["p_d"] = 0.03;
    cfg["initial_state"] = {997890, 600, 1000, 500, 0, 10};
    cfg["grid"]["dims"] = {
        {{"name", "beta"}, {"values", {0.15, 0.25, 0.4}}},
        {{"name", "tau_e"}, {"values", {3.0, 5.0}}},
        {{"name", "tau_r"}, {"values", {10.0}}},
        {{"name", "tau_s"}, {"values", {5.0, 8.0}}},
        {{"name", "tau_rs"}, {"values", {14.0}}},
        {{"name", "tau_d"}, {"values", {18.0}}},
        {{"name", "p_s"}, {"values", {0.1, 0.3}}}};
    cfg["fitness"] = {{"kind", "sup-relative-window"}, {"r", 0.01}, {"window", {2, 8}},
                      {"components", {"I_s", "D"}}};
    cfg["observed"]["generator"]["params"] = {0.25, 5, 10, 5, 14, 18, 0.3};
    cfg["observed"]["generator"]["p_d"] = 0.03;
    cfg["horizon"] = 200;
    cfg["sampling"] = {{"n", 400}, {"seed", 8}};

    const auto docs = run_command(RunConfig::from_json_text(cfg.dump()), "estimate");
    const json set = json::parse(*find_doc(docs, "goodset.json"));
    REQUIRE(set.at("accepted").size() >= 1);
    // The generator itself fits exactly; every accepted candidate carries a
    // deaths-peak digest.
    bool generator_found = false;
    for (const auto& a : set.at("accepted")) {
        CHECK(a.at("summary").at("peak_day").get<int>() > 1);
        if (a.at("params").at("beta").get<double>() == 0.25 &&
            a.at("params").at("tau_e").get<double>() == 5.0 &&
            a.at("params").at("p_s").get<double>() == 0.3) {
            generator_found = true;
        }
    }
    CHECK(generator_found);
}

TEST_CASE("covid command produces the result tree")
{
    // Synthesize a fixture file through the simulate command.
    json gen;
    gen["model"] = "seir-covid";
    gen["population"] = 1e6;
    gen["initial_state"] = {998800, 600, 500, 80, 0, 20};
    gen["simulate"]["params"] = {0.25, 5, 12, 7, 16, 20, 0.3};
    gen["simulate"]["p_d"] = 0.03;
    gen["simulate"]["horizon"] = 99;
    gen["simulate"]["emit_observed"] = {{"start_date", "2020-03-01"}};
    const auto gen_docs = run_command(RunConfig::from_json_text(gen.dump()), "simulate");
    const auto* observed = find_doc(gen_docs, "observed.csv");
    REQUIRE(observed != nullptr);
    CHECK(std::count(observed->begin(), observed->end(), '\n') == 101);

    const auto data_path =
        (std::filesystem::temp_directory_path() / "epifit_runner_covid.csv").string();
    {
        std::ofstream out(data_path);
        out << *observed;
    }

    json cfg;
    cfg["model"] = "seir-covid";
    cfg["population"] = 1e6;
    cfg["grid"]["dims"] = json::array();
    const auto fixture_grid = covid_fixtures::small_grid();
    for (const auto& dim : fixture_grid.dims()) {
        cfg["grid"]["dims"].push_back({{"name", dim.name}, {"values", dim.values}});
    }
    cfg["covid"] = {{"data", data_path},
                    {"t0", {"2020-03-31", "2020-04-07"}},
                    {"n", 3000},
                    {"n_pre", 3000},
                    {"horizon", 400}};
    cfg["sampling"] = {{"n", 3000}, {"seed", 21}};

    const auto docs = run_command(RunConfig::from_json_text(cfg.dump()), "covid");
    const json results = json::parse(*find_doc(docs, "covid_results.json"));
    REQUIRE(results.at("weeks").size() == 2);
    for (const auto& week : results.at("weeks")) {
        CHECK(week.at("status") == "ok");
        CHECK(week.at("p_d").get<double>() >= 0.0);
        CHECK(week.at("r_t0").get<double>() > 0.0);
    }
    const auto* peaks = find_doc(docs, "peaks.csv");
    REQUIRE(peaks != nullptr);
    CHECK(std::count(peaks->begin(), peaks->end(), '\n') == 3); // header + one per t0
    CHECK(peaks->substr(0, 21) == "t0,p2.5,median,p97.5\n");
    CHECK(find_doc(docs, "accepted.csv") != nullptr);
    CHECK(find_doc(docs, "params_summary.csv") != nullptr);

    // A missing data file is a data error.
    cfg["covid"]["data"] = "/nonexistent/data.csv";
    CHECK_THROWS_AS(run_command(RunConfig::from_json_text(cfg.dump()), "covid"), DataError);
}

TEST_CASE("unknown command")
{
    CHECK_THROWS_AS(run_command(RunConfig::from_json_text("{}"), "predict"), ArgumentError);
}

TEST_CASE("bundled configs parse; the Z3 scan and bound-curve configs run")
{
    const std::string dir = EPIFIT_SOURCE_DIR "/configs/";
    for (const char* name :
         {"table1_z1_r005.json", "table1_z1_r010.json", "table1_z2_r005.json",
          "table1_z2_r010.json", "table1_z3_r005.json", "table1_z3_r010.json",
          "table2_z1_r005.json", "table2_z2_r005.json", "table2_z3_r010.json",
          "fig1_curve.json", "covid_synthetic_generator.json",
          "covid_synthetic_pipeline.json", "covid_us.json"}) {
        const auto cfg = RunConfig::from_file(dir + name);
        CHECK(cfg.doc().is_object());
    }

    // The smallest exhaustive reproduction config.
    const auto z3 = RunConfig::from_file(dir + "table1_z3_r005.json");
    const auto docs = run_command(z3, "scan");
    const json scan = json::parse(*find_doc(docs, "scan.json"));
    CHECK(scan.at("p").get<int>() == 68);

    // Table-2 style estimation config agrees with its grid cardinality.
    const auto t2 = RunConfig::from_file(dir + "table2_z3_r010.json");
    CHECK(t2.grid().cardinality() == 80200);
    CHECK(t2.sampling_n() == 29920);

    const auto fig1 = RunConfig::from_file(dir + "fig1_curve.json");
    const auto fig1_docs = run_command(fig1, "bounds");
    const auto* curve = find_doc(fig1_docs, "curve.csv");
    REQUIRE(curve != nullptr);
    CHECK(std::count(curve->begin(), curve->end(), '\n') == 61); // header + 60 c values

    // The big US config is parseable and its grid matches the published size.
    const auto us = RunConfig::from_file(dir + "covid_us.json");
    CHECK(us.grid().cardinality() == 116121600ull);
}
