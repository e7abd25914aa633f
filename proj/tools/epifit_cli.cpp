// Command-line front end for the epifit shared library. All computation
// happens behind the C API; this tool only parses flags, applies config
// overrides and writes the result documents.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epifit/epifit.h"

namespace {

std::string json_quote(const std::string& text)
{
    std::string out = "\"";
    for (char ch : text) {
        switch (ch) {
        case '"':
            out += "\\\"";
            break;
        case '\\':
            out += "\\\\";
            break;
        case '\n':
            out += "\\n";
            break;
        case '\t':
            out += "\\t";
            break;
        case '\r':
            out += "\\r";
            break;
        default:
            out += ch;
        }
    }
    out += '"';
    return out;
}

struct Override {
    std::string pointer;
    std::string value_json;
};

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required)
{
    auto* config = cmd->add_option("--config", flags.config_path, "JSON config file");
    if (config_required) {
        config->required();
    }
    cmd->add_option("--seed", flags.seed, "sampling seed (overrides config)");
    cmd->add_option("--workers", flags.workers, "worker threads (0 = hardware)");
    cmd->add_option("--out", flags.out_dir,
                    "output directory; without it the primary document goes to stdout");
}

int fail(epifit_status status)
{
    std::cerr << "error: " << epifit_last_error() << "\n";
    return static_cast<int>(status);
}

int run(const std::string& command, const CommonFlags& flags,
        const std::vector<Override>& overrides)
{
    epifit_config* config = nullptr;
    epifit_status status = flags.config_path.empty()
                               ? epifit_config_parse("{}", &config)
                               : epifit_config_load(flags.config_path.c_str(), &config);
    if (status != EPIFIT_OK) {
        return fail(status);
    }

    std::vector<Override> all = overrides;
    if (flags.seed) {
        all.push_back({"/sampling/seed", std::to_string(*flags.seed)});
    }
    if (flags.workers) {
        all.push_back({"/workers", std::to_string(*flags.workers)});
    }
    for (const auto& o : all) {
        status = epifit_config_override(config, o.pointer.c_str(), o.value_json.c_str());
        if (status != EPIFIT_OK) {
            epifit_config_free(config);
            return fail(status);
        }
    }

    epifit_result* result = nullptr;
    status = epifit_run(config, command.c_str(), &result);
    epifit_config_free(config);
    if (status != EPIFIT_OK) {
        return fail(status);
    }

    int exit_code = 0;
    if (flags.out_dir.empty()) {
        size_t length = 0;
        const char* content = epifit_result_content(result, 0, &length);
        std::fwrite(content, 1, length, stdout);
    } else {
        std::error_code ec;
        std::filesystem::create_directories(flags.out_dir, ec);
        for (size_t i = 0; i < epifit_result_count(result); ++i) {
            const std::filesystem::path path =
                std::filesystem::path(flags.out_dir) / epifit_result_name(result, i);
            std::ofstream out(path, std::ios::binary);
            size_t length = 0;
            const char* content = epifit_result_content(result, i, &length);
            out.write(content, static_cast<std::streamsize>(length));
            if (!out) {
                std::cerr << "error: cannot write " << path << "\n";
                exit_code = 3;
                break;
            }
            std::cerr << "wrote " << path.string() << "\n";
        }
    }
    epifit_result_free(result);
    return exit_code;
}

std::string csv_to_json_array(const std::string& csv)
{
    std::string out = "[";
    std::stringstream ss(csv);
    std::string item;
    bool first = true;
    while (std::getline(ss, item, ',')) {
        if (!first) {
            out += ',';
        }
        out += item;
        first = false;
    }
    out += ']';
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"epifit: good-parameter estimation for epidemic models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", epifit_version());

    CommonFlags flags;
    std::vector<Override> overrides;

    auto* simulate = app.add_subcommand("simulate", "simulate a trajectory to CSV");
    add_common(simulate, flags, true);
    std::string params_csv;
    std::optional<int> horizon;
    simulate->add_option("--params", params_csv,
                         "parameter values in canonical order, comma separated");
    simulate->add_option("--horizon", horizon, "days to simulate");

    auto* scan = app.add_subcommand("scan", "exhaustively scan a candidate grid");
    add_common(scan, flags, true);

    auto* estimate = app.add_subcommand("estimate", "rejection-estimate the good set");
    add_common(estimate, flags, true);
    std::optional<std::uint64_t> n_draws;
    estimate->add_option("--n", n_draws, "number of sampled candidates");

    auto* bounds = app.add_subcommand("bounds", "evaluate sample-size bounds");
    add_common(bounds, flags, false);
    std::optional<double> b_epsilon, b_delta, b_c, b_g, b_p, b_n, b_h;
    std::vector<std::string> b_ops;
    std::string b_rule;
    bool b_curve = false;
    std::optional<double> c_min, c_max, c_step, curve_delta, curve_g, curve_p;
    bounds->add_option("--epsilon", b_epsilon, "error level in (0,1)");
    bounds->add_option("--delta", b_delta, "failure probability in (0,1)");
    bounds->add_option("--c", b_c, "missed-mass fraction in (0,1)");
    bounds->add_option("--g", b_g, "good-parameter mass G in (0,1)");
    bounds->add_option("--p", b_p, "good-parameter count");
    bounds->add_option("--n", b_n, "sample size");
    bounds->add_option("--h-card", b_h, "hypothesis-space cardinality |H|");
    std::optional<double> b_z, b_trials;
    bounds->add_option("--z", b_z, "candidate-set size for Monte-Carlo verification");
    bounds->add_option("--trials", b_trials, "Monte-Carlo verification trials");
    bounds->add_option("--op", b_ops,
                       "operations: theorem1 corollary eq9 eq10 prop2 prop3 min-c montecarlo");
    bounds->add_option("--index-rule", b_rule, "nearest | ceiling | continuous");
    bounds->add_flag("--curve", b_curve, "emit a (c, m) curve CSV");
    bounds->add_option("--c-min", c_min, "curve c lower end");
    bounds->add_option("--c-max", c_max, "curve c upper end");
    bounds->add_option("--c-step", c_step, "curve c step");
    bounds->add_option("--curve-delta", curve_delta, "curve delta");
    bounds->add_option("--curve-g", curve_g, "curve G");
    bounds->add_option("--curve-p", curve_p, "curve p");

    auto* covid = app.add_subcommand("covid", "weekly fitting pipeline on observed data");
    add_common(covid, flags, true);
    std::string data_path;
    covid->add_option("--data", data_path, "observed series CSV (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string command;
    if (simulate->parsed()) {
        command = "simulate";
        if (!params_csv.empty()) {
            overrides.push_back({"/simulate/params", csv_to_json_array(params_csv)});
        }
        if (horizon) {
            overrides.push_back({"/simulate/horizon", std::to_string(*horizon)});
        }
    } else if (scan->parsed()) {
        command = "scan";
    } else if (estimate->parsed()) {
        command = "estimate";
        if (n_draws) {
            overrides.push_back({"/sampling/n", std::to_string(*n_draws)});
        }
    } else if (bounds->parsed()) {
        command = "bounds";
        const auto number = [&](const char* pointer, const std::optional<double>& v) {
            if (v) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.17g", *v);
                overrides.push_back({pointer, buf});
            }
        };
        number("/bounds/query/epsilon", b_epsilon);
        number("/bounds/query/delta", b_delta);
        number("/bounds/query/c", b_c);
        number("/bounds/query/g", b_g);
        number("/bounds/query/p", b_p);
        number("/bounds/query/n", b_n);
        number("/bounds/query/h_cardinality", b_h);
        number("/bounds/query/z", b_z);
        number("/bounds/query/trials", b_trials);
        if (!b_ops.empty()) {
            std::string ops = "[";
            for (size_t i = 0; i < b_ops.size(); ++i) {
                ops += (i ? "," : "") + json_quote(b_ops[i]);
            }
            ops += ']';
            overrides.push_back({"/bounds/ops", ops});
        }
        if (!b_rule.empty()) {
            overrides.push_back({"/bounds/index_rule", json_quote(b_rule)});
        }
        if (b_curve) {
            overrides.push_back({"/bounds/curve", "{}"});
            number("/bounds/curve/c_min", c_min);
            number("/bounds/curve/c_max", c_max);
            number("/bounds/curve/c_step", c_step);
            number("/bounds/curve/delta", curve_delta);
            number("/bounds/curve/g", curve_g);
            number("/bounds/curve/p", curve_p);
        }
    } else if (covid->parsed()) {
        command = "covid";
        if (!data_path.empty()) {
            overrides.push_back({"/covid/data", json_quote(data_path)});
        }
    }

    return run(command, flags, overrides);
}
