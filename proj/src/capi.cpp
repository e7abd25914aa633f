#include "epifit/epifit.h"

#include <new>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "config.hpp"
#include "dynsys.hpp"
#include "errors.hpp"
#include "logging.hpp"
#include "runner.hpp"

struct epifit_config {
    epifit::RunConfig impl;
};

struct epifit_result {
    std::vector<epifit::ResultDoc> docs;
};

namespace {

thread_local std::string t_last_error;

epifit_status fail(epifit_status code, const char* what)
{
    t_last_error = what;
    return code;
}

// Runs `body`, translating exceptions into status codes.
template <typename Fn>
epifit_status guarded(Fn&& body)
{
    try {
        body();
        return EPIFIT_OK;
    } catch (const epifit::ArgumentError& e) {
        return fail(EPIFIT_ERR_ARGUMENT, e.what());
    } catch (const epifit::DataError& e) {
        return fail(EPIFIT_ERR_DATA, e.what());
    } catch (const epifit::GuardError& e) {
        return fail(EPIFIT_ERR_GUARD, e.what());
    } catch (const std::exception& e) {
        return fail(EPIFIT_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(EPIFIT_ERR_RUNTIME, "unknown failure");
    }
}

epifit::bounds::BinomialIndexRule to_rule(epifit_index_rule rule)
{
    switch (rule) {
    case EPIFIT_INDEX_CEILING:
        return epifit::bounds::BinomialIndexRule::Ceiling;
    case EPIFIT_INDEX_CONTINUOUS:
        return epifit::bounds::BinomialIndexRule::Continuous;
    case EPIFIT_INDEX_NEAREST:
    default:
        return epifit::bounds::BinomialIndexRule::Nearest;
    }
}

} // namespace

extern "C" {

const char* epifit_version(void)
{
    return "0.1.0";
}

const char* epifit_last_error(void)
{
    return t_last_error.c_str();
}

void epifit_set_logger(epifit_log_fn fn, void* user)
{
    if (fn == nullptr) {
        epifit::set_log_sink({});
    } else {
        epifit::set_log_sink([fn, user](const std::string& line) { fn(line.c_str(), user); });
    }
}

epifit_status epifit_sir_simulate(double beta, double gamma, const double initial[3],
                                  int horizon, double* out)
{
    return guarded([&] {
        if (initial == nullptr || out == nullptr) {
            throw epifit::ArgumentError("null pointer argument");
        }
        const auto traj = epifit::simulate_sir({beta, gamma},
                                               {initial[0], initial[1], initial[2]}, horizon);
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            for (std::size_t c = 0; c < 3; ++c) {
                out[k * 3 + c] = traj.states[k][c];
            }
        }
    });
}

epifit_status epifit_seir_simulate(const double params[7], double p_d, double population,
                                   const double initial[6], int horizon, double* out)
{
    return guarded([&] {
        if (params == nullptr || initial == nullptr || out == nullptr) {
            throw epifit::ArgumentError("null pointer argument");
        }
        epifit::SeirCovidParams p;
        p.beta = params[0];
        p.tau_e = params[1];
        p.tau_r = params[2];
        p.tau_s = params[3];
        p.tau_rs = params[4];
        p.tau_d = params[5];
        p.p_s = params[6];
        p.p_d = p_d;
        epifit::SeirState x0;
        for (std::size_t c = 0; c < 6; ++c) {
            x0[c] = initial[c];
        }
        const auto traj = epifit::simulate_seir(epifit::rates_from_params(p, population),
                                                x0, horizon);
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            for (std::size_t c = 0; c < 6; ++c) {
                out[k * 6 + c] = traj.states[k][c];
            }
        }
    });
}

epifit_status epifit_bound_theorem1(double n, double epsilon, double h_cardinality,
                                    double* out)
{
    return guarded([&] { *out = epifit::bounds::theorem1_bound(n, epsilon, h_cardinality); });
}

epifit_status epifit_bound_corollary_m(double epsilon, double delta, double h_cardinality,
                                       double* out)
{
    return guarded(
        [&] { *out = epifit::bounds::corollary_sample_size(epsilon, delta, h_cardinality); });
}

epifit_status epifit_bound_eq9_m(double c, double delta, double g_mass, double p_good,
                                 double* out)
{
    return guarded([&] { *out = epifit::bounds::eq9_sample_size(c, delta, g_mass, p_good); });
}

epifit_status epifit_bound_prop2(double c, double g_mass, double p_good, double n,
                                 epifit_index_rule rule, double* out)
{
    return guarded([&] {
        *out = epifit::bounds::prop2_probability_bound(c, g_mass, p_good, n, to_rule(rule));
    });
}

epifit_status epifit_bound_eq10_m(double c, double delta, double g_mass, double p_good,
                                  epifit_index_rule rule, double* out)
{
    return guarded([&] {
        *out = epifit::bounds::eq10_sample_size(c, delta, g_mass, p_good, to_rule(rule));
    });
}

epifit_status epifit_bound_min_meaningful_c(double delta, double p_good, double* out)
{
    return guarded([&] { *out = epifit::bounds::min_meaningful_c(delta, p_good); });
}

epifit_status epifit_bound_prop3(uint64_t n, uint64_t p, double* lhs, double* rhs)
{
    return guarded([&] {
        const auto sides = epifit::bounds::log_binomial_prefix_bound(n, p);
        *lhs = sides.lhs;
        *rhs = sides.rhs;
    });
}

epifit_status epifit_config_parse(const char* json_text, epifit_config** out)
{
    return guarded([&] {
        if (json_text == nullptr || out == nullptr) {
            throw epifit::ArgumentError("null pointer argument");
        }
        *out = new epifit_config{epifit::RunConfig::from_json_text(json_text)};
    });
}

epifit_status epifit_config_load(const char* path, epifit_config** out)
{
    return guarded([&] {
        if (path == nullptr || out == nullptr) {
            throw epifit::ArgumentError("null pointer argument");
        }
        *out = new epifit_config{epifit::RunConfig::from_file(path)};
    });
}

epifit_status epifit_config_override(epifit_config* config, const char* pointer,
                                     const char* value_json)
{
    return guarded([&] {
        if (config == nullptr || pointer == nullptr || value_json == nullptr) {
            throw epifit::ArgumentError("null pointer argument");
        }
        config->impl.override_value(pointer, value_json);
    });
}

void epifit_config_free(epifit_config* config)
{
    delete config;
}

epifit_status epifit_run(const epifit_config* config, const char* command,
                         epifit_result** out)
{
    return guarded([&] {
        if (config == nullptr || command == nullptr || out == nullptr) {
            throw epifit::ArgumentError("null pointer argument");
        }
        *out = new epifit_result{epifit::run_command(config->impl, command)};
    });
}

size_t epifit_result_count(const epifit_result* result)
{
    return result == nullptr ? 0 : result->docs.size();
}

const char* epifit_result_name(const epifit_result* result, size_t index)
{
    if (result == nullptr || index >= result->docs.size()) {
        return nullptr;
    }
    return result->docs[index].name.c_str();
}

const char* epifit_result_content(const epifit_result* result, size_t index,
                                  size_t* length)
{
    if (result == nullptr || index >= result->docs.size()) {
        return nullptr;
    }
    if (length != nullptr) {
        *length = result->docs[index].content.size();
    }
    return result->docs[index].content.c_str();
}

void epifit_result_free(epifit_result* result)
{
    delete result;
}

} // extern "C"
