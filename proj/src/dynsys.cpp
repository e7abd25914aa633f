#include "dynsys.hpp"

#include <cmath>

#include "errors.hpp"

namespace epifit {

namespace {

constexpr double kSirTol = 1e-9;
constexpr double kSeirRelTol = 1e-6;

} // namespace

void validate_sir_state(const SirState& state, int day)
{
    double sum = 0;
    for (double v : state) {
        if (!std::isfinite(v) || v < -kSirTol || v > 1.0 + kSirTol) {
            throw SimulationError("SIR component outside [0, 1]", day);
        }
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kSirTol) {
        throw SimulationError("SIR components do not sum to 1", day);
    }
}

void validate_seir_state(const SeirState& state, double population, int day)
{
    const double tol = kSeirRelTol * population;
    double sum = 0;
    for (double v : state) {
        if (!std::isfinite(v) || v < -tol) {
            throw SimulationError("SEIR component negative", day);
        }
        sum += v;
    }
    if (std::fabs(sum - population) > tol) {
        throw SimulationError("SEIR components do not sum to the population", day);
    }
}

void validate_sir_params(const SirParams& params)
{
    if (!(params.beta > 0) || !(params.gamma > 0)) {
        throw ArgumentError("SIR parameters must be positive");
    }
}

void validate_seir_params(const SeirCovidParams& params)
{
    const bool taus_ok = params.tau_e > 0 && params.tau_r > 0 && params.tau_s > 0 &&
                         params.tau_rs > 0 && params.tau_d > 0;
    if (!taus_ok || !(params.beta > 0)) {
        throw ArgumentError("SEIR durations and beta must be positive");
    }
    if (!(params.p_s > 0) || params.p_s > 1) {
        throw ArgumentError("p_s must lie in (0, 1]");
    }
    if (params.p_d < 0 || params.p_d > 1) {
        throw ArgumentError("p_d must lie in [0, 1]");
    }
}

SirState sir_step(const SirState& state, const SirParams& params, int day)
{
    validate_sir_state(state, day);
    const double infections = params.beta * state[1] * state[0];
    const double recoveries = params.gamma * state[1];
    return {state[0] - infections,
            state[1] + infections - recoveries,
            state[2] + recoveries};
}

SeirCovidRates rates_from_params(const SeirCovidParams& params, double population)
{
    validate_seir_params(params);
    if (!(population > 0)) {
        throw ArgumentError("population must be positive");
    }
    SeirCovidRates r;
    r.beta = params.beta;
    r.gamma_i = 1.0 / params.tau_e;
    r.gamma_s = params.p_s / params.tau_s;
    r.nu_r = (1.0 - params.p_s) / params.tau_r;
    r.nu_rs = (1.0 - params.p_d) / params.tau_rs;
    r.delta_death = params.p_d / params.tau_d;
    r.population = population;
    return r;
}

SeirState seir_step(const SeirState& state, const SeirCovidRates& rates, int day)
{
    validate_seir_state(state, rates.population, day);
    const double alive = rates.population - state[5];
    if (!(alive > 0)) {
        throw SimulationError("population exhausted (N - D <= 0)", day);
    }
    const double s = state[0], e = state[1], i = state[2];
    const double i_s = state[3], r = state[4], d = state[5];

    const double exposures = rates.beta * s / alive * i;
    const double onsets = rates.gamma_i * e;
    const double recordings = rates.gamma_s * i;
    const double silent_recoveries = rates.nu_r * i;
    const double recorded_recoveries = rates.nu_rs * i_s;
    const double deaths = rates.delta_death * i_s;

    return {s - exposures,
            e + exposures - onsets,
            i + onsets - recordings - silent_recoveries,
            i_s + recordings - recorded_recoveries - deaths,
            r + silent_recoveries + recorded_recoveries,
            d + deaths};
}

SirTrajectory simulate_sir(const SirParams& params, const SirState& initial,
                           int horizon, int start_time)
{
    validate_sir_params(params);
    if (horizon < 0) {
        throw ArgumentError("horizon must be non-negative");
    }
    SirTrajectory traj;
    traj.start_time = start_time;
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    traj.states.push_back(initial);
    for (int k = 0; k < horizon; ++k) {
        traj.states.push_back(sir_step(traj.states.back(), params, start_time + k));
    }
    return traj;
}

SeirTrajectory simulate_seir(const SeirCovidRates& rates, const SeirState& initial,
                             int horizon, int start_time)
{
    if (horizon < 0) {
        throw ArgumentError("horizon must be non-negative");
    }
    SeirTrajectory traj;
    traj.start_time = start_time;
    traj.states.reserve(static_cast<std::size_t>(horizon) + 1);
    traj.states.push_back(initial);
    for (int k = 0; k < horizon; ++k) {
        traj.states.push_back(seir_step(traj.states.back(), rates, start_time + k));
    }
    return traj;
}

} // namespace epifit
