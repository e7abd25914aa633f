#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace epifit {

// Discrete-time compartmental models. Both step maps apply their
// difference equations literally, once per day, on real-valued states.
// All functions here are pure; concurrent use is unrestricted.

enum class Model { Sir, SeirCovid };

// SIR state holds proportions (S, I, R) summing to one.
using SirState = std::array<double, 3>;

// SEIR-COVID state holds absolute counts (S, E, I, I_s, R, D) summing to
// the population size.
using SeirState = std::array<double, 6>;

inline constexpr std::array<const char*, 3> kSirLabels = {"S", "I", "R"};
inline constexpr std::array<const char*, 6> kSeirLabels = {"S", "E", "I", "I_s", "R", "D"};

struct SirParams {
    double beta = 0;  // transmission rate per day
    double gamma = 0; // recovery rate per day
};

struct SeirCovidParams {
    double beta = 0;   // force of infection per day
    double tau_e = 0;  // mean exposed duration, days
    double tau_r = 0;  // mean infectious duration before unrecorded recovery
    double tau_s = 0;  // mean infectious duration before entering statistics
    double tau_rs = 0; // mean duration to recovery after entering statistics
    double tau_d = 0;  // mean duration to death after entering statistics
    double p_s = 0;    // proportion of infections entering statistics, (0, 1]
    double p_d = 0;    // proportion of recorded infections ending in death,
                       // [0, 1]; supplied externally, never part of a grid
};

// Per-day transition rates derived from the epidemiological durations,
// with the force of infection and population carried through.
struct SeirCovidRates {
    double beta = 0;        // force of infection per day
    double gamma_i = 0;     // 1 / tau_e
    double gamma_s = 0;     // p_s / tau_s
    double nu_r = 0;        // (1 - p_s) / tau_r
    double nu_rs = 0;       // (1 - p_d) / tau_rs
    double delta_death = 0; // p_d / tau_d
    double population = 0;  // total population N
};

// A simulated evolution: states[k] is the state on day start_time + k.
// Model-simulation surfaces label the initial state as day 1, matching the
// convention the result tables use; the COVID pipeline instead uses the
// observed series' day positions.
template <std::size_t N>
struct Trajectory {
    int start_time = 1;
    std::vector<std::array<double, N>> states;

    int end_time() const { return start_time + static_cast<int>(states.size()) - 1; }

    bool covers(int first_day, int last_day) const
    {
        return !states.empty() && start_time <= first_day && last_day <= end_time();
    }

    const std::array<double, N>& at_day(int day) const
    {
        return states[static_cast<std::size_t>(day - start_time)];
    }
};

using SirTrajectory = Trajectory<3>;
using SeirTrajectory = Trajectory<6>;

void validate_sir_state(const SirState& state, int day);
void validate_seir_state(const SeirState& state, double population, int day);
void validate_sir_params(const SirParams& params);
void validate_seir_params(const SeirCovidParams& params);

// One day of the SIR difference system; the three increments cancel so the
// component sum is preserved up to floating arithmetic.
SirState sir_step(const SirState& state, const SirParams& params, int day = 0);

SeirCovidRates rates_from_params(const SeirCovidParams& params, double population);

// One day of the six-equation SEIR-COVID difference system. The force of
// infection divides by N - D(t); a run that exhausts the living population
// is invalid.
SeirState seir_step(const SeirState& state, const SeirCovidRates& rates, int day = 0);

SirTrajectory simulate_sir(const SirParams& params, const SirState& initial,
                           int horizon, int start_time = 1);
SeirTrajectory simulate_seir(const SeirCovidRates& rates, const SeirState& initial,
                             int horizon, int start_time = 1);

} // namespace epifit
