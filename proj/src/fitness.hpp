#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "dynsys.hpp"
#include "errors.hpp"

namespace epifit {

// Binary fitness maps deciding whether a simulated trajectory well fits an
// observed one over an inclusive day window. All thresholds accept at the
// exact boundary.

enum class FitnessKind { PointwiseRelativeBand, MeanDistance, SupRelativeWindow };

// Which trajectory the relative band is measured against. The band around
// the observed values is the default contract; the band around the
// candidate's own values is the variant the published SIR grid counts were
// produced with ("within 100r% of the model evolution").
enum class BandReference { Observed, Simulated };

struct Window {
    int first = 0;
    int last = 0;

    int length() const { return last - first + 1; }
};

struct FitnessSpec {
    FitnessKind kind = FitnessKind::PointwiseRelativeBand;
    double r = 0;               // relative tolerance for band kinds
    double delta_tolerance = 0; // absolute threshold for mean-distance
    Window window;
    std::vector<std::size_t> components;
    BandReference reference = BandReference::Observed;
};

namespace detail {

template <std::size_t N>
void check_coverage(const Trajectory<N>& sim, const Trajectory<N>& obs, const Window& w)
{
    if (w.last < w.first) {
        throw ArgumentError("fitness window is empty");
    }
    if (!sim.covers(w.first, w.last) || !obs.covers(w.first, w.last)) {
        throw ArgumentError("trajectory does not cover the fitness window");
    }
}

inline void check_components(const std::vector<std::size_t>& components, std::size_t arity)
{
    if (components.empty()) {
        throw ArgumentError("no compared components");
    }
    for (std::size_t c : components) {
        if (c >= arity) {
            throw ArgumentError("compared component out of range");
        }
    }
}

} // namespace detail

// 1 iff |sim_i(t) - obs_i(t)| <= r * ref_i(t) for every compared component
// and every day in the window, where ref is the observed trajectory by
// default. A zero reference value makes the relative band undefined.
template <std::size_t N>
bool pointwise_relative_band(const Trajectory<N>& sim, const Trajectory<N>& obs,
                             const FitnessSpec& spec)
{
    detail::check_coverage(sim, obs, spec.window);
    detail::check_components(spec.components, N);
    if (!(spec.r > 0)) {
        throw ArgumentError("relative tolerance must be positive");
    }
    bool good = true;
    for (int t = spec.window.first; t <= spec.window.last; ++t) {
        const auto& s = sim.at_day(t);
        const auto& o = obs.at_day(t);
        for (std::size_t c : spec.components) {
            const double ref = spec.reference == BandReference::Observed ? o[c] : s[c];
            if (!(ref > 0)) {
                throw DataError("relative band undefined: reference component is zero in window");
            }
            if (std::fabs(s[c] - o[c]) > spec.r * ref) {
                good = false;
            }
        }
    }
    return good;
}

// 1 iff the mean (over the window) Euclidean distance between the compared
// components is at most delta_tolerance.
template <std::size_t N>
bool mean_distance(const Trajectory<N>& sim, const Trajectory<N>& obs,
                   const FitnessSpec& spec)
{
    detail::check_coverage(sim, obs, spec.window);
    detail::check_components(spec.components, N);
    if (!(spec.delta_tolerance > 0)) {
        throw ArgumentError("mean-distance tolerance must be positive");
    }
    double total = 0;
    for (int t = spec.window.first; t <= spec.window.last; ++t) {
        const auto& s = sim.at_day(t);
        const auto& o = obs.at_day(t);
        double sq = 0;
        for (std::size_t c : spec.components) {
            const double d = s[c] - o[c];
            sq += d * d;
        }
        total += std::sqrt(sq);
    }
    return total / spec.window.length() <= spec.delta_tolerance;
}

// Largest component-wise relative error over the window: the smallest r at
// which the trajectory would still pass the sup-norm fitness map.
template <std::size_t N>
double worst_relative_error(const Trajectory<N>& sim, const Trajectory<N>& obs,
                            const Window& window,
                            const std::vector<std::size_t>& components)
{
    detail::check_coverage(sim, obs, window);
    detail::check_components(components, N);
    double worst = 0;
    for (int t = window.first; t <= window.last; ++t) {
        const auto& s = sim.at_day(t);
        const auto& o = obs.at_day(t);
        for (std::size_t c : components) {
            if (!(o[c] > 0)) {
                throw DataError("relative error undefined: observed component is zero in window");
            }
            worst = std::max(worst, std::fabs(s[c] - o[c]) / o[c]);
        }
    }
    return worst;
}

// 1 iff the sup-norm relative error over the whole window is at most r.
template <std::size_t N>
bool sup_relative_window(const Trajectory<N>& sim, const Trajectory<N>& obs,
                         const FitnessSpec& spec)
{
    if (!(spec.r > 0)) {
        throw ArgumentError("relative tolerance must be positive");
    }
    return worst_relative_error(sim, obs, spec.window, spec.components) <= spec.r;
}

template <std::size_t N>
bool evaluate_fitness(const Trajectory<N>& sim, const Trajectory<N>& obs,
                      const FitnessSpec& spec)
{
    switch (spec.kind) {
    case FitnessKind::PointwiseRelativeBand:
        return pointwise_relative_band(sim, obs, spec);
    case FitnessKind::MeanDistance:
        return mean_distance(sim, obs, spec);
    case FitnessKind::SupRelativeWindow:
        return sup_relative_window(sim, obs, spec);
    }
    throw ArgumentError("unknown fitness kind");
}

} // namespace epifit
