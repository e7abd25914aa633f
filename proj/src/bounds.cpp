#include "bounds.hpp"

#include <atomic>
#include <cmath>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace epifit::bounds {

namespace {

void check_unit_interval(double v, const char* name)
{
    if (!(v > 0) || !(v < 1)) {
        throw ArgumentError(std::string(name) + " must lie in (0, 1)");
    }
}

void check_positive(double v, const char* name)
{
    if (!(v > 0) || !std::isfinite(v)) {
        throw ArgumentError(std::string(name) + " must be positive and finite");
    }
}

double binomial_index(double c, double p, BinomialIndexRule rule)
{
    const double k = (1.0 - c) * p;
    switch (rule) {
    case BinomialIndexRule::Nearest:
        return std::round(k);
    case BinomialIndexRule::Ceiling:
        return std::ceil(k);
    case BinomialIndexRule::Continuous:
        return k;
    }
    throw ArgumentError("unknown binomial index rule");
}

// ln sum_{k=0..K} C(p, k) by log-sum-exp; K integer >= 0.
double log_prefix_sum(double p, double k_max)
{
    double acc = 0.0; // ln of C(p, 0) = ln 1 = 0
    for (double k = 1; k <= k_max; ++k) {
        const double term = log_binomial(p, k);
        const double hi = std::max(acc, term);
        acc = hi + std::log(std::exp(acc - hi) + std::exp(term - hi));
    }
    return acc;
}

} // namespace

double log_binomial(double n, double k)
{
    if (k < 0 || k > n) {
        throw ArgumentError("binomial index out of range");
    }
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double theorem1_bound(double n, double epsilon, double h_cardinality)
{
    check_positive(n, "n");
    check_unit_interval(epsilon, "epsilon");
    if (!(h_cardinality >= 1)) {
        throw ArgumentError("|H| must be at least 1");
    }
    const double log_bound = std::log(h_cardinality) - n * epsilon;
    return log_bound >= 0 ? 1.0 : std::exp(log_bound);
}

double theorem1_bound_pow2(double n, double epsilon, double p)
{
    check_positive(n, "n");
    check_unit_interval(epsilon, "epsilon");
    check_positive(p, "p");
    const double log_bound = p * std::log(2.0) - n * epsilon;
    return log_bound >= 0 ? 1.0 : std::exp(log_bound);
}

double corollary_sample_size(double epsilon, double delta, double h_cardinality)
{
    check_unit_interval(epsilon, "epsilon");
    check_unit_interval(delta, "delta");
    if (!(h_cardinality >= 1)) {
        throw ArgumentError("|H| must be at least 1");
    }
    return (std::log(h_cardinality) - std::log(delta)) / epsilon;
}

double eq9_sample_size(double c, double delta, double g_mass, double p_good)
{
    check_unit_interval(c, "c");
    check_unit_interval(delta, "delta");
    check_unit_interval(g_mass, "G");
    check_positive(p_good, "p");
    return (p_good * std::log(2.0) - std::log(delta)) / (c * g_mass);
}

double prop2_probability_bound(double c, double g_mass, double p_good, double n,
                               BinomialIndexRule rule)
{
    check_unit_interval(g_mass, "G");
    check_positive(p_good, "p");
    check_positive(n, "n");
    if (!(c > 0) || c > 1) {
        throw ArgumentError("c must lie in (0, 1]");
    }
    const double k_max = rule == BinomialIndexRule::Continuous
                             ? std::floor((1.0 - c) * p_good)
                             : binomial_index(c, p_good, rule);
    const double log_bound = log_prefix_sum(p_good, k_max) - c * g_mass * n;
    return log_bound >= 0 ? 1.0 : std::exp(log_bound);
}

double eq10_sample_size(double c, double delta, double g_mass, double p_good,
                        BinomialIndexRule rule)
{
    check_unit_interval(delta, "delta");
    check_unit_interval(g_mass, "G");
    check_positive(p_good, "p");
    if (!(c > 0.5) || !(c < 1)) {
        throw ArgumentError("eq-10 sample size requires 1/2 < c < 1");
    }
    const double k = binomial_index(c, p_good, rule);
    const double slack = (1.0 - c) * (1.0 - c) * p_good * p_good / (c * p_good + 1.0);
    return (log_binomial(p_good, k) + std::log1p(slack) - std::log(delta)) /
           (c * g_mass);
}

Prop3Sides log_binomial_prefix_bound(std::uint64_t n, std::uint64_t p)
{
    if (n < 2 * p) {
        throw ArgumentError("prefix bound requires n >= 2p");
    }
    Prop3Sides sides;
    if (n <= 60) {
        // Exact: C(n, k) and its prefix sum fit in 64/128-bit integers.
        unsigned __int128 coeff = 1;
        unsigned __int128 sum = 1; // k = 0
        for (std::uint64_t k = 1; k <= p; ++k) {
            coeff = coeff * (n - k + 1) / k;
            sum += coeff;
        }
        sides.lhs = std::log(static_cast<double>(sum));
        const unsigned __int128 numer = coeff * (n - p + 1 + p * p);
        sides.rhs = std::log(static_cast<double>(numer) /
                             static_cast<double>(n - p + 1));
    } else {
        const auto nd = static_cast<double>(n);
        const auto pd = static_cast<double>(p);
        sides.lhs = log_prefix_sum(nd, pd);
        sides.rhs = log_binomial(nd, pd) +
                    std::log1p(pd * pd / (nd - pd + 1.0));
    }
    return sides;
}

double min_meaningful_c(double delta, double p_good)
{
    check_unit_interval(delta, "delta");
    check_positive(p_good, "p");
    return std::log(2.0) - std::log(delta) / p_good;
}

double montecarlo_verify_theorem1(std::uint64_t z_size, std::uint64_t p_good,
                                  std::uint64_t n, double epsilon, int trials,
                                  std::uint64_t seed, int workers)
{
    if (z_size == 0 || p_good == 0 || p_good > z_size) {
        throw ArgumentError("need 1 <= p <= |Z|");
    }
    if (z_size > 100000 || trials < 1 || n < 1) {
        throw ArgumentError("synthetic instance too large to evaluate exactly");
    }
    check_unit_interval(epsilon, "epsilon");

    // Good parameters are the indices below p_good; by symmetry of the
    // uniform q this loses no generality. Every trial draws n indices and
    // computes the exact missed good mass (unseen good count) / |Z|.
    std::atomic<int> violations{0};
    parallel_chunks(static_cast<std::uint64_t>(trials), workers,
                    [&](std::uint64_t begin, std::uint64_t end, int) {
                        std::vector<bool> seen(static_cast<std::size_t>(p_good));
                        int local = 0;
                        for (std::uint64_t trial = begin; trial < end; ++trial) {
                            const std::uint64_t trial_seed = rng::derive_seed(seed, trial);
                            std::fill(seen.begin(), seen.end(), false);
                            std::uint64_t found = 0;
                            for (std::uint64_t i = 0; i < n; ++i) {
                                const std::uint64_t z =
                                    rng::bounded_draw(trial_seed, i, z_size);
                                if (z < p_good && !seen[static_cast<std::size_t>(z)]) {
                                    seen[static_cast<std::size_t>(z)] = true;
                                    ++found;
                                }
                            }
                            const double missed_mass =
                                static_cast<double>(p_good - found) /
                                static_cast<double>(z_size);
                            if (missed_mass > epsilon) {
                                ++local;
                            }
                        }
                        violations += local;
                    });
    return static_cast<double>(violations.load()) / static_cast<double>(trials);
}

} // namespace epifit::bounds
