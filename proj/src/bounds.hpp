#pragma once

#include <cstdint>

namespace epifit::bounds {

// Sample-complexity bounds for recovering good parameters by rejection
// sampling over a finite candidate set. All logarithms are natural and all
// combinatorial quantities are computed in log space via lgamma, so p in
// the thousands is fine. Sample sizes are returned as reals; callers take
// the ceiling when they need an integer draw count.

// How the binomial index (1-c)*p is turned into an integer (or kept real).
// Nearest reproduces the published sample-size tables for both p = 68
// (where it rounds up) and p = 263 (where it rounds down); Ceiling is the
// conservative variant and Continuous evaluates the log-binomial at the
// real-valued index.
enum class BinomialIndexRule { Nearest, Ceiling, Continuous };

// log C(n, k) via log-gamma; n and k real, 0 <= k <= n.
double log_binomial(double n, double k);

// P(missed good mass > epsilon) <= min(1, |H| e^{-n epsilon}).
double theorem1_bound(double n, double epsilon, double h_cardinality);

// Same bound with |H| = 2^p, usable when 2^p overflows a double.
double theorem1_bound_pow2(double n, double epsilon, double p);

// Sample size (1/epsilon) ln(|H|/delta) guaranteeing the theorem-1 bound
// is at most delta.
double corollary_sample_size(double epsilon, double delta, double h_cardinality);

// Sample size (1/(cG)) [p ln 2 - ln delta] for recovering good mass at
// least (1-c)G with confidence 1-delta, any sampling distribution.
double eq9_sample_size(double c, double delta, double g_mass, double p_good);

// Tail bound sum_{k<=K} C(p, k) e^{-cGn} (capped at 1) valid when q
// conditioned on the good parameters is uniform; K from the index rule.
double prop2_probability_bound(double c, double g_mass, double p_good, double n,
                               BinomialIndexRule rule = BinomialIndexRule::Nearest);

// Improved sample size (1/(cG)) [ln C(p, K) + ln(1 + (1-c)^2 p^2 / (cp+1))
// - ln delta], valid for c > 1/2 under the uniform-on-good assumption.
double eq10_sample_size(double c, double delta, double g_mass, double p_good,
                        BinomialIndexRule rule = BinomialIndexRule::Nearest);

// Both sides of ln sum_{k<=p} C(n, k) <= ln C(n, p) + ln(1 + p^2/(n-p+1)),
// for integers n >= 2p. Exact integer prefix sums are used for n <= 60,
// log-gamma beyond.
struct Prop3Sides {
    double lhs = 0;
    double rhs = 0;
};
Prop3Sides log_binomial_prefix_bound(std::uint64_t n, std::uint64_t p);

// Smallest c for which the eq-9 sample size stays below |Z| when
// p ~ G |Z|: ln 2 - ln(delta)/p. Always above 0.69.
double min_meaningful_c(double delta, double p_good);

// Empirical check of the theorem-1 bound on a synthetic instance with
// z_size candidates, the first p_good of which are good, uniform q.
// Returns the fraction of trials whose exactly-computed missed good mass
// exceeds epsilon. Must stay below theorem1_bound (plus sampling slack).
double montecarlo_verify_theorem1(std::uint64_t z_size, std::uint64_t p_good,
                                  std::uint64_t n, double epsilon, int trials,
                                  std::uint64_t seed, int workers = 0);

} // namespace epifit::bounds
