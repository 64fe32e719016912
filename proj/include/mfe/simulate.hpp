#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfe/estimator.hpp"
#include "mfe/scheme.hpp"
#include "mfe/solver.hpp"
#include "mfe/types.hpp"

namespace mfe {

struct CoverageReport {
    long long trials = 0;
    long long hits = 0;
    double coverage = 0.0;
    double epsilon = 0.0;
    double binomial_lower_bound = 0.0;
    double risk = 0.0;
    double true_value = 0.0;
    std::vector<double> estimates;
};

struct BaselineResult {
    std::string method;
    double estimate = 0.0;
    double risk_estimate = 0.0;
    std::string detail;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Draws R_l outcomes per setting from the Born distribution, one
/// counter-based RNG stream per (seed, setting) pair.
OutcomeDataset sample_outcomes(const DensityMatrix& state, const MeasurementScheme& scheme,
                               std::uint64_t seed);

/// Builds the estimator once, then simulates datasets from true_state and
/// counts how often the certified interval captures tr(O * true_state).
CoverageReport coverage_test(const Observable& functional, const MeasurementScheme& scheme,
                             double epsilon, const DensityMatrix& true_state, long long trials,
                             std::uint64_t seed);

/// Clopper-Pearson lower confidence bound on a binomial proportion.
double clopper_pearson_lower(long long hits, long long trials, double confidence = 0.99);

/// Direct fidelity estimation yardstick: importance-sampled Pauli settings
/// measured with sign granularity, Hoeffding risk at level 1-epsilon.
BaselineResult dfe_baseline(const PureState& target, int n_settings, long long shots_per_setting,
                            std::uint64_t seed, const DensityMatrix& true_state,
                            double epsilon = 0.05);

/// Diluted fixed-point likelihood maximization (dilution 0.5); stops when
/// the gradient condition ||R(rho)rho - rho||_F drops below tol.
DensityMatrix mle_reconstruct(const MeasurementScheme& scheme, const OutcomeDataset& data,
                              int max_iters = 5000, double tol = 1e-7, int* iters_out = nullptr);

/// MLE point estimate of tr(O rho) with a parametric-bootstrap risk: the
/// (1-epsilon) quantile of |re-estimate - estimate| over bootstrap_B
/// resamples from the reconstructed state.
BaselineResult mle_baseline(const Observable& functional, const MeasurementScheme& scheme,
                            const OutcomeDataset& data, double epsilon, int bootstrap_B,
                            std::uint64_t seed);

/// Smallest interval containing true_value and a `level` fraction of the
/// estimates (scan over the sorted sample).
Interval smallest_interval(std::vector<double> estimates, double true_value, double level);

/// 2*minimax_risk divided by the optimal asymmetric width at the same level.
double interval_ratio(const std::vector<double>& estimates, double true_value, double level,
                      double minimax_risk);

}  // namespace mfe
