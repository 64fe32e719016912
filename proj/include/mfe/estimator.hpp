#pragma once

#include <string>
#include <vector>

#include "mfe/scheme.hpp"
#include "mfe/solver.hpp"
#include "mfe/types.hpp"

namespace mfe {

/// Deployable affine estimator: per-outcome coefficient vectors, a constant,
/// and the certified risk, bound to a scheme by content digest.
struct EstimatorArtifact {
    std::string scheme_digest;
    double epsilon = 0.05;
    double risk = 0.0;
    double constant = 0.0;
    std::vector<RealVector> coefficients;
    std::vector<std::string> labels;
    std::vector<long long> repetitions;
    std::string functional_label;
    std::string granularity = "custom";

    int n_settings() const { return static_cast<int>(coefficients.size()); }
    void validate() const;
};

/// Outcome histograms, one count vector per setting.
struct OutcomeDataset {
    std::vector<std::vector<long long>> counts;
    std::vector<long long> totals;

    int n_settings() const { return static_cast<int>(counts.size()); }
    void validate() const;
    /// Totals filled in from the count sums.
    static OutcomeDataset from_counts(std::vector<std::vector<long long>> counts);
};

struct ValidationResult {
    bool ok = true;
    bool totals_match = true;
    std::string message;
};

struct EstimateReport {
    double estimate = 0.0;
    double risk = 0.0;
    double confidence_level = 0.0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    bool clamped = false;
    /// Equals estimate unless clamping was requested.
    double clamped_estimate = 0.0;
    /// Non-empty when the risk is nominal (tolerant-mode shot mismatch).
    std::string warning;
};

/// Packages a converged saddle solution for deployment. Unconverged
/// solutions are rejected unless force is set.
EstimatorArtifact extract_estimator(const SaddleSolution& solution, const MeasurementScheme& scheme,
                                    const Observable& functional, double epsilon,
                                    bool force = false);

/// Shape mismatches (setting count, outcome counts) always throw. Total-shot
/// mismatches fail in strict mode and downgrade to a warning otherwise.
ValidationResult validate_dataset(const EstimatorArtifact& artifact, const OutcomeDataset& data,
                                  bool strict = true);

/// estimate = sum_l <a[l], counts[l]> + c, the shot-sum form of the affine
/// estimator; identical to the frequency form when totals match.
EstimateReport apply_estimator(const EstimatorArtifact& artifact, const OutcomeDataset& data,
                               bool strict = true, bool clamp = false);

/// Checks that the artifact was built for the given scheme.
void require_matching_digest(const EstimatorArtifact& artifact, const MeasurementScheme& scheme);

}  // namespace mfe
