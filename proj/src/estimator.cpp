#include "mfe/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mfe {

void EstimatorArtifact::validate() const {
    if (coefficients.empty()) throw std::invalid_argument("estimator has no coefficient vectors");
    if (labels.size() != coefficients.size())
        throw std::invalid_argument("estimator label count does not match setting count");
    if (repetitions.size() != coefficients.size())
        throw std::invalid_argument("estimator repetition count does not match setting count");
    if (!(epsilon > 0.0 && epsilon < 0.25))
        throw std::invalid_argument("estimator epsilon must lie in (0, 0.25)");
    if (!(risk >= 0.0) || !std::isfinite(risk))
        throw std::invalid_argument("estimator risk must be finite and non-negative");
    if (!std::isfinite(constant)) throw std::invalid_argument("estimator constant must be finite");
    for (std::size_t l = 0; l < coefficients.size(); ++l) {
        if (coefficients[l].size() == 0)
            throw std::invalid_argument("estimator has an empty coefficient vector");
        if (!coefficients[l].allFinite())
            throw std::invalid_argument("estimator coefficients must be finite");
        // Zero marks an unknown design total (hand-written artifact files).
        if (repetitions[l] < 0)
            throw std::invalid_argument("estimator repetitions must be non-negative");
    }
    if (scheme_digest.size() != 16)
        throw std::invalid_argument("estimator scheme digest must be 16 hex characters");
}

void OutcomeDataset::validate() const {
    if (counts.size() != totals.size())
        throw std::invalid_argument("dataset totals do not match the number of settings");
    for (std::size_t l = 0; l < counts.size(); ++l) {
        long long sum = 0;
        for (long long c : counts[l]) {
            if (c < 0) throw std::invalid_argument("dataset counts must be non-negative");
            sum += c;
        }
        if (sum != totals[l])
            throw std::invalid_argument("dataset counts do not sum to the recorded total");
    }
}

OutcomeDataset OutcomeDataset::from_counts(std::vector<std::vector<long long>> counts) {
    OutcomeDataset data;
    data.totals.reserve(counts.size());
    for (const auto& row : counts) {
        long long sum = 0;
        for (long long c : row) {
            if (c < 0) throw std::invalid_argument("dataset counts must be non-negative");
            sum += c;
        }
        data.totals.push_back(sum);
    }
    data.counts = std::move(counts);
    return data;
}

EstimatorArtifact extract_estimator(const SaddleSolution& solution, const MeasurementScheme& scheme,
                                    const Observable& functional, double epsilon, bool force) {
    if (!solution.converged && !force)
        throw ConvergenceError(
            "saddle solution did not reach the requested gap; pass force to package it anyway");
    scheme.validate();
    if (static_cast<int>(solution.phi.size()) != scheme.n_settings())
        throw std::invalid_argument("solution and scheme disagree on the number of settings");

    EstimatorArtifact artifact;
    artifact.scheme_digest = scheme_digest(scheme);
    artifact.epsilon = epsilon;
    artifact.risk = solution.risk;
    artifact.constant = solution.constant;
    artifact.coefficients = solution.phi;
    artifact.labels = scheme.labels;
    artifact.repetitions = scheme.repetitions;
    artifact.functional_label = functional.label();
    artifact.granularity = granularity_name(scheme.granularity);
    artifact.validate();
    return artifact;
}

ValidationResult validate_dataset(const EstimatorArtifact& artifact, const OutcomeDataset& data,
                                  bool strict) {
    artifact.validate();
    data.validate();
    if (data.n_settings() != artifact.n_settings())
        throw std::invalid_argument("dataset has " + std::to_string(data.n_settings()) +
                                    " settings, estimator expects " +
                                    std::to_string(artifact.n_settings()));
    for (int l = 0; l < artifact.n_settings(); ++l) {
        if (static_cast<int>(data.counts[l].size()) != artifact.coefficients[l].size())
            throw std::invalid_argument("setting " + std::to_string(l) + " has " +
                                        std::to_string(data.counts[l].size()) +
                                        " outcomes, estimator expects " +
                                        std::to_string(artifact.coefficients[l].size()));
    }

    ValidationResult result;
    std::ostringstream msg;
    for (int l = 0; l < artifact.n_settings(); ++l) {
        if (artifact.repetitions[l] == 0) continue;
        if (data.totals[l] != artifact.repetitions[l]) {
            result.totals_match = false;
            if (!msg.str().empty()) msg << "; ";
            msg << "setting " << l << " recorded " << data.totals[l] << " shots, estimator assumes "
                << artifact.repetitions[l];
        }
    }
    if (!result.totals_match) {
        if (strict) {
            result.ok = false;
            result.message = "shot totals differ from the estimator design: " + msg.str();
        } else {
            result.message = "risk is nominal, shot counts differ from the design: " + msg.str();
        }
    }
    return result;
}

EstimateReport apply_estimator(const EstimatorArtifact& artifact, const OutcomeDataset& data,
                               bool strict, bool clamp) {
    ValidationResult check = validate_dataset(artifact, data, strict);
    if (!check.ok) throw std::invalid_argument(check.message);

    double estimate = artifact.constant;
    for (int l = 0; l < artifact.n_settings(); ++l) {
        const RealVector& a = artifact.coefficients[l];
        for (int k = 0; k < a.size(); ++k)
            estimate += a(k) * static_cast<double>(data.counts[l][k]);
    }

    EstimateReport report;
    report.estimate = estimate;
    report.risk = artifact.risk;
    report.confidence_level = 1.0 - artifact.epsilon;
    report.interval_lo = estimate - artifact.risk;
    report.interval_hi = estimate + artifact.risk;
    report.warning = check.message;
    report.clamped_estimate = estimate;
    if (clamp) {
        report.clamped_estimate = std::clamp(estimate, 0.0, 1.0);
        report.clamped = report.clamped_estimate != estimate;
    }
    return report;
}

void require_matching_digest(const EstimatorArtifact& artifact, const MeasurementScheme& scheme) {
    const std::string digest = scheme_digest(scheme);
    if (digest != artifact.scheme_digest)
        throw std::invalid_argument("scheme digest " + digest +
                                    " does not match the estimator digest " +
                                    artifact.scheme_digest);
}

}  // namespace mfe
