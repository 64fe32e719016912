#pragma once

#include <string>
#include <vector>

#include "mfe/estimator.hpp"
#include "mfe/scheme.hpp"
#include "mfe/types.hpp"

namespace mfe::io {

/// State/operator JSON: {"dim", "kind": "pure"|"density"|"observable",
/// "data"}. Pure states store a flat list of [re, im] pairs; matrices store
/// row-major nested arrays of [re, im] pairs.
PureState load_pure_state(const std::string& path);
DensityMatrix load_density_matrix(const std::string& path);
Observable load_observable(const std::string& path);
void save_pure_state(const PureState& state, const std::string& path);
void save_density_matrix(const DensityMatrix& state, const std::string& path);
void save_observable(const Observable& functional, const std::string& path);
/// Kind recorded in the file, without loading the payload.
std::string peek_kind(const std::string& path);

/// Scheme JSON: {"dim", "settings": [{"label", "repetitions", "effects"}...]}
/// with an optional "granularity" tag. Pauli-only schemes may instead use the
/// compact form {"paulis", "granularity", "repetitions"}, expanded on load.
MeasurementScheme load_scheme(const std::string& path);
void save_scheme(const MeasurementScheme& scheme, const std::string& path);

EstimatorArtifact load_estimator(const std::string& path);
void save_estimator(const EstimatorArtifact& artifact, const std::string& path);
std::string estimator_to_json(const EstimatorArtifact& artifact);
EstimatorArtifact estimator_from_json(const std::string& text);

/// Outcome CSV with header setting_index,outcome_index,count. The writer
/// emits every outcome; the reader accepts sparse rows in any order.
OutcomeDataset load_outcomes_csv(const std::string& path);
void save_outcomes_csv(const OutcomeDataset& data, const std::string& path);

struct CoverageRow {
    long long trial_index = 0;
    double estimate = 0.0;
    bool hit = false;
};
void save_coverage_csv(const std::vector<CoverageRow>& rows, const std::string& path);

struct BenchEntry {
    std::string method;
    double estimate = 0.0;
    double risk = 0.0;
    double wall_time_ms = 0.0;
    std::string detail;
};
void save_bench_json(const std::vector<BenchEntry>& entries, const std::string& path);

}  // namespace mfe::io
