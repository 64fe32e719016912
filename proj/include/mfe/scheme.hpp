#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfe/pauli.hpp"
#include "mfe/types.hpp"

namespace mfe {

enum class Granularity { eigenvector, sign, rank1, custom };

std::string granularity_name(Granularity g);
Granularity granularity_from_name(const std::string& name);

/// A batch of measurement settings; setting l is repeated R_l times.
struct MeasurementScheme {
    int dim = 0;
    std::vector<Povm> povms;
    std::vector<long long> repetitions;
    std::vector<std::string> labels;
    Granularity granularity = Granularity::custom;

    int n_settings() const { return static_cast<int>(povms.size()); }
    long long total_shots() const;
    void validate() const;
};

/// Measurement of one non-identity Pauli string. Eigenvector granularity
/// keeps all 2^n rank-1 outcomes, ordered by lexicographic bitstrings with
/// bit 0 for the +1 single-qubit eigenvector (identity letters are read in
/// the Z basis). Sign granularity keeps the two eigenspace projectors of the
/// signed operator, +1 first.
Povm pauli_povm(const PauliString& pauli, Granularity granularity);

MeasurementScheme pauli_scheme(const std::vector<PauliString>& paulis, Granularity granularity,
                               long long shots_per_setting);

/// Pauli settings ranked by decreasing target weight tr(rho W)^2 / d over all
/// non-identity strings, ties broken lexicographically. Keeps fraction*4^n
/// settings when that is an integer below 4^n, otherwise
/// ceil(fraction*(4^n-1)).
MeasurementScheme dfe_weighted_scheme(const PureState& target, double fraction,
                                      long long shots_per_setting);

struct StabilizerMode {
    enum class Kind { full_group, uniform_sample, generator_subset };

    Kind kind = Kind::full_group;
    int sample_count = 0;
    std::uint64_t seed = 0;
    std::vector<int> indices;

    static StabilizerMode full_group();
    static StabilizerMode uniform_sample(int k, std::uint64_t seed);
    static StabilizerMode generator_subset(std::vector<int> indices);
};

/// Sign-granularity settings drawn from the stabilizer group, identity
/// excluded. Sampling is i.i.d. with replacement; repeated draws are merged
/// into one setting with summed repetitions.
MeasurementScheme stabilizer_scheme(const StabilizerGroupSpec& spec, const StabilizerMode& mode,
                                    long long shots_per_setting);

/// Single basis measurement whose first outcome projects onto the target.
/// The rest of the basis is a fixed seeded orthonormal completion.
MeasurementScheme target_basis_scheme(const PureState& target, long long shots);

/// Seeded Haar-random rank-1 settings. outcomes_per_setting == dim gives the
/// columns of a random unitary; more outcomes give a frame-normalized POVM.
MeasurementScheme random_rank1_scheme(int n_qubits, int n_settings, int outcomes_per_setting,
                                      std::uint64_t seed, long long shots_per_setting = 1);

/// Content hash over a canonical rendering of the scheme, as 16 hex digits.
std::string scheme_digest(const MeasurementScheme& scheme);

}  // namespace mfe
