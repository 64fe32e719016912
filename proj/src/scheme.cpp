#include "mfe/scheme.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "mfe/quantum.hpp"

namespace mfe {

namespace {

constexpr std::uint64_t kBasisCompletionSeed = 0x7461726261736973ULL;

// Normalized eigenvector of a single-qubit letter; bit 0 picks the +1 branch.
void letter_eigvec(std::uint8_t code, int bit, Complex out[2]) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (code) {
        case 1:  // X
            out[0] = s;
            out[1] = bit == 0 ? s : -s;
            break;
        case 2:  // Y
            out[0] = s;
            out[1] = bit == 0 ? Complex(0.0, s) : Complex(0.0, -s);
            break;
        default:  // Z, and I read in the Z basis
            out[0] = bit == 0 ? 1.0 : 0.0;
            out[1] = bit == 0 ? 0.0 : 1.0;
            break;
    }
}

void append_double(std::string& out, double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    out.append(buf, res.ptr);
}

}  // namespace

std::string granularity_name(Granularity g) {
    switch (g) {
        case Granularity::eigenvector: return "eigenvector";
        case Granularity::sign: return "sign";
        case Granularity::rank1: return "rank1";
        default: return "custom";
    }
}

Granularity granularity_from_name(const std::string& name) {
    if (name == "eigenvector") return Granularity::eigenvector;
    if (name == "sign") return Granularity::sign;
    if (name == "rank1") return Granularity::rank1;
    if (name == "custom") return Granularity::custom;
    throw std::invalid_argument("unknown granularity: " + name);
}

long long MeasurementScheme::total_shots() const {
    return std::accumulate(repetitions.begin(), repetitions.end(), 0LL);
}

void MeasurementScheme::validate() const {
    if (povms.empty()) throw std::invalid_argument("MeasurementScheme: need at least one setting");
    if (repetitions.size() != povms.size() || labels.size() != povms.size())
        throw std::invalid_argument("MeasurementScheme: repetitions/labels do not match settings");
    if (dim < 2) throw std::invalid_argument("MeasurementScheme: dim must be >= 2");
    for (const auto& p : povms)
        if (p.dim() != dim) throw std::invalid_argument("MeasurementScheme: mixed dimensions");
    for (const auto r : repetitions)
        if (r < 1) throw std::invalid_argument("MeasurementScheme: repetitions must be >= 1");
}

Povm pauli_povm(const PauliString& pauli, Granularity granularity) {
    if (pauli.is_identity())
        throw std::invalid_argument("pauli_povm: identity string carries no information");
    const int n = pauli.n_qubits();
    const int d = 1 << n;
    std::vector<ComplexMatrix> effects;
    if (granularity == Granularity::eigenvector) {
        effects.reserve(static_cast<size_t>(d));
        for (int k = 0; k < d; ++k) {
            ComplexVector v(d);
            for (int j = 0; j < d; ++j) {
                Complex amp = 1.0;
                for (int q = 0; q < n; ++q) {
                    Complex e[2];
                    letter_eigvec(pauli.codes()[static_cast<size_t>(q)], (k >> (n - 1 - q)) & 1, e);
                    amp *= e[(j >> (n - 1 - q)) & 1];
                }
                v(j) = amp;
            }
            effects.push_back(v * v.adjoint());
        }
    } else if (granularity == Granularity::sign) {
        const ComplexMatrix p = pauli.matrix();
        const ComplexMatrix id = ComplexMatrix::Identity(d, d);
        effects.push_back(0.5 * (id + p));
        effects.push_back(0.5 * (id - p));
    } else {
        throw std::invalid_argument("pauli_povm: granularity must be eigenvector or sign");
    }
    return Povm(d, std::move(effects));
}

MeasurementScheme pauli_scheme(const std::vector<PauliString>& paulis, Granularity granularity,
                               long long shots_per_setting) {
    MeasurementScheme scheme;
    if (paulis.empty()) throw std::invalid_argument("pauli_scheme: need at least one string");
    scheme.dim = 1 << paulis[0].n_qubits();
    scheme.granularity = granularity;
    for (const auto& p : paulis) {
        scheme.povms.push_back(pauli_povm(p, granularity));
        scheme.repetitions.push_back(shots_per_setting);
        scheme.labels.push_back(p.to_string());
    }
    scheme.validate();
    return scheme;
}

MeasurementScheme dfe_weighted_scheme(const PureState& target, double fraction,
                                      long long shots_per_setting) {
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("dfe_weighted_scheme: fraction must lie in (0, 1]");
    if (shots_per_setting < 1)
        throw std::invalid_argument("dfe_weighted_scheme: shots_per_setting must be >= 1");
    int n = 0;
    while ((1 << n) < target.dim()) ++n;
    if ((1 << n) != target.dim())
        throw std::invalid_argument("dfe_weighted_scheme: target dimension is not a power of two");

    const auto candidates = all_nonidentity_paulis(n);
    std::vector<double> weight(candidates.size());
    for (size_t i = 0; i < candidates.size(); ++i) {
        const double t = pauli_expectation(candidates[i], target);
        weight[i] = t * t / static_cast<double>(target.dim());
    }
    // candidates come lexicographically sorted; a stable sort keeps that order
    // within tied weights.
    std::vector<size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return weight[a] > weight[b]; });

    const auto total = static_cast<long long>(candidates.size());
    const double exact = fraction * std::pow(4.0, n);
    long long keep;
    if (std::abs(exact - std::round(exact)) < 1e-9 && std::round(exact) <= static_cast<double>(total))
        keep = static_cast<long long>(std::round(exact));
    else
        keep = static_cast<long long>(std::ceil(fraction * static_cast<double>(total) - 1e-12));
    keep = std::max<long long>(1, std::min(keep, total));

    MeasurementScheme scheme;
    scheme.dim = target.dim();
    scheme.granularity = Granularity::eigenvector;
    for (long long i = 0; i < keep; ++i) {
        const auto& p = candidates[order[static_cast<size_t>(i)]];
        scheme.povms.push_back(pauli_povm(p, Granularity::eigenvector));
        scheme.repetitions.push_back(shots_per_setting);
        scheme.labels.push_back(p.unsigned_string());
    }
    scheme.validate();
    return scheme;
}

StabilizerMode StabilizerMode::full_group() { return {}; }

StabilizerMode StabilizerMode::uniform_sample(int k, std::uint64_t seed) {
    StabilizerMode m;
    m.kind = Kind::uniform_sample;
    m.sample_count = k;
    m.seed = seed;
    return m;
}

StabilizerMode StabilizerMode::generator_subset(std::vector<int> indices) {
    StabilizerMode m;
    m.kind = Kind::generator_subset;
    m.indices = std::move(indices);
    return m;
}

MeasurementScheme stabilizer_scheme(const StabilizerGroupSpec& spec, const StabilizerMode& mode,
                                    long long shots_per_setting) {
    if (shots_per_setting < 1)
        throw std::invalid_argument("stabilizer_scheme: shots_per_setting must be >= 1");
    std::vector<PauliString> picked;
    std::vector<long long> mult;
    auto add = [&](const PauliString& p) {
        for (size_t i = 0; i < picked.size(); ++i)
            if (picked[i] == p) {
                ++mult[i];
                return;
            }
        picked.push_back(p);
        mult.push_back(1);
    };
    switch (mode.kind) {
        case StabilizerMode::Kind::full_group:
            for (const auto& e : spec.enumerate_nonidentity()) add(e);
            break;
        case StabilizerMode::Kind::uniform_sample: {
            if (mode.sample_count < 1)
                throw std::invalid_argument("stabilizer_scheme: sample count must be >= 1");
            const auto elements = spec.enumerate_nonidentity();
            auto gen = rng::stream(mode.seed, 0);
            // group size is at most 1023 so the modulo bias is negligible
            for (int i = 0; i < mode.sample_count; ++i)
                add(elements[static_cast<size_t>(gen() % elements.size())]);
            break;
        }
        case StabilizerMode::Kind::generator_subset: {
            if (mode.indices.empty())
                throw std::invalid_argument("stabilizer_scheme: empty generator subset");
            const auto& gens = spec.generators();
            for (const int idx : mode.indices) {
                if (idx < 0 || idx >= static_cast<int>(gens.size()))
                    throw std::invalid_argument("stabilizer_scheme: generator index out of range");
                add(gens[static_cast<size_t>(idx)]);
            }
            break;
        }
    }

    MeasurementScheme scheme;
    scheme.dim = 1 << spec.n_qubits();
    scheme.granularity = Granularity::sign;
    for (size_t i = 0; i < picked.size(); ++i) {
        scheme.povms.push_back(pauli_povm(picked[i], Granularity::sign));
        scheme.repetitions.push_back(mult[i] * shots_per_setting);
        scheme.labels.push_back(picked[i].to_string());
    }
    scheme.validate();
    return scheme;
}

MeasurementScheme target_basis_scheme(const PureState& target, long long shots) {
    if (shots < 1) throw std::invalid_argument("target_basis_scheme: shots must be >= 1");
    const int d = target.dim();
    ComplexMatrix basis(d, d);
    basis.col(0) = target.amplitudes();
    auto gen = rng::stream(kBasisCompletionSeed, 0);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int c = 1; c < d; ++c) {
        ComplexVector v(d);
        double nrm = 0.0;
        do {
            for (int j = 0; j < d; ++j) v(j) = Complex(nd(gen), nd(gen));
            // two Gram-Schmidt passes keep the completion orthonormal to
            // working precision
            for (int pass = 0; pass < 2; ++pass)
                for (int k = 0; k < c; ++k) v -= basis.col(k).dot(v) * basis.col(k);
            nrm = v.norm();
        } while (nrm < 1e-6);
        basis.col(c) = v / nrm;
    }
    std::vector<ComplexMatrix> effects;
    effects.reserve(static_cast<size_t>(d));
    for (int c = 0; c < d; ++c) effects.push_back(basis.col(c) * basis.col(c).adjoint());

    MeasurementScheme scheme;
    scheme.dim = d;
    scheme.granularity = Granularity::rank1;
    scheme.povms.emplace_back(d, std::move(effects));
    scheme.repetitions.push_back(shots);
    scheme.labels.push_back("target_basis");
    scheme.validate();
    return scheme;
}

MeasurementScheme random_rank1_scheme(int n_qubits, int n_settings, int outcomes_per_setting,
                                      std::uint64_t seed, long long shots_per_setting) {
    if (n_qubits < 1 || n_qubits > 10)
        throw std::invalid_argument("random_rank1_scheme: n_qubits must lie in [1, 10]");
    if (n_settings < 1) throw std::invalid_argument("random_rank1_scheme: n_settings must be >= 1");
    const int d = 1 << n_qubits;
    if (outcomes_per_setting < d)
        throw std::invalid_argument("random_rank1_scheme: need at least dim outcomes per setting");
    if (shots_per_setting < 1)
        throw std::invalid_argument("random_rank1_scheme: shots_per_setting must be >= 1");

    MeasurementScheme scheme;
    scheme.dim = d;
    scheme.granularity = Granularity::rank1;
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int l = 0; l < n_settings; ++l) {
        auto gen = rng::stream(seed, static_cast<std::uint64_t>(l));
        std::vector<ComplexMatrix> effects;
        effects.reserve(static_cast<size_t>(outcomes_per_setting));
        if (outcomes_per_setting == d) {
            ComplexMatrix z(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) z(i, j) = Complex(nd(gen), nd(gen));
            // Rank-1 projectors onto unitary columns are invariant under
            // column phases, so the raw QR factor already carries the Haar
            // projector distribution.
            const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(z).householderQ();
            for (int c = 0; c < d; ++c) effects.push_back(q.col(c) * q.col(c).adjoint());
        } else {
            const int m = outcomes_per_setting;
            std::vector<ComplexVector> vs(static_cast<size_t>(m));
            ComplexMatrix gram = ComplexMatrix::Zero(d, d);
            for (int i = 0; i < m; ++i) {
                ComplexVector v(d);
                for (int j = 0; j < d; ++j) v(j) = Complex(nd(gen), nd(gen));
                v.normalize();
                vs[static_cast<size_t>(i)] = v;
                gram += v * v.adjoint();
            }
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
            if (es.eigenvalues().minCoeff() <= 1e-12)
                throw std::runtime_error("random_rank1_scheme: degenerate frame");
            const ComplexMatrix root = es.operatorInverseSqrt();
            for (int i = 0; i < m; ++i) {
                const ComplexVector w = root * vs[static_cast<size_t>(i)];
                effects.push_back(w * w.adjoint());
            }
        }
        scheme.povms.emplace_back(d, std::move(effects));
        scheme.repetitions.push_back(shots_per_setting);
        scheme.labels.push_back("random_" + std::to_string(l));
    }
    scheme.validate();
    return scheme;
}

std::string scheme_digest(const MeasurementScheme& scheme) {
    std::string canon = "dim=" + std::to_string(scheme.dim) + ";";
    for (int l = 0; l < scheme.n_settings(); ++l) {
        canon += "label=" + scheme.labels[static_cast<size_t>(l)];
        canon += ";reps=" + std::to_string(scheme.repetitions[static_cast<size_t>(l)]) + ";";
        for (const auto& e : scheme.povms[static_cast<size_t>(l)].effects())
            for (int i = 0; i < e.rows(); ++i)
                for (int j = 0; j < e.cols(); ++j) {
                    append_double(canon, e(i, j).real());
                    canon.push_back(',');
                    append_double(canon, e(i, j).imag());
                    canon.push_back(';');
                }
    }
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf, 16);
}

}  // namespace mfe
