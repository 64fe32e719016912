#include "mfe/quantum.hpp"

#include <cmath>

namespace mfe {

namespace rng {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1)));
}

}  // namespace rng

RealVector born_distribution(const Povm& povm, const DensityMatrix& state) {
    if (povm.dim() != state.dim())
        throw std::invalid_argument("born_distribution: POVM dim " + std::to_string(povm.dim()) +
                                    " != state dim " + std::to_string(state.dim()));
    const int n = povm.n_outcomes();
    RealVector p(n);
    for (int k = 0; k < n; ++k) {
        // tr(E chi) = sum_ij E_ij conj(chi_ij) for Hermitian chi
        p[k] = povm.effect(k).cwiseProduct(state.matrix().conjugate()).sum().real();
        if (p[k] < 0) {
            if (p[k] < -tolerances().probability)
                throw std::invalid_argument("born_distribution: probability " + std::to_string(p[k]) +
                                            " below clipping slack");
            p[k] = 0.0;
        }
    }
    const double sum = p.sum();
    if (std::abs(sum - 1.0) > tolerances().probability)
        throw std::invalid_argument("born_distribution: probabilities sum to " + std::to_string(sum));
    return p / sum;
}

double expectation_value(const Observable& obs, const DensityMatrix& state) {
    if (obs.dim() != state.dim())
        throw std::invalid_argument("expectation_value: dimension mismatch");
    const Complex tr = (obs.matrix() * state.matrix()).trace();
    if (std::abs(tr.imag()) >= 1e-9)
        throw std::invalid_argument("expectation_value: imaginary residue " + std::to_string(tr.imag()));
    return tr.real();
}

DensityMatrix depolarize(const DensityMatrix& state, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw std::invalid_argument("depolarize: lambda must be in [0, 1]");
    const int d = state.dim();
    ComplexMatrix m = (1.0 - lambda) * state.matrix() +
                      (lambda / d) * ComplexMatrix::Identity(d, d);
    return DensityMatrix(std::move(m));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace {

void require_qubits(int n, const char* who) {
    if (n < 1) throw std::invalid_argument(std::string(who) + ": need at least one qubit");
    if (n > 10) throw std::invalid_argument(std::string(who) + ": more than 10 qubits unsupported");
}

}  // namespace

PureState ghz_state(int n_qubits) {
    require_qubits(n_qubits, "ghz_state");
    const int d = 1 << n_qubits;
    ComplexVector amp = ComplexVector::Zero(d);
    amp[0] = amp[d - 1] = 1.0 / std::sqrt(2.0);
    return PureState(std::move(amp));
}

PureState w_state(int n_qubits) {
    require_qubits(n_qubits, "w_state");
    const int d = 1 << n_qubits;
    ComplexVector amp = ComplexVector::Zero(d);
    for (int q = 0; q < n_qubits; ++q) amp[1 << q] = 1.0 / std::sqrt(static_cast<double>(n_qubits));
    return PureState(std::move(amp));
}

PureState cluster_state(int n_qubits, const std::vector<ComplexMatrix>& local_rotations) {
    require_qubits(n_qubits, "cluster_state");
    if (!local_rotations.empty() && static_cast<int>(local_rotations.size()) != n_qubits)
        throw std::invalid_argument("cluster_state: need one rotation per qubit");
    const int d = 1 << n_qubits;
    ComplexVector amp = ComplexVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    // CZ on neighbors (q, q+1): phase -1 when both bits set. Qubit 0 is the
    // most significant bit.
    for (int q = 0; q + 1 < n_qubits; ++q) {
        const int b1 = n_qubits - 1 - q;
        const int b2 = n_qubits - 2 - q;
        for (int s = 0; s < d; ++s)
            if (((s >> b1) & 1) && ((s >> b2) & 1)) amp[s] = -amp[s];
    }
    if (!local_rotations.empty()) {
        ComplexMatrix u = local_rotations[0];
        for (int q = 1; q < n_qubits; ++q) {
            if (local_rotations[q].rows() != 2 || local_rotations[q].cols() != 2)
                throw std::invalid_argument("cluster_state: rotations must be 2x2");
            u = kron(u, local_rotations[q]);
        }
        amp = u * amp;
        amp.normalize();
    }
    return PureState(std::move(amp));
}

DensityMatrix werner_state(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("werner_state: p must be in [0, 1]");
    const double d = 2.0;
    const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
    const ComplexMatrix sw = swap_matrix();
    ComplexMatrix m = p * (id + sw) / (d * (d + 1)) + (1.0 - p) * (id - sw) / (d * (d - 1));
    return DensityMatrix(std::move(m));
}

PureState basis_state(int index, int dim) {
    if (dim < 1) throw std::invalid_argument("basis_state: dim must be positive");
    if (index < 0 || index >= dim) throw std::invalid_argument("basis_state: index out of range");
    ComplexVector amp = ComplexVector::Zero(dim);
    amp[index] = 1.0;
    return PureState(std::move(amp));
}

ComplexMatrix swap_matrix() {
    ComplexMatrix sw = ComplexMatrix::Zero(4, 4);
    sw(0, 0) = sw(3, 3) = 1.0;
    sw(1, 2) = sw(2, 1) = 1.0;
    return sw;
}

ComplexMatrix pauli_matrix(const std::string& pauli) {
    if (pauli.empty()) throw std::invalid_argument("pauli_matrix: empty string");
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (char c : pauli) {
        ComplexMatrix s(2, 2);
        switch (c) {
            case 'I': s << 1, 0, 0, 1; break;
            case 'X': s << 0, 1, 1, 0; break;
            case 'Y': s << 0, Complex(0, -1), Complex(0, 1), 0; break;
            case 'Z': s << 1, 0, 0, -1; break;
            default:
                throw std::invalid_argument(std::string("pauli_matrix: invalid character '") + c + "'");
        }
        out = kron(out, s);
    }
    return out;
}

Observable build_observable(const std::string& spec) {
    if (spec == "SWAP") return Observable(swap_matrix(), "SWAP");
    return Observable(pauli_matrix(spec), spec);
}

Observable build_observable(const ComplexMatrix& dense, const std::string& label) {
    return Observable(dense, label.empty() ? "observable" : label);
}

PureState random_pure_state(int n_qubits, std::uint64_t seed) {
    require_qubits(n_qubits, "random_pure_state");
    const int d = 1 << n_qubits;
    auto gen = rng::stream(seed, 0x707572650A11ULL);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector amp(d);
    for (int i = 0; i < d; ++i) {
        const double re = normal(gen);
        const double im = normal(gen);
        amp[i] = Complex(re, im);
    }
    amp.normalize();
    return PureState(std::move(amp));
}

}  // namespace mfe
