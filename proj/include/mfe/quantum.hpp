#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "mfe/types.hpp"

namespace mfe {

/// Born-rule outcome distribution (tr(E_k state)), tiny negatives clipped,
/// renormalized to sum 1.
RealVector born_distribution(const Povm& povm, const DensityMatrix& state);

/// tr(obs * state); the imaginary residue must be below tolerance.
double expectation_value(const Observable& obs, const DensityMatrix& state);

/// (1-lambda) * state + lambda * I/dim.
DensityMatrix depolarize(const DensityMatrix& state, double lambda);

/// Kronecker product, row-major qubit ordering (first factor most significant).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

PureState ghz_state(int n_qubits);
PureState w_state(int n_qubits);
/// Linear cluster state: CZ between neighbors on |+>^n. Optional per-qubit
/// local unitaries are applied after entangling.
PureState cluster_state(int n_qubits, const std::vector<ComplexMatrix>& local_rotations = {});
/// Two-qubit Werner state p*(I+SWAP)/(d(d+1)) + (1-p)*(I-SWAP)/(d(d-1)), d = 2.
DensityMatrix werner_state(double p);
PureState basis_state(int index, int dim);

/// 4x4 SWAP operator on two qubits.
ComplexMatrix swap_matrix();

/// Tensor product of single-qubit Paulis for a string over {I,X,Y,Z}.
ComplexMatrix pauli_matrix(const std::string& pauli);

/// Observable from a Pauli string, "SWAP", or a dense Hermitian matrix.
Observable build_observable(const std::string& spec);
Observable build_observable(const ComplexMatrix& dense, const std::string& label = "");

/// Haar-random pure state on n qubits; deterministic given seed.
PureState random_pure_state(int n_qubits, std::uint64_t seed);

namespace rng {

/// Deterministic stream seeded from (seed, stream index); distinct indices
/// give statistically independent generators.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t index);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rng

}  // namespace mfe
