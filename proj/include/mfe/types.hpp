#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mfe {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Global numerical tolerances. The defaults match the documented contracts;
/// tests may tighten or relax them through set_tolerances().
struct Tolerances {
    double hermitian = 1e-10;     // max |A - A^dagger| entry
    double unit_norm = 1e-10;     // pure-state normalization slack
    double trace_one = 1e-10;     // density-matrix trace slack
    double psd_slack = 1e-9;      // negative-eigenvalue slack on PSD checks
    double povm_completeness = 1e-9;  // entrywise |sum E_k - I| slack
    double probability = 1e-9;    // Born-vector clipping / normalization slack
};

const Tolerances& tolerances();
void set_tolerances(const Tolerances& tol);

bool is_hermitian(const ComplexMatrix& m, double tol);

/// Unit-norm complex amplitude vector on a dim-dimensional Hilbert space.
class PureState {
public:
    explicit PureState(ComplexVector amplitudes);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    const ComplexVector& amplitudes() const { return amplitudes_; }

    /// |psi><psi| as a dense matrix.
    ComplexMatrix projector() const;

private:
    ComplexVector amplitudes_;
};

/// Hermitian, PSD, trace-one matrix.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix matrix);
    static DensityMatrix from_pure(const PureState& psi);

    /// Maximally mixed state I/dim.
    static DensityMatrix maximally_mixed(int dim);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }

private:
    ComplexMatrix matrix_;
};

/// Hermitian matrix whose expectation value is to be estimated.
class Observable {
public:
    explicit Observable(ComplexMatrix matrix, std::string label = "");
    static Observable from_target(const PureState& target);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    const ComplexMatrix& matrix() const { return matrix_; }
    const std::string& label() const { return label_; }

    double min_eigenvalue() const;
    double max_eigenvalue() const;

private:
    ComplexMatrix matrix_;
    std::string label_;
};

/// Positive operator-valued measure: PSD effects summing to the identity.
class Povm {
public:
    Povm(int dim, std::vector<ComplexMatrix> effects);

    int dim() const { return dim_; }
    int n_outcomes() const { return static_cast<int>(effects_.size()); }
    const std::vector<ComplexMatrix>& effects() const { return effects_; }
    const ComplexMatrix& effect(int k) const { return effects_.at(static_cast<size_t>(k)); }

private:
    int dim_;
    std::vector<ComplexMatrix> effects_;
};

}  // namespace mfe
