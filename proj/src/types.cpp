#include "mfe/types.hpp"

#include <cmath>

namespace mfe {

namespace {
Tolerances g_tolerances;
}

const Tolerances& tolerances() { return g_tolerances; }
void set_tolerances(const Tolerances& tol) { g_tolerances = tol; }

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

namespace {

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": non-finite entries");
}

}  // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() < 1) throw std::invalid_argument("PureState: empty amplitude vector");
    if (!amplitudes_.allFinite()) throw std::invalid_argument("PureState: non-finite amplitudes");
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tolerances().unit_norm)
        throw std::invalid_argument("PureState: amplitudes not normalized (|norm-1| = " +
                                    std::to_string(std::abs(norm - 1.0)) + ")");
}

ComplexMatrix PureState::projector() const { return amplitudes_ * amplitudes_.adjoint(); }

DensityMatrix::DensityMatrix(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
        throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    require_finite(matrix_, "DensityMatrix");
    if (!is_hermitian(matrix_, tolerances().hermitian))
        throw std::invalid_argument("DensityMatrix: not Hermitian");
    const double tr = matrix_.trace().real();
    if (std::abs(tr - 1.0) > tolerances().trace_one)
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " != 1");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -tolerances().psd_slack)
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                    std::to_string(es.eigenvalues().minCoeff()));
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
    if (dim < 1) throw std::invalid_argument("maximally_mixed: dim must be positive");
    return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

Observable::Observable(ComplexMatrix matrix, std::string label)
    : matrix_(std::move(matrix)), label_(std::move(label)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 1)
        throw std::invalid_argument("Observable: matrix must be square and non-empty");
    require_finite(matrix_, "Observable");
    if (!is_hermitian(matrix_, tolerances().hermitian))
        throw std::invalid_argument("Observable: not Hermitian");
}

Observable Observable::from_target(const PureState& target) {
    return Observable(target.projector(), "fidelity");
}

double Observable::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double Observable::max_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(matrix_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

Povm::Povm(int dim, std::vector<ComplexMatrix> effects) : dim_(dim), effects_(std::move(effects)) {
    if (dim_ < 1) throw std::invalid_argument("Povm: dim must be positive");
    if (effects_.empty()) throw std::invalid_argument("Povm: no effects");
    ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& e : effects_) {
        if (e.rows() != dim_ || e.cols() != dim_)
            throw std::invalid_argument("Povm: effect dimension mismatch");
        require_finite(e, "Povm effect");
        if (!is_hermitian(e, tolerances().hermitian * 10))
            throw std::invalid_argument("Povm: effect not Hermitian");
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tolerances().psd_slack)
            throw std::invalid_argument("Povm: effect not PSD (min eig " +
                                        std::to_string(es.eigenvalues().minCoeff()) + ")");
        sum += e;
    }
    const double dev = (sum - ComplexMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff();
    if (dev > tolerances().povm_completeness)
        throw std::invalid_argument("Povm: effects do not sum to identity (max deviation " +
                                    std::to_string(dev) + ")");
}

}  // namespace mfe
