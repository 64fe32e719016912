#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "mfe/scheme.hpp"
#include "mfe/types.hpp"

namespace mfe {

/// Raised when a result is requested from a solve that did not reach the
/// certified gap tolerance.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    double epsilon = 0.05;
    /// Absolute tolerance on the certified bracket around the saddle value.
    double gap_tol = 1e-4;
    /// Weight of the maximally mixed state mixed into every Born distribution
    /// inside the solver, so probabilities stay strictly positive. The
    /// reported risk is exact for this shrunken state family.
    double mix_lambda = 1e-6;
    double alpha_log_min = -30.0;
    double alpha_log_max = 30.0;
    /// Golden-section probes of the scale parameter.
    int max_outer_iters = 90;
    /// Projected gradient ascent steps per state maximization.
    int max_inner_iters = 600;
    std::uint64_t seed = 0;
    /// Optional CSV sink, one line per outer probe.
    std::ostream* diagnostics = nullptr;

    void validate() const;
};

struct SaddleSolution {
    DensityMatrix chi1;
    DensityMatrix chi2;
    double alpha;
    /// Per-setting outcome weights of the affine estimator, one vector per
    /// POVM in scheme order.
    std::vector<RealVector> phi;
    double risk;
    double constant;
    double gap_certificate;
    double objective_upper;
    double objective_lower;
    bool converged;
};

/// Worst-case sample overhead factor 2 + ln(64)/ln(0.25/epsilon), valid for
/// epsilon in (0, 0.25).
double theta(double epsilon);

/// The concave-convex objective underlying the estimator construction:
/// tr(O chi1) - tr(O chi2) + 2 alpha ln(2/eps)
///   + alpha sum_l R_l [ln sum_k exp(-phi_k/alpha) p1_k
///                      + ln sum_k exp(+phi_k/alpha) p2_k],
/// with Born distributions shrunk by mix_lambda and log-sum-exp evaluated
/// in max-shifted form.
double phi_value(const DensityMatrix& chi1, const DensityMatrix& chi2,
                 const std::vector<RealVector>& phi, double alpha,
                 const MeasurementScheme& scheme, const Observable& functional, double epsilon,
                 double mix_lambda = 1e-6);

/// g = sum_l R_l ln Aff_l with Aff_l the Hellinger affinity of the two
/// (shrunken) Born distributions of setting l. Equals the phi-minimized tail
/// of phi_value up to the affine part: min over phi is
/// tr(O chi1) - tr(O chi2) + 2 alpha (ln(2/eps) + g).
double reduced_constraint(const DensityMatrix& chi1, const DensityMatrix& chi2,
                          const MeasurementScheme& scheme, double mix_lambda = 1e-6);

/// Solves inf over (alpha, phi) of max over (chi1, chi2) of phi_value and
/// certifies a bracket [objective_lower, objective_upper] around the saddle
/// value. risk is the safe side, objective_upper / 2. On iteration exhaustion
/// the best certified bracket is returned with converged = false.
SaddleSolution solve_saddle(const Observable& functional, const MeasurementScheme& scheme,
                            const SolverConfig& config);

/// Recomputes the bracket at the solution's (phi, alpha) and (chi1, chi2) by
/// fresh maximizations and returns objective_upper - objective_lower.
double certify_gap(const SaddleSolution& solution, const Observable& functional,
                   const MeasurementScheme& scheme, const SolverConfig& config);

}  // namespace mfe
