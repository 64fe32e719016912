#include "mfe/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mfe {

namespace {

constexpr double kProbFloor = 1e-12;
constexpr double kProjGradTol = 1e-7;
constexpr double kArmijo = 1e-4;
constexpr double kMinStep = 1e-12;

/// Euclidean projection onto the probability simplex.
RealVector project_to_simplex(RealVector v) {
    const auto n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumsum = 0.0;
    double tau = (u[0] - 1.0);  // overwritten, support is never empty
    for (Eigen::Index j = 0; j < n; ++j) {
        cumsum += u[static_cast<size_t>(j)];
        const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
        if (u[static_cast<size_t>(j)] - t > 0.0) tau = t;
    }
    for (Eigen::Index i = 0; i < n; ++i) v(i) = std::max(v(i) - tau, 0.0);
    return v;
}

/// Nearest density matrix in Frobenius norm: spectral decomposition plus
/// simplex projection of the eigenvalues.
ComplexMatrix project_to_density(const ComplexMatrix& a) {
    const ComplexMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    const RealVector lam = project_to_simplex(es.eigenvalues());
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint();
}

/// Real trace inner product tr(A^dag B) for Hermitian arguments.
double hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.conjugate().cwiseProduct(b).sum().real();
}

double lambda_max(const ComplexMatrix& h) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

/// Shrunken Born distribution of one POVM, floored before any log.
RealVector regularized_born(const Povm& povm, const ComplexMatrix& chi, double mix_lambda) {
    const int nk = povm.n_outcomes();
    RealVector p(nk);
    const double d = static_cast<double>(povm.dim());
    for (int k = 0; k < nk; ++k) {
        const double raw = hs_inner(povm.effect(k), chi);
        const double mix = povm.effect(k).trace().real() / d;
        p(k) = std::max((1.0 - mix_lambda) * raw + mix_lambda * mix, kProbFloor);
    }
    return p;
}

/// max-shifted ln sum_k exp(z_k) p_k.
double lse(const RealVector& z, const RealVector& p) {
    const double m = z.maxCoeff();
    return m + std::log(((z.array() - m).exp() * p.array()).sum());
}

/// Flattened scheme operator: Born distributions and weighted effect sums as
/// matrix-vector products against a stacked effect matrix.
class Workspace {
public:
    Workspace(const Observable& functional, const MeasurementScheme& scheme,
              const SolverConfig& config)
        : dim_(scheme.dim),
          mixl_(config.mix_lambda),
          ln2e_(std::log(2.0 / config.epsilon)),
          max_inner_(config.max_inner_iters),
          obs_(functional.matrix()) {
        int k_total = 0;
        for (const auto& p : scheme.povms) k_total += p.n_outcomes();
        const Eigen::Index vec_len = static_cast<Eigen::Index>(dim_) * dim_;
        bmat_.resize(k_total, vec_len);
        mix_.resize(k_total);
        int row = 0;
        for (int l = 0; l < scheme.n_settings(); ++l) {
            const auto& povm = scheme.povms[static_cast<size_t>(l)];
            offsets_.push_back(row);
            lengths_.push_back(povm.n_outcomes());
            reps_.push_back(static_cast<double>(scheme.repetitions[static_cast<size_t>(l)]));
            for (const auto& e : povm.effects()) {
                bmat_.row(row) =
                    Eigen::Map<const ComplexVector>(e.data(), vec_len).conjugate().transpose();
                mix_(row) = e.trace().real() / static_cast<double>(dim_);
                ++row;
            }
        }
        ovec_ = Eigen::Map<const ComplexVector>(obs_.data(), vec_len).conjugate().transpose();
    }

    int n_settings() const { return static_cast<int>(offsets_.size()); }
    int k_total() const { return static_cast<int>(bmat_.rows()); }
    double ln2e() const { return ln2e_; }

    RealVector born(const ComplexMatrix& chi) const {
        const Eigen::Map<const ComplexVector> v(chi.data(), bmat_.cols());
        RealVector p = (1.0 - mixl_) * (bmat_ * v).real() + mixl_ * mix_;
        return p.cwiseMax(kProbFloor);
    }

    double functional_trace(const ComplexMatrix& chi) const {
        const Eigen::Map<const ComplexVector> v(chi.data(), bmat_.cols());
        return (ovec_ * v).value().real();
    }

    /// sum_k w_k E_k for real weights, hermitized against roundoff.
    ComplexMatrix effect_sum(const RealVector& w) const {
        const ComplexVector g = bmat_.adjoint() * w;
        const ComplexMatrix m = Eigen::Map<const ComplexMatrix>(g.data(), dim_, dim_);
        return 0.5 * (m + m.adjoint());
    }

    double g_value(const RealVector& p1, const RealVector& p2) const {
        double g = 0.0;
        for (int l = 0; l < n_settings(); ++l) {
            const auto s1 = p1.segment(offsets_[static_cast<size_t>(l)],
                                       lengths_[static_cast<size_t>(l)]);
            const auto s2 = p2.segment(offsets_[static_cast<size_t>(l)],
                                       lengths_[static_cast<size_t>(l)]);
            g += reps_[static_cast<size_t>(l)] * std::log(s1.cwiseProduct(s2).cwiseSqrt().sum());
        }
        return g;
    }

    /// Objective with phi eliminated, at fixed alpha.
    double reduced_value(const ComplexMatrix& c1, const ComplexMatrix& c2, const RealVector& p1,
                         const RealVector& p2, double alpha) const {
        return functional_trace(c1) - functional_trace(c2) +
               2.0 * alpha * (ln2e_ + g_value(p1, p2));
    }

    void joint_grads(const RealVector& p1, const RealVector& p2, double alpha, ComplexMatrix& g1,
                     ComplexMatrix& g2) const {
        RealVector w1(k_total()), w2(k_total());
        for (int l = 0; l < n_settings(); ++l) {
            const int off = offsets_[static_cast<size_t>(l)];
            const int len = lengths_[static_cast<size_t>(l)];
            const auto s1 = p1.segment(off, len);
            const auto s2 = p2.segment(off, len);
            const double aff = s1.cwiseProduct(s2).cwiseSqrt().sum();
            const double scale = alpha * reps_[static_cast<size_t>(l)] * (1.0 - mixl_) / aff;
            w1.segment(off, len) = scale * (s2.cwiseQuotient(s1)).cwiseSqrt();
            w2.segment(off, len) = scale * (s1.cwiseQuotient(s2)).cwiseSqrt();
        }
        g1 = obs_ + effect_sum(w1);
        g2 = -obs_ + effect_sum(w2);
    }

    struct MaxResult {
        double value;
        double fw_gap;
    };

    /// Projected gradient ascent jointly on (chi1, chi2) at fixed alpha,
    /// with a Frank-Wolfe gap certifying the maximum from above.
    MaxResult maximize_joint(double alpha, ComplexMatrix& c1, ComplexMatrix& c2) const {
        RealVector p1 = born(c1), p2 = born(c2);
        double f = reduced_value(c1, c2, p1, p2, alpha);
        ComplexMatrix g1, g2;
        for (int it = 0; it < max_inner_; ++it) {
            joint_grads(p1, p2, alpha, g1, g2);
            const ComplexMatrix t1 = project_to_density(c1 + g1);
            const ComplexMatrix t2 = project_to_density(c2 + g2);
            const double pg =
                std::sqrt((t1 - c1).squaredNorm() + (t2 - c2).squaredNorm());
            if (pg < kProjGradTol) break;
            double step = 1.0;
            bool accepted = false;
            while (step >= kMinStep) {
                const ComplexMatrix n1 = step == 1.0 ? t1 : project_to_density(c1 + step * g1);
                const ComplexMatrix n2 = step == 1.0 ? t2 : project_to_density(c2 + step * g2);
                const RealVector q1 = born(n1), q2 = born(n2);
                const double fn = reduced_value(n1, n2, q1, q2, alpha);
                const double model = hs_inner(g1, n1 - c1) + hs_inner(g2, n2 - c2);
                if (fn >= f + kArmijo * model) {
                    c1 = n1;
                    c2 = n2;
                    p1 = q1;
                    p2 = q2;
                    f = fn;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }
        joint_grads(p1, p2, alpha, g1, g2);
        const double fw = (lambda_max(g1) - hs_inner(g1, c1)) + (lambda_max(g2) - hs_inner(g2, c2));
        return {f, std::max(fw, 0.0)};
    }

    double single_value(double sgn, const RealVector& z, double alpha,
                        const ComplexMatrix& chi, const RealVector& p) const {
        double v = sgn * functional_trace(chi);
        for (int l = 0; l < n_settings(); ++l) {
            const int off = offsets_[static_cast<size_t>(l)];
            const int len = lengths_[static_cast<size_t>(l)];
            v += alpha * reps_[static_cast<size_t>(l)] * lse(z.segment(off, len), p.segment(off, len));
        }
        return v;
    }

    ComplexMatrix single_grad(double sgn, const RealVector& z, double alpha,
                              const RealVector& p) const {
        RealVector w(k_total());
        for (int l = 0; l < n_settings(); ++l) {
            const int off = offsets_[static_cast<size_t>(l)];
            const int len = lengths_[static_cast<size_t>(l)];
            const RealVector e = (z.segment(off, len).array() - z.segment(off, len).maxCoeff()).exp();
            const double s = e.dot(p.segment(off, len));
            w.segment(off, len) = (alpha * reps_[static_cast<size_t>(l)] * (1.0 - mixl_) / s) * e;
        }
        return sgn * obs_ + effect_sum(w);
    }

    /// Maximizes sgn tr(O chi) + alpha sum_l R_l lse(z, p(chi)) over states.
    MaxResult maximize_single(double sgn, const RealVector& z, double alpha,
                              ComplexMatrix& chi) const {
        RealVector p = born(chi);
        double f = single_value(sgn, z, alpha, chi, p);
        ComplexMatrix g;
        for (int it = 0; it < max_inner_; ++it) {
            g = single_grad(sgn, z, alpha, p);
            const ComplexMatrix t = project_to_density(chi + g);
            if ((t - chi).norm() < kProjGradTol) break;
            double step = 1.0;
            bool accepted = false;
            while (step >= kMinStep) {
                const ComplexMatrix n = step == 1.0 ? t : project_to_density(chi + step * g);
                const RealVector q = born(n);
                const double fn = single_value(sgn, z, alpha, n, q);
                if (fn >= f + kArmijo * hs_inner(g, n - chi)) {
                    chi = n;
                    p = q;
                    f = fn;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
        }
        g = single_grad(sgn, z, alpha, p);
        const double fw = lambda_max(g) - hs_inner(g, chi);
        return {f, std::max(fw, 0.0)};
    }

    /// Lower bound on the saddle value from the pair (c1, c2): shrink both
    /// states toward their midpoint until the affinity constraint
    /// g >= ln(eps/2) holds, then evaluate the functional gap there. Born
    /// vectors interpolate linearly, so no matrix work is needed.
    double restored_lower(const ComplexMatrix& c1, const ComplexMatrix& c2) const {
        const RealVector p1 = born(c1), p2 = born(c2);
        const double trd = functional_trace(c1) - functional_trace(c2);
        const double target = -ln2e_;
        if (g_value(p1, p2) >= target) return trd;
        const RealVector pbar = 0.5 * (p1 + p2);
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const RealVector q1 = (1.0 - mid) * p1 + mid * pbar;
            const RealVector q2 = (1.0 - mid) * p2 + mid * pbar;
            (g_value(q1, q2) >= target ? hi : lo) = mid;
        }
        return (1.0 - hi) * trd;
    }

    /// Stacked phi/alpha ratios at the current states: (1/2) ln(p1/p2).
    RealVector half_log_ratio(const ComplexMatrix& c1, const ComplexMatrix& c2) const {
        const RealVector p1 = born(c1), p2 = born(c2);
        return 0.5 * (p1.array().log() - p2.array().log()).matrix();
    }

    int setting_offset(int l) const { return offsets_[static_cast<size_t>(l)]; }
    int setting_length(int l) const { return lengths_[static_cast<size_t>(l)]; }

private:
    int dim_;
    double mixl_;
    double ln2e_;
    int max_inner_;
    ComplexMatrix obs_;
    Eigen::MatrixXcd bmat_;
    Eigen::RowVectorXcd ovec_;
    RealVector mix_;
    std::vector<int> offsets_;
    std::vector<int> lengths_;
    std::vector<double> reps_;
};

void write_diagnostics(std::ostream* out, int iteration, double alpha, double lower, double upper) {
    if (!out) return;
    char line[160];
    std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g\n", iteration, alpha, lower,
                  upper, upper - lower);
    *out << line;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(epsilon > 0.0) || !(epsilon < 0.25))
        throw std::invalid_argument("SolverConfig: epsilon must lie in (0, 0.25)");
    if (!(gap_tol > 0.0)) throw std::invalid_argument("SolverConfig: gap_tol must be positive");
    if (!(mix_lambda >= 0.0) || !(mix_lambda < 1.0))
        throw std::invalid_argument("SolverConfig: mix_lambda must lie in [0, 1)");
    if (!(alpha_log_min < alpha_log_max))
        throw std::invalid_argument("SolverConfig: empty alpha range");
    if (max_outer_iters < 4 || max_inner_iters < 1)
        throw std::invalid_argument("SolverConfig: iteration budgets too small");
}

double theta(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 0.25))
        throw std::invalid_argument("theta: epsilon must lie in (0, 0.25)");
    return 2.0 + std::log(64.0) / std::log(0.25 / epsilon);
}

double phi_value(const DensityMatrix& chi1, const DensityMatrix& chi2,
                 const std::vector<RealVector>& phi, double alpha,
                 const MeasurementScheme& scheme, const Observable& functional, double epsilon,
                 double mix_lambda) {
    if (!(alpha > 0.0)) throw std::invalid_argument("phi_value: alpha must be positive");
    if (!(epsilon > 0.0)) throw std::invalid_argument("phi_value: epsilon must be positive");
    if (chi1.dim() != scheme.dim || chi2.dim() != scheme.dim || functional.dim() != scheme.dim)
        throw std::invalid_argument("phi_value: dimension mismatch");
    if (static_cast<int>(phi.size()) != scheme.n_settings())
        throw std::invalid_argument("phi_value: one phi vector per setting required");

    double value = hs_inner(functional.matrix(), chi1.matrix()) -
                   hs_inner(functional.matrix(), chi2.matrix()) +
                   2.0 * alpha * std::log(2.0 / epsilon);
    for (int l = 0; l < scheme.n_settings(); ++l) {
        const auto& povm = scheme.povms[static_cast<size_t>(l)];
        if (phi[static_cast<size_t>(l)].size() != povm.n_outcomes())
            throw std::invalid_argument("phi_value: phi length does not match outcomes");
        const RealVector p1 = regularized_born(povm, chi1.matrix(), mix_lambda);
        const RealVector p2 = regularized_born(povm, chi2.matrix(), mix_lambda);
        const RealVector z = phi[static_cast<size_t>(l)] / alpha;
        const double r = static_cast<double>(scheme.repetitions[static_cast<size_t>(l)]);
        value += alpha * r * (lse(-z, p1) + lse(z, p2));
    }
    return value;
}

double reduced_constraint(const DensityMatrix& chi1, const DensityMatrix& chi2,
                          const MeasurementScheme& scheme, double mix_lambda) {
    if (chi1.dim() != scheme.dim || chi2.dim() != scheme.dim)
        throw std::invalid_argument("reduced_constraint: dimension mismatch");
    double g = 0.0;
    for (int l = 0; l < scheme.n_settings(); ++l) {
        const auto& povm = scheme.povms[static_cast<size_t>(l)];
        const RealVector p1 = regularized_born(povm, chi1.matrix(), mix_lambda);
        const RealVector p2 = regularized_born(povm, chi2.matrix(), mix_lambda);
        g += static_cast<double>(scheme.repetitions[static_cast<size_t>(l)]) *
             std::log(p1.cwiseProduct(p2).cwiseSqrt().sum());
    }
    return g;
}

SaddleSolution solve_saddle(const Observable& functional, const MeasurementScheme& scheme,
                            const SolverConfig& config) {
    config.validate();
    scheme.validate();
    if (functional.dim() != scheme.dim)
        throw std::invalid_argument("solve_saddle: functional and scheme dimensions differ");

    const Workspace ws(functional, scheme, config);
    const int d = scheme.dim;
    const ComplexMatrix eye = ComplexMatrix::Identity(d, d);

    // Start from the extremes of the functional, mildly mixed.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(functional.matrix());
    const ComplexVector vmin = es.eigenvectors().col(0);
    const ComplexVector vmax = es.eigenvectors().col(d - 1);
    ComplexMatrix c1 = 0.9 * (vmax * vmax.adjoint()) + 0.1 / d * eye;
    ComplexMatrix c2 = 0.9 * (vmin * vmin.adjoint()) + 0.1 / d * eye;

    double best_upper = std::numeric_limits<double>::infinity();
    double best_lower = -std::numeric_limits<double>::infinity();
    ComplexMatrix s1 = c1, s2 = c2;
    double best_alpha = std::exp(config.alpha_log_min);
    int iteration = 0;

    if (config.diagnostics)
        *config.diagnostics << "iteration,alpha,objective_lower,objective_upper,gap\n";

    auto probe = [&](double x) {
        const double alpha = std::exp(x);
        const auto res = ws.maximize_joint(alpha, c1, c2);
        const double upper = res.value + res.fw_gap;
        if (upper < best_upper) {
            best_upper = upper;
            best_alpha = alpha;
            s1 = c1;
            s2 = c2;
        }
        best_lower = std::max(best_lower, ws.restored_lower(c1, c2));
        ++iteration;
        write_diagnostics(config.diagnostics, iteration, alpha, best_lower, best_upper);
        return res.value;
    };

    // Golden-section search over ln(alpha); the reduced objective is convex
    // in alpha, hence unimodal in its logarithm.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = config.alpha_log_min, b = config.alpha_log_max;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = probe(x1), f2 = probe(x2);
    while (iteration < config.max_outer_iters && b - a > 1e-10 &&
           best_upper - best_lower > 0.7 * config.gap_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = probe(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = probe(x2);
        }
    }

    // Coefficients from the closed-form inner minimum at the best probe, then
    // a decoupled certification of the maximum at (phi, alpha): the reported
    // risk bounds both Chernoff tails of the resulting estimator.
    const RealVector z = ws.half_log_ratio(s1, s2);
    const double constant = 0.5 * (ws.functional_trace(s1) + ws.functional_trace(s2));
    ComplexMatrix m1 = s1, m2 = s2;
    const auto r1 = ws.maximize_single(+1.0, -z, best_alpha, m1);
    const auto r2 = ws.maximize_single(-1.0, z, best_alpha, m2);
    const double upper1 = r1.value + r1.fw_gap;
    const double upper2 = r2.value + r2.fw_gap;
    const double objective_upper =
        2.0 * (std::max(upper1 - constant, upper2 + constant) + best_alpha * ws.ln2e());
    const double objective_lower = best_lower;
    const double gap = objective_upper - objective_lower;

    std::vector<RealVector> phi;
    phi.reserve(static_cast<size_t>(scheme.n_settings()));
    for (int l = 0; l < scheme.n_settings(); ++l)
        phi.push_back(best_alpha * z.segment(ws.setting_offset(l), ws.setting_length(l)));

    return SaddleSolution{DensityMatrix(s1),
                          DensityMatrix(s2),
                          best_alpha,
                          std::move(phi),
                          objective_upper / 2.0,
                          constant,
                          gap,
                          objective_upper,
                          objective_lower,
                          gap <= config.gap_tol};
}

double certify_gap(const SaddleSolution& solution, const Observable& functional,
                   const MeasurementScheme& scheme, const SolverConfig& config) {
    config.validate();
    const Workspace ws(functional, scheme, config);
    RealVector z(ws.k_total());
    for (int l = 0; l < scheme.n_settings(); ++l)
        z.segment(ws.setting_offset(l), ws.setting_length(l)) =
            solution.phi[static_cast<size_t>(l)] / solution.alpha;
    ComplexMatrix m1 = solution.chi1.matrix();
    ComplexMatrix m2 = solution.chi2.matrix();
    const auto r1 = ws.maximize_single(+1.0, -z, solution.alpha, m1);
    const auto r2 = ws.maximize_single(-1.0, z, solution.alpha, m2);
    const double upper = 2.0 * (std::max(r1.value + r1.fw_gap - solution.constant,
                                         r2.value + r2.fw_gap + solution.constant) +
                                solution.alpha * ws.ln2e());
    const double lower = ws.restored_lower(solution.chi1.matrix(), solution.chi2.matrix());
    return upper - lower;
}

}  // namespace mfe
