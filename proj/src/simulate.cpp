#include "mfe/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mfe/pauli.hpp"
#include "mfe/quantum.hpp"

namespace mfe {

namespace {

constexpr double kProbFloor = 1e-12;

double unit_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

int draw_index(const std::vector<double>& cumulative, std::mt19937_64& gen) {
    const double u = unit_uniform(gen);
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = std::distance(cumulative.begin(), it);
    return std::min<int>(static_cast<int>(idx), static_cast<int>(cumulative.size()) - 1);
}

std::vector<double> cumulative_sums(const RealVector& p) {
    std::vector<double> cum(static_cast<std::size_t>(p.size()));
    double acc = 0.0;
    for (int k = 0; k < p.size(); ++k) {
        acc += p(k);
        cum[static_cast<std::size_t>(k)] = acc;
    }
    cum.back() = 1.0;
    return cum;
}

std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t index) {
    return rng::splitmix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
}

// Regularized incomplete beta via Lentz's continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-14;
    constexpr double fpmin = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(log_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_continued_fraction(a, b, x) / a;
    return 1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

OutcomeDataset sample_outcomes(const DensityMatrix& state, const MeasurementScheme& scheme,
                               std::uint64_t seed) {
    scheme.validate();
    if (state.dim() != scheme.dim)
        throw std::invalid_argument("state dimension does not match the scheme");

    std::vector<std::vector<long long>> counts(static_cast<std::size_t>(scheme.n_settings()));
    for (int l = 0; l < scheme.n_settings(); ++l) {
        const RealVector p = born_distribution(scheme.povms[static_cast<std::size_t>(l)], state);
        const std::vector<double> cum = cumulative_sums(p);
        auto gen = rng::stream(seed, static_cast<std::uint64_t>(l));
        auto& row = counts[static_cast<std::size_t>(l)];
        row.assign(static_cast<std::size_t>(p.size()), 0);
        for (long long shot = 0; shot < scheme.repetitions[static_cast<std::size_t>(l)]; ++shot)
            ++row[static_cast<std::size_t>(draw_index(cum, gen))];
    }
    return OutcomeDataset::from_counts(std::move(counts));
}

double clopper_pearson_lower(long long hits, long long trials, double confidence) {
    if (trials <= 0) throw std::invalid_argument("trials must be positive");
    if (hits < 0 || hits > trials) throw std::invalid_argument("hits must lie in [0, trials]");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must lie in (0, 1)");
    if (hits == 0) return 0.0;
    const double alpha = 1.0 - confidence;
    const double a = static_cast<double>(hits);
    const double b = static_cast<double>(trials - hits) + 1.0;
    // Smallest p with P(X >= hits | p) = I_p(a, b) equal to alpha.
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (regularized_incomplete_beta(a, b, mid) < alpha)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

CoverageReport coverage_test(const Observable& functional, const MeasurementScheme& scheme,
                             double epsilon, const DensityMatrix& true_state, long long trials,
                             std::uint64_t seed) {
    if (trials <= 0) throw std::invalid_argument("coverage_test needs at least one trial");
    SolverConfig config;
    config.epsilon = epsilon;
    const SaddleSolution solution = solve_saddle(functional, scheme, config);
    const EstimatorArtifact artifact = extract_estimator(solution, scheme, functional, epsilon);

    CoverageReport report;
    report.trials = trials;
    report.epsilon = epsilon;
    report.risk = artifact.risk;
    report.true_value = expectation_value(functional, true_state);
    report.estimates.reserve(static_cast<std::size_t>(trials));
    for (long long t = 0; t < trials; ++t) {
        const OutcomeDataset data =
            sample_outcomes(true_state, scheme, derived_seed(seed, static_cast<std::uint64_t>(t)));
        const EstimateReport est = apply_estimator(artifact, data);
        report.estimates.push_back(est.estimate);
        if (std::abs(est.estimate - report.true_value) <= artifact.risk) ++report.hits;
    }
    report.coverage = static_cast<double>(report.hits) / static_cast<double>(report.trials);
    report.binomial_lower_bound = clopper_pearson_lower(report.hits, report.trials, 0.99);
    return report;
}

BaselineResult dfe_baseline(const PureState& target, int n_settings, long long shots_per_setting,
                            std::uint64_t seed, const DensityMatrix& true_state, double epsilon) {
    if (n_settings < 1) throw std::invalid_argument("dfe_baseline needs at least one setting");
    if (shots_per_setting < 1) throw std::invalid_argument("dfe_baseline needs at least one shot");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (true_state.dim() != target.dim())
        throw std::invalid_argument("true state dimension does not match the target");
    int n_qubits = 0;
    while ((1 << n_qubits) < target.dim()) ++n_qubits;
    if ((1 << n_qubits) != target.dim())
        throw std::invalid_argument("dfe_baseline needs a qubit-register target");

    const std::vector<PauliString> paulis = all_nonidentity_paulis(n_qubits);
    const double d = static_cast<double>(target.dim());
    std::vector<double> expectations(paulis.size());
    RealVector weights(static_cast<Eigen::Index>(paulis.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < paulis.size(); ++i) {
        expectations[i] = pauli_expectation(paulis[i], target);
        const double w = expectations[i] * expectations[i] / d;
        weights(static_cast<Eigen::Index>(i)) = w;
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("target has no non-identity Pauli weight");
    weights /= total;

    const std::vector<double> cum = cumulative_sums(weights);
    auto setting_gen = rng::stream(seed, 0);
    std::vector<int> drawn(static_cast<std::size_t>(n_settings));
    for (int j = 0; j < n_settings; ++j) drawn[static_cast<std::size_t>(j)] = draw_index(cum, setting_gen);

    double sum_x = 0.0;
    double sum_inv_sq = 0.0;
    for (int j = 0; j < n_settings; ++j) {
        const PauliString& w = paulis[static_cast<std::size_t>(drawn[static_cast<std::size_t>(j)])];
        const double t_w = expectations[static_cast<std::size_t>(drawn[static_cast<std::size_t>(j)])];
        const double mean_true =
            (w.matrix() * true_state.matrix()).trace().real();
        const double p_plus = std::clamp(0.5 * (1.0 + mean_true), 0.0, 1.0);
        auto gen = rng::stream(seed, static_cast<std::uint64_t>(j) + 1);
        long long plus = 0;
        for (long long shot = 0; shot < shots_per_setting; ++shot)
            if (unit_uniform(gen) < p_plus) ++plus;
        const double m = static_cast<double>(2 * plus - shots_per_setting) /
                         static_cast<double>(shots_per_setting);
        sum_x += m / t_w;
        sum_inv_sq += 1.0 / (t_w * t_w);
    }
    const double scale = 1.0 - 1.0 / d;
    const double mean_x = sum_x / static_cast<double>(n_settings);

    BaselineResult result;
    result.method = "dfe";
    result.estimate = scale * mean_x + 1.0 / d;
    result.risk_estimate = scale *
                           std::sqrt(2.0 * std::log(2.0 / epsilon) * sum_inv_sq) /
                           static_cast<double>(n_settings);
    std::ostringstream detail;
    detail << "importance-sampled pauli settings (" << n_settings << " x " << shots_per_setting
           << " shots), sign granularity, hoeffding bound at level " << 1.0 - epsilon;
    result.detail = detail.str();
    return result;
}

DensityMatrix mle_reconstruct(const MeasurementScheme& scheme, const OutcomeDataset& data,
                              int max_iters, double tol, int* iters_out) {
    scheme.validate();
    data.validate();
    if (data.n_settings() != scheme.n_settings())
        throw std::invalid_argument("dataset does not match the scheme's setting count");
    for (int l = 0; l < scheme.n_settings(); ++l)
        if (data.counts[static_cast<std::size_t>(l)].size() !=
            static_cast<std::size_t>(scheme.povms[static_cast<std::size_t>(l)].n_outcomes()))
            throw std::invalid_argument("dataset does not match the scheme's outcome counts");

    const int dim = scheme.dim;
    long long total = 0;
    for (long long t : data.totals) total += t;
    if (total <= 0) throw std::invalid_argument("dataset has no shots");

    const ComplexMatrix identity = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix rho = identity / static_cast<double>(dim);
    int iters = 0;
    for (; iters < max_iters; ++iters) {
        ComplexMatrix r = ComplexMatrix::Zero(dim, dim);
        for (int l = 0; l < scheme.n_settings(); ++l) {
            const auto& povm = scheme.povms[static_cast<std::size_t>(l)];
            for (int k = 0; k < povm.n_outcomes(); ++k) {
                const long long c = data.counts[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)];
                if (c == 0) continue;
                const double p =
                    std::max((povm.effect(k) * rho).trace().real(), kProbFloor);
                r += (static_cast<double>(c) / p) * povm.effect(k);
            }
        }
        r /= static_cast<double>(total);
        if ((r * rho - rho).norm() < tol) break;
        const ComplexMatrix t = (identity + 0.5 * r) / 1.5;
        ComplexMatrix next = t * rho * t.adjoint();
        next = 0.5 * (next + next.adjoint().eval());
        rho = next / next.trace().real();
    }
    if (iters_out) *iters_out = iters;
    return DensityMatrix(rho);
}

BaselineResult mle_baseline(const Observable& functional, const MeasurementScheme& scheme,
                            const OutcomeDataset& data, double epsilon, int bootstrap_B,
                            std::uint64_t seed) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (bootstrap_B < 0) throw std::invalid_argument("bootstrap_B must be non-negative");
    if (functional.matrix().rows() != scheme.dim)
        throw std::invalid_argument("functional dimension does not match the scheme");

    int iters = 0;
    const DensityMatrix rho = mle_reconstruct(scheme, data, 5000, 1e-7, &iters);
    const double estimate = expectation_value(functional, rho);

    double risk = 0.0;
    if (bootstrap_B > 0) {
        std::vector<double> deviations;
        deviations.reserve(static_cast<std::size_t>(bootstrap_B));
        for (int b = 0; b < bootstrap_B; ++b) {
            const OutcomeDataset resample =
                sample_outcomes(rho, scheme, derived_seed(seed, static_cast<std::uint64_t>(b)));
            const DensityMatrix refit = mle_reconstruct(scheme, resample);
            deviations.push_back(std::abs(expectation_value(functional, refit) - estimate));
        }
        std::sort(deviations.begin(), deviations.end());
        const auto rank = static_cast<std::size_t>(
            std::ceil((1.0 - epsilon) * static_cast<double>(bootstrap_B)));
        risk = deviations[std::min(rank == 0 ? 0 : rank - 1, deviations.size() - 1)];
    }

    BaselineResult result;
    result.method = "mle";
    result.estimate = estimate;
    result.risk_estimate = risk;
    std::ostringstream detail;
    detail << "diluted fixed-point likelihood ascent (dilution 0.5, tol 1e-7, " << iters
           << " iterations), parametric bootstrap B=" << bootstrap_B << " at level "
           << 1.0 - epsilon;
    result.detail = detail.str();
    return result;
}

Interval smallest_interval(std::vector<double> estimates, double true_value, double level) {
    if (estimates.empty()) throw std::invalid_argument("smallest_interval needs estimates");
    if (!(level > 0.0 && level <= 1.0))
        throw std::invalid_argument("level must lie in (0, 1]");
    std::sort(estimates.begin(), estimates.end());
    const std::size_t n = estimates.size();
    const auto m = static_cast<std::size_t>(
        std::ceil(level * static_cast<double>(n) - 1e-12));
    const std::size_t window = std::max<std::size_t>(m, 1);

    Interval best;
    bool found = false;
    for (std::size_t i = 0; i + window <= n; ++i) {
        const double lo = std::min(estimates[i], true_value);
        const double hi = std::max(estimates[i + window - 1], true_value);
        if (!found || hi - lo < best.width()) {
            best = {lo, hi};
            found = true;
        }
    }
    return best;
}

double interval_ratio(const std::vector<double>& estimates, double true_value, double level,
                      double minimax_risk) {
    if (estimates.size() < 100)
        throw std::invalid_argument("interval_ratio needs at least 100 estimates");
    if (!(minimax_risk >= 0.0)) throw std::invalid_argument("minimax_risk must be non-negative");
    const Interval interval = smallest_interval(estimates, true_value, level);
    if (interval.width() <= 0.0)
        throw std::invalid_argument("degenerate reference interval of zero width");
    return 2.0 * minimax_risk / interval.width();
}

}  // namespace mfe
