#include <charconv>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfe/estimator.hpp"
#include "mfe/io.hpp"
#include "mfe/pauli.hpp"
#include "mfe/quantum.hpp"
#include "mfe/scheme.hpp"
#include "mfe/simulate.hpp"
#include "mfe/solver.hpp"

namespace {

using namespace mfe;

std::string fmt(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        while (!item.empty() && item.front() == ' ') item.erase(item.begin());
        while (!item.empty() && item.back() == ' ') item.pop_back();
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

Observable load_functional(const std::string& target_path, const std::string& observable_path) {
    if (!observable_path.empty()) return io::load_observable(observable_path);
    return Observable::from_target(io::load_pure_state(target_path));
}

struct BuildArgs {
    std::string target, observable, scheme, out, diagnostics;
    double epsilon = 0.05;
    double gap_tol = 1e-4;
    std::uint64_t seed = 0;
};

int cmd_build(const BuildArgs& args) {
    const Observable functional = load_functional(args.target, args.observable);
    const MeasurementScheme scheme = io::load_scheme(args.scheme);

    SolverConfig config;
    config.epsilon = args.epsilon;
    config.gap_tol = args.gap_tol;
    config.seed = args.seed;
    const std::string diag_path =
        args.diagnostics.empty() ? args.out + ".diag.csv" : args.diagnostics;
    std::ofstream diag(diag_path);
    if (!diag) throw std::runtime_error("cannot open " + diag_path + " for writing");
    config.diagnostics = &diag;

    const SaddleSolution solution = solve_saddle(functional, scheme, config);
    diag.flush();
    if (!solution.converged) {
        std::cerr << "error: solver gap " << fmt(solution.gap_certificate)
                  << " exceeds tolerance " << fmt(args.gap_tol) << "; diagnostics in " << diag_path
                  << "\n";
        return 2;
    }
    const EstimatorArtifact artifact =
        extract_estimator(solution, scheme, functional, args.epsilon);
    io::save_estimator(artifact, args.out);
    std::cout << "estimator written to " << args.out << " (diagnostics in " << diag_path << ")\n"
              << "scheme digest " << artifact.scheme_digest << ", " << artifact.n_settings()
              << " settings, " << scheme.total_shots() << " total shots\n"
              << "risk " << fmt(artifact.risk) << " at " << fmt(1.0 - args.epsilon)
              << " confidence, certified gap " << fmt(solution.gap_certificate) << "\n";
    return 0;
}

struct EstimateArgs {
    std::string estimator, data;
    bool tolerant = false;
    bool clamp = false;
};

int cmd_estimate(const EstimateArgs& args) {
    const EstimatorArtifact artifact = io::load_estimator(args.estimator);
    const OutcomeDataset data = io::load_outcomes_csv(args.data);
    const EstimateReport report = apply_estimator(artifact, data, !args.tolerant, args.clamp);

    std::cout << fmt(report.estimate) << ' ' << fmt(report.risk) << ' ' << fmt(report.interval_lo)
              << ' ' << fmt(report.interval_hi) << ' ' << fmt(report.confidence_level) << '\n';
    std::cout << "estimate of " << artifact.functional_label << ": " << fmt(report.estimate)
              << " +/- " << fmt(report.risk) << " -> [" << fmt(report.interval_lo) << ", "
              << fmt(report.interval_hi) << "] at " << fmt(100.0 * report.confidence_level)
              << "% confidence\n";
    if (args.clamp)
        std::cout << "clamped to [0, 1]: " << fmt(report.clamped_estimate)
                  << (report.clamped ? "" : " (unchanged)") << '\n';
    if (!report.warning.empty()) std::cerr << "warning: " << report.warning << '\n';
    return 0;
}

struct SimulateArgs {
    std::string state, scheme, out;
    std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& args) {
    const DensityMatrix state = io::load_density_matrix(args.state);
    const MeasurementScheme scheme = io::load_scheme(args.scheme);
    const OutcomeDataset data = sample_outcomes(state, scheme, args.seed);
    io::save_outcomes_csv(data, args.out);
    std::cout << "wrote " << scheme.total_shots() << " shots across " << scheme.n_settings()
              << " settings to " << args.out << '\n';
    return 0;
}

struct CoverageArgs {
    std::string target, observable, scheme, true_state, out;
    double epsilon = 0.05;
    long long trials = 1000;
    std::uint64_t seed = 0;
};

int cmd_coverage(const CoverageArgs& args) {
    const Observable functional = load_functional(args.target, args.observable);
    const MeasurementScheme scheme = io::load_scheme(args.scheme);
    const DensityMatrix state = io::load_density_matrix(args.true_state);
    const CoverageReport report =
        coverage_test(functional, scheme, args.epsilon, state, args.trials, args.seed);

    std::cout << report.trials << ' ' << report.hits << ' ' << fmt(report.coverage) << ' '
              << fmt(report.binomial_lower_bound) << '\n';
    std::cout << "coverage " << fmt(report.coverage) << " over " << report.trials
              << " trials (99% binomial lower bound " << fmt(report.binomial_lower_bound)
              << ", guarantee " << fmt(1.0 - args.epsilon) << ")\n";
    if (!args.out.empty()) {
        std::vector<io::CoverageRow> rows;
        rows.reserve(report.estimates.size());
        for (std::size_t t = 0; t < report.estimates.size(); ++t)
            rows.push_back({static_cast<long long>(t), report.estimates[t],
                            std::abs(report.estimates[t] - report.true_value) <= report.risk});
        io::save_coverage_csv(rows, args.out);
        std::cout << "per-trial estimates written to " << args.out << '\n';
    }
    return 0;
}

struct BenchArgs {
    std::string compare = "minimax,dfe,mle";
    std::string target, observable, scheme, true_state, out;
    double epsilon = 0.05;
    int bootstrap = 200;
    std::uint64_t seed = 0;
};

int cmd_bench(const BenchArgs& args) {
    const std::vector<std::string> methods = split_list(args.compare);
    if (methods.empty()) throw std::invalid_argument("--compare needs at least one method");
    const MeasurementScheme scheme = io::load_scheme(args.scheme);
    const Observable functional = load_functional(args.target, args.observable);
    const DensityMatrix state = io::load_density_matrix(args.true_state);
    const OutcomeDataset data = sample_outcomes(state, scheme, args.seed);

    std::vector<io::BenchEntry> entries;
    for (const std::string& method : methods) {
        const auto start = std::chrono::steady_clock::now();
        io::BenchEntry entry;
        entry.method = method;
        if (method == "minimax") {
            SolverConfig config;
            config.epsilon = args.epsilon;
            const SaddleSolution solution = solve_saddle(functional, scheme, config);
            const EstimatorArtifact artifact =
                extract_estimator(solution, scheme, functional, args.epsilon);
            const EstimateReport report = apply_estimator(artifact, data);
            entry.estimate = report.estimate;
            entry.risk = report.risk;
            entry.detail = "affine minimax estimator, certified risk";
        } else if (method == "dfe") {
            if (args.target.empty())
                throw std::invalid_argument("dfe baseline needs --target (a pure state)");
            const PureState target = io::load_pure_state(args.target);
            const long long shots =
                std::max<long long>(1, scheme.total_shots() / scheme.n_settings());
            const BaselineResult result = dfe_baseline(target, scheme.n_settings(), shots,
                                                       args.seed + 1, state, args.epsilon);
            entry.estimate = result.estimate;
            entry.risk = result.risk_estimate;
            entry.detail = result.detail;
        } else if (method == "mle") {
            const BaselineResult result = mle_baseline(functional, scheme, data, args.epsilon,
                                                       args.bootstrap, args.seed + 2);
            entry.estimate = result.estimate;
            entry.risk = result.risk_estimate;
            entry.detail = result.detail;
        } else {
            throw std::invalid_argument("unknown method \"" + method +
                                        "\" (expected minimax, dfe, or mle)");
        }
        const auto stop = std::chrono::steady_clock::now();
        entry.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        entries.push_back(entry);
        std::cout << method << ": estimate " << fmt(entry.estimate) << ", risk "
                  << fmt(entry.risk) << ", " << fmt(entry.wall_time_ms) << " ms\n";
    }
    io::save_bench_json(entries, args.out);
    std::cout << "benchmark report written to " << args.out << '\n';
    return 0;
}

struct SchemesArgs {
    std::string kind, out, target, generators, mode = "full", indices;
    double fraction = 0.75;
    int count = 0;
    int qubits = 0;
    int settings = 0;
    int outcomes = 0;
    long long shots = 100;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int cmd_schemes(const SchemesArgs& args) {
    MeasurementScheme scheme;
    if (args.kind == "pauli-dfe") {
        if (args.target.empty()) throw std::invalid_argument("pauli-dfe needs --target");
        scheme = dfe_weighted_scheme(io::load_pure_state(args.target), args.fraction, args.shots);
    } else if (args.kind == "stabilizer") {
        if (args.generators.empty()) throw std::invalid_argument("stabilizer needs --generators");
        const StabilizerGroupSpec spec = StabilizerGroupSpec::parse(split_list(args.generators));
        StabilizerMode mode;
        if (args.mode == "full") {
            mode = StabilizerMode::full_group();
        } else if (args.mode == "sample") {
            if (args.count < 1) throw std::invalid_argument("--mode sample needs --count >= 1");
            if (!args.seed_given) throw std::invalid_argument("--mode sample needs --seed");
            mode = StabilizerMode::uniform_sample(args.count, args.seed);
        } else if (args.mode == "subset") {
            if (args.indices.empty()) throw std::invalid_argument("--mode subset needs --indices");
            std::vector<int> indices;
            for (const std::string& item : split_list(args.indices))
                indices.push_back(std::stoi(item));
            mode = StabilizerMode::generator_subset(indices);
        } else {
            throw std::invalid_argument("unknown --mode \"" + args.mode +
                                        "\" (expected full, sample, or subset)");
        }
        scheme = stabilizer_scheme(spec, mode, args.shots);
    } else if (args.kind == "target-basis") {
        if (args.target.empty()) throw std::invalid_argument("target-basis needs --target");
        scheme = target_basis_scheme(io::load_pure_state(args.target), args.shots);
    } else if (args.kind == "random-povm") {
        if (args.qubits < 1) throw std::invalid_argument("random-povm needs --qubits >= 1");
        if (args.settings < 1) throw std::invalid_argument("random-povm needs --settings >= 1");
        if (!args.seed_given) throw std::invalid_argument("random-povm needs --seed");
        const int outcomes = args.outcomes > 0 ? args.outcomes : (1 << args.qubits);
        scheme = random_rank1_scheme(args.qubits, args.settings, outcomes, args.seed, args.shots);
    } else {
        throw std::invalid_argument("unknown --kind \"" + args.kind + "\"");
    }
    io::save_scheme(scheme, args.out);
    std::cout << "wrote " << scheme.n_settings() << "-setting scheme (digest "
              << scheme_digest(scheme) << ") to " << args.out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affine estimators for fidelity and observable expectations, with certified risk"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand("build", "construct an estimator for a target and scheme");
    auto* build_target = build->add_option("--target", build_args.target, "target pure state JSON");
    auto* build_obs =
        build->add_option("--observable", build_args.observable, "observable JSON (instead of --target)");
    build_target->excludes(build_obs);
    build->add_option("--scheme", build_args.scheme, "measurement scheme JSON")->required();
    build->add_option("--epsilon", build_args.epsilon, "failure probability, in (0, 0.25)");
    build->add_option("--out", build_args.out, "output estimator JSON path")->required();
    build->add_option("--gap-tol", build_args.gap_tol, "certified gap tolerance");
    build->add_option("--seed", build_args.seed, "solver seed");
    build->add_option("--diagnostics", build_args.diagnostics,
                      "diagnostics CSV path (default: <out>.diag.csv)");

    EstimateArgs estimate_args;
    CLI::App* estimate = app.add_subcommand("estimate", "apply an estimator to measured counts");
    estimate->add_option("--estimator", estimate_args.estimator, "estimator JSON")->required();
    estimate->add_option("--data", estimate_args.data, "outcome counts CSV")->required();
    auto* strict_flag = estimate->add_flag("--strict", "fail on shot-count mismatch (default)");
    auto* tolerant_flag =
        estimate->add_flag("--tolerant", estimate_args.tolerant, "warn on shot-count mismatch");
    strict_flag->excludes(tolerant_flag);
    estimate->add_flag("--clamp", estimate_args.clamp, "also report the estimate clamped to [0, 1]");

    SimulateArgs simulate_args;
    CLI::App* simulate = app.add_subcommand("simulate", "sample outcome counts from a state");
    simulate->add_option("--state", simulate_args.state, "state JSON (pure or density)")->required();
    simulate->add_option("--scheme", simulate_args.scheme, "measurement scheme JSON")->required();
    simulate->add_option("--seed", simulate_args.seed, "RNG seed")->required();
    simulate->add_option("--out", simulate_args.out, "output counts CSV")->required();

    CoverageArgs coverage_args;
    CLI::App* coverage = app.add_subcommand("coverage", "Monte-Carlo check of the risk guarantee");
    auto* cov_target =
        coverage->add_option("--target", coverage_args.target, "target pure state JSON");
    auto* cov_obs = coverage->add_option("--observable", coverage_args.observable,
                                         "observable JSON (instead of --target)");
    cov_target->excludes(cov_obs);
    coverage->add_option("--scheme", coverage_args.scheme, "measurement scheme JSON")->required();
    coverage->add_option("--true-state", coverage_args.true_state, "data-generating state JSON")
        ->required();
    coverage->add_option("--trials", coverage_args.trials, "number of simulated datasets");
    coverage->add_option("--epsilon", coverage_args.epsilon, "failure probability");
    coverage->add_option("--seed", coverage_args.seed, "RNG seed")->required();
    coverage->add_option("--out", coverage_args.out, "optional per-trial CSV path");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "compare estimation methods on one dataset");
    bench->add_option("--compare", bench_args.compare, "comma list from {minimax, dfe, mle}");
    auto* bench_target = bench->add_option("--target", bench_args.target, "target pure state JSON");
    auto* bench_obs = bench->add_option("--observable", bench_args.observable,
                                        "observable JSON (instead of --target)");
    bench_target->excludes(bench_obs);
    bench->add_option("--scheme", bench_args.scheme, "measurement scheme JSON")->required();
    bench->add_option("--true-state", bench_args.true_state, "data-generating state JSON")
        ->required();
    bench->add_option("--epsilon", bench_args.epsilon, "failure probability");
    bench->add_option("--bootstrap", bench_args.bootstrap, "MLE bootstrap resamples");
    bench->add_option("--seed", bench_args.seed, "RNG seed")->required();
    bench->add_option("--out", bench_args.out, "benchmark report JSON path")->required();

    SchemesArgs schemes_args;
    CLI::App* schemes = app.add_subcommand("schemes", "generate measurement scheme files");
    schemes
        ->add_option("--kind", schemes_args.kind,
                     "one of pauli-dfe, stabilizer, target-basis, random-povm")
        ->required();
    schemes->add_option("--out", schemes_args.out, "output scheme JSON path")->required();
    schemes->add_option("--target", schemes_args.target, "target pure state JSON");
    schemes->add_option("--generators", schemes_args.generators, "comma list of Pauli strings");
    schemes->add_option("--mode", schemes_args.mode, "stabilizer mode: full, sample, or subset");
    schemes->add_option("--count", schemes_args.count, "sample mode: number of draws");
    schemes->add_option("--indices", schemes_args.indices, "subset mode: comma list of generator indices");
    schemes->add_option("--fraction", schemes_args.fraction, "pauli-dfe: kept weight fraction");
    schemes->add_option("--qubits", schemes_args.qubits, "random-povm: register size");
    schemes->add_option("--settings", schemes_args.settings, "random-povm: number of settings");
    schemes->add_option("--outcomes", schemes_args.outcomes,
                        "random-povm: outcomes per setting (default 2^qubits)");
    schemes->add_option("--shots", schemes_args.shots, "repetitions per setting");
    auto* schemes_seed = schemes->add_option("--seed", schemes_args.seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    schemes_args.seed_given = schemes_seed->count() > 0;

    try {
        if (build->parsed()) {
            if (build_args.target.empty() && build_args.observable.empty())
                throw std::invalid_argument("build needs --target or --observable");
            return cmd_build(build_args);
        }
        if (estimate->parsed()) return cmd_estimate(estimate_args);
        if (simulate->parsed()) return cmd_simulate(simulate_args);
        if (coverage->parsed()) {
            if (coverage_args.target.empty() && coverage_args.observable.empty())
                throw std::invalid_argument("coverage needs --target or --observable");
            return cmd_coverage(coverage_args);
        }
        if (bench->parsed()) {
            if (bench_args.target.empty() && bench_args.observable.empty())
                throw std::invalid_argument("bench needs --target or --observable");
            return cmd_bench(bench_args);
        }
        if (schemes->parsed()) return cmd_schemes(schemes_args);
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
