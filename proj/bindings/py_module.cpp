#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <sstream>

#include "mfe/estimator.hpp"
#include "mfe/io.hpp"
#include "mfe/pauli.hpp"
#include "mfe/quantum.hpp"
#include "mfe/scheme.hpp"
#include "mfe/simulate.hpp"
#include "mfe/solver.hpp"

namespace py = pybind11;
using namespace mfe;

namespace {

StabilizerMode make_mode(const std::string& mode, int count, std::uint64_t seed,
                         const std::vector<int>& indices) {
    if (mode == "full") return StabilizerMode::full_group();
    if (mode == "sample") return StabilizerMode::uniform_sample(count, seed);
    if (mode == "subset") return StabilizerMode::generator_subset(indices);
    throw std::invalid_argument("mode must be full, sample, or subset");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Affine estimators with certified risk for fidelity and observable expectations";

    py::register_exception<ConvergenceError>(m, "ConvergenceError");

    py::class_<PureState>(m, "PureState")
        .def(py::init<ComplexVector>(), py::arg("amplitudes"))
        .def_property_readonly("dim", &PureState::dim)
        .def_property_readonly("amplitudes", &PureState::amplitudes)
        .def("projector", &PureState::projector);

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init<ComplexMatrix>(), py::arg("matrix"))
        .def_static("from_pure", &DensityMatrix::from_pure, py::arg("state"))
        .def_static("maximally_mixed", &DensityMatrix::maximally_mixed, py::arg("dim"))
        .def_property_readonly("dim", &DensityMatrix::dim)
        .def_property_readonly("matrix", &DensityMatrix::matrix);

    py::class_<Observable>(m, "Observable")
        .def(py::init<ComplexMatrix, std::string>(), py::arg("matrix"), py::arg("label") = "")
        .def_static("from_target", &Observable::from_target, py::arg("target"))
        .def_property_readonly("matrix", &Observable::matrix)
        .def_property_readonly("label", &Observable::label)
        .def("min_eigenvalue", &Observable::min_eigenvalue)
        .def("max_eigenvalue", &Observable::max_eigenvalue);

    py::class_<Povm>(m, "Povm")
        .def(py::init<int, std::vector<ComplexMatrix>>(), py::arg("dim"), py::arg("effects"))
        .def_property_readonly("dim", &Povm::dim)
        .def_property_readonly("n_outcomes", &Povm::n_outcomes)
        .def_property_readonly("effects", &Povm::effects);

    py::class_<PauliString>(m, "PauliString")
        .def_static("parse", &PauliString::parse, py::arg("text"))
        .def_property_readonly("n_qubits", &PauliString::n_qubits)
        .def_property_readonly("sign", &PauliString::sign)
        .def("matrix", &PauliString::matrix)
        .def("__str__", &PauliString::to_string)
        .def("__repr__", [](const PauliString& p) { return "PauliString(" + p.to_string() + ")"; });

    py::enum_<Granularity>(m, "Granularity")
        .value("eigenvector", Granularity::eigenvector)
        .value("sign", Granularity::sign)
        .value("rank1", Granularity::rank1)
        .value("custom", Granularity::custom);

    py::class_<MeasurementScheme>(m, "MeasurementScheme")
        .def_readonly("dim", &MeasurementScheme::dim)
        .def_readonly("povms", &MeasurementScheme::povms)
        .def_readonly("repetitions", &MeasurementScheme::repetitions)
        .def_readonly("labels", &MeasurementScheme::labels)
        .def_readonly("granularity", &MeasurementScheme::granularity)
        .def_property_readonly("n_settings", &MeasurementScheme::n_settings)
        .def_property_readonly("total_shots", &MeasurementScheme::total_shots)
        .def("validate", &MeasurementScheme::validate)
        .def("digest", [](const MeasurementScheme& s) { return scheme_digest(s); });

    m.def(
        "pauli_scheme",
        [](const std::vector<std::string>& paulis, Granularity granularity, long long shots) {
            std::vector<PauliString> parsed;
            parsed.reserve(paulis.size());
            for (const auto& text : paulis) parsed.push_back(PauliString::parse(text));
            return pauli_scheme(parsed, granularity, shots);
        },
        py::arg("paulis"), py::arg("granularity"), py::arg("shots_per_setting"));
    m.def("dfe_weighted_scheme", &dfe_weighted_scheme, py::arg("target"), py::arg("fraction"),
          py::arg("shots_per_setting"));
    m.def(
        "stabilizer_scheme",
        [](const std::vector<std::string>& generators, long long shots, const std::string& mode,
           int count, std::uint64_t seed, const std::vector<int>& indices) {
            return stabilizer_scheme(StabilizerGroupSpec::parse(generators),
                                     make_mode(mode, count, seed, indices), shots);
        },
        py::arg("generators"), py::arg("shots_per_setting"), py::arg("mode") = "full",
        py::arg("count") = 0, py::arg("seed") = 0, py::arg("indices") = std::vector<int>{});
    m.def("target_basis_scheme", &target_basis_scheme, py::arg("target"), py::arg("shots"));
    m.def("random_rank1_scheme", &random_rank1_scheme, py::arg("n_qubits"), py::arg("n_settings"),
          py::arg("outcomes_per_setting"), py::arg("seed"), py::arg("shots_per_setting") = 1);
    m.def("scheme_digest", &scheme_digest, py::arg("scheme"));

    py::class_<SolverConfig>(m, "SolverConfig")
        .def(py::init<>())
        .def_readwrite("epsilon", &SolverConfig::epsilon)
        .def_readwrite("gap_tol", &SolverConfig::gap_tol)
        .def_readwrite("mix_lambda", &SolverConfig::mix_lambda)
        .def_readwrite("alpha_log_min", &SolverConfig::alpha_log_min)
        .def_readwrite("alpha_log_max", &SolverConfig::alpha_log_max)
        .def_readwrite("max_outer_iters", &SolverConfig::max_outer_iters)
        .def_readwrite("max_inner_iters", &SolverConfig::max_inner_iters)
        .def_readwrite("seed", &SolverConfig::seed);

    py::class_<SaddleSolution>(m, "SaddleSolution")
        .def_readonly("chi1", &SaddleSolution::chi1)
        .def_readonly("chi2", &SaddleSolution::chi2)
        .def_readonly("alpha", &SaddleSolution::alpha)
        .def_readonly("phi", &SaddleSolution::phi)
        .def_readonly("risk", &SaddleSolution::risk)
        .def_readonly("constant", &SaddleSolution::constant)
        .def_readonly("gap_certificate", &SaddleSolution::gap_certificate)
        .def_readonly("objective_upper", &SaddleSolution::objective_upper)
        .def_readonly("objective_lower", &SaddleSolution::objective_lower)
        .def_readonly("converged", &SaddleSolution::converged);

    m.def("theta", &theta, py::arg("epsilon"));
    m.def("solve_saddle", &solve_saddle, py::arg("functional"), py::arg("scheme"),
          py::arg("config") = SolverConfig{},
          py::call_guard<py::gil_scoped_release>());
    m.def("certify_gap", &certify_gap, py::arg("solution"), py::arg("functional"),
          py::arg("scheme"), py::arg("config") = SolverConfig{});

    py::class_<EstimatorArtifact>(m, "EstimatorArtifact")
        .def_readonly("scheme_digest", &EstimatorArtifact::scheme_digest)
        .def_readonly("epsilon", &EstimatorArtifact::epsilon)
        .def_readonly("risk", &EstimatorArtifact::risk)
        .def_readonly("constant", &EstimatorArtifact::constant)
        .def_readonly("coefficients", &EstimatorArtifact::coefficients)
        .def_readonly("labels", &EstimatorArtifact::labels)
        .def_readonly("repetitions", &EstimatorArtifact::repetitions)
        .def_readonly("functional_label", &EstimatorArtifact::functional_label)
        .def_readonly("granularity", &EstimatorArtifact::granularity)
        .def("to_json", [](const EstimatorArtifact& a) { return io::estimator_to_json(a); })
        .def_static("from_json",
                    [](const std::string& text) { return io::estimator_from_json(text); });

    py::class_<OutcomeDataset>(m, "OutcomeDataset")
        .def_static("from_counts", &OutcomeDataset::from_counts, py::arg("counts"))
        .def_readonly("counts", &OutcomeDataset::counts)
        .def_readonly("totals", &OutcomeDataset::totals)
        .def_property_readonly("n_settings", &OutcomeDataset::n_settings);

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("estimate", &EstimateReport::estimate)
        .def_readonly("risk", &EstimateReport::risk)
        .def_readonly("confidence_level", &EstimateReport::confidence_level)
        .def_readonly("interval_lo", &EstimateReport::interval_lo)
        .def_readonly("interval_hi", &EstimateReport::interval_hi)
        .def_readonly("clamped", &EstimateReport::clamped)
        .def_readonly("clamped_estimate", &EstimateReport::clamped_estimate)
        .def_readonly("warning", &EstimateReport::warning);

    m.def("extract_estimator", &extract_estimator, py::arg("solution"), py::arg("scheme"),
          py::arg("functional"), py::arg("epsilon"), py::arg("force") = false);
    m.def("apply_estimator", &apply_estimator, py::arg("artifact"), py::arg("data"),
          py::arg("strict") = true, py::arg("clamp") = false);

    py::class_<CoverageReport>(m, "CoverageReport")
        .def_readonly("trials", &CoverageReport::trials)
        .def_readonly("hits", &CoverageReport::hits)
        .def_readonly("coverage", &CoverageReport::coverage)
        .def_readonly("epsilon", &CoverageReport::epsilon)
        .def_readonly("binomial_lower_bound", &CoverageReport::binomial_lower_bound)
        .def_readonly("risk", &CoverageReport::risk)
        .def_readonly("true_value", &CoverageReport::true_value)
        .def_readonly("estimates", &CoverageReport::estimates);

    py::class_<BaselineResult>(m, "BaselineResult")
        .def_readonly("method", &BaselineResult::method)
        .def_readonly("estimate", &BaselineResult::estimate)
        .def_readonly("risk_estimate", &BaselineResult::risk_estimate)
        .def_readonly("detail", &BaselineResult::detail);

    m.def("sample_outcomes", &sample_outcomes, py::arg("state"), py::arg("scheme"),
          py::arg("seed"));
    m.def("coverage_test", &coverage_test, py::arg("functional"), py::arg("scheme"),
          py::arg("epsilon"), py::arg("true_state"), py::arg("trials"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());
    m.def("clopper_pearson_lower", &clopper_pearson_lower, py::arg("hits"), py::arg("trials"),
          py::arg("confidence") = 0.99);
    m.def("dfe_baseline", &dfe_baseline, py::arg("target"), py::arg("n_settings"),
          py::arg("shots_per_setting"), py::arg("seed"), py::arg("true_state"),
          py::arg("epsilon") = 0.05);
    m.def("mle_baseline", &mle_baseline, py::arg("functional"), py::arg("scheme"),
          py::arg("data"), py::arg("epsilon"), py::arg("bootstrap_B"), py::arg("seed"),
          py::call_guard<py::gil_scoped_release>());

    m.def("ghz_state", &ghz_state, py::arg("n_qubits"));
    m.def("w_state", &w_state, py::arg("n_qubits"));
    m.def("cluster_state", &cluster_state, py::arg("n_qubits"),
          py::arg("local_rotations") = std::vector<ComplexMatrix>{});
    m.def("werner_state", &werner_state, py::arg("p"));
    m.def("basis_state", &basis_state, py::arg("index"), py::arg("dim"));
    m.def("random_pure_state", &random_pure_state, py::arg("n_qubits"), py::arg("seed"));
    m.def("depolarize", &depolarize, py::arg("state"), py::arg("lambda"));
    m.def("expectation_value", &expectation_value, py::arg("observable"), py::arg("state"));
    m.def("born_distribution", &born_distribution, py::arg("povm"), py::arg("state"));
    m.def("swap_matrix", &swap_matrix);
    m.def("build_observable", py::overload_cast<const std::string&>(&build_observable),
          py::arg("spec"));
    m.def("pauli_expectation", &pauli_expectation, py::arg("pauli"), py::arg("state"));
}
