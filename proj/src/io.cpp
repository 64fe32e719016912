#include "mfe/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

namespace mfe::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    out.flush();
    if (!out) throw std::runtime_error("failed to write " + path);
}

Complex complex_from_json(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(where + ": complex entries must be [re, im] pairs");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

ordered_json complex_to_json(const Complex& z) {
    return ordered_json::array({z.real(), z.imag()});
}

ComplexVector vector_from_json(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(where + ": expected a non-empty array of [re, im] pairs");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
    return v;
}

ComplexMatrix matrix_from_json(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument(where + ": expected a non-empty array of matrix rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array())
        throw std::invalid_argument(where + ": matrix rows must be arrays");
    const std::size_t cols = j[0].size();
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols)
            throw std::invalid_argument(where + ": ragged matrix rows");
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                complex_from_json(j[r][c], where);
    }
    return m;
}

ordered_json matrix_to_json(const ComplexMatrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string required_kind(const ordered_json& j, const std::string& path) {
    if (!j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument(path + ": missing \"kind\" field");
    return j["kind"].get<std::string>();
}

int required_dim(const ordered_json& j, const std::string& path) {
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw std::invalid_argument(path + ": missing integer \"dim\" field");
    const int dim = j["dim"].get<int>();
    if (dim < 1) throw std::invalid_argument(path + ": dim must be positive");
    return dim;
}

ComplexMatrix square_data(const ordered_json& j, const std::string& path) {
    const int dim = required_dim(j, path);
    if (!j.contains("data")) throw std::invalid_argument(path + ": missing \"data\" field");
    ComplexMatrix m = matrix_from_json(j["data"], path);
    if (m.rows() != dim || m.cols() != dim)
        throw std::invalid_argument(path + ": data shape does not match dim");
    return m;
}

PureState pure_from_json(const ordered_json& j, const std::string& path) {
    const int dim = required_dim(j, path);
    if (!j.contains("data")) throw std::invalid_argument(path + ": missing \"data\" field");
    ComplexVector v = vector_from_json(j["data"], path);
    if (v.size() != dim) throw std::invalid_argument(path + ": data length does not match dim");
    return PureState(std::move(v));
}

}  // namespace

std::string peek_kind(const std::string& path) {
    return required_kind(read_json_file(path), path);
}

PureState load_pure_state(const std::string& path) {
    const ordered_json j = read_json_file(path);
    if (required_kind(j, path) != "pure")
        throw std::invalid_argument(path + ": expected kind \"pure\"");
    return pure_from_json(j, path);
}

DensityMatrix load_density_matrix(const std::string& path) {
    const ordered_json j = read_json_file(path);
    const std::string kind = required_kind(j, path);
    if (kind == "pure") return DensityMatrix::from_pure(pure_from_json(j, path));
    if (kind != "density")
        throw std::invalid_argument(path + ": expected kind \"density\" or \"pure\"");
    return DensityMatrix(square_data(j, path));
}

Observable load_observable(const std::string& path) {
    const ordered_json j = read_json_file(path);
    const std::string kind = required_kind(j, path);
    if (kind == "pure") return Observable::from_target(pure_from_json(j, path));
    if (kind != "observable")
        throw std::invalid_argument(path + ": expected kind \"observable\" or \"pure\"");
    std::string label;
    if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();
    return Observable(square_data(j, path), label);
}

void save_pure_state(const PureState& state, const std::string& path) {
    ordered_json j;
    j["dim"] = state.dim();
    j["kind"] = "pure";
    ordered_json data = ordered_json::array();
    for (int i = 0; i < state.dim(); ++i) data.push_back(complex_to_json(state.amplitudes()(i)));
    j["data"] = std::move(data);
    write_text_file(path, j.dump(2));
}

void save_density_matrix(const DensityMatrix& state, const std::string& path) {
    ordered_json j;
    j["dim"] = state.dim();
    j["kind"] = "density";
    j["data"] = matrix_to_json(state.matrix());
    write_text_file(path, j.dump(2));
}

void save_observable(const Observable& functional, const std::string& path) {
    ordered_json j;
    j["dim"] = static_cast<int>(functional.matrix().rows());
    j["kind"] = "observable";
    j["data"] = matrix_to_json(functional.matrix());
    if (!functional.label().empty()) j["label"] = functional.label();
    write_text_file(path, j.dump(2));
}

MeasurementScheme load_scheme(const std::string& path) {
    const ordered_json j = read_json_file(path);

    if (j.contains("paulis")) {
        if (!j["paulis"].is_array() || j["paulis"].empty())
            throw std::invalid_argument(path + ": \"paulis\" must be a non-empty array");
        std::vector<PauliString> paulis;
        for (const auto& entry : j["paulis"]) {
            if (!entry.is_string())
                throw std::invalid_argument(path + ": pauli entries must be strings");
            paulis.push_back(PauliString::parse(entry.get<std::string>()));
        }
        if (!j.contains("granularity") || !j["granularity"].is_string())
            throw std::invalid_argument(path + ": compact scheme needs a \"granularity\" string");
        const Granularity gran = granularity_from_name(j["granularity"].get<std::string>());
        if (!j.contains("repetitions"))
            throw std::invalid_argument(path + ": compact scheme needs \"repetitions\"");
        MeasurementScheme scheme = pauli_scheme(paulis, gran, 1);
        if (j["repetitions"].is_number_integer()) {
            const long long reps = j["repetitions"].get<long long>();
            for (auto& r : scheme.repetitions) r = reps;
        } else if (j["repetitions"].is_array()) {
            if (j["repetitions"].size() != paulis.size())
                throw std::invalid_argument(path + ": repetitions array length mismatch");
            for (std::size_t l = 0; l < paulis.size(); ++l)
                scheme.repetitions[l] = j["repetitions"][l].get<long long>();
        } else {
            throw std::invalid_argument(path + ": repetitions must be an integer or array");
        }
        scheme.validate();
        return scheme;
    }

    MeasurementScheme scheme;
    scheme.dim = required_dim(j, path);
    if (j.contains("granularity") && j["granularity"].is_string())
        scheme.granularity = granularity_from_name(j["granularity"].get<std::string>());
    if (!j.contains("settings") || !j["settings"].is_array() || j["settings"].empty())
        throw std::invalid_argument(path + ": missing non-empty \"settings\" array");
    for (const auto& s : j["settings"]) {
        if (!s.contains("label") || !s["label"].is_string())
            throw std::invalid_argument(path + ": each setting needs a string \"label\"");
        if (!s.contains("repetitions") || !s["repetitions"].is_number_integer())
            throw std::invalid_argument(path + ": each setting needs integer \"repetitions\"");
        if (!s.contains("effects") || !s["effects"].is_array() || s["effects"].empty())
            throw std::invalid_argument(path + ": each setting needs a non-empty \"effects\" array");
        std::vector<ComplexMatrix> effects;
        for (const auto& e : s["effects"]) {
            ComplexMatrix m = matrix_from_json(e, path);
            if (m.rows() != scheme.dim || m.cols() != scheme.dim)
                throw std::invalid_argument(path + ": effect shape does not match dim");
            effects.push_back(std::move(m));
        }
        scheme.povms.emplace_back(scheme.dim, std::move(effects));
        scheme.repetitions.push_back(s["repetitions"].get<long long>());
        scheme.labels.push_back(s["label"].get<std::string>());
    }
    scheme.validate();
    return scheme;
}

void save_scheme(const MeasurementScheme& scheme, const std::string& path) {
    scheme.validate();
    ordered_json j;
    j["dim"] = scheme.dim;
    j["granularity"] = granularity_name(scheme.granularity);
    ordered_json settings = ordered_json::array();
    for (int l = 0; l < scheme.n_settings(); ++l) {
        ordered_json s;
        s["label"] = scheme.labels[l];
        s["repetitions"] = scheme.repetitions[l];
        ordered_json effects = ordered_json::array();
        for (const auto& e : scheme.povms[l].effects()) effects.push_back(matrix_to_json(e));
        s["effects"] = std::move(effects);
        settings.push_back(std::move(s));
    }
    j["settings"] = std::move(settings);
    write_text_file(path, j.dump(2));
}

std::string estimator_to_json(const EstimatorArtifact& artifact) {
    artifact.validate();
    ordered_json j;
    j["scheme_digest"] = artifact.scheme_digest;
    j["epsilon"] = artifact.epsilon;
    j["risk"] = artifact.risk;
    j["constant"] = artifact.constant;
    ordered_json coeffs = ordered_json::array();
    for (const auto& a : artifact.coefficients) {
        ordered_json row = ordered_json::array();
        for (int k = 0; k < a.size(); ++k) row.push_back(a(k));
        coeffs.push_back(std::move(row));
    }
    j["coefficients"] = std::move(coeffs);
    j["labels"] = artifact.labels;
    j["repetitions"] = artifact.repetitions;
    j["functional_label"] = artifact.functional_label;
    j["granularity"] = artifact.granularity;
    return j.dump(2);
}

EstimatorArtifact estimator_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("estimator JSON: ") + e.what());
    }
    EstimatorArtifact artifact;
    for (const char* field : {"scheme_digest", "epsilon", "risk", "constant", "coefficients", "labels"})
        if (!j.contains(field))
            throw std::invalid_argument(std::string("estimator JSON: missing \"") + field + "\"");
    artifact.scheme_digest = j["scheme_digest"].get<std::string>();
    artifact.epsilon = j["epsilon"].get<double>();
    artifact.risk = j["risk"].get<double>();
    artifact.constant = j["constant"].get<double>();
    if (!j["coefficients"].is_array() || j["coefficients"].empty())
        throw std::invalid_argument("estimator JSON: \"coefficients\" must be a non-empty array");
    for (const auto& row : j["coefficients"]) {
        if (!row.is_array() || row.empty())
            throw std::invalid_argument("estimator JSON: coefficient rows must be non-empty arrays");
        RealVector a(static_cast<Eigen::Index>(row.size()));
        for (std::size_t k = 0; k < row.size(); ++k)
            a(static_cast<Eigen::Index>(k)) = row[k].get<double>();
        artifact.coefficients.push_back(std::move(a));
    }
    artifact.labels = j["labels"].get<std::vector<std::string>>();
    if (j.contains("repetitions"))
        artifact.repetitions = j["repetitions"].get<std::vector<long long>>();
    else
        artifact.repetitions.assign(artifact.coefficients.size(), 0);
    if (j.contains("functional_label"))
        artifact.functional_label = j["functional_label"].get<std::string>();
    if (j.contains("granularity")) artifact.granularity = j["granularity"].get<std::string>();
    artifact.validate();
    return artifact;
}

EstimatorArtifact load_estimator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return estimator_from_json(buf.str());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void save_estimator(const EstimatorArtifact& artifact, const std::string& path) {
    write_text_file(path, estimator_to_json(artifact));
}

namespace {

long long parse_ll(const std::string& field, const std::string& where) {
    long long value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument(where + ": bad integer field \"" + field + "\"");
    return value;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace

OutcomeDataset load_outcomes_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    bool saw_header = false;
    std::vector<std::vector<long long>> counts;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "setting_index,outcome_index,count")
                throw std::invalid_argument(path + ": expected header setting_index,outcome_index,count");
            saw_header = true;
            continue;
        }
        const std::string where = path + ":" + std::to_string(line_no);
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw std::invalid_argument(where + ": expected three comma-separated fields");
        const long long l = parse_ll(line.substr(0, c1), where);
        const long long k = parse_ll(line.substr(c1 + 1, c2 - c1 - 1), where);
        const long long count = parse_ll(line.substr(c2 + 1), where);
        if (l < 0 || k < 0) throw std::invalid_argument(where + ": indices must be non-negative");
        if (count < 0) throw std::invalid_argument(where + ": counts must be non-negative");
        if (l >= static_cast<long long>(counts.size())) counts.resize(l + 1);
        auto& row = counts[l];
        if (k >= static_cast<long long>(row.size())) row.resize(k + 1, 0);
        row[k] += count;
    }
    if (!saw_header) throw std::invalid_argument(path + ": empty outcome file");
    if (counts.empty()) throw std::invalid_argument(path + ": no outcome rows");
    return OutcomeDataset::from_counts(std::move(counts));
}

void save_outcomes_csv(const OutcomeDataset& data, const std::string& path) {
    data.validate();
    std::ostringstream out;
    out << "setting_index,outcome_index,count\n";
    for (int l = 0; l < data.n_settings(); ++l)
        for (std::size_t k = 0; k < data.counts[l].size(); ++k)
            out << l << ',' << k << ',' << data.counts[l][k] << '\n';
    write_text_file(path, out.str());
}

void save_coverage_csv(const std::vector<CoverageRow>& rows, const std::string& path) {
    std::ostringstream out;
    out << "trial_index,estimate,hit\n";
    for (const auto& row : rows)
        out << row.trial_index << ',' << format_double(row.estimate) << ',' << (row.hit ? 1 : 0)
            << '\n';
    write_text_file(path, out.str());
}

void save_bench_json(const std::vector<BenchEntry>& entries, const std::string& path) {
    ordered_json j;
    for (const auto& entry : entries) {
        ordered_json method;
        method["estimate"] = entry.estimate;
        method["risk"] = entry.risk;
        method["wall_time_ms"] = entry.wall_time_ms;
        if (!entry.detail.empty()) method["detail"] = entry.detail;
        j[entry.method] = std::move(method);
    }
    write_text_file(path, j.dump(2));
}

}  // namespace mfe::io
