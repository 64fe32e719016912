#include "mfe/pauli.hpp"

#include <algorithm>
#include <optional>

#include "mfe/quantum.hpp"

namespace mfe {

namespace {

const char kLetters[4] = {'I', 'X', 'Y', 'Z'};

// Single-qubit product a*b = i^phase * c; returns (c, phase mod 4).
std::pair<std::uint8_t, int> single_product(std::uint8_t a, std::uint8_t b) {
    if (a == 0) return {b, 0};
    if (b == 0) return {a, 0};
    if (a == b) return {0, 0};
    // XY=iZ, YZ=iX, ZX=iY and the reversed orders with -i.
    const bool forward = (a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1);
    const std::uint8_t c = static_cast<std::uint8_t>(6 - a - b);
    return {c, forward ? 1 : 3};
}

}  // namespace

PauliString::PauliString(std::vector<std::uint8_t> codes, int sign)
    : codes_(std::move(codes)), sign_(sign) {
    if (codes_.empty()) throw std::invalid_argument("PauliString: empty");
    if (sign_ != 1 && sign_ != -1) throw std::invalid_argument("PauliString: sign must be +-1");
    for (auto c : codes_)
        if (c > 3) throw std::invalid_argument("PauliString: invalid code");
}

PauliString PauliString::parse(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("PauliString: empty string");
    size_t start = 0;
    int sign = +1;
    if (text[0] == '+') start = 1;
    else if (text[0] == '-') { sign = -1; start = 1; }
    if (start >= text.size()) throw std::invalid_argument("PauliString: sign without letters");
    std::vector<std::uint8_t> codes;
    codes.reserve(text.size() - start);
    for (size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        const char* pos = std::find(std::begin(kLetters), std::end(kLetters), c);
        if (pos == std::end(kLetters))
            throw std::invalid_argument(std::string("PauliString: invalid character '") + c + "'");
        codes.push_back(static_cast<std::uint8_t>(pos - std::begin(kLetters)));
    }
    return PauliString(std::move(codes), sign);
}

bool PauliString::is_identity() const {
    return std::all_of(codes_.begin(), codes_.end(), [](std::uint8_t c) { return c == 0; });
}

std::string PauliString::unsigned_string() const {
    std::string s(codes_.size(), 'I');
    for (size_t i = 0; i < codes_.size(); ++i) s[i] = kLetters[codes_[i]];
    return s;
}

std::string PauliString::to_string() const {
    return (sign_ < 0 ? "-" : "") + unsigned_string();
}

ComplexMatrix PauliString::matrix() const {
    return static_cast<double>(sign_) * pauli_matrix(unsigned_string());
}

bool PauliString::commutes_with(const PauliString& other) const {
    if (n_qubits() != other.n_qubits())
        throw std::invalid_argument("PauliString: qubit count mismatch");
    int anti = 0;
    for (int i = 0; i < n_qubits(); ++i) {
        const auto a = codes_[static_cast<size_t>(i)];
        const auto b = other.codes_[static_cast<size_t>(i)];
        if (a != 0 && b != 0 && a != b) ++anti;
    }
    return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
    if (n_qubits() != other.n_qubits())
        throw std::invalid_argument("PauliString: qubit count mismatch");
    std::vector<std::uint8_t> codes(codes_.size());
    int phase = 0;
    for (size_t i = 0; i < codes_.size(); ++i) {
        auto [c, ph] = single_product(codes_[i], other.codes_[i]);
        codes[i] = c;
        phase = (phase + ph) % 4;
    }
    int sign = sign_ * other.sign_;
    if (phase == 2) sign = -sign;
    else if (phase != 0)
        throw std::invalid_argument("PauliString: product has imaginary phase (factors anti-commute)");
    return PauliString(std::move(codes), sign);
}

bool PauliString::operator<(const PauliString& other) const {
    if (codes_ != other.codes_) return unsigned_string() < other.unsigned_string();
    return sign_ > other.sign_;
}

StabilizerGroupSpec::StabilizerGroupSpec(std::vector<PauliString> generators)
    : generators_(std::move(generators)) {
    if (generators_.empty()) throw std::invalid_argument("StabilizerGroupSpec: no generators");
    const int n = generators_[0].n_qubits();
    for (const auto& g : generators_) {
        if (g.n_qubits() != n)
            throw std::invalid_argument("StabilizerGroupSpec: generator lengths differ");
        if (g.is_identity())
            throw std::invalid_argument("StabilizerGroupSpec: identity is not a valid generator");
    }
    for (size_t i = 0; i < generators_.size(); ++i)
        for (size_t j = i + 1; j < generators_.size(); ++j)
            if (!generators_[i].commutes_with(generators_[j]))
                throw std::invalid_argument("StabilizerGroupSpec: generators " +
                                            generators_[i].to_string() + " and " +
                                            generators_[j].to_string() + " do not commute");
    // Independence: rank over GF(2) of the symplectic (x|z) rows must equal
    // the generator count.
    const size_t m = generators_.size();
    std::vector<std::vector<int>> rows(m, std::vector<int>(2 * static_cast<size_t>(n), 0));
    for (size_t i = 0; i < m; ++i) {
        for (int q = 0; q < n; ++q) {
            const auto c = generators_[i].codes()[static_cast<size_t>(q)];
            rows[i][static_cast<size_t>(q)] = (c == 1 || c == 2) ? 1 : 0;           // x part
            rows[i][static_cast<size_t>(n + q)] = (c == 2 || c == 3) ? 1 : 0;       // z part
        }
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * static_cast<size_t>(n) && rank < m; ++col) {
        size_t pivot = rank;
        while (pivot < m && rows[pivot][col] == 0) ++pivot;
        if (pivot == m) continue;
        std::swap(rows[rank], rows[pivot]);
        for (size_t r = 0; r < m; ++r)
            if (r != rank && rows[r][col])
                for (size_t c = 0; c < rows[r].size(); ++c) rows[r][c] ^= rows[rank][c];
        ++rank;
    }
    if (rank != m)
        throw std::invalid_argument("StabilizerGroupSpec: generators are not independent");
}

StabilizerGroupSpec StabilizerGroupSpec::parse(const std::vector<std::string>& generator_texts) {
    std::vector<PauliString> gens;
    gens.reserve(generator_texts.size());
    for (const auto& t : generator_texts) gens.push_back(PauliString::parse(t));
    return StabilizerGroupSpec(std::move(gens));
}

std::vector<PauliString> StabilizerGroupSpec::enumerate_nonidentity() const {
    const size_t m = generators_.size();
    std::vector<PauliString> out;
    out.reserve((1u << m) - 1);
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        std::optional<PauliString> prod;
        for (size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) prod = prod ? (*prod * generators_[i]) : generators_[i];
        out.push_back(*prod);
    }
    return out;
}

std::vector<PauliString> all_nonidentity_paulis(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("all_nonidentity_paulis: need n >= 1");
    std::vector<PauliString> out;
    const std::uint64_t total = 1ULL << (2 * n_qubits);
    out.reserve(total - 1);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<std::uint8_t> codes(static_cast<size_t>(n_qubits));
        std::uint64_t rem = idx;
        for (int q = n_qubits - 1; q >= 0; --q) {
            codes[static_cast<size_t>(q)] = static_cast<std::uint8_t>(rem & 3);
            rem >>= 2;
        }
        PauliString p(std::move(codes));
        if (!p.is_identity()) out.push_back(std::move(p));
    }
    std::sort(out.begin(), out.end());
    return out;
}

double pauli_expectation(const PauliString& pauli, const PureState& state) {
    const int n = pauli.n_qubits();
    if ((1 << n) != state.dim())
        throw std::invalid_argument("pauli_expectation: state dimension does not match string length");
    // P|j> = phase(j) |j ^ xmask>, qubit 0 is the most significant bit.
    int xmask = 0;
    for (int q = 0; q < n; ++q) {
        const auto c = pauli.codes()[static_cast<size_t>(q)];
        if (c == 1 || c == 2) xmask |= 1 << (n - 1 - q);
    }
    const auto& psi = state.amplitudes();
    Complex acc = 0.0;
    for (int j = 0; j < state.dim(); ++j) {
        Complex factor = 1.0;
        for (int q = 0; q < n; ++q) {
            const int bit = (j >> (n - 1 - q)) & 1;
            const auto c = pauli.codes()[static_cast<size_t>(q)];
            if (c == 2) factor *= Complex(0.0, bit ? -1.0 : 1.0);
            else if (c == 3 && bit) factor = -factor;
        }
        acc += std::conj(psi(j ^ xmask)) * factor * psi(j);
    }
    return static_cast<double>(pauli.sign()) * acc.real();
}

}  // namespace mfe
