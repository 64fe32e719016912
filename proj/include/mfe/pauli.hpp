#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfe/types.hpp"

namespace mfe {

/// Signed n-qubit Pauli operator, e.g. "-YY". Codes: I=0, X=1, Y=2, Z=3.
class PauliString {
public:
    PauliString(std::vector<std::uint8_t> codes, int sign = +1);

    /// Parses "XZI", "+XX", "-YY".
    static PauliString parse(const std::string& text);

    int n_qubits() const { return static_cast<int>(codes_.size()); }
    int sign() const { return sign_; }
    const std::vector<std::uint8_t>& codes() const { return codes_; }
    bool is_identity() const;

    /// Unsigned part as text, e.g. "YY" for -YY.
    std::string unsigned_string() const;
    /// Signed text; positive sign omitted.
    std::string to_string() const;

    /// Dense matrix including the sign.
    ComplexMatrix matrix() const;

    bool commutes_with(const PauliString& other) const;

    /// Product of two commuting (or anti-commuting up to +-i) Pauli strings.
    /// Throws if the resulting phase is imaginary (non-commuting factors).
    PauliString operator*(const PauliString& other) const;

    bool operator==(const PauliString& other) const {
        return sign_ == other.sign_ && codes_ == other.codes_;
    }
    bool operator<(const PauliString& other) const;

private:
    std::vector<std::uint8_t> codes_;
    int sign_;
};

/// Commuting, independent stabilizer generators; the group they generate has
/// 2^n elements.
class StabilizerGroupSpec {
public:
    explicit StabilizerGroupSpec(std::vector<PauliString> generators);
    static StabilizerGroupSpec parse(const std::vector<std::string>& generator_texts);

    int n_qubits() const { return generators_.empty() ? 0 : generators_[0].n_qubits(); }
    const std::vector<PauliString>& generators() const { return generators_; }

    /// All 2^n - 1 non-identity group elements with signs, in subset-mask order.
    std::vector<PauliString> enumerate_nonidentity() const;

private:
    std::vector<PauliString> generators_;
};

/// All 4^n - 1 non-identity unsigned Pauli strings in lexicographic order.
std::vector<PauliString> all_nonidentity_paulis(int n_qubits);

/// <psi|P|psi> computed from the bit action of P, no dense matrix.
double pauli_expectation(const PauliString& pauli, const PureState& state);

}  // namespace mfe
