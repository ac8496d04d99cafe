#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qca {

using Amplitude = std::complex<double>;
using Matrix4 = std::array<std::array<Amplitude, 4>, 4>;

/// Input bit string; element k is the value of qubit k.
using InputBits = std::vector<std::uint8_t>;

enum class GateKind : std::uint8_t { Identity, Swap, ControlledW, Readout, Annihilate };

/// A gate acting on `target` (single-qubit kinds) or on the adjacent pair
/// (target, target+1) with the control on the left (Swap, ControlledW).
struct Gate {
    GateKind kind = GateKind::Identity;
    std::size_t target = 0;

    std::size_t arity() const noexcept {
        return kind == GateKind::Swap || kind == GateKind::ControlledW ? 2 : 1;
    }
    bool is_unitary() const noexcept {
        return kind != GateKind::Readout && kind != GateKind::Annihilate;
    }
    friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gates with pairwise disjoint supports; uncovered qubits are implicitly idle.
struct Layer {
    std::vector<Gate> gates;

    friend bool operator==(const Layer&, const Layer&) = default;
};

/// Layered circuit over {I, S, W}. The register is `inputs` data qubits
/// followed by `ancillas` qubits initialised to zero.
struct Circuit {
    std::size_t inputs = 0;
    std::size_t ancillas = 0;
    std::size_t answer_qubit = 0;
    std::vector<Layer> layers;

    std::size_t width() const noexcept { return inputs + ancillas; }
    std::size_t depth() const noexcept { return layers.size(); }
};

/// Dense register amplitudes. Qubit 0 is the most significant bit of the
/// basis index, so |q0 q1 ... q_{w-1}> reads as a binary number.
class RegisterState {
public:
    RegisterState() = default;
    explicit RegisterState(std::size_t width);
    RegisterState(std::size_t width, std::vector<Amplitude> amplitudes);

    static RegisterState basis(std::size_t width, std::size_t index);

    std::size_t width() const noexcept { return width_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    const std::vector<Amplitude>& amplitudes() const noexcept { return amplitudes_; }
    std::vector<Amplitude>& amplitudes() noexcept { return amplitudes_; }
    Amplitude operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const;
    /// Probability mass of basis states with `qubit` equal to `value`.
    double probability(std::size_t qubit, int value) const;

    std::size_t bit_mask(std::size_t qubit) const noexcept { return std::size_t{1} << (width_ - 1 - qubit); }

private:
    std::size_t width_ = 0;
    std::vector<Amplitude> amplitudes_;
};

Amplitude inner_product(const RegisterState& a, const RegisterState& b);
double distance(const RegisterState& a, const RegisterState& b);
RegisterState normalized(RegisterState state);

const Matrix4& swap_matrix();
const Matrix4& w_matrix();
Matrix4 adjoint(const Matrix4& m);

/// Applies a 4x4 matrix to qubits (left, right); rows/cols indexed by 2*left_bit + right_bit.
void apply_two_qubit(RegisterState& state, const Matrix4& m, std::size_t left, std::size_t right);
/// Zeroes every amplitude whose `qubit` differs from `keep`.
void project_qubit(RegisterState& state, std::size_t qubit, int keep);

/// Checks supports, adjacency and bounds for a layer on `width` qubits.
void validate_layer(const Layer& layer, std::size_t width, bool allow_non_unitary);
void validate(const Circuit& circuit);

Circuit parse_circuit(std::string_view text);
Circuit load_circuit(const std::string& path);
std::string to_text(const Circuit& circuit);

InputBits parse_bits(std::string_view bits);
std::string format_bits(const InputBits& bits);

/// |x, 0...0> for a circuit of the given width.
RegisterState initial_register(std::size_t width, const InputBits& input);

RegisterState apply_layer(const RegisterState& state, const Layer& layer);
RegisterState apply_layer_adjoint(const RegisterState& state, const Layer& layer);
RegisterState run_circuit(const Circuit& circuit, const InputBits& input);

/// Probability that the answer qubit reads 1 after the circuit acts on |x, 0>.
double acceptance_probability(const Circuit& circuit, const InputBits& input);

/// Layers with explicit identities dropped and gates ordered by target.
Layer canonical(const Layer& layer);
std::string_view gate_name(GateKind kind);

}  // namespace qca
