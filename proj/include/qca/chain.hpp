#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qca/circuit.hpp"
#include "qca/symbols.hpp"

namespace qca {

/// Circuit extended by readout, idle padding and final annihilation, in
/// execution order. The implicit leading annihilation is not a layer.
struct NonUnitaryProgram {
    std::vector<Layer> layers;
    std::size_t leading_identity = 0;  // 1 when an identity layer had to be prepended
    std::size_t unitary_layers = 0;
    std::size_t idle_layers = 0;
    std::size_t annihilate_qubit = 0;

    std::size_t readout_layer() const noexcept { return leading_identity + unitary_layers; }
    std::size_t annihilate_layer() const noexcept { return layers.size() - 1; }
};

/// Classical symbol content of both bands, one entry per cell.
struct ChainConfiguration {
    std::vector<ProgramSymbol> program;
    std::vector<DataCell> data;

    std::size_t size() const noexcept { return program.size(); }
    friend bool operator==(const ChainConfiguration&, const ChainConfiguration&) = default;
};

/// Output of the compiler: the initial configuration of the automaton plus
/// the metadata needed by the engine and the spectral analysis.
struct CompiledChain {
    Circuit circuit;
    NonUnitaryProgram program;
    ChainConfiguration initial;
    std::size_t register_begin = 0;
    std::size_t r_eff = 0;  // forward steps before the readout step
    std::size_t s_eff = 0;  // forward steps before the final annihilation step

    std::size_t cells() const noexcept { return initial.size(); }
    std::size_t width() const noexcept { return circuit.width(); }
    std::size_t block() const noexcept { return circuit.width() + 1; }
    std::size_t idle_layers() const noexcept { return program.idle_layers; }
    std::size_t total_layers() const noexcept { return program.layers.size(); }
    std::size_t answer_cell() const noexcept { return register_begin + circuit.answer_qubit; }
};

/// Two lines of space separated tokens (program band, then data band).
std::string band_dump(const ChainConfiguration& config);
ChainConfiguration parse_band_dump(std::string_view text);

/// The program code only: the tokens from the leading annihilation symbol to
/// the last non-blank program cell.
std::string program_code(const ChainConfiguration& config);

}  // namespace qca
