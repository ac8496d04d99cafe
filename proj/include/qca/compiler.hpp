#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qca/chain.hpp"
#include "qca/circuit.hpp"

namespace qca {

struct CompileOptions {
    std::size_t max_cells = 1u << 16;
    /// Largest idle-layer count tried by pad_for_coprimality; 0 selects 4*(n+a+1)+4.
    std::size_t max_idle_layers = 0;
};

/// Free parameters of the non-unitary extension. The final annihilation may
/// sit above any register qubit; each slot shifts s_eff by one step.
struct Padding {
    std::size_t idle_layers = 0;
    std::optional<std::size_t> annihilate_qubit;  // defaults to the answer qubit
};

/// Appends readout, idle identity layers and the final annihilation;
/// prepends an identity layer when the first block cannot start with I.
NonUnitaryProgram extend(const Circuit& circuit, const Padding& padding = {});

/// Lays out program code and data band and measures the clock lengths.
CompiledChain encode(const Circuit& circuit, const Padding& padding = {}, const CompileOptions& options = {});

struct ClockLengths {
    std::size_t r_eff = 0;
    std::size_t s_eff = 0;
};

/// Runs the engine on the YES branch and counts forward steps before the
/// readout and before the final annihilation.
ClockLengths extract_clock_lengths(const CompiledChain& chain);

struct PaddingAttempt {
    std::size_t idle_layers = 0;
    std::size_t annihilate_qubit = 0;
    std::size_t r_eff = 0;
    std::size_t s_eff = 0;
    std::size_t gcd = 0;
};

std::size_t idle_search_bound(const Circuit& circuit, const CompileOptions& options = {});

/// First chain with gcd(r_eff + 2, s_eff + 2) == 1. Tries idle-layer counts
/// k = 0, 1, ... and, for each k, the annihilation above the answer qubit
/// first and then above the remaining register qubits in order.
CompiledChain pad_for_coprimality(const Circuit& circuit, const CompileOptions& options = {},
                                  std::vector<PaddingAttempt>* attempts = nullptr);

/// Reads the block structure back from a program band. Layer 0 starts at the
/// leading annihilation symbol, which decodes as an identity.
std::vector<Layer> decode_program(const ChainConfiguration& config, std::size_t width);

}  // namespace qca
