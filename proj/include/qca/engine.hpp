#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qca/branch.hpp"
#include "qca/chain.hpp"
#include "qca/circuit.hpp"
#include "qca/rules.hpp"

namespace qca {

/// Basis configuration of both bands together with the register amplitudes
/// living on the register cells. `t` is the clock label; compiled initial
/// states carry t = 1.
struct QcaState {
    ChainConfiguration config;
    RegisterState reg;
    std::size_t t = 1;
};

enum class StepKind { Next, Split, Annihilated };

/// Which rule fired where, and what (if anything) it did to the register.
struct StepEvent {
    RuleId rule = RuleId::HoleRight;
    std::size_t position = 0;  // left cell of the active pair
    std::optional<GateKind> executed;
    std::optional<std::size_t> readout_qubit;
};

struct ForwardStep {
    StepKind kind = StepKind::Next;
    /// Next: the successor. Split: the renormalised YES continuation
    /// (register is zero when the YES weight vanishes).
    QcaState state;
    double yes_weight = 1.0;
    double no_weight = 0.0;
    /// Split only: the normalised component annihilated by the readout (empty when its weight vanishes).
    std::optional<RegisterState> no_component;
    StepEvent event;
};

struct BackwardStep {
    StepKind kind = StepKind::Next;  // Next or Annihilated
    QcaState state;
    StepEvent event;
};

/// One matching (rule, position) pair.
struct RuleMatch {
    const TransitionRule* rule = nullptr;
    std::size_t position = 0;
};

std::vector<RuleMatch> forward_candidates(const ChainConfiguration& config);
std::vector<RuleMatch> backward_candidates(const ChainConfiguration& config);
std::size_t control_symbol_count(const ChainConfiguration& config);
std::string describe(const std::vector<RuleMatch>& matches);

ForwardStep step_forward(const QcaState& state);
BackwardStep step_backward(const QcaState& state);

QcaState initial_state(const CompiledChain& chain, const InputBits& input);
QcaState initial_state(const CompiledChain& chain, RegisterState reg);

/// Normalised U^dagger |b> where b has the answer qubit set: a register that
/// reaches the readout with acceptance probability one. Used to walk the
/// full orbit independently of the input.
RegisterState yes_probe_register(const CompiledChain& chain);

/// Upper bound on forward steps before the engine gives up.
std::size_t step_bound(const CompiledChain& chain);

struct BranchTrace {
    Branch branch = Branch::No;
    double weight = 0.0;
    std::vector<QcaState> orbit;  // empty when the weight vanishes
};

struct OrbitTrace {
    BranchTrace no;
    BranchTrace yes;
    double p = 0.0;
    std::size_t r_eff = 0;
    std::size_t s_eff = 0;
};

/// Branch weights at or below this are treated as zero and the branch is omitted.
inline constexpr double kNegligibleWeight = 1e-14;

OrbitTrace trace_orbits(const CompiledChain& chain, const InputBits& input);

/// Register contents each time the execution symbol finishes a sweep of the
/// program code (rule 2b), following the YES continuation through the
/// readout. Sweep c has applied layers 0..c of the extended program. Stops
/// at the annihilation, or at the readout when the YES weight vanishes.
std::vector<RegisterState> sweep_registers(const CompiledChain& chain, const InputBits& input);

struct WellFormedReport {
    bool pass = true;
    std::size_t states_checked = 0;
    std::string diagnostic;
    std::optional<QcaState> offending;
};

/// Local uniqueness checks on one configuration: one control symbol, one
/// forward match, one backward match.
WellFormedReport check_state(const QcaState& state);

/// Walks the YES orbit of the chain and checks uniqueness in both directions,
/// backward-after-forward identity, and annihilation at both orbit ends.
WellFormedReport validate_wellformed(const CompiledChain& chain);

}  // namespace qca
