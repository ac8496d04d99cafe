#include "qca/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qca/error.hpp"

namespace qca {

namespace {

std::size_t slot_of(const DataCell& cell) { return std::get<RegisterSlot>(cell).qubit; }

bool touches_boundary(const ChainConfiguration& config) {
    return !config.program.empty() &&
           (config.program.front() != ProgramSymbol::Blank || config.program.back() != ProgramSymbol::Blank);
}

const RuleMatch& unique_match(const std::vector<RuleMatch>& matches, const ChainConfiguration& config,
                              const char* direction) {
    if (matches.size() == 1) {
        return matches.front();
    }
    if (matches.empty() && touches_boundary(config)) {
        throw BoundaryOverflowError(std::string("no ") + direction +
                                    " rule applies and the program band touches the chain boundary");
    }
    throw IllFormedError(std::to_string(matches.size()) + " " + direction +
                         " rule applications where exactly one is required" +
                         (matches.empty() ? std::string() : ": " + describe(matches)));
}

void check_pair(const DataCell& left, const DataCell& right) {
    if (slot_of(right) != slot_of(left) + 1) {
        throw IllFormedError("two-qubit gate over non-adjacent register slots q" + std::to_string(slot_of(left)) +
                             ", q" + std::to_string(slot_of(right)));
    }
}

}  // namespace

std::vector<RuleMatch> forward_candidates(const ChainConfiguration& config) {
    std::vector<RuleMatch> out;
    for (std::size_t j = 0; j + 1 < config.size(); ++j) {
        for (const TransitionRule* rule : forward_matches(config.program[j], config.program[j + 1],
                                                          classify(config.data[j]), classify(config.data[j + 1]))) {
            out.push_back({rule, j});
        }
    }
    return out;
}

std::vector<RuleMatch> backward_candidates(const ChainConfiguration& config) {
    std::vector<RuleMatch> out;
    for (std::size_t j = 0; j + 1 < config.size(); ++j) {
        for (const TransitionRule* rule : backward_matches(config.program[j], config.program[j + 1],
                                                           classify(config.data[j]), classify(config.data[j + 1]))) {
            out.push_back({rule, j});
        }
    }
    return out;
}

std::size_t control_symbol_count(const ChainConfiguration& config) {
    return static_cast<std::size_t>(std::count_if(config.program.begin(), config.program.end(), is_control));
}

std::string describe(const std::vector<RuleMatch>& matches) {
    std::string out;
    for (const auto& m : matches) {
        if (!out.empty()) {
            out += "; ";
        }
        out += "rule " + std::string(rule_label(m.rule->id)) + " at cell " + std::to_string(m.position);
    }
    return out;
}

ForwardStep step_forward(const QcaState& state) {
    const auto matches = forward_candidates(state.config);
    const RuleMatch& match = unique_match(matches, state.config, "forward");
    const TransitionRule& rule = *match.rule;
    const std::size_t j = match.position;

    ForwardStep out;
    out.event.rule = rule.id;
    out.event.position = j;
    out.state = state;
    out.state.t = state.t + 1;

    if (rule.id == RuleId::ExecuteRight) {
        const DataCell& left = state.config.data[j];
        const DataCell& right = state.config.data[j + 1];
        switch (*gate_kind(rule.lhs_right)) {
            case GateKind::Identity:
                break;
            case GateKind::Swap:
            case GateKind::ControlledW:
                if (is_register(left) && is_register(right)) {
                    check_pair(left, right);
                    const bool swap = rule.lhs_right == ProgramSymbol::S;
                    apply_two_qubit(out.state.reg, swap ? swap_matrix() : w_matrix(), slot_of(left), slot_of(right));
                    out.event.executed = swap ? GateKind::Swap : GateKind::ControlledW;
                }
                break;
            case GateKind::Readout:
                if (is_register(right)) {
                    const std::size_t q = slot_of(right);
                    const double p1 = state.reg.probability(q, 1);
                    const double p0 = state.reg.probability(q, 0);
                    const double total = p0 + p1;
                    if (total == 0.0) {
                        throw ValidationError("readout on a zero register state");
                    }
                    out.kind = StepKind::Split;
                    out.event.executed = GateKind::Readout;
                    out.event.readout_qubit = q;
                    out.yes_weight = p1 / total;
                    out.no_weight = p0 / total;
                    project_qubit(out.state.reg, q, 1);
                    if (out.yes_weight > kNegligibleWeight) {
                        out.state.reg = normalized(std::move(out.state.reg));
                    } else {
                        out.state.reg = RegisterState(state.reg.width());
                    }
                    if (out.no_weight > kNegligibleWeight) {
                        RegisterState no = state.reg;
                        project_qubit(no, q, 0);
                        out.no_component = normalized(std::move(no));
                    }
                }
                break;
            case GateKind::Annihilate:
                if (is_register(right)) {
                    out.kind = StepKind::Annihilated;
                    out.event.executed = GateKind::Annihilate;
                    return out;
                }
                break;
        }
    }
    out.state.config.program[j] = rule.rhs_left;
    out.state.config.program[j + 1] = rule.rhs_right;
    return out;
}

BackwardStep step_backward(const QcaState& state) {
    const auto matches = backward_candidates(state.config);
    const RuleMatch& match = unique_match(matches, state.config, "backward");
    const TransitionRule& rule = *match.rule;
    const std::size_t j = match.position;

    BackwardStep out;
    out.event.rule = rule.id;
    out.event.position = j;
    out.state = state;
    out.state.t = state.t > 0 ? state.t - 1 : 0;
    out.state.config.program[j] = rule.lhs_left;
    out.state.config.program[j + 1] = rule.lhs_right;

    if (rule.id == RuleId::ExecuteRight) {
        const DataCell& left = state.config.data[j];
        const DataCell& right = state.config.data[j + 1];
        switch (*gate_kind(rule.lhs_right)) {
            case GateKind::Identity:
                break;
            case GateKind::Swap:
            case GateKind::ControlledW:
                if (is_register(left) && is_register(right)) {
                    check_pair(left, right);
                    const bool swap = rule.lhs_right == ProgramSymbol::S;
                    apply_two_qubit(out.state.reg, swap ? swap_matrix() : adjoint(w_matrix()), slot_of(left),
                                    slot_of(right));
                    out.event.executed = swap ? GateKind::Swap : GateKind::ControlledW;
                }
                break;
            case GateKind::Readout:
                if (is_register(right)) {
                    out.event.executed = GateKind::Readout;
                    out.event.readout_qubit = slot_of(right);
                    project_qubit(out.state.reg, slot_of(right), 1);
                    if (out.state.reg.norm() == 0.0) {
                        out.kind = StepKind::Annihilated;
                    }
                }
                break;
            case GateKind::Annihilate:
                if (is_register(right)) {
                    out.kind = StepKind::Annihilated;
                    out.event.executed = GateKind::Annihilate;
                }
                break;
        }
    }
    return out;
}

QcaState initial_state(const CompiledChain& chain, const InputBits& input) {
    if (input.size() != chain.circuit.inputs) {
        throw ValidationError("expected " + std::to_string(chain.circuit.inputs) + " input bits, got " +
                              std::to_string(input.size()));
    }
    return initial_state(chain, initial_register(chain.width(), input));
}

QcaState initial_state(const CompiledChain& chain, RegisterState reg) {
    if (reg.width() != chain.width()) {
        throw ValidationError("register width does not match the chain");
    }
    return QcaState{chain.initial, std::move(reg), 1};
}

RegisterState yes_probe_register(const CompiledChain& chain) {
    const Circuit& c = chain.circuit;
    RegisterState reg = RegisterState::basis(c.width(), std::size_t{1} << (c.width() - 1 - c.answer_qubit));
    for (auto it = c.layers.rbegin(); it != c.layers.rend(); ++it) {
        reg = apply_layer_adjoint(reg, *it);
    }
    return normalized(std::move(reg));
}

std::size_t step_bound(const CompiledChain& chain) {
    return 10 * chain.cells() * (chain.total_layers() + 2) * chain.block();
}

OrbitTrace trace_orbits(const CompiledChain& chain, const InputBits& input) {
    const std::size_t bound = step_bound(chain);
    std::vector<QcaState> prefix{initial_state(chain, input)};
    ForwardStep split;
    for (;;) {
        if (prefix.size() > bound) {
            throw LimitExceededError("no readout within " + std::to_string(bound) + " steps");
        }
        ForwardStep f = step_forward(prefix.back());
        if (f.kind == StepKind::Annihilated) {
            throw ValidationError("state annihilated before the readout step");
        }
        if (f.kind == StepKind::Split) {
            split = std::move(f);
            break;
        }
        prefix.push_back(std::move(f.state));
    }

    OrbitTrace trace;
    trace.r_eff = prefix.size() - 1;
    trace.s_eff = chain.s_eff;
    trace.p = split.yes_weight;
    trace.no.branch = Branch::No;
    trace.no.weight = split.no_weight;
    trace.yes.branch = Branch::Yes;
    trace.yes.weight = split.yes_weight;

    if (split.no_component) {
        QcaState s = prefix.back();
        s.reg = *split.no_component;
        trace.no.orbit.push_back(s);
        for (std::size_t k = 0; k < trace.r_eff; ++k) {
            BackwardStep b = step_backward(trace.no.orbit.back());
            if (b.kind != StepKind::Next) {
                throw IllFormedError("NO branch annihilated while stepping back to the initial state");
            }
            trace.no.orbit.push_back(std::move(b.state));
        }
        std::reverse(trace.no.orbit.begin(), trace.no.orbit.end());
    }

    if (split.yes_weight > kNegligibleWeight) {
        auto& orbit = trace.yes.orbit;
        orbit.push_back(split.state);
        for (std::size_t k = 0; k <= trace.r_eff; ++k) {
            BackwardStep b = step_backward(orbit.back());
            if (b.kind != StepKind::Next) {
                throw IllFormedError("YES branch annihilated while stepping back to the initial state");
            }
            orbit.push_back(std::move(b.state));
        }
        std::reverse(orbit.begin(), orbit.end());
        for (;;) {
            if (orbit.size() > bound) {
                throw LimitExceededError("no final annihilation within " + std::to_string(bound) + " steps");
            }
            ForwardStep f = step_forward(orbit.back());
            if (f.kind == StepKind::Annihilated) {
                break;
            }
            if (f.kind == StepKind::Split) {
                throw IllFormedError("second readout on the YES branch");
            }
            orbit.push_back(std::move(f.state));
        }
        trace.s_eff = orbit.size() - 1;
    }
    return trace;
}

WellFormedReport check_state(const QcaState& state) {
    WellFormedReport report;
    report.states_checked = 1;
    auto fail = [&](std::string why) {
        report.pass = false;
        report.diagnostic = "t=" + std::to_string(state.t) + ": " + std::move(why);
        report.offending = state;
        return report;
    };
    if (const auto n = control_symbol_count(state.config); n != 1) {
        return fail(std::to_string(n) + " control symbols (expected exactly one)");
    }
    if (const auto fwd = forward_candidates(state.config); fwd.size() != 1) {
        return fail(std::to_string(fwd.size()) + " forward rule applications" +
                    (fwd.empty() ? std::string() : " [" + describe(fwd) + "]"));
    }
    if (const auto bwd = backward_candidates(state.config); bwd.size() != 1) {
        return fail(std::to_string(bwd.size()) + " backward rule applications" +
                    (bwd.empty() ? std::string() : " [" + describe(bwd) + "]"));
    }
    return report;
}

WellFormedReport validate_wellformed(const CompiledChain& chain) {
    WellFormedReport report;
    auto fail = [&](const QcaState& s, std::string why) {
        report.pass = false;
        report.diagnostic = "t=" + std::to_string(s.t) + ": " + std::move(why);
        report.offending = s;
        return report;
    };

    QcaState state = initial_state(chain, yes_probe_register(chain));
    const std::size_t bound = step_bound(chain);
    bool saw_readout = false;
    try {
        if (WellFormedReport local = check_state(state); !local.pass) {
            local.states_checked = 0;
            return local;
        }
        if (step_backward(state).kind != StepKind::Annihilated) {
            return fail(state, "backward step does not annihilate the initial state");
        }
        for (;;) {
            if (WellFormedReport local = check_state(state); !local.pass) {
                local.states_checked = report.states_checked;
                return local;
            }
            ++report.states_checked;
            if (report.states_checked > bound) {
                return fail(state, "no final annihilation within " + std::to_string(bound) + " steps");
            }
            ForwardStep f = step_forward(state);
            if (f.kind == StepKind::Annihilated) {
                break;
            }
            if (f.kind == StepKind::Split) {
                if (*f.event.readout_qubit != chain.circuit.answer_qubit) {
                    return fail(state, "readout executed on q" + std::to_string(*f.event.readout_qubit) +
                                           " instead of the answer qubit");
                }
                if (saw_readout) {
                    return fail(state, "second readout on the orbit");
                }
                saw_readout = true;
            }
            BackwardStep b = step_backward(f.state);
            if (b.kind != StepKind::Next || b.state.config != state.config ||
                distance(b.state.reg, state.reg) > 1e-12) {
                return fail(state, "backward step does not invert the forward step (rule " +
                                       std::string(rule_label(f.event.rule)) + " at cell " +
                                       std::to_string(f.event.position) + ")");
            }
            state = std::move(f.state);
        }
    } catch (const Error& e) {
        return fail(state, e.what());
    }
    if (!saw_readout) {
        return fail(state, "readout never executed over the answer qubit");
    }
    return report;
}

std::vector<RegisterState> sweep_registers(const CompiledChain& chain, const InputBits& input) {
    std::vector<RegisterState> out;
    QcaState state = initial_state(chain, input);
    const std::size_t bound = step_bound(chain);
    for (std::size_t steps = 0; steps <= bound; ++steps) {
        ForwardStep f = step_forward(state);
        if (f.kind == StepKind::Annihilated) {
            return out;
        }
        if (f.kind == StepKind::Split && f.yes_weight <= kNegligibleWeight) {
            return out;
        }
        if (f.event.rule == RuleId::ExecuteTurn) {
            out.push_back(f.state.reg);
        }
        state = std::move(f.state);
    }
    throw LimitExceededError("program did not finish within " + std::to_string(bound) + " steps");
}

}  // namespace qca
