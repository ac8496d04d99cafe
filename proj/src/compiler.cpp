#include "qca/compiler.hpp"

#include <numeric>
#include <string>

#include "qca/engine.hpp"
#include "qca/error.hpp"

namespace qca {

namespace {

/// Slot of a gate inside its block: two-qubit symbols sit above the right qubit.
std::size_t slot_of(const Gate& g) { return g.target + g.arity() - 1; }

std::vector<ProgramSymbol> render_block(const Layer& layer, std::size_t block) {
    std::vector<ProgramSymbol> out(block, ProgramSymbol::I);
    for (const Gate& g : layer.gates) {
        const std::size_t slot = slot_of(g);
        if (slot + 1 >= block) {
            throw ValidationError("gate " + std::string(gate_name(g.kind)) + " on qubit " + std::to_string(g.target) +
                                  " does not fit the block");
        }
        if (out[slot] != ProgramSymbol::I) {
            throw ValidationError("layer not renderable: two gates share slot " + std::to_string(slot));
        }
        out[slot] = gate_symbol(g.kind);
    }
    return out;
}

}  // namespace

NonUnitaryProgram extend(const Circuit& circuit, const Padding& padding) {
    validate(circuit);
    NonUnitaryProgram program;
    program.unitary_layers = circuit.layers.size();
    program.idle_layers = padding.idle_layers;
    program.annihilate_qubit = padding.annihilate_qubit.value_or(circuit.answer_qubit);
    if (program.annihilate_qubit >= circuit.width()) {
        throw ValidationError("annihilation qubit " + std::to_string(program.annihilate_qubit) + " out of range");
    }

    const Layer readout{{Gate{GateKind::Readout, circuit.answer_qubit}}};
    const Layer& first = circuit.layers.empty() ? readout : circuit.layers.front();
    if (render_block(first, circuit.width() + 1).front() != ProgramSymbol::I) {
        program.leading_identity = 1;
        program.layers.emplace_back();
    }
    program.layers.insert(program.layers.end(), circuit.layers.begin(), circuit.layers.end());
    program.layers.push_back(readout);
    for (std::size_t k = 0; k < padding.idle_layers; ++k) {
        program.layers.emplace_back();
    }
    program.layers.push_back(Layer{{Gate{GateKind::Annihilate, program.annihilate_qubit}}});
    return program;
}

CompiledChain encode(const Circuit& circuit, const Padding& padding, const CompileOptions& options) {
    CompiledChain chain;
    chain.circuit = circuit;
    chain.program = extend(circuit, padding);

    const std::size_t width = circuit.width();
    const std::size_t block = width + 1;
    const std::size_t layers = chain.program.layers.size();

    std::vector<ProgramSymbol> code;
    code.reserve(layers * block);
    for (const Layer& layer : chain.program.layers) {
        const auto symbols = render_block(layer, block);
        code.insert(code.end(), symbols.begin(), symbols.end());
    }
    if (code.front() != ProgramSymbol::I) {
        throw ValidationError("layer not renderable: first block must start with I");
    }
    code.front() = ProgramSymbol::A;

    // Left margin leaves room for the leftward slide of one block per layer.
    const std::size_t origin = (layers + 1) * block;
    const std::size_t cells = origin + layers * block + 1 + block;
    if (cells > options.max_cells) {
        throw LimitExceededError("chain needs " + std::to_string(cells) + " cells, maximum is " +
                                 std::to_string(options.max_cells));
    }

    ChainConfiguration& config = chain.initial;
    config.program.assign(cells, ProgramSymbol::Blank);
    config.program[origin] = ProgramSymbol::A;
    config.program[origin + 1] = ProgramSymbol::Execute;
    for (std::size_t k = 1; k < code.size(); ++k) {
        config.program[origin + 1 + k] = code[k];
    }

    chain.register_begin = origin + 1;
    config.data.reserve(cells);
    for (std::size_t i = 0; i < cells; ++i) {
        const std::size_t offset = (i + block - origin % block) % block;
        if (offset == 0) {
            config.data.emplace_back(DataSymbol::Fence);
        } else if (i >= chain.register_begin && i < chain.register_begin + width) {
            config.data.emplace_back(RegisterSlot{i - chain.register_begin});
        } else {
            config.data.emplace_back(DataSymbol::Dot);
        }
    }

    const ClockLengths lengths = extract_clock_lengths(chain);
    chain.r_eff = lengths.r_eff;
    chain.s_eff = lengths.s_eff;
    return chain;
}

ClockLengths extract_clock_lengths(const CompiledChain& chain) {
    QcaState state = initial_state(chain, yes_probe_register(chain));
    const std::size_t bound = step_bound(chain);
    ClockLengths lengths;
    bool readout = false;
    for (std::size_t steps = 0;; ++steps) {
        if (steps > bound) {
            throw LimitExceededError("program did not finish within " + std::to_string(bound) + " steps");
        }
        ForwardStep f = step_forward(state);
        if (f.kind == StepKind::Annihilated) {
            if (!readout) {
                throw ValidationError("malformed layout: annihilated before any readout over the answer qubit");
            }
            lengths.s_eff = steps;
            return lengths;
        }
        if (f.kind == StepKind::Split) {
            if (readout) {
                throw ValidationError("malformed layout: more than one readout step");
            }
            if (*f.event.readout_qubit != chain.circuit.answer_qubit) {
                throw ValidationError("malformed layout: readout over q" + std::to_string(*f.event.readout_qubit) +
                                      " instead of the answer qubit");
            }
            readout = true;
            lengths.r_eff = steps;
        }
        state = std::move(f.state);
    }
}

std::size_t idle_search_bound(const Circuit& circuit, const CompileOptions& options) {
    return options.max_idle_layers != 0 ? options.max_idle_layers : 4 * (circuit.width() + 1) + 4;
}

CompiledChain pad_for_coprimality(const Circuit& circuit, const CompileOptions& options,
                                  std::vector<PaddingAttempt>* attempts) {
    const std::size_t bound = idle_search_bound(circuit, options);
    validate(circuit);
    std::vector<std::size_t> slots{circuit.answer_qubit};
    for (std::size_t q = 0; q < circuit.width(); ++q) {
        if (q != circuit.answer_qubit) {
            slots.push_back(q);
        }
    }
    std::vector<PaddingAttempt> tried;
    for (std::size_t k = 0; k <= bound; ++k) {
        for (std::size_t q : slots) {
            CompiledChain chain = encode(circuit, Padding{k, q}, options);
            const std::size_t g = std::gcd(chain.r_eff + 2, chain.s_eff + 2);
            tried.push_back({k, q, chain.r_eff, chain.s_eff, g});
            if (g == 1) {
                if (attempts != nullptr) {
                    *attempts = std::move(tried);
                }
                return chain;
            }
        }
    }
    std::string msg = "no coprime clock lengths with at most " + std::to_string(bound) + " idle layers:";
    for (const auto& a : tried) {
        msg += " (k=" + std::to_string(a.idle_layers) + ", A@q" + std::to_string(a.annihilate_qubit) +
               ", r=" + std::to_string(a.r_eff) + ", s=" + std::to_string(a.s_eff) + ", gcd=" + std::to_string(a.gcd) + ")";
    }
    if (attempts != nullptr) {
        *attempts = std::move(tried);
    }
    throw LimitExceededError(msg);
}

std::vector<Layer> decode_program(const ChainConfiguration& config, std::size_t width) {
    const std::size_t block = width + 1;
    std::size_t exec = config.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < config.size(); ++i) {
        if (config.program[i] == ProgramSymbol::Execute) {
            if (exec != config.size()) {
                throw ValidationError("program band has more than one execution symbol");
            }
            exec = i;
        }
        if (config.program[i] != ProgramSymbol::Blank) {
            last = i;
        }
    }
    if (exec == config.size() || exec == 0 || config.program[exec - 1] != ProgramSymbol::A) {
        throw ValidationError("program code must start with the pair A EX");
    }
    std::vector<ProgramSymbol> code{ProgramSymbol::A};
    for (std::size_t i = exec + 1; i <= last; ++i) {
        code.push_back(config.program[i]);
    }
    if (code.size() % block != 0) {
        throw ValidationError("program code length " + std::to_string(code.size()) + " is not a multiple of " +
                              std::to_string(block));
    }
    std::vector<Layer> layers(code.size() / block);
    for (std::size_t k = 0; k < code.size(); ++k) {
        const std::size_t slot = k % block;
        const ProgramSymbol s = code[k];
        if (k == 0 || s == ProgramSymbol::I) {
            continue;
        }
        const auto kind = gate_kind(s);
        if (!kind || slot == width) {
            throw ValidationError("unexpected symbol " + std::string(token(s)) + " at code index " +
                                  std::to_string(k));
        }
        Gate g{*kind, slot};
        if (g.arity() == 2) {
            if (slot == 0) {
                throw ValidationError("two-qubit symbol above qubit 0 at code index " + std::to_string(k));
            }
            g.target = slot - 1;
        }
        layers[k / block].gates.push_back(g);
    }
    return layers;
}

}  // namespace qca
