#include "cli_app.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qca/compiler.hpp"
#include "qca/engine.hpp"
#include "qca/error.hpp"
#include "qca/measurement.hpp"
#include "qca/oracle.hpp"
#include "qca/report.hpp"
#include "qca/spectral.hpp"

namespace qca::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kOutputDirVariable = "QCA_OUTPUT_DIR";

struct Options {
    std::string circuit;
    std::string input_bits;
    bool no_pad = false;
    std::size_t max_idle = 0;
    std::string out;

    bool bands = false;
    bool oracle = false;
    std::size_t max_dim = OracleOptions{}.dense_cap;
    std::size_t max_closure = OracleOptions{}.closure_cap;
    std::string dump_matrix;

    std::optional<double> delta;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::size_t trials = 1;
    std::string fallback = "uniform";

    std::optional<std::size_t> r_eff;
    std::optional<std::size_t> s_eff;
    bool intervals = false;
};

/// Report text and exit code of one command.
struct Outcome {
    std::string text;
    int code = kExitOk;
};

void line(std::string& text, const Record& r) {
    text += r.str();
    text += '\n';
}

Circuit read_circuit(const Options& o) {
    try {
        return load_circuit(o.circuit);
    } catch (const ParseError& e) {
        throw ValidationError(o.circuit + ":" + std::to_string(e.line()) + ": " + e.what());
    }
}

CompiledChain compile(const Circuit& circuit, const Options& o, std::vector<PaddingAttempt>* attempts = nullptr) {
    CompileOptions options;
    options.max_idle_layers = o.max_idle;
    if (o.no_pad) {
        return encode(circuit, Padding{}, options);
    }
    return pad_for_coprimality(circuit, options, attempts);
}

InputBits input_bits(const Options& o, const Circuit& circuit) {
    if (o.input_bits.empty()) {
        return InputBits(circuit.inputs, 0);
    }
    InputBits bits = parse_bits(o.input_bits);
    if (bits.size() != circuit.inputs) {
        throw ValidationError("expected " + std::to_string(circuit.inputs) + " input bits, got " +
                              std::to_string(bits.size()));
    }
    return bits;
}

OracleOptions oracle_options(const Options& o) {
    OracleOptions options;
    options.dense_cap = o.max_dim;
    options.closure_cap = o.max_closure;
    return options;
}

std::string trim_newline(std::string s) {
    while (!s.empty() && s.back() == '\n') {
        s.pop_back();
    }
    return s;
}

void add_bands(Record& r, const ChainConfiguration& config) {
    const std::string dump = band_dump(config);
    const auto split = dump.find('\n');
    r.add("program", dump.substr(0, split));
    r.add("data", trim_newline(dump.substr(split + 1)));
}

Outcome cmd_compile(const Options& o) {
    const Circuit circuit = read_circuit(o);
    std::vector<PaddingAttempt> attempts;
    const CompiledChain chain = compile(circuit, o, &attempts);
    Outcome res;
    for (const auto& a : attempts) {
        line(res.text, Record("padding_attempt")
                           .add("idle_layers", a.idle_layers)
                           .add("annihilate_qubit", a.annihilate_qubit)
                           .add("r_eff", a.r_eff)
                           .add("s_eff", a.s_eff)
                           .add("gcd", a.gcd));
    }
    const SpectralGap gap = spectral_gap(chain.r_eff, chain.s_eff);
    Record r("chain");
    r.add("cells", chain.cells())
        .add("inputs", circuit.inputs)
        .add("ancillas", circuit.ancillas)
        .add("answer_qubit", circuit.answer_qubit)
        .add("block", chain.block())
        .add("layers", chain.total_layers())
        .add("idle_layers", chain.idle_layers())
        .add("annihilate_qubit", chain.program.annihilate_qubit)
        .add("register_begin", chain.register_begin)
        .add("r_eff", chain.r_eff)
        .add("s_eff", chain.s_eff)
        .add("coprime", gap.coprime)
        .add("gap", gap.gap)
        .add("delta", gap.gap / 3.0)
        .add("program_code", program_code(chain.initial));
    add_bands(r, chain.initial);
    line(res.text, r);
    return res;
}

Outcome cmd_validate(const Options& o) {
    const Circuit circuit = read_circuit(o);
    const CompiledChain chain = compile(circuit, o);
    const WellFormedReport report = validate_wellformed(chain);
    Outcome res;
    Record r("validation");
    r.add("pass", report.pass)
        .add("states_checked", report.states_checked)
        .add("cells", chain.cells())
        .add("r_eff", chain.r_eff)
        .add("s_eff", chain.s_eff)
        .add("diagnostic", report.diagnostic);
    if (report.offending) {
        add_bands(r, report.offending->config);
    }
    line(res.text, r);
    res.code = report.pass ? kExitOk : kExitInvalid;
    return res;
}

std::string_view kind_name(StepKind k) {
    switch (k) {
        case StepKind::Next:
            return "next";
        case StepKind::Split:
            return "split";
        case StepKind::Annihilated:
            return "annihilated";
    }
    return "next";
}

Outcome cmd_trace(const Options& o) {
    const Circuit circuit = read_circuit(o);
    const CompiledChain chain = compile(circuit, o);
    const InputBits bits = input_bits(o, circuit);
    Outcome res;
    QcaState state = initial_state(chain, bits);
    if (o.bands) {
        Record r("state");
        r.add("t", state.t);
        add_bands(r, state.config);
        line(res.text, r);
    }
    const std::size_t bound = step_bound(chain);
    std::size_t steps = 0;
    double p = 1.0;
    std::string end = "annihilated";
    for (;; ++steps) {
        if (steps > bound) {
            throw LimitExceededError("program did not finish within " + std::to_string(bound) + " steps");
        }
        ForwardStep f = step_forward(state);
        Record r("step");
        r.add("t", state.t)
            .add("rule", rule_label(f.event.rule))
            .add("position", f.event.position)
            .add("kind", kind_name(f.kind));
        if (f.event.executed) {
            r.add("executed", gate_name(*f.event.executed));
        } else {
            r.add_null("executed");
        }
        if (f.kind == StepKind::Split) {
            p = f.yes_weight;
            r.add("yes_weight", f.yes_weight).add("no_weight", f.no_weight);
        }
        if (o.bands && f.kind != StepKind::Annihilated) {
            add_bands(r, f.state.config);
        }
        line(res.text, r);
        if (f.kind == StepKind::Annihilated) {
            ++steps;
            break;
        }
        if (f.kind == StepKind::Split && f.yes_weight <= kNegligibleWeight) {
            ++steps;
            end = "readout";
            break;
        }
        state = std::move(f.state);
    }
    line(res.text, Record("trace")
                       .add("input_bits", format_bits(bits))
                       .add("steps", steps)
                       .add("p", p)
                       .add("r_eff", chain.r_eff)
                       .add("s_eff", chain.s_eff)
                       .add("terminated", end));
    return res;
}

void add_atoms(std::string& text, const SpectralMeasure& m) {
    for (const auto& a : m.atoms) {
        line(text, Record("atom").add("value", a.value).add("weight", a.weight).add("branch", branch_name(a.branch)));
    }
}

Outcome cmd_spectrum(const Options& o) {
    const Circuit circuit = read_circuit(o);
    const CompiledChain chain = compile(circuit, o);
    const InputBits bits = input_bits(o, circuit);
    const double p = acceptance_probability(circuit, bits);
    Outcome res;
    if (!o.oracle) {
        const SpectralMeasure m = predicted_measure(chain.r_eff, chain.s_eff, p);
        add_atoms(res.text, m);
        line(res.text, Record("spectrum")
                           .add("source", "predicted")
                           .add("r_eff", chain.r_eff)
                           .add("s_eff", chain.s_eff)
                           .add("p", p)
                           .add("atoms", m.atoms.size())
                           .add("total_weight", m.total_weight()));
        return res;
    }
    const OracleOptions options = oracle_options(o);
    const RestrictedHamiltonian h = build_restricted(chain, bits, options);
    if (!o.dump_matrix.empty()) {
        std::ofstream triples(o.dump_matrix + ".triples");
        std::ofstream legend(o.dump_matrix + ".legend");
        if (!triples || !legend) {
            throw Error("cannot write matrix dump " + o.dump_matrix);
        }
        write_matrix(triples, legend, h);
    }
    const auto induced = induced_measure(h, 0, options);
    const SpectralMeasure predicted = predicted_measure(chain.r_eff, chain.s_eff, p);
    const double tv = tv_distance(induced, predicted.points(), kAtomMatchTolerance);
    try {
        add_atoms(res.text, tag_branches(induced, chain.r_eff, chain.s_eff, kAtomMatchTolerance));
    } catch (const ValidationError&) {
        for (const auto& a : induced) {
            line(res.text, Record("atom").add("value", a.value).add("weight", a.weight).add_null("branch"));
        }
    }
    double total = 0.0;
    for (const auto& a : induced) {
        total += a.weight;
    }
    line(res.text, Record("spectrum")
                       .add("source", "oracle")
                       .add("r_eff", chain.r_eff)
                       .add("s_eff", chain.s_eff)
                       .add("p", p)
                       .add("dim", h.dim())
                       .add("hermiticity_error", h.hermiticity_error())
                       .add("atoms", induced.size())
                       .add("total_weight", total)
                       .add("tv_distance", tv));
    return res;
}

Outcome cmd_gap(const Options& o) {
    std::size_t r = 0;
    std::size_t s = 0;
    if (!o.circuit.empty()) {
        const CompiledChain chain = compile(read_circuit(o), o);
        r = chain.r_eff;
        s = chain.s_eff;
    } else if (o.r_eff && o.s_eff) {
        r = *o.r_eff;
        s = *o.s_eff;
    } else {
        throw ValidationError("gap needs a circuit file or both --r and --s");
    }
    if (r == 0 || s == 0) {
        throw ValidationError("clock lengths must be positive");
    }
    const SpectralGap gap = spectral_gap(r, s);
    Outcome res;
    line(res.text, Record("gap")
                       .add("r_eff", r)
                       .add("s_eff", s)
                       .add("gap", gap.gap)
                       .add("delta", gap.gap / 3.0)
                       .add("coprime", gap.coprime)
                       .add("gcd", gap.gcd)
                       .add("exact_min", gap.exact_min)
                       .add("bound_holds", !gap.coprime || gap.exact_min >= gap.gap));
    if (o.intervals) {
        for (const auto& iv : decision_partition(r, s).yes) {
            line(res.text, Record("yes_interval").add("lo", iv.lo).add("hi", iv.hi));
        }
    }
    return res;
}

Outcome cmd_decide(const Options& o) {
    const Circuit circuit = read_circuit(o);
    const CompiledChain chain = compile(circuit, o);
    const InputBits bits = input_bits(o, circuit);
    const double p = acceptance_probability(circuit, bits);
    const DecisionPartition partition = decision_partition(chain.r_eff, chain.s_eff);

    MeasurementModel model;
    model.delta = o.delta.value_or(partition.delta);
    model.epsilon = o.epsilon;
    model.seed = o.seed;
    model.fallback = parse_fallback(o.fallback);
    validate(model);

    SpectralMeasure measure;
    if (o.oracle) {
        const OracleOptions options = oracle_options(o);
        measure = tag_branches(induced_measure(build_restricted(chain, bits, options), 0, options), chain.r_eff,
                               chain.s_eff, kAtomMatchTolerance);
    } else {
        measure = predicted_measure(chain.r_eff, chain.s_eff, p);
    }
    Outcome res;
    if (o.trials == 1) {
        std::mt19937_64 rng(derive_seed(model.seed, 0));
        const DecisionOutcome d = decide(partition, measure, model, rng);
        line(res.text, Record("decision")
                           .add("value", d.value)
                           .add("verdict", branch_name(d.verdict))
                           .add("atom_branch", branch_name(d.atom_branch))
                           .add("fallback", d.fallback));
    }
    const DecisionStatistics st = decision_statistics(partition, measure, p, model, o.trials);
    line(res.text, Record("decision_statistics")
                       .add("source", o.oracle ? "oracle" : "predicted")
                       .add("trials", st.trials)
                       .add("yes_rate", st.yes_rate)
                       .add("no_rate", st.no_rate)
                       .add("p", st.p)
                       .add("gap", st.gap)
                       .add("delta", st.delta)
                       .add("epsilon", st.epsilon)
                       .add("seed", model.seed)
                       .add("fallback", fallback_name(model.fallback))
                       .add("y_mass", st.y_mass)
                       .add("expected_yes", st.expected_yes)
                       .add("sigma", st.sigma)
                       .add("bound_yes", st.bound_yes)
                       .add("bound_no", st.bound_no)
                       .add("misclassified", st.misclassified)
                       .add("pass", st.pass));
    return res;
}

Outcome cmd_verify(const Options& o) {
    const Circuit circuit = read_circuit(o);
    const CompiledChain chain = compile(circuit, o);
    const InputBits bits = input_bits(o, circuit);
    const VerificationReport rep = verify_lemma1(chain, bits, oracle_options(o));
    const bool p_agree = std::abs(rep.p_simulator - rep.p_engine) <= 1e-12;
    Outcome res;
    line(res.text, Record("verification")
                       .add("input_bits", format_bits(bits))
                       .add("r_eff", rep.r_eff)
                       .add("s_eff", rep.s_eff)
                       .add("p_simulator", rep.p_simulator)
                       .add("p_engine", rep.p_engine)
                       .add("dim", rep.dim)
                       .add("hermiticity_error", rep.hermiticity_error)
                       .add("diagonal_entry", rep.diagonal_entry)
                       .add("induced_atoms", rep.induced.size())
                       .add("predicted_atoms", rep.predicted.atoms.size())
                       .add("tv_distance", rep.tv_distance)
                       .add("pass", rep.pass && p_agree));
    res.code = rep.pass && p_agree ? kExitOk : kExitInvalid;
    return res;
}

std::optional<fs::path> output_path(const std::string& flag, const std::string& command) {
    const char* dir = std::getenv(kOutputDirVariable);
    const bool have_dir = dir != nullptr && *dir != '\0';
    if (!flag.empty()) {
        fs::path p(flag);
        if (p.is_relative() && have_dir) {
            p = fs::path(dir) / p;
        }
        return p;
    }
    if (have_dir) {
        return fs::path(dir) / (command + ".jsonl");
    }
    return std::nullopt;
}

void write_atomically(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".part";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        f << text;
        if (!f.flush()) {
            throw Error("write to " + tmp.string() + " failed");
        }
    }
    fs::rename(tmp, path);
}

void add_chain_options(CLI::App* cmd, Options& o) {
    cmd->add_option("circuit", o.circuit, "Circuit description file")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--no-pad", o.no_pad, "Encode without the coprimality search");
    cmd->add_option("--max-idle", o.max_idle, "Largest idle-layer count tried by the padding search");
}

void add_oracle_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--max-dim", o.max_dim, "Largest restricted dimension diagonalised densely");
    cmd->add_option("--max-closure", o.max_closure, "Largest reachable basis built by the oracle");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"QCA circuit compiler, simulator and spectral toolkit", "qca"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--out", o.out, "Write the report here (relative paths go under $QCA_OUTPUT_DIR)");

    auto* compile_cmd = app.add_subcommand("compile", "Encode a circuit as an initial chain configuration");
    add_chain_options(compile_cmd, o);

    auto* validate_cmd = app.add_subcommand("validate", "Check uniqueness and reversibility along the orbit");
    add_chain_options(validate_cmd, o);

    auto* trace_cmd = app.add_subcommand("trace", "Step the automaton from the compiled configuration");
    add_chain_options(trace_cmd, o);
    trace_cmd->add_option("--input-bits", o.input_bits, "Input bit string x");
    trace_cmd->add_flag("--bands", o.bands, "Include both bands after every step");

    auto* spectrum_cmd = app.add_subcommand("spectrum", "Predicted or oracle spectral measure");
    add_chain_options(spectrum_cmd, o);
    spectrum_cmd->add_option("--input-bits", o.input_bits, "Input bit string x");
    spectrum_cmd->add_flag("--oracle", o.oracle, "Diagonalise the restricted Hamiltonian instead");
    add_oracle_options(spectrum_cmd, o);
    spectrum_cmd->add_option("--dump-matrix", o.dump_matrix, "Write PREFIX.triples and PREFIX.legend (oracle only)");

    auto* gap_cmd = app.add_subcommand("gap", "Spectral gap of the two line-graph spectra");
    gap_cmd->add_option("circuit", o.circuit, "Circuit description file")->check(CLI::ExistingFile);
    gap_cmd->add_flag("--no-pad", o.no_pad, "Encode without the coprimality search");
    gap_cmd->add_option("--max-idle", o.max_idle, "Largest idle-layer count tried by the padding search");
    gap_cmd->add_option("--r", o.r_eff, "NO clock length r_eff");
    gap_cmd->add_option("--s", o.s_eff, "YES clock length s_eff");
    gap_cmd->add_flag("--intervals", o.intervals, "List the YES intervals of the decision partition");

    auto* decide_cmd = app.add_subcommand("decide", "Single-shot energy-measurement decisions");
    add_chain_options(decide_cmd, o);
    decide_cmd->add_option("--input-bits", o.input_bits, "Input bit string x");
    decide_cmd->add_option("--delta", o.delta, "Maximal measurement error (default Delta/3)");
    decide_cmd->add_option("--epsilon", o.epsilon, "Unreliability");
    decide_cmd->add_option("--seed", o.seed, "Root seed");
    decide_cmd->add_option("--trials", o.trials, "Independent single-shot runs")->check(CLI::PositiveNumber);
    decide_cmd->add_option("--fallback", o.fallback, "uniform or adversarial");
    decide_cmd->add_flag("--oracle", o.oracle, "Sample from the oracle measure");
    add_oracle_options(decide_cmd, o);

    auto* verify_cmd = app.add_subcommand("verify-lemma1", "Compare oracle and predicted spectral measures");
    add_chain_options(verify_cmd, o);
    verify_cmd->add_option("--input-bits", o.input_bits, "Input bit string x");
    add_oracle_options(verify_cmd, o);

    std::vector<const char*> argv{"qca"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalid;
    }

    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    try {
        Outcome res;
        if (cmd == compile_cmd) {
            res = cmd_compile(o);
        } else if (cmd == validate_cmd) {
            res = cmd_validate(o);
        } else if (cmd == trace_cmd) {
            res = cmd_trace(o);
        } else if (cmd == spectrum_cmd) {
            res = cmd_spectrum(o);
        } else if (cmd == gap_cmd) {
            res = cmd_gap(o);
        } else if (cmd == decide_cmd) {
            res = cmd_decide(o);
        } else {
            res = cmd_verify(o);
        }
        if (const auto path = output_path(o.out, name)) {
            write_atomically(*path, res.text);
        } else {
            out << res.text;
        }
        return res.code;
    } catch (const ParseError& e) {
        err << "qca " << name << ": line " << e.line() << ": " << e.what() << '\n';
        return kExitInvalid;
    } catch (const ValidationError& e) {
        err << "qca " << name << ": " << e.what() << '\n';
        return kExitInvalid;
    } catch (const IllFormedError& e) {
        err << "qca " << name << ": ill-formed chain: " << e.what() << '\n';
        return kExitInvalid;
    } catch (const BoundaryOverflowError& e) {
        err << "qca " << name << ": " << e.what() << '\n';
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "qca " << name << ": " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace qca::cli
