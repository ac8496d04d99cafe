#include "qca/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qca/error.hpp"

namespace qca {

namespace {

constexpr std::size_t kMaxWidth = 24;

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            words.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return words;
}

std::size_t parse_count(std::string_view word, std::size_t line, const char* what) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
    if (ec != std::errc() || ptr != word.data() + word.size()) {
        throw ParseError(line, std::string("expected a non-negative integer for ") + what + ", got '" +
                                   std::string(word) + "'");
    }
    return value;
}

GateKind parse_gate_kind(std::string_view word, std::size_t line) {
    if (word == "I") {
        return GateKind::Identity;
    }
    if (word == "S") {
        return GateKind::Swap;
    }
    if (word == "W") {
        return GateKind::ControlledW;
    }
    throw ParseError(line, "unknown gate '" + std::string(word) + "' (expected I, S or W)");
}

template <bool Adjoint>
RegisterState apply_layer_impl(const RegisterState& state, const Layer& layer) {
    RegisterState out = state;
    for (const Gate& g : layer.gates) {
        if (g.target >= state.width() || (g.arity() == 2 && g.target + 1 >= state.width())) {
            throw ValidationError("gate " + std::string(gate_name(g.kind)) + " on qubit " +
                                  std::to_string(g.target) + " exceeds register width " +
                                  std::to_string(state.width()));
        }
        switch (g.kind) {
            case GateKind::Identity:
                break;
            case GateKind::Swap:
                apply_two_qubit(out, swap_matrix(), g.target, g.target + 1);
                break;
            case GateKind::ControlledW:
                apply_two_qubit(out, Adjoint ? adjoint(w_matrix()) : w_matrix(), g.target, g.target + 1);
                break;
            case GateKind::Readout:
                project_qubit(out, g.target, 1);
                break;
            case GateKind::Annihilate:
                std::fill(out.amplitudes().begin(), out.amplitudes().end(), Amplitude{});
                break;
        }
    }
    return out;
}

}  // namespace

RegisterState::RegisterState(std::size_t width) : width_(width), amplitudes_(std::size_t{1} << width) {}

RegisterState::RegisterState(std::size_t width, std::vector<Amplitude> amplitudes)
    : width_(width), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (std::size_t{1} << width)) {
        throw ValidationError("register of width " + std::to_string(width) + " needs " +
                              std::to_string(std::size_t{1} << width) + " amplitudes, got " +
                              std::to_string(amplitudes_.size()));
    }
}

RegisterState RegisterState::basis(std::size_t width, std::size_t index) {
    RegisterState s(width);
    s.amplitudes_.at(index) = 1.0;
    return s;
}

double RegisterState::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes_) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

double RegisterState::probability(std::size_t qubit, int value) const {
    const std::size_t mask = bit_mask(qubit);
    double sum = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (((i & mask) != 0) == (value != 0)) {
            sum += std::norm(amplitudes_[i]);
        }
    }
    return sum;
}

Amplitude inner_product(const RegisterState& a, const RegisterState& b) {
    if (a.dimension() != b.dimension()) {
        throw ValidationError("inner product of registers with different dimensions");
    }
    Amplitude sum{};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum;
}

double distance(const RegisterState& a, const RegisterState& b) {
    if (a.dimension() != b.dimension()) {
        throw ValidationError("distance between registers with different dimensions");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        sum += std::norm(a[i] - b[i]);
    }
    return std::sqrt(sum);
}

RegisterState normalized(RegisterState state) {
    const double n = state.norm();
    if (n == 0.0) {
        throw ValidationError("cannot normalise the zero register state");
    }
    for (auto& a : state.amplitudes()) {
        a /= n;
    }
    return state;
}

const Matrix4& swap_matrix() {
    static const Matrix4 m = {{
        {1, 0, 0, 0},
        {0, 0, 1, 0},
        {0, 1, 0, 0},
        {0, 0, 0, 1},
    }};
    return m;
}

const Matrix4& w_matrix() {
    constexpr double h = 1.0 / std::numbers::sqrt2;
    static const Matrix4 m = {{
        {1, 0, 0, 0},
        {0, 1, 0, 0},
        {0, 0, h, -h},
        {0, 0, h, h},
    }};
    return m;
}

Matrix4 adjoint(const Matrix4& m) {
    Matrix4 out{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            out[i][j] = std::conj(m[j][i]);
        }
    }
    return out;
}

void apply_two_qubit(RegisterState& state, const Matrix4& m, std::size_t left, std::size_t right) {
    const std::size_t ml = state.bit_mask(left);
    const std::size_t mr = state.bit_mask(right);
    auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & ml) != 0 || (i & mr) != 0) {
            continue;
        }
        const std::array<std::size_t, 4> idx = {i, i | mr, i | ml, i | ml | mr};
        std::array<Amplitude, 4> in{};
        for (std::size_t k = 0; k < 4; ++k) {
            in[k] = amps[idx[k]];
        }
        for (std::size_t r = 0; r < 4; ++r) {
            Amplitude acc{};
            for (std::size_t c = 0; c < 4; ++c) {
                acc += m[r][c] * in[c];
            }
            amps[idx[r]] = acc;
        }
    }
}

void project_qubit(RegisterState& state, std::size_t qubit, int keep) {
    const std::size_t mask = state.bit_mask(qubit);
    auto& amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (((i & mask) != 0) != (keep != 0)) {
            amps[i] = 0.0;
        }
    }
}

void validate_layer(const Layer& layer, std::size_t width, bool allow_non_unitary) {
    std::vector<bool> used(width, false);
    for (const Gate& g : layer.gates) {
        if (!allow_non_unitary && !g.is_unitary()) {
            throw ValidationError(std::string(gate_name(g.kind)) + " is not allowed inside a unitary circuit");
        }
        if (g.target >= width) {
            throw ValidationError("gate " + std::string(gate_name(g.kind)) + " target " +
                                  std::to_string(g.target) + " out of range for width " + std::to_string(width));
        }
        if (g.arity() == 2 && g.target + 1 >= width) {
            throw ValidationError("two-qubit gate " + std::string(gate_name(g.kind)) + " on (" +
                                  std::to_string(g.target) + ", " + std::to_string(g.target + 1) +
                                  ") exceeds width " + std::to_string(width));
        }
        for (std::size_t q = g.target; q < g.target + g.arity(); ++q) {
            if (used[q]) {
                throw ValidationError("overlapping gate supports on qubit " + std::to_string(q));
            }
            used[q] = true;
        }
    }
}

void validate(const Circuit& circuit) {
    if (circuit.width() == 0) {
        throw ValidationError("circuit needs at least one qubit");
    }
    if (circuit.width() > kMaxWidth) {
        throw ValidationError("register width " + std::to_string(circuit.width()) + " exceeds the supported maximum " +
                              std::to_string(kMaxWidth));
    }
    if (circuit.answer_qubit >= circuit.width()) {
        throw ValidationError("answer qubit " + std::to_string(circuit.answer_qubit) + " out of range");
    }
    for (const Layer& layer : circuit.layers) {
        validate_layer(layer, circuit.width(), false);
    }
}

Circuit parse_circuit(std::string_view text) {
    Circuit circuit;
    bool have_header = false;
    bool have_answer = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        const auto words = split_words(line);
        if (words.empty()) {
            if (eol == text.size()) {
                break;
            }
            continue;
        }
        const auto& head = words[0];
        if (!have_header) {
            if (head != "qubits" || words.size() != 3) {
                throw ParseError(line_no, "expected 'qubits <n> <a>' as the first directive");
            }
            circuit.inputs = parse_count(words[1], line_no, "input count");
            circuit.ancillas = parse_count(words[2], line_no, "ancilla count");
            if (circuit.width() == 0) {
                throw ParseError(line_no, "circuit needs at least one qubit");
            }
            if (circuit.width() > kMaxWidth) {
                throw ParseError(line_no, "register width exceeds " + std::to_string(kMaxWidth));
            }
            have_header = true;
        } else if (head == "qubits") {
            throw ParseError(line_no, "duplicate 'qubits' directive");
        } else if (head == "answer") {
            if (words.size() != 2 || have_answer) {
                throw ParseError(line_no, "expected a single 'answer <k>' directive");
            }
            circuit.answer_qubit = parse_count(words[1], line_no, "answer qubit");
            if (circuit.answer_qubit >= circuit.width()) {
                throw ParseError(line_no, "answer qubit out of range");
            }
            have_answer = true;
        } else if (head == "layer") {
            if (words.size() % 2 != 1) {
                throw ParseError(line_no, "layer expects <gate> <qubit> pairs");
            }
            Layer layer;
            for (std::size_t i = 1; i < words.size(); i += 2) {
                layer.gates.push_back({parse_gate_kind(words[i], line_no), parse_count(words[i + 1], line_no, "qubit")});
            }
            try {
                validate_layer(layer, circuit.width(), false);
            } catch (const ValidationError& e) {
                throw ParseError(line_no, e.what());
            }
            circuit.layers.push_back(std::move(layer));
        } else {
            throw ParseError(line_no, "unknown directive '" + std::string(head) + "'");
        }
        if (eol == text.size()) {
            break;
        }
    }
    if (!have_header) {
        throw ParseError(0, "missing 'qubits <n> <a>' directive");
    }
    if (!have_answer) {
        circuit.answer_qubit = circuit.width() - 1;
    }
    return circuit;
}

Circuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(0, "cannot open circuit file '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_circuit(buffer.str());
}

std::string to_text(const Circuit& circuit) {
    std::ostringstream out;
    out << "qubits " << circuit.inputs << ' ' << circuit.ancillas << '\n';
    out << "answer " << circuit.answer_qubit << '\n';
    for (const Layer& layer : circuit.layers) {
        out << "layer";
        for (const Gate& g : layer.gates) {
            out << ' ' << gate_name(g.kind) << ' ' << g.target;
        }
        out << '\n';
    }
    return out.str();
}

InputBits parse_bits(std::string_view bits) {
    InputBits out;
    out.reserve(bits.size());
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw ValidationError("input bits must be a string of 0/1, got '" + std::string(bits) + "'");
        }
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

std::string format_bits(const InputBits& bits) {
    std::string s;
    for (auto b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

RegisterState initial_register(std::size_t width, const InputBits& input) {
    if (input.size() > width) {
        throw ValidationError("input has " + std::to_string(input.size()) + " bits but the register has width " +
                              std::to_string(width));
    }
    std::size_t index = 0;
    for (std::size_t q = 0; q < input.size(); ++q) {
        if (input[q]) {
            index |= std::size_t{1} << (width - 1 - q);
        }
    }
    return RegisterState::basis(width, index);
}

RegisterState apply_layer(const RegisterState& state, const Layer& layer) {
    return apply_layer_impl<false>(state, layer);
}

RegisterState apply_layer_adjoint(const RegisterState& state, const Layer& layer) {
    return apply_layer_impl<true>(state, layer);
}

RegisterState run_circuit(const Circuit& circuit, const InputBits& input) {
    validate(circuit);
    if (input.size() != circuit.inputs) {
        throw ValidationError("expected " + std::to_string(circuit.inputs) + " input bits, got " +
                              std::to_string(input.size()));
    }
    RegisterState state = initial_register(circuit.width(), input);
    for (const Layer& layer : circuit.layers) {
        state = apply_layer(state, layer);
    }
    return state;
}

double acceptance_probability(const Circuit& circuit, const InputBits& input) {
    const RegisterState out = run_circuit(circuit, input);
    return std::clamp(out.probability(circuit.answer_qubit, 1), 0.0, 1.0);
}

Layer canonical(const Layer& layer) {
    Layer out;
    for (const Gate& g : layer.gates) {
        if (g.kind != GateKind::Identity) {
            out.gates.push_back(g);
        }
    }
    std::sort(out.gates.begin(), out.gates.end(), [](const Gate& a, const Gate& b) { return a.target < b.target; });
    return out;
}

std::string_view gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::Identity:
            return "I";
        case GateKind::Swap:
            return "S";
        case GateKind::ControlledW:
            return "W";
        case GateKind::Readout:
            return "R";
        case GateKind::Annihilate:
            return "A";
    }
    return "?";
}

}  // namespace qca
