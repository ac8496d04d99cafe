#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qca/compiler.hpp"
#include "qca/engine.hpp"
#include "qca/error.hpp"

using namespace qca;

namespace {

const char* kTwoLayer = "qubits 1 1\nlayer W 0\nlayer S 0\n";
const char* kEmpty = "qubits 1 0\n";
const char* kCoin = "qubits 1 1\nlayer W 0\n";
const char* kTwoLayerFirst = "qubits 1 1\nanswer 0\nlayer W 0\nlayer S 0\n";
const char* kThree = "qubits 2 1\nlayer W 0\nlayer S 1\nlayer W 1\n";
const char* kFour = "qubits 2 0\nlayer W 0\nlayer S 0\nlayer W 0\nlayer S 0\n";

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    for (std::string t; in >> t;) {
        out.push_back(t);
    }
    return out;
}

std::vector<std::string> data_tokens(const ChainConfiguration& c) {
    const std::string dump = band_dump(c);
    return tokens(dump.substr(dump.find('\n') + 1));
}

std::vector<std::string> program_tokens(const ChainConfiguration& c) {
    const std::string dump = band_dump(c);
    return tokens(dump.substr(0, dump.find('\n')));
}

// Test-only rewriter working on token strings straight from the rule table;
// counts steps until R and A execute above register cells.
struct ClockCount {
    std::size_t readout = 0;
    std::size_t annihilate = 0;
};

ClockCount rewrite_clock(std::vector<std::string> prog, const std::vector<std::string>& data) {
    auto gate = [](const std::string& s) { return s == "I" || s == "S" || s == "W" || s == "R" || s == "A"; };
    auto mark = [&](const std::string& s) { return s.size() == 2 && s[0] == 'i' && gate(s.substr(1)); };
    auto fence = [&](std::size_t i) { return data[i] == "||"; };
    auto reg = [&](std::size_t i) { return data[i][0] == 'q'; };
    ClockCount out;
    bool readout = false;
    for (std::size_t step = 0; step < 1000000; ++step) {
        std::size_t found = 0;
        std::size_t at = 0;
        std::string nl;
        std::string nr;
        for (std::size_t j = 0; j + 1 < prog.size(); ++j) {
            const std::string& l = prog[j];
            const std::string& r = prog[j + 1];
            std::string a;
            std::string b;
            if ((l == "HO" || l == "EX") && gate(r)) {
                a = r;
                b = l;
            } else if (l == "HO" && r == ".." && !fence(j)) {
                a = "TA";
                b = "..";
            } else if (l == "EX" && r == ".." && fence(j)) {
                a = "TA";
                b = "..";
            } else if (gate(l) && r == "TA") {
                a = "i" + l;
                b = "..";
            } else if (gate(l) && mark(r)) {
                a = "i" + l;
                b = r.substr(1);
            } else if (l == ".." && mark(r)) {
                a = "TA";
                b = r.substr(1);
            } else if (l == ".." && r == "TA") {
                a = "..";
                b = fence(j + 1) ? "EX" : "HO";
            } else {
                continue;
            }
            ++found;
            at = j;
            nl = a;
            nr = b;
        }
        if (found != 1) {
            ADD_FAILURE() << found << " rewrites possible at step " << step;
            return out;
        }
        if (prog[at] == "EX" && reg(at + 1)) {
            if (prog[at + 1] == "R" && !readout) {
                out.readout = step;
                readout = true;
            }
            if (prog[at + 1] == "A") {
                out.annihilate = step;
                return out;
            }
        }
        prog[at] = nl;
        prog[at + 1] = nr;
    }
    ADD_FAILURE() << "rewriter did not terminate";
    return out;
}

}  // namespace

TEST(Compiler, TwoLayerExampleMatchesPublishedBands) {
    const CompiledChain chain = encode(parse_circuit(kTwoLayer));
    EXPECT_EQ(program_code(chain.initial), "A EX W I I S I I R I I A I");
    const std::size_t origin = chain.register_begin - 1;
    const auto data = data_tokens(chain.initial);
    const std::vector<std::string> window(data.begin() + static_cast<long>(origin) - 10,
                                          data.begin() + static_cast<long>(origin) + 13);
    EXPECT_EQ(window, tokens("** || ** ** || ** ** || ** ** || q0 q1 || ** ** || ** ** || ** ** ||"));
    EXPECT_EQ(program_tokens(chain.initial)[origin], "A");
    EXPECT_EQ(data[origin], "||");
    EXPECT_EQ(chain.program.annihilate_qubit, 1u);
    EXPECT_EQ(chain.cells(), 31u);
}

TEST(Compiler, EmptyCircuitGetsLeadingIdentityLayer) {
    const CompiledChain chain = encode(parse_circuit(kEmpty));
    EXPECT_EQ(program_code(chain.initial), "A EX I R I A I");
    EXPECT_EQ(chain.program.leading_identity, 1u);
    EXPECT_EQ(chain.program.readout_layer(), 1u);
    EXPECT_EQ(chain.cells(), 17u);
    EXPECT_TRUE(validate_wellformed(chain).pass);
}

TEST(Compiler, ExtendAppendsReadoutIdleAndAnnihilation) {
    const NonUnitaryProgram p = extend(parse_circuit(kTwoLayer), Padding{2, std::nullopt});
    ASSERT_EQ(p.layers.size(), 6u);
    EXPECT_EQ(p.layers[2].gates, (std::vector<Gate>{{GateKind::Readout, 1}}));
    EXPECT_TRUE(p.layers[3].gates.empty());
    EXPECT_TRUE(p.layers[4].gates.empty());
    EXPECT_EQ(p.layers[5].gates, (std::vector<Gate>{{GateKind::Annihilate, 1}}));
    EXPECT_EQ(p.readout_layer(), 2u);
    EXPECT_EQ(p.annihilate_layer(), 5u);
    EXPECT_THROW(extend(parse_circuit(kTwoLayer), Padding{0, 2}), ValidationError);
}

TEST(Compiler, InitialConfigurationInvariants) {
    for (const char* text : {kTwoLayer, kEmpty, kCoin, kTwoLayerFirst, kThree, kFour}) {
        const Circuit circuit = parse_circuit(text);
        const CompiledChain chain = pad_for_coprimality(circuit);
        const std::size_t w = chain.block();
        const std::size_t origin = chain.register_begin - 1;
        std::size_t executes = 0;
        for (std::size_t i = 0; i < chain.cells(); ++i) {
            const ProgramSymbol p = chain.initial.program[i];
            if (p == ProgramSymbol::Execute) {
                ++executes;
            } else {
                EXPECT_FALSE(is_control(p)) << text << " cell " << i;
            }
            const DataCell& d = chain.initial.data[i];
            const bool fence_slot = (i + w - origin % w) % w == 0;
            if (fence_slot) {
                EXPECT_EQ(d, DataCell(DataSymbol::Fence));
            } else if (i > origin && i <= origin + circuit.width()) {
                EXPECT_EQ(d, DataCell(RegisterSlot{i - origin - 1}));
            } else {
                EXPECT_EQ(d, DataCell(DataSymbol::Dot));
            }
        }
        EXPECT_EQ(executes, 1u);
        EXPECT_EQ(chain.initial.program[origin], ProgramSymbol::A);
        EXPECT_EQ(chain.initial.program[origin + 1], ProgramSymbol::Execute);
        const std::size_t layers = chain.total_layers();
        EXPECT_EQ(chain.cells(), (layers + 1) * w + layers * w + 1 + w);
    }
}

TEST(Compiler, DecodeRecoversExtendedProgram) {
    for (const char* text : {kTwoLayer, kEmpty, kCoin, kThree, kFour}) {
        const CompiledChain chain = pad_for_coprimality(parse_circuit(text));
        const auto decoded = decode_program(chain.initial, chain.width());
        ASSERT_EQ(decoded.size(), chain.program.layers.size()) << text;
        for (std::size_t l = 0; l < decoded.size(); ++l) {
            EXPECT_EQ(canonical(decoded[l]), canonical(chain.program.layers[l])) << text << " layer " << l;
        }
    }
}

TEST(Compiler, ClockLengthRegressionAndIdleGrowth) {
    const Circuit two_layer = parse_circuit(kTwoLayer);
    const std::vector<std::pair<std::size_t, std::size_t>> expected{{168, 252}, {204, 408}, {240, 600},
                                                                     {276, 828}, {312, 1092}, {348, 1392}};
    for (std::size_t k = 0; k < expected.size(); ++k) {
        const CompiledChain chain = encode(two_layer, Padding{k, std::nullopt});
        EXPECT_EQ(chain.r_eff, expected[k].first) << "k=" << k;
        EXPECT_EQ(chain.s_eff, expected[k].second) << "k=" << k;
        if (k > 0) {
            EXPECT_GT(chain.s_eff, expected[k - 1].second);
            EXPECT_EQ(chain.r_eff, expected[k - 1].first + 36);
        }
    }
    const Circuit empty = parse_circuit(kEmpty);
    const std::vector<std::pair<std::size_t, std::size_t>> empty_expected{{31, 63}, {39, 119}, {47, 191}, {55, 279}};
    for (std::size_t k = 0; k < empty_expected.size(); ++k) {
        const CompiledChain chain = encode(empty, Padding{k, std::nullopt});
        EXPECT_EQ(chain.r_eff, empty_expected[k].first);
        EXPECT_EQ(chain.s_eff, empty_expected[k].second);
    }
    const CompiledChain coin = encode(parse_circuit(kCoin));
    EXPECT_EQ(coin.r_eff, 66u);
    EXPECT_EQ(coin.s_eff, 132u);
}

TEST(Compiler, AnnihilationSlotShiftsYesClockByOne) {
    const Circuit two_layer = parse_circuit(kTwoLayer);
    const CompiledChain right = encode(two_layer, Padding{0, 1});
    const CompiledChain left = encode(two_layer, Padding{0, 0});
    EXPECT_EQ(left.r_eff, right.r_eff);
    EXPECT_EQ(left.s_eff + 1, right.s_eff);
}

TEST(Compiler, ClockLengthsMatchIndependentRewriter) {
    for (const char* text : {kTwoLayer, kEmpty, kCoin, kTwoLayerFirst, kThree, kFour}) {
        for (std::size_t k = 0; k < 3; ++k) {
            const CompiledChain chain = encode(parse_circuit(text), Padding{k, std::nullopt});
            const ClockCount c = rewrite_clock(program_tokens(chain.initial), data_tokens(chain.initial));
            EXPECT_EQ(c.readout, chain.r_eff) << text << " k=" << k;
            EXPECT_EQ(c.annihilate, chain.s_eff) << text << " k=" << k;
        }
    }
}

TEST(Compiler, PaddingFindsCoprimeClockLengths) {
    std::vector<PaddingAttempt> attempts;
    const CompiledChain two_layer = pad_for_coprimality(parse_circuit(kTwoLayer), {}, &attempts);
    ASSERT_EQ(attempts.size(), 2u);
    EXPECT_EQ(attempts[0].gcd, 2u);
    EXPECT_EQ(two_layer.idle_layers(), 0u);
    EXPECT_EQ(two_layer.program.annihilate_qubit, 0u);
    EXPECT_EQ(two_layer.r_eff, 168u);
    EXPECT_EQ(two_layer.s_eff, 251u);
    EXPECT_EQ(program_code(two_layer.initial), "A EX W I I S I I R I A I I");

    for (const char* text : {kTwoLayer, kEmpty, kCoin, kTwoLayerFirst, kThree, kFour}) {
        const Circuit circuit = parse_circuit(text);
        std::vector<PaddingAttempt> tried;
        const CompiledChain chain = pad_for_coprimality(circuit, {}, &tried);
        EXPECT_EQ(std::gcd(chain.r_eff + 2, chain.s_eff + 2), 1u) << text;
        EXPECT_LE(chain.idle_layers(), idle_search_bound(circuit));
        EXPECT_EQ(tried.back().gcd, 1u);
        for (std::size_t i = 0; i + 1 < tried.size(); ++i) {
            EXPECT_GT(tried[i].gcd, 1u);
        }
    }
}

TEST(Compiler, ChainLengthLimit) {
    CompileOptions options;
    options.max_cells = 20;
    EXPECT_THROW(encode(parse_circuit(kTwoLayer), Padding{}, options), LimitExceededError);
    EXPECT_THROW(pad_for_coprimality(parse_circuit(kTwoLayer), options), LimitExceededError);
}

TEST(Compiler, BandDumpRoundTrip) {
    const CompiledChain chain = encode(parse_circuit(kThree));
    EXPECT_EQ(parse_band_dump(band_dump(chain.initial)), chain.initial);
}
