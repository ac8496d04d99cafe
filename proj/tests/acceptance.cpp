// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/core.h>

#include "qca/circuit.hpp"
#include "qca/compiler.hpp"
#include "qca/engine.hpp"
#include "qca/measurement.hpp"
#include "qca/oracle.hpp"
#include "qca/spectral.hpp"

using namespace qca;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct TestChain {
    std::string file;
    InputBits x;
};

Circuit circuit_of(const std::string& file) { return load_circuit(std::string(QCA_TEST_DATA) + "/" + file); }

const std::vector<TestChain> kChains{
    {"two_layer.qc", {1}},         {"two_layer.qc", {0}},     {"two_layer_answer0.qc", {1}},
    {"wcoin.qc", {1}},             {"wcoin.qc", {0}},         {"empty.qc", {1}},
    {"empty.qc", {0}},             {"four_layer.qc", {1, 0}}, {"four_layer.qc", {1, 1}},
    {"three_qubit.qc", {1, 1}},
};

const std::vector<std::string> kCircuits{"two_layer.qc", "two_layer_answer0.qc", "wcoin.qc",
                                         "empty.qc",     "four_layer.qc",        "three_qubit.qc"};

Verdict closed_form_spectrum() {
    double worst_value = 0.0;
    double worst_weight = 0.0;
    double worst_total = 0.0;
    for (std::size_t len = 1; len <= 200; ++len) {
        const auto n = static_cast<Eigen::Index>(len);
        Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i + 1 < n; ++i) {
            adj(i, i + 1) = adj(i + 1, i) = 1.0;
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(adj);
        const LineGraphSpectrum spec = line_graph_spectrum(len);
        double total = 0.0;
        for (std::size_t v = 0; v < len; ++v) {
            const auto k = static_cast<Eigen::Index>(len - 1 - v);
            const double first = solver.eigenvectors()(0, k);
            worst_value = std::max(worst_value, std::abs(spec.eigenvalues[v] - solver.eigenvalues()[k]));
            worst_weight = std::max(worst_weight, std::abs(spec.weights[v] - first * first));
            total += spec.weights[v];
        }
        worst_total = std::max(worst_total, std::abs(total - 1.0));
    }
    return {worst_value <= 1e-10 && worst_weight <= 1e-10 && worst_total <= 1e-12,
            fmt::format("max |dlambda|={:.2e} max |dw|={:.2e} max |sum-1|={:.2e}", worst_value, worst_weight,
                        worst_total)};
}

Verdict gap_bound() {
    std::size_t pairs = 0;
    std::size_t exceptions = 0;
    double tightest = INFINITY;
    for (std::size_t r = 1; r <= 50; ++r) {
        for (std::size_t s = 1; s <= 50; ++s) {
            if (std::gcd(r + 2, s + 2) != 1) {
                continue;
            }
            ++pairs;
            // independent of spectral_gap: direct double loop over both spectra
            const auto a = line_graph_spectrum(r + 1).eigenvalues;
            const auto b = line_graph_spectrum(s + 1).eigenvalues;
            double best = INFINITY;
            for (double x : a) {
                for (double y : b) {
                    best = std::min(best, std::abs(x - y));
                }
            }
            const double bound = std::numbers::pi * std::numbers::pi /
                                 (2.0 * std::pow(static_cast<double>(r + 2), 2) * std::pow(static_cast<double>(s + 2), 2));
            tightest = std::min(tightest, best / bound);
            if (best < bound || spectral_gap(r, s).exact_min < bound) {
                ++exceptions;
            }
        }
    }
    return {exceptions == 0 && pairs > 0,
            fmt::format("{} coprime pairs, {} exceptions, min ratio exact/bound={:.3f}", pairs, exceptions, tightest)};
}

Verdict oracle_equivalence() {
    const std::vector<TestChain> cases{{"two_layer.qc", {0}},
                                       {"two_layer.qc", {1}},
                                       {"two_layer_answer0.qc", {1}},
                                       {"wcoin.qc", {1}},
                                       {"four_layer.qc", {1, 0}},
                                       {"four_layer.qc", {1, 1}}};
    bool pass = true;
    double worst_tv = 0.0;
    double worst_dp = 0.0;
    std::string dims;
    for (const auto& c : cases) {
        const Circuit circuit = circuit_of(c.file);
        if (circuit.width() != 2 || circuit.depth() > 4) {
            return {false, c.file + " is outside the stated circuit size"};
        }
        const CompiledChain chain = pad_for_coprimality(circuit);
        const VerificationReport rep = verify_lemma1(chain, c.x);
        const double dp = std::abs(rep.p_simulator - rep.p_engine);
        worst_tv = std::max(worst_tv, rep.tv_distance);
        worst_dp = std::max(worst_dp, dp);
        pass = pass && rep.tv_distance < 1e-6 && dp <= 1e-12 &&
               std::abs(rep.p_simulator - acceptance_probability(circuit, c.x)) <= 1e-15;
        dims += fmt::format("{}{}:{}", dims.empty() ? "" : " ", c.file.substr(0, c.file.size() - 3), rep.dim);
    }
    return {pass, fmt::format("{} chains, max tv={:.2e}, max |p_sim-p_eng|={:.1e}, dims [{}]", cases.size(), worst_tv,
                              worst_dp, dims)};
}

// Register after each layer of the extended program, readout renormalised.
std::vector<RegisterState> reference_layers(const CompiledChain& chain, const InputBits& x) {
    std::vector<RegisterState> out;
    RegisterState reg = initial_register(chain.width(), x);
    for (const Layer& layer : chain.program.layers) {
        const GateKind first = layer.gates.empty() ? GateKind::Identity : layer.gates.front().kind;
        if (first == GateKind::Annihilate) {
            break;
        }
        if (first == GateKind::Readout) {
            project_qubit(reg, layer.gates.front().target, 1);
            if (reg.norm() <= 1e-7) {
                break;
            }
            reg = normalized(reg);
        } else {
            reg = apply_layer(reg, layer);
        }
        out.push_back(reg);
    }
    return out;
}

Verdict circuit_equivalence() {
    double worst = 0.0;
    std::size_t cycles = 0;
    bool pass = true;
    for (const auto& c : kChains) {
        const CompiledChain chain = pad_for_coprimality(circuit_of(c.file));
        const auto sweeps = sweep_registers(chain, c.x);
        const auto reference = reference_layers(chain, c.x);
        if (sweeps.size() != reference.size()) {
            return {false, fmt::format("{} x={}: {} cycles vs {} layers", c.file, format_bits(c.x), sweeps.size(),
                                       reference.size())};
        }
        for (std::size_t k = 0; k < sweeps.size(); ++k) {
            const double d = distance(sweeps[k], reference[k]);
            worst = std::max(worst, d);
            pass = pass && d <= 1e-12;
        }
        cycles += sweeps.size();
    }
    return {pass, fmt::format("{} chains, {} cycles, max distance={:.2e}", kChains.size(), cycles, worst)};
}

Verdict reversibility() {
    std::size_t chains = 0;
    std::size_t states = 0;
    for (const auto& file : kCircuits) {
        const Circuit circuit = circuit_of(file);
        for (const CompiledChain& chain : {encode(circuit), pad_for_coprimality(circuit)}) {
            const WellFormedReport rep = validate_wellformed(chain);
            if (!rep.pass) {
                return {false, file + ": " + rep.diagnostic};
            }
            ++chains;
            states += rep.states_checked;
        }
    }
    return {true, fmt::format("{} chains, {} orbit states checked", chains, states)};
}

Verdict coprimality_search() {
    std::string detail;
    for (const auto& file : kCircuits) {
        const Circuit circuit = circuit_of(file);
        std::vector<PaddingAttempt> attempts;
        const CompiledChain chain = pad_for_coprimality(circuit, {}, &attempts);
        const std::size_t bound = idle_search_bound(circuit);
        if (std::gcd(chain.r_eff + 2, chain.s_eff + 2) != 1 || chain.idle_layers() > bound) {
            return {false, file + " not coprime within bound"};
        }
        detail += fmt::format("{}{}:({},{})k={}", detail.empty() ? "" : " ", file.substr(0, file.size() - 3),
                              chain.r_eff, chain.s_eff, chain.idle_layers());
    }
    return {true, detail};
}

Verdict monte_carlo() {
    constexpr std::size_t kRuns = 10000;
    const CompiledChain two = pad_for_coprimality(circuit_of("two_layer.qc"));
    const CompiledChain coin = pad_for_coprimality(circuit_of("wcoin.qc"));

    MeasurementModel model;
    model.epsilon = 0.05;
    model.seed = 20261016;

    model.delta = decision_partition(two.r_eff, two.s_eff).delta;
    const DecisionStatistics yes = decision_statistics(two, 1.0, model, kRuns);
    const DecisionStatistics no = decision_statistics(two, 0.0, model, kRuns);
    const double sigma_det = std::sqrt(0.95 * 0.05 / kRuns);
    const bool yes_ok = yes.yes_rate >= 0.95 - 3.0 * sigma_det;
    const bool no_ok = no.no_rate >= 0.95 - 3.0 * sigma_det;

    model.delta = decision_partition(coin.r_eff, coin.s_eff).delta;
    const DecisionStatistics half = decision_statistics(coin, 0.5, model, kRuns);
    const double target = 0.5 * (1.0 - model.epsilon) + 0.5 * model.epsilon * half.y_mass;
    const double sigma = std::sqrt(target * (1.0 - target) / kRuns);
    const bool half_ok = std::abs(half.yes_rate - target) <= 3.0 * sigma;

    return {yes_ok && no_ok && half_ok,
            fmt::format("YES frac={:.4f} NO frac={:.4f} (floor {:.4f}); coin YES frac={:.4f} target={:.4f} +/- {:.4f}",
                        yes.yes_rate, no.no_rate, 0.95 - 3.0 * sigma_det, half.yes_rate, target, 3.0 * sigma)};
}

Verdict measurement_compliance() {
    constexpr std::size_t kDraws = 100000;
    const CompiledChain coin = pad_for_coprimality(circuit_of("wcoin.qc"));
    const CompiledChain two = pad_for_coprimality(circuit_of("two_layer_answer0.qc"));
    const DecisionPartition coin_part = decision_partition(coin.r_eff, coin.s_eff);
    const DecisionPartition small_part = decision_partition(1, 2);
    const DecisionPartition two_part = decision_partition(two.r_eff, two.s_eff);

    struct Case {
        std::string name;
        SpectralMeasure measure;
        MeasurementModel model;
        const DecisionPartition* partition;
    };
    std::vector<Case> cases{
        {"coin", predicted_measure(coin.r_eff, coin.s_eff, 0.5), {coin_part.delta, 0.05, 1, Fallback::Uniform},
         &coin_part},
        {"small", predicted_measure(1, 2, 0.3), {small_part.delta, 0.2, 2, Fallback::Uniform}, &small_part},
        {"oracle", tag_branches(induced_measure(build_restricted(two, {1})), two.r_eff, two.s_eff),
         {two_part.delta, 0.1, 3, Fallback::Adversarial}, &two_part},
    };
    bool pass = true;
    std::string detail;
    for (const auto& c : cases) {
        const ComplianceReport rep = interval_compliance(c.measure, c.model, kDraws, 5.0, 12, c.partition);
        pass = pass && rep.pass;
        detail += fmt::format("{}{}: {} intervals, {} violations, worst z={:.2f}", detail.empty() ? "" : "; ", c.name,
                              rep.intervals, rep.violations, rep.worst_sigma);
    }
    return {pass, detail};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_seconds;  // 0: no limit
        std::function<Verdict()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "closed-form line-graph spectrum", 10.0, closed_form_spectrum},
        {2, "gap bound", 10.0, gap_bound},
        {3, "oracle measure equivalence", 60.0, oracle_equivalence},
        {4, "automaton vs circuit register", 0.0, circuit_equivalence},
        {5, "reversibility and uniqueness", 0.0, reversibility},
        {6, "coprimality search", 0.0, coprimality_search},
        {7, "single-shot decision statistics", 60.0, monte_carlo},
        {8, "measurement model compliance", 0.0, measurement_compliance},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0.0 && secs >= c.limit_seconds) {
            v.pass = false;
            v.detail += fmt::format(" (over the {:.0f} s limit)", c.limit_seconds);
        }
        failures += v.pass ? 0 : 1;
        fmt::print("criterion {}: {} [{}] {:.2f}s {}\n", c.id, v.pass ? "PASS" : "FAIL", c.name, secs, v.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
    return failures == 0 ? 0 : 1;
}
