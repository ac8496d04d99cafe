#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "qca/chain.hpp"
#include "qca/spectral.hpp"

namespace qca {

/// Where the unreliable epsilon-fraction of outcomes goes. Uniform spreads it
/// over [-2-delta, 2+delta]; Adversarial puts it in the wrong decision region
/// for the drawn atom (needs a partition).
enum class Fallback { Uniform, Adversarial };

std::string_view fallback_name(Fallback f) noexcept;
Fallback parse_fallback(std::string_view name);

struct MeasurementModel {
    double delta = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    Fallback fallback = Fallback::Uniform;
};

void validate(const MeasurementModel& model);

/// splitmix64 of root + index: independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept;

/// Uniform double in [0, 1) from the top 53 bits.
double unit_uniform(std::mt19937_64& rng) noexcept;

struct Sample {
    double value = 0.0;
    Branch atom_branch = Branch::No;  // branch of the atom drawn (also for fallback draws)
    bool fallback = false;
};

Sample sample(const SpectralMeasure& measure, const MeasurementModel& model, std::mt19937_64& rng,
              const DecisionPartition* partition = nullptr);

struct DecisionOutcome {
    double value = 0.0;
    Branch verdict = Branch::No;
    Branch atom_branch = Branch::No;
    bool fallback = false;
};

/// Refuses a model whose delta exceeds the partition's delta.
DecisionOutcome decide(const DecisionPartition& partition, const SpectralMeasure& measure,
                       const MeasurementModel& model, std::mt19937_64& rng);

/// One single-shot decision on the predicted measure of the chain.
DecisionOutcome decide(const CompiledChain& chain, double p, const MeasurementModel& model);

/// Tags oracle atoms with the branch whose spectrum they sit on.
SpectralMeasure tag_branches(const std::vector<WeightedPoint>& points, std::size_t r_eff, std::size_t s_eff,
                             double tolerance = 1e-7);

struct DecisionStatistics {
    std::size_t trials = 0;
    std::size_t yes_count = 0;
    std::size_t no_count = 0;
    std::size_t misclassified = 0;  // non-fallback draws whose verdict differs from the atom branch
    double yes_rate = 0.0;
    double no_rate = 0.0;
    double p = 0.0;
    double gap = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;
    double y_mass = 0.0;         // fraction of the uniform fallback range covered by Y
    double expected_yes = 0.0;   // p(1-eps) + eps*y_mass (uniform) or + eps*(1-p) (adversarial)
    double sigma = 0.0;          // binomial standard deviation of yes_rate around expected_yes
    double bound_yes = 0.0;      // p(1-eps) - 3 sigma
    double bound_no = 0.0;       // (1-p)(1-eps) - 3 sigma
    bool pass = false;
};

/// `trials` independent single-shot decisions; trial k uses derive_seed(seed, k).
DecisionStatistics decision_statistics(const DecisionPartition& partition, const SpectralMeasure& measure, double p,
                                       const MeasurementModel& model, std::size_t trials);
DecisionStatistics decision_statistics(const CompiledChain& chain, double p, const MeasurementModel& model,
                                       std::size_t trials);

struct ComplianceReport {
    std::size_t draws = 0;
    std::size_t intervals = 0;
    std::size_t violations = 0;
    double worst_sigma = 0.0;  // most negative (empirical - required) / sigma seen
    bool pass = false;
};

/// Empirical check of Pr(outcome in [a-delta, b+delta]) >= (1-eps) mu([a,b])
/// over dyadic subintervals of [-2, 2] no narrower than delta (at most
/// `max_level` halvings) and the point intervals of every atom.
ComplianceReport interval_compliance(const SpectralMeasure& measure, const MeasurementModel& model,
                                        std::size_t draws, double slack_sigmas = 5.0, std::size_t max_level = 12,
                                        const DecisionPartition* partition = nullptr);

}  // namespace qca
