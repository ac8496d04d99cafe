#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "qca/compiler.hpp"
#include "qca/error.hpp"
#include "qca/measurement.hpp"

using namespace qca;

namespace {

SpectralMeasure single_atom(double value) {
    SpectralMeasure m;
    m.atoms.push_back({value, 1.0, Branch::Yes});
    return m;
}

}  // namespace

TEST(Sample, ExactModelReturnsAtoms) {
    MeasurementModel model;
    std::mt19937_64 rng(1);
    const SpectralMeasure m = single_atom(0.75);
    for (int i = 0; i < 100; ++i) {
        const Sample s = sample(m, model, rng);
        EXPECT_EQ(s.value, 0.75);
        EXPECT_FALSE(s.fallback);
    }
}

TEST(Sample, NoiseStaysWithinDelta) {
    MeasurementModel model;
    model.delta = 0.01;
    std::mt19937_64 rng(2);
    const SpectralMeasure m = single_atom(-0.3);
    for (int i = 0; i < 10000; ++i) {
        const double v = sample(m, model, rng).value;
        EXPECT_LE(std::abs(v + 0.3), 0.01 + 1e-15);
    }
}

TEST(Sample, AtomFrequenciesMatchWeights) {
    SpectralMeasure m;
    m.atoms = {{1.0, 0.5, Branch::Yes}, {-1.0, 0.5, Branch::Yes}};
    MeasurementModel model;
    std::mt19937_64 rng(3);
    const int n = 100000;
    int plus = 0;
    for (int i = 0; i < n; ++i) {
        plus += sample(m, model, rng).value > 0.0 ? 1 : 0;
    }
    const double sigma = std::sqrt(0.25 / n);
    EXPECT_NEAR(static_cast<double>(plus) / n, 0.5, 5.0 * sigma);
}

TEST(Sample, FallbackFractionIsEpsilon) {
    MeasurementModel model;
    model.epsilon = 0.2;
    model.delta = 0.001;
    std::mt19937_64 rng(4);
    const SpectralMeasure m = single_atom(0.0);
    const int n = 100000;
    int fb = 0;
    for (int i = 0; i < n; ++i) {
        const Sample s = sample(m, model, rng);
        if (s.fallback) {
            ++fb;
            EXPECT_LE(std::abs(s.value), 2.0 + model.delta);
        }
    }
    EXPECT_NEAR(static_cast<double>(fb) / n, 0.2, 5.0 * std::sqrt(0.16 / n));
}

TEST(Sample, AdversarialNeedsPartition) {
    MeasurementModel model;
    model.epsilon = 0.1;
    model.fallback = Fallback::Adversarial;
    std::mt19937_64 rng(5);
    EXPECT_THROW(sample(single_atom(0.0), model, rng), ValidationError);
}

TEST(Model, Validation) {
    MeasurementModel model;
    EXPECT_NO_THROW(validate(model));
    model.delta = -1.0;
    EXPECT_THROW(validate(model), ValidationError);
    model.delta = 0.0;
    model.epsilon = 1.0;
    EXPECT_THROW(validate(model), ValidationError);
    model.epsilon = NAN;
    EXPECT_THROW(validate(model), ValidationError);
    EXPECT_EQ(parse_fallback("adversarial"), Fallback::Adversarial);
    EXPECT_EQ(fallback_name(Fallback::Uniform), "uniform");
    EXPECT_THROW(parse_fallback("nasty"), ValidationError);
}

TEST(Seeds, DerivedSeedsDifferAndUniformIsInRange) {
    EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
    EXPECT_NE(derive_seed(0, 1), derive_seed(1, 0));
    EXPECT_EQ(derive_seed(42, 7), derive_seed(42, 7));
    std::mt19937_64 rng(6);
    for (int i = 0; i < 10000; ++i) {
        const double u = unit_uniform(rng);
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Decide, DeterministicVerdicts) {
    const CompiledChain chain = pad_for_coprimality(parse_circuit("qubits 1 1\nlayer W 0\nlayer S 0\n"));
    const DecisionPartition part = decision_partition(chain.r_eff, chain.s_eff);
    MeasurementModel model;
    model.delta = part.delta;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        model.seed = seed;
        EXPECT_EQ(decide(chain, 1.0, model).verdict, Branch::Yes);
        EXPECT_EQ(decide(chain, 0.0, model).verdict, Branch::No);
    }
}

TEST(Decide, RefusesTooLargeDelta) {
    const DecisionPartition part = decision_partition(1, 2);
    MeasurementModel model;
    model.delta = part.delta * 1.01;
    std::mt19937_64 rng(0);
    EXPECT_THROW(decide(part, predicted_measure(1, 2, 0.5), model, rng), ValidationError);
    model.delta = part.delta;
    EXPECT_NO_THROW(decide(part, predicted_measure(1, 2, 0.5), model, rng));
}

TEST(Decide, Reproducible) {
    const CompiledChain chain = pad_for_coprimality(parse_circuit("qubits 1 1\nlayer W 0\n"));
    MeasurementModel model;
    model.delta = decision_partition(chain.r_eff, chain.s_eff).delta;
    model.epsilon = 0.05;
    model.seed = 1234;
    const DecisionStatistics a = decision_statistics(chain, 0.5, model, 2000);
    const DecisionStatistics b = decision_statistics(chain, 0.5, model, 2000);
    EXPECT_EQ(a.yes_count, b.yes_count);
    model.seed = 1235;
    const DecisionStatistics c = decision_statistics(chain, 0.5, model, 2000);
    EXPECT_NE(a.yes_count, c.yes_count);
}

TEST(Statistics, BalancedCircuitWithinBounds) {
    const CompiledChain chain = pad_for_coprimality(parse_circuit("qubits 1 1\nlayer W 0\n"));
    for (Fallback fb : {Fallback::Uniform, Fallback::Adversarial}) {
        MeasurementModel model;
        model.delta = decision_partition(chain.r_eff, chain.s_eff).delta;
        model.epsilon = 0.05;
        model.seed = 77;
        model.fallback = fb;
        const DecisionStatistics st = decision_statistics(chain, 0.5, model, 10000);
        EXPECT_TRUE(st.pass) << fallback_name(fb);
        EXPECT_EQ(st.misclassified, 0u);
        EXPECT_EQ(st.yes_count + st.no_count, st.trials);
        EXPECT_NEAR(st.yes_rate, st.expected_yes, 4.0 * st.sigma);
        EXPECT_GT(st.y_mass, 0.0);
        EXPECT_LT(st.y_mass, 1.0);
    }
}

TEST(Statistics, AdversarialFallbackFlipsVerdicts) {
    const CompiledChain chain = pad_for_coprimality(parse_circuit("qubits 1 1\nlayer W 0\nlayer S 0\n"));
    MeasurementModel model;
    model.delta = decision_partition(chain.r_eff, chain.s_eff).delta;
    model.epsilon = 0.3;
    model.fallback = Fallback::Adversarial;
    const DecisionStatistics yes = decision_statistics(chain, 1.0, model, 5000);
    EXPECT_NEAR(yes.no_rate, 0.3, 5.0 * std::sqrt(0.21 / 5000));
    EXPECT_NEAR(yes.expected_yes, 0.7, 1e-15);
    const DecisionStatistics no = decision_statistics(chain, 0.0, model, 5000);
    EXPECT_NEAR(no.yes_rate, 0.3, 5.0 * std::sqrt(0.21 / 5000));
}

TEST(TagBranches, AssignsEachAtom) {
    const SpectralMeasure m = predicted_measure(1, 2, 0.5);
    const SpectralMeasure tagged = tag_branches(m.points(), 1, 2);
    ASSERT_EQ(tagged.atoms.size(), m.atoms.size());
    for (std::size_t i = 0; i < m.atoms.size(); ++i) {
        EXPECT_EQ(tagged.atoms[i].branch, m.atoms[i].branch);
    }
    EXPECT_THROW(tag_branches({{0.5, 1.0}}, 1, 2), ValidationError);
}

TEST(Compliance, ModelMeetsMeasurementDefinition) {
    const CompiledChain chain = pad_for_coprimality(parse_circuit("qubits 1 1\nlayer W 0\n"));
    const DecisionPartition part = decision_partition(chain.r_eff, chain.s_eff);
    const SpectralMeasure m = predicted_measure(chain.r_eff, chain.s_eff, 0.5);
    for (Fallback fb : {Fallback::Uniform, Fallback::Adversarial}) {
        MeasurementModel model;
        model.delta = part.delta;
        model.epsilon = 0.1;
        model.seed = 5;
        model.fallback = fb;
        const ComplianceReport rep = interval_compliance(m, model, 50000, 5.0, 10, &part);
        EXPECT_TRUE(rep.pass) << fallback_name(fb) << " worst " << rep.worst_sigma;
        EXPECT_GT(rep.intervals, m.atoms.size());
    }
}
