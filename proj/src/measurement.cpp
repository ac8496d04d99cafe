#include "qca/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qca/error.hpp"

namespace qca {

namespace {

constexpr double kRange = 2.0;

double nearest_yes_center(const DecisionPartition& partition, double x) {
    double center = x;
    auto it = std::lower_bound(partition.yes.begin(), partition.yes.end(), x,
                               [](const Interval& i, double v) { return i.hi < v; });
    double best = INFINITY;
    for (auto cand : {it, it == partition.yes.begin() ? it : std::prev(it)}) {
        if (cand == partition.yes.end()) {
            continue;
        }
        const double c = 0.5 * (cand->lo + cand->hi);
        if (std::abs(c - x) < best) {
            best = std::abs(c - x);
            center = c;
        }
    }
    return center;
}

}  // namespace

std::string_view fallback_name(Fallback f) noexcept { return f == Fallback::Uniform ? "uniform" : "adversarial"; }

Fallback parse_fallback(std::string_view name) {
    if (name == "uniform") {
        return Fallback::Uniform;
    }
    if (name == "adversarial") {
        return Fallback::Adversarial;
    }
    throw ValidationError("unknown fallback '" + std::string(name) + "' (expected uniform or adversarial)");
}

void validate(const MeasurementModel& model) {
    if (!(model.delta >= 0.0) || !std::isfinite(model.delta)) {
        throw ValidationError("delta must be a finite non-negative number");
    }
    if (!(model.epsilon >= 0.0 && model.epsilon < 1.0)) {
        throw ValidationError("epsilon must lie in [0, 1)");
    }
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
    std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double unit_uniform(std::mt19937_64& rng) noexcept { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Sample sample(const SpectralMeasure& measure, const MeasurementModel& model, std::mt19937_64& rng,
              const DecisionPartition* partition) {
    validate(model);
    if (measure.atoms.empty() || std::abs(measure.total_weight() - 1.0) > 1e-9) {
        throw ValidationError("measure is not normalised");
    }
    if (model.fallback == Fallback::Adversarial && partition == nullptr) {
        throw ValidationError("adversarial fallback needs a decision partition");
    }
    // All three numbers are always drawn so the stream layout does not depend on the outcome.
    const double u_fallback = unit_uniform(rng);
    const double u_atom = unit_uniform(rng);
    const double u_noise = unit_uniform(rng);

    double acc = 0.0;
    const SpectralAtom* atom = &measure.atoms.back();
    const double target = u_atom * measure.total_weight();
    for (const auto& a : measure.atoms) {
        acc += a.weight;
        if (target < acc) {
            atom = &a;
            break;
        }
    }
    Sample out;
    out.atom_branch = atom->branch;
    if (u_fallback < model.epsilon) {
        out.fallback = true;
        if (model.fallback == Fallback::Uniform) {
            const double lo = -kRange - model.delta;
            out.value = lo + u_noise * 2.0 * (kRange + model.delta);
        } else if (atom->branch == Branch::Yes) {
            out.value = kRange + model.delta;
        } else {
            out.value = nearest_yes_center(*partition, atom->value);
        }
        return out;
    }
    out.value = atom->value + (2.0 * u_noise - 1.0) * model.delta;
    return out;
}

DecisionOutcome decide(const DecisionPartition& partition, const SpectralMeasure& measure,
                       const MeasurementModel& model, std::mt19937_64& rng) {
    if (model.delta > partition.delta * (1.0 + 1e-12)) {
        throw ValidationError("measurement error delta = " + std::to_string(model.delta) +
                              " exceeds the required accuracy Delta/3 = " + std::to_string(partition.delta));
    }
    const Sample s = sample(measure, model, rng, &partition);
    DecisionOutcome out;
    out.value = s.value;
    out.atom_branch = s.atom_branch;
    out.fallback = s.fallback;
    out.verdict = partition.contains(s.value) ? Branch::Yes : Branch::No;
    return out;
}

DecisionOutcome decide(const CompiledChain& chain, double p, const MeasurementModel& model) {
    const DecisionPartition partition = decision_partition(chain.r_eff, chain.s_eff);
    std::mt19937_64 rng(model.seed);
    return decide(partition, predicted_measure(chain.r_eff, chain.s_eff, p), model, rng);
}

SpectralMeasure tag_branches(const std::vector<WeightedPoint>& points, std::size_t r_eff, std::size_t s_eff,
                             double tolerance) {
    const auto yes = line_graph_spectrum(s_eff + 1);
    const auto no = line_graph_spectrum(r_eff + 1);
    auto distance = [](const std::vector<double>& values, double x) {
        double best = INFINITY;
        for (double v : values) {
            best = std::min(best, std::abs(v - x));
        }
        return best;
    };
    SpectralMeasure out;
    for (const auto& p : points) {
        const double dy = distance(yes.eigenvalues, p.value);
        const double dn = distance(no.eigenvalues, p.value);
        if (std::min(dy, dn) > tolerance) {
            throw ValidationError("atom at " + std::to_string(p.value) + " lies on neither line-graph spectrum");
        }
        out.atoms.push_back({p.value, p.weight, dy <= dn ? Branch::Yes : Branch::No});
    }
    return out;
}

DecisionStatistics decision_statistics(const DecisionPartition& partition, const SpectralMeasure& measure, double p,
                                       const MeasurementModel& model, std::size_t trials) {
    if (trials == 0) {
        throw ValidationError("trials must be positive");
    }
    DecisionStatistics st;
    st.trials = trials;
    st.p = p;
    st.gap = partition.gap;
    st.delta = model.delta;
    st.epsilon = model.epsilon;
    for (std::size_t k = 0; k < trials; ++k) {
        std::mt19937_64 rng(derive_seed(model.seed, k));
        const DecisionOutcome o = decide(partition, measure, model, rng);
        if (o.verdict == Branch::Yes) {
            ++st.yes_count;
        } else {
            ++st.no_count;
        }
        if (!o.fallback && o.verdict != o.atom_branch) {
            ++st.misclassified;
        }
    }
    const double n = static_cast<double>(trials);
    st.yes_rate = static_cast<double>(st.yes_count) / n;
    st.no_rate = static_cast<double>(st.no_count) / n;
    st.y_mass = partition.length() / (2.0 * (kRange + model.delta));
    const double q_yes = p * (1.0 - model.epsilon);
    const double q_no = (1.0 - p) * (1.0 - model.epsilon);
    // the uniform fallback hits Y with probability y_mass; the adversarial one sends every NO atom into Y
    st.expected_yes = q_yes + model.epsilon * (model.fallback == Fallback::Uniform ? st.y_mass : 1.0 - p);
    st.sigma = std::sqrt(st.expected_yes * (1.0 - st.expected_yes) / n);
    st.bound_yes = q_yes - 3.0 * std::sqrt(q_yes * (1.0 - q_yes) / n);
    st.bound_no = q_no - 3.0 * std::sqrt(q_no * (1.0 - q_no) / n);
    st.pass = st.yes_rate >= st.bound_yes && st.no_rate >= st.bound_no;
    return st;
}

DecisionStatistics decision_statistics(const CompiledChain& chain, double p, const MeasurementModel& model,
                                       std::size_t trials) {
    const DecisionPartition partition = decision_partition(chain.r_eff, chain.s_eff);
    return decision_statistics(partition, predicted_measure(chain.r_eff, chain.s_eff, p), p, model, trials);
}

ComplianceReport interval_compliance(const SpectralMeasure& measure, const MeasurementModel& model,
                                        std::size_t draws, double slack_sigmas, std::size_t max_level,
                                        const DecisionPartition* partition) {
    if (draws == 0) {
        throw ValidationError("draws must be positive");
    }
    std::vector<double> values;
    values.reserve(draws);
    for (std::size_t k = 0; k < draws; ++k) {
        std::mt19937_64 rng(derive_seed(model.seed, k));
        values.push_back(sample(measure, model, rng, partition).value);
    }
    std::sort(values.begin(), values.end());

    std::vector<Interval> intervals;
    for (std::size_t level = 0; level <= max_level; ++level) {
        const std::size_t count = std::size_t{1} << level;
        const double width = 2.0 * kRange / static_cast<double>(count);
        if (width < model.delta) {
            break;
        }
        for (std::size_t i = 0; i < count; ++i) {
            intervals.push_back({-kRange + width * static_cast<double>(i), -kRange + width * static_cast<double>(i + 1)});
        }
    }
    for (const auto& a : measure.atoms) {
        intervals.push_back({a.value, a.value});
    }

    ComplianceReport report;
    report.draws = draws;
    report.intervals = intervals.size();
    report.worst_sigma = INFINITY;
    const double n = static_cast<double>(draws);
    for (const auto& iv : intervals) {
        double mass = 0.0;
        for (const auto& a : measure.atoms) {
            if (a.value >= iv.lo && a.value <= iv.hi) {
                mass += a.weight;
            }
        }
        const double required = (1.0 - model.epsilon) * mass;
        if (required <= 0.0) {
            continue;
        }
        const auto lo = std::lower_bound(values.begin(), values.end(), iv.lo - model.delta);
        const auto hi = std::upper_bound(values.begin(), values.end(), iv.hi + model.delta);
        const double empirical = static_cast<double>(hi - lo) / n;
        const double sigma = std::sqrt(std::max(required * (1.0 - required), 1.0 / n) / n);
        const double z = (empirical - required) / sigma;
        report.worst_sigma = std::min(report.worst_sigma, z);
        if (z < -slack_sigmas) {
            ++report.violations;
        }
    }
    report.pass = report.violations == 0;
    return report;
}

}  // namespace qca
