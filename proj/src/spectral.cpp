#include "qca/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "qca/error.hpp"

namespace qca {

LineGraphSpectrum line_graph_spectrum(std::size_t length) {
    if (length == 0) {
        throw ValidationError("line graph needs at least one vertex");
    }
    LineGraphSpectrum out;
    out.length = length;
    out.eigenvalues.reserve(length);
    out.weights.reserve(length);
    const double n = static_cast<double>(length + 1);
    for (std::size_t v = 0; v < length; ++v) {
        const double theta = std::numbers::pi * static_cast<double>(v + 1) / n;
        const double s = std::sin(theta);
        out.eigenvalues.push_back(2.0 * std::cos(theta));
        out.weights.push_back(2.0 / n * s * s);
    }
    return out;
}

double SpectralMeasure::total_weight() const noexcept {
    double total = 0.0;
    for (const auto& a : atoms) {
        total += a.weight;
    }
    return total;
}

std::vector<WeightedPoint> SpectralMeasure::points() const {
    std::vector<WeightedPoint> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) {
        out.push_back({a.value, a.weight});
    }
    return out;
}

SpectralMeasure predicted_measure(std::size_t r_eff, std::size_t s_eff, double p) {
    if (r_eff >= s_eff) {
        throw ValidationError("predicted measure needs r < s, got r=" + std::to_string(r_eff) +
                              " s=" + std::to_string(s_eff));
    }
    if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
        throw ValidationError("acceptance probability outside [0,1]");
    }
    p = std::clamp(p, 0.0, 1.0);
    SpectralMeasure out;
    auto add = [&](std::size_t length, double scale, Branch branch) {
        if (scale <= 0.0) {
            return;
        }
        const auto spec = line_graph_spectrum(length);
        for (std::size_t v = 0; v < length; ++v) {
            out.atoms.push_back({spec.eigenvalues[v], scale * spec.weights[v], branch});
        }
    };
    add(r_eff + 1, 1.0 - p, Branch::No);
    add(s_eff + 1, p, Branch::Yes);
    return out;
}

double cosine_distance(std::size_t a, std::size_t n, std::size_t b, std::size_t k) {
    if (a * k == b * n) {
        return 0.0;
    }
    const double x = std::numbers::pi * static_cast<double>(a) / static_cast<double>(n);
    const double y = std::numbers::pi * static_cast<double>(b) / static_cast<double>(k);
    // 2cos x - 2cos y = -4 sin((x+y)/2) sin((x-y)/2), without cancellation
    return std::abs(4.0 * std::sin(0.5 * (x + y)) * std::sin(0.5 * (x - y)));
}

SpectralGap spectral_gap(std::size_t r_eff, std::size_t s_eff) {
    const double rn = static_cast<double>(r_eff + 2);
    const double sn = static_cast<double>(s_eff + 2);
    SpectralGap out;
    out.gap = std::numbers::pi * std::numbers::pi / (2.0 * rn * rn * sn * sn);
    out.gcd = std::gcd(r_eff + 2, s_eff + 2);
    out.coprime = out.gcd == 1;
    out.exact_min = INFINITY;
    for (std::size_t v = 1; v <= r_eff + 1; ++v) {
        for (std::size_t w = 1; w <= s_eff + 1; ++w) {
            out.exact_min = std::min(out.exact_min, cosine_distance(v, r_eff + 2, w, s_eff + 2));
        }
    }
    return out;
}

bool DecisionPartition::contains(double x) const noexcept {
    auto it = std::lower_bound(yes.begin(), yes.end(), x, [](const Interval& i, double v) { return i.hi < v; });
    return it != yes.end() && it->lo <= x;
}

double DecisionPartition::distance(double x) const noexcept {
    auto it = std::lower_bound(yes.begin(), yes.end(), x, [](const Interval& i, double v) { return i.hi < v; });
    double best = INFINITY;
    if (it != yes.end()) {
        best = std::max(0.0, it->lo - x);
    }
    if (it != yes.begin()) {
        best = std::min(best, x - std::prev(it)->hi);
    }
    return best;
}

double DecisionPartition::length() const noexcept {
    double total = 0.0;
    for (const auto& i : yes) {
        total += i.hi - i.lo;
    }
    return total;
}

DecisionPartition decision_partition(std::size_t r_eff, std::size_t s_eff) {
    const std::size_t g = std::gcd(r_eff + 2, s_eff + 2);
    if (g != 1) {
        throw ValidationError("decision partition needs coprime r+2 and s+2, gcd(" + std::to_string(r_eff + 2) + ", " +
                              std::to_string(s_eff + 2) + ") = " + std::to_string(g));
    }
    DecisionPartition out;
    out.r_eff = r_eff;
    out.s_eff = s_eff;
    out.gap = spectral_gap(r_eff, s_eff).gap;
    out.delta = out.gap / 3.0;
    const auto yes = line_graph_spectrum(s_eff + 1);
    out.yes.reserve(yes.length);
    for (auto it = yes.eigenvalues.rbegin(); it != yes.eigenvalues.rend(); ++it) {
        out.yes.push_back({*it - out.delta, *it + out.delta});
    }
    return out;
}

double tv_distance(const std::vector<WeightedPoint>& a, const std::vector<WeightedPoint>& b, double tolerance) {
    struct Tagged {
        double value;
        double signed_weight;
    };
    std::vector<Tagged> all;
    all.reserve(a.size() + b.size());
    for (const auto& p : a) {
        all.push_back({p.value, p.weight});
    }
    for (const auto& p : b) {
        all.push_back({p.value, -p.weight});
    }
    std::sort(all.begin(), all.end(), [](const Tagged& x, const Tagged& y) { return x.value < y.value; });
    double total = 0.0;
    double cluster = 0.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (i > 0 && all[i].value - all[i - 1].value > tolerance) {
            total += std::abs(cluster);
            cluster = 0.0;
        }
        cluster += all[i].signed_weight;
    }
    total += std::abs(cluster);
    return 0.5 * total;
}

}  // namespace qca
