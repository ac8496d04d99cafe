#pragma once

#include <cstddef>
#include <vector>

#include "qca/branch.hpp"

namespace qca {

/// Adjacency spectrum of the path graph on `length` vertices together with
/// the squared first components of the eigenvectors.
struct LineGraphSpectrum {
    std::size_t length = 0;
    std::vector<double> eigenvalues;  // strictly decreasing
    std::vector<double> weights;
};

LineGraphSpectrum line_graph_spectrum(std::size_t length);

struct WeightedPoint {
    double value = 0.0;
    double weight = 0.0;
};

struct SpectralAtom {
    double value = 0.0;
    double weight = 0.0;
    Branch branch = Branch::No;
};

struct SpectralMeasure {
    std::vector<SpectralAtom> atoms;

    double total_weight() const noexcept;
    std::vector<WeightedPoint> points() const;
};

/// (1-p) P_{r+1} on the NO branch plus p P_{s+1} on the YES branch. Atoms of
/// zero weight are left out.
SpectralMeasure predicted_measure(std::size_t r_eff, std::size_t s_eff, double p);

struct SpectralGap {
    double gap = 0.0;  // pi^2 / (2 (r+2)^2 (s+2)^2)
    bool coprime = false;
    std::size_t gcd = 0;
    double exact_min = 0.0;  // min |lambda_v - mu_w| over both spectra
};

SpectralGap spectral_gap(std::size_t r_eff, std::size_t s_eff);

/// |2cos(pi a / n) - 2cos(pi b / k)|, zero exactly when a/n == b/k.
double cosine_distance(std::size_t a, std::size_t n, std::size_t b, std::size_t k);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Y is the union of closed intervals of half-width delta around the YES
/// eigenvalues; N is its complement.
struct DecisionPartition {
    std::size_t r_eff = 0;
    std::size_t s_eff = 0;
    double gap = 0.0;
    double delta = 0.0;
    std::vector<Interval> yes;  // ascending, disjoint

    bool contains(double x) const noexcept;
    /// Distance from x to the closest Y interval (0 inside).
    double distance(double x) const noexcept;
    /// Lebesgue measure of Y.
    double length() const noexcept;
};

/// Requires gcd(r+2, s+2) == 1.
DecisionPartition decision_partition(std::size_t r_eff, std::size_t s_eff);

/// Total-variation distance after clustering values closer than `tolerance`.
double tv_distance(const std::vector<WeightedPoint>& a, const std::vector<WeightedPoint>& b, double tolerance);

}  // namespace qca
