#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qca/spectral.hpp"

namespace qca {

struct Eigensystem {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXcd vectors;  // columns
};

/// Dense Hermitian eigendecomposition. Takes the real symmetric path when
/// every entry is real.
Eigensystem hermitian_eigensystem(const Eigen::MatrixXcd& h);

/// Eigenvalues of h paired with |<v|psi>|^2.
std::vector<WeightedPoint> spectral_weights(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi);

/// max |h - h^dagger| entrywise.
double hermiticity_error(const Eigen::MatrixXcd& h);

/// Sorts by value, drops weights below `floor` and merges values closer
/// than `merge` (weighted mean of the merged values).
std::vector<WeightedPoint> consolidate(std::vector<WeightedPoint> points, double floor, double merge);

}  // namespace qca
