#include "qca/eigensolver.hpp"

#include <algorithm>

#include "qca/error.hpp"

namespace qca {

namespace {

bool is_real(const Eigen::MatrixXcd& h) { return h.imag().cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

Eigensystem hermitian_eigensystem(const Eigen::MatrixXcd& h) {
    if (h.rows() != h.cols()) {
        throw ValidationError("eigensolver needs a square matrix");
    }
    Eigensystem out;
    if (h.rows() == 0) {
        return out;
    }
    if (is_real(h)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
        if (solver.info() != Eigen::Success) {
            throw Error("eigensolver did not converge");
        }
        out.values = solver.eigenvalues();
        out.vectors = solver.eigenvectors().cast<std::complex<double>>();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error("eigensolver did not converge");
    }
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    return out;
}

std::vector<WeightedPoint> spectral_weights(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi) {
    if (psi.size() != h.rows()) {
        throw ValidationError("state dimension does not match the matrix");
    }
    std::vector<WeightedPoint> out;
    if (h.rows() == 0) {
        return out;
    }
    if (is_real(h) && psi.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.real());
        if (solver.info() != Eigen::Success) {
            throw Error("eigensolver did not converge");
        }
        const Eigen::VectorXd overlaps = solver.eigenvectors().transpose() * psi.real();
        for (Eigen::Index k = 0; k < h.rows(); ++k) {
            out.push_back({solver.eigenvalues()[k], overlaps[k] * overlaps[k]});
        }
        return out;
    }
    const Eigensystem sys = hermitian_eigensystem(h);
    const Eigen::VectorXcd overlaps = sys.vectors.adjoint() * psi;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
        out.push_back({sys.values[k], std::norm(overlaps[k])});
    }
    return out;
}

double hermiticity_error(const Eigen::MatrixXcd& h) {
    if (h.size() == 0) {
        return 0.0;
    }
    return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<WeightedPoint> consolidate(std::vector<WeightedPoint> points, double floor, double merge) {
    std::sort(points.begin(), points.end(),
              [](const WeightedPoint& a, const WeightedPoint& b) { return a.value < b.value; });
    std::vector<WeightedPoint> out;
    double last = 0.0;
    for (const auto& p : points) {
        if (!out.empty() && p.value - last <= merge) {
            auto& back = out.back();
            const double total = back.weight + p.weight;
            if (total > 0.0) {
                back.value = (back.value * back.weight + p.value * p.weight) / total;
            }
            back.weight = total;
        } else {
            out.push_back(p);
        }
        last = p.value;
    }
    std::erase_if(out, [floor](const WeightedPoint& p) { return p.weight < floor; });
    return out;
}

}  // namespace qca
