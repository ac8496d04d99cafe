#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qca/chain.hpp"
#include "qca/circuit.hpp"
#include "qca/spectral.hpp"

namespace qca {

/// One cell of the 56-level chain: program symbol * 4 + data symbol.
using CellCode = std::uint8_t;

constexpr CellCode cell_code(ProgramSymbol p, DataSymbol d) noexcept {
    return static_cast<CellCode>(static_cast<unsigned>(p) * kDataAlphabet + static_cast<unsigned>(d));
}
constexpr ProgramSymbol program_of(CellCode c) noexcept { return static_cast<ProgramSymbol>(c / kDataAlphabet); }
constexpr DataSymbol data_of(CellCode c) noexcept { return static_cast<DataSymbol>(c % kDataAlphabet); }

using BasisConfig = std::vector<CellCode>;

struct PairImage {
    std::uint16_t pair = 0;  // left * 56 + right
    Amplitude amplitude;
};

/// The two-cell operator V = T X as a sparse 3136 x 3136 table, together
/// with its adjoint. Every position of the chain uses this one table.
class TwoCellOperator {
public:
    static const TwoCellOperator& instance();

    std::span<const PairImage> forward(CellCode left, CellCode right) const;
    std::span<const PairImage> adjoint(CellCode left, CellCode right) const;
    std::size_t nonzeros() const noexcept;

private:
    TwoCellOperator();
    std::vector<std::vector<PairImage>> forward_;
    std::vector<std::vector<PairImage>> adjoint_;
};

struct OracleOptions {
    std::size_t closure_cap = 20000;
    std::size_t dense_cap = 4000;
};

struct MatrixEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    Amplitude value;
};

/// H = sum_j E_j(V + V^dagger) restricted to the span of the basis
/// configurations reachable from the initial one (basis[0]).
struct RestrictedHamiltonian {
    std::vector<BasisConfig> basis;
    std::vector<MatrixEntry> entries;  // sorted by (col, row), duplicates summed

    std::size_t dim() const noexcept { return basis.size(); }
    Eigen::MatrixXcd dense() const;
    double hermiticity_error() const;
    std::size_t max_column_support() const;
};

/// Basis configuration of a compiled chain with register cells set to |x, 0>.
BasisConfig basis_config(const CompiledChain& chain, const InputBits& input);

RestrictedHamiltonian build_restricted(const BasisConfig& initial, const OracleOptions& options = {});
RestrictedHamiltonian build_restricted(const CompiledChain& chain, const InputBits& input,
                                       const OracleOptions& options = {});

inline constexpr double kWeightFloor = 1e-14;
inline constexpr double kDegeneracyMerge = 1e-9;

/// Spectral measure of H on basis vector `index`.
std::vector<WeightedPoint> induced_measure(const RestrictedHamiltonian& h, std::size_t index = 0,
                                           const OracleOptions& options = {});

struct VerificationReport {
    std::size_t r_eff = 0;
    std::size_t s_eff = 0;
    double p_simulator = 0.0;
    double p_engine = 0.0;
    std::size_t dim = 0;
    double hermiticity_error = 0.0;
    double diagonal_entry = 0.0;  // <psi|H|psi>
    double tv_distance = 0.0;
    bool pass = false;
    std::vector<WeightedPoint> induced;
    SpectralMeasure predicted;
};

inline constexpr double kAtomMatchTolerance = 1e-7;
inline constexpr double kVerifyThreshold = 1e-6;

VerificationReport verify_lemma1(const CompiledChain& chain, const InputBits& input, const OracleOptions& options = {});

/// Coordinate triples "row col re im" and one legend line per basis vector.
void write_matrix(std::ostream& triples, std::ostream& legend, const RestrictedHamiltonian& h);

std::string basis_label(const BasisConfig& config);

}  // namespace qca
