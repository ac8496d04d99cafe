#include "qca/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>

#include <fmt/format.h>

#include "qca/eigensolver.hpp"
#include "qca/engine.hpp"
#include "qca/error.hpp"
#include "qca/rules.hpp"

namespace qca {

namespace {

constexpr std::size_t kPairs = kCellDimension * kCellDimension;

bool is_qubit(DataSymbol d) { return d == DataSymbol::Zero || d == DataSymbol::One; }

struct DataImage {
    DataSymbol left;
    DataSymbol right;
    Amplitude amplitude;
};

/// Action of X on the data pair below the program pair (pl, pr).
std::vector<DataImage> apply_x(ProgramSymbol pl, ProgramSymbol pr, DataSymbol dl, DataSymbol dr) {
    if (pl != ProgramSymbol::Execute) {
        return {{dl, dr, 1.0}};
    }
    switch (pr) {
        case ProgramSymbol::S:
        case ProgramSymbol::W: {
            if (!is_qubit(dl) || !is_qubit(dr)) {
                return {{dl, dr, 1.0}};
            }
            const Matrix4 m = pr == ProgramSymbol::S ? swap_matrix() : w_matrix();
            const std::size_t col = 2 * static_cast<std::size_t>(dl) + static_cast<std::size_t>(dr);
            std::vector<DataImage> out;
            for (std::size_t row = 0; row < 4; ++row) {
                if (m[row][col] != 0.0) {
                    out.push_back({static_cast<DataSymbol>(row / 2), static_cast<DataSymbol>(row % 2), m[row][col]});
                }
            }
            return out;
        }
        case ProgramSymbol::R:
            if (dr == DataSymbol::Zero) {
                return {};
            }
            return {{dl, dr, 1.0}};
        case ProgramSymbol::A:
            if (is_qubit(dr)) {
                return {};
            }
            return {{dl, dr, 1.0}};
        default:
            return {{dl, dr, 1.0}};
    }
}

std::uint16_t pair_index(CellCode l, CellCode r) {
    return static_cast<std::uint16_t>(static_cast<std::size_t>(l) * kCellDimension + r);
}

}  // namespace

TwoCellOperator::TwoCellOperator() : forward_(kPairs), adjoint_(kPairs) {
    std::map<std::pair<std::uint16_t, std::uint16_t>, Amplitude> v;  // (out, in) -> amplitude
    const auto rules = transition_rules();
    for (CellCode l = 0; l < kCellDimension; ++l) {
        for (CellCode r = 0; r < kCellDimension; ++r) {
            const ProgramSymbol pl = program_of(l);
            const ProgramSymbol pr = program_of(r);
            for (const DataImage& x : apply_x(pl, pr, data_of(l), data_of(r))) {
                // T = sum over rules of |rhs><lhs|, scanned directly from the rule list
                for (const TransitionRule& rule : rules) {
                    if (rule.lhs_left != pl || rule.lhs_right != pr ||
                        !condition_holds(rule.condition, classify(x.left), classify(x.right))) {
                        continue;
                    }
                    const auto out = pair_index(cell_code(rule.rhs_left, x.left), cell_code(rule.rhs_right, x.right));
                    v[{out, pair_index(l, r)}] += x.amplitude;
                }
            }
        }
    }
    for (const auto& [key, amp] : v) {
        if (amp == 0.0) {
            continue;
        }
        forward_[key.second].push_back({key.first, amp});
        adjoint_[key.first].push_back({key.second, std::conj(amp)});
    }
}

const TwoCellOperator& TwoCellOperator::instance() {
    static const TwoCellOperator op;
    return op;
}

std::span<const PairImage> TwoCellOperator::forward(CellCode left, CellCode right) const {
    return forward_[pair_index(left, right)];
}

std::span<const PairImage> TwoCellOperator::adjoint(CellCode left, CellCode right) const {
    return adjoint_[pair_index(left, right)];
}

std::size_t TwoCellOperator::nonzeros() const noexcept {
    std::size_t n = 0;
    for (const auto& col : forward_) {
        n += col.size();
    }
    return n;
}

Eigen::MatrixXcd RestrictedHamiltonian::dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
    for (const auto& e : entries) {
        m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
    }
    return m;
}

double RestrictedHamiltonian::hermiticity_error() const {
    std::map<std::pair<std::size_t, std::size_t>, Amplitude> lookup;
    for (const auto& e : entries) {
        lookup[{e.row, e.col}] += e.value;
    }
    double worst = 0.0;
    for (const auto& [key, value] : lookup) {
        auto it = lookup.find({key.second, key.first});
        const Amplitude mirror = it == lookup.end() ? Amplitude{} : std::conj(it->second);
        worst = std::max(worst, std::abs(value - mirror));
    }
    return worst;
}

std::size_t RestrictedHamiltonian::max_column_support() const {
    std::vector<std::size_t> count(dim(), 0);
    for (const auto& e : entries) {
        ++count[e.col];
    }
    return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

BasisConfig basis_config(const CompiledChain& chain, const InputBits& input) {
    const RegisterState reg = initial_register(chain.width(), input);
    std::size_t index = 0;
    for (std::size_t i = 0; i < reg.amplitudes().size(); ++i) {
        if (reg.amplitudes()[i] != Amplitude{}) {
            index = i;
        }
    }
    const std::size_t width = chain.width();
    BasisConfig out(chain.cells());
    for (std::size_t i = 0; i < chain.cells(); ++i) {
        const DataCell& cell = chain.initial.data[i];
        DataSymbol d;
        if (const auto* slot = std::get_if<RegisterSlot>(&cell)) {
            d = ((index >> (width - 1 - slot->qubit)) & 1u) != 0 ? DataSymbol::One : DataSymbol::Zero;
        } else {
            d = std::get<DataSymbol>(cell);
        }
        out[i] = cell_code(chain.initial.program[i], d);
    }
    return out;
}

RestrictedHamiltonian build_restricted(const BasisConfig& initial, const OracleOptions& options) {
    if (initial.size() < 2) {
        throw ValidationError("chain needs at least two cells");
    }
    for (CellCode c : initial) {
        if (c >= kCellDimension) {
            throw ValidationError("cell code out of range");
        }
    }
    const TwoCellOperator& v = TwoCellOperator::instance();
    RestrictedHamiltonian h;
    std::unordered_map<std::string, std::size_t> index;
    auto key = [](const BasisConfig& c) { return std::string(c.begin(), c.end()); };
    auto intern = [&](const BasisConfig& c) {
        auto [it, inserted] = index.try_emplace(key(c), h.basis.size());
        if (inserted) {
            if (h.basis.size() >= options.closure_cap) {
                throw LimitExceededError("reachable basis exceeds the closure cap of " +
                                         std::to_string(options.closure_cap));
            }
            h.basis.push_back(c);
        }
        return it->second;
    };
    intern(initial);
    for (std::size_t col = 0; col < h.basis.size(); ++col) {
        std::map<std::size_t, Amplitude> column;
        for (std::size_t j = 0; j + 1 < initial.size(); ++j) {
            for (auto images : {v.forward(h.basis[col][j], h.basis[col][j + 1]),
                                v.adjoint(h.basis[col][j], h.basis[col][j + 1])}) {
                for (const PairImage& img : images) {
                    BasisConfig next = h.basis[col];
                    next[j] = static_cast<CellCode>(img.pair / kCellDimension);
                    next[j + 1] = static_cast<CellCode>(img.pair % kCellDimension);
                    column[intern(next)] += img.amplitude;
                }
            }
        }
        for (const auto& [row, value] : column) {
            if (value != Amplitude{}) {
                h.entries.push_back({row, col, value});
            }
        }
    }
    const double err = h.hermiticity_error();
    if (err > 1e-12) {
        throw Error("restricted Hamiltonian is not Hermitian: max deviation " + fmt::format("{:.3e}", err));
    }
    return h;
}

RestrictedHamiltonian build_restricted(const CompiledChain& chain, const InputBits& input,
                                       const OracleOptions& options) {
    return build_restricted(basis_config(chain, input), options);
}

std::vector<WeightedPoint> induced_measure(const RestrictedHamiltonian& h, std::size_t index,
                                           const OracleOptions& options) {
    if (index >= h.dim()) {
        throw ValidationError("basis index out of range");
    }
    if (h.dim() > options.dense_cap) {
        throw LimitExceededError("restricted dimension " + std::to_string(h.dim()) + " exceeds the dense cap of " +
                                 std::to_string(options.dense_cap));
    }
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(h.dim()));
    psi[static_cast<Eigen::Index>(index)] = 1.0;
    return consolidate(spectral_weights(h.dense(), psi), kWeightFloor, kDegeneracyMerge);
}

VerificationReport verify_lemma1(const CompiledChain& chain, const InputBits& input, const OracleOptions& options) {
    VerificationReport report;
    report.r_eff = chain.r_eff;
    report.s_eff = chain.s_eff;
    report.p_simulator = acceptance_probability(chain.circuit, input);
    report.p_engine = trace_orbits(chain, input).p;
    const RestrictedHamiltonian h = build_restricted(chain, input, options);
    report.dim = h.dim();
    report.hermiticity_error = h.hermiticity_error();
    for (const auto& e : h.entries) {
        if (e.row == 0 && e.col == 0) {
            report.diagonal_entry += e.value.real();
        }
    }
    report.induced = induced_measure(h, 0, options);
    report.predicted = predicted_measure(chain.r_eff, chain.s_eff, report.p_simulator);
    report.tv_distance = tv_distance(report.induced, report.predicted.points(), kAtomMatchTolerance);
    report.pass = report.tv_distance < kVerifyThreshold;
    return report;
}

std::string basis_label(const BasisConfig& config) {
    std::string program;
    std::string data;
    for (CellCode c : config) {
        if (!program.empty()) {
            program += ' ';
            data += ' ';
        }
        program += token(program_of(c));
        data += token(data_of(c));
    }
    return program + " | " + data;
}

void write_matrix(std::ostream& triples, std::ostream& legend, const RestrictedHamiltonian& h) {
    for (const auto& e : h.entries) {
        triples << fmt::format("{} {} {:.17g} {:.17g}\n", e.row, e.col, e.value.real(), e.value.imag());
    }
    for (std::size_t i = 0; i < h.dim(); ++i) {
        legend << i << '\t' << basis_label(h.basis[i]) << '\n';
    }
}

}  // namespace qca
