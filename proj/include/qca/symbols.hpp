#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qca/circuit.hpp"

namespace qca {

/// Program-band alphabet (14 symbols): gate symbols, their marked versions,
/// and the control symbols hole, execution, turn-around and blank.
enum class ProgramSymbol : std::uint8_t {
    I,
    S,
    W,
    R,
    A,
    MarkedI,
    MarkedS,
    MarkedW,
    MarkedR,
    MarkedA,
    Hole,
    Execute,
    TurnAround,
    Blank,
};

inline constexpr std::size_t kProgramAlphabet = 14;

/// Data-band alphabet (4 symbols).
enum class DataSymbol : std::uint8_t { Zero, One, Fence, Dot };

inline constexpr std::size_t kDataAlphabet = 4;
inline constexpr std::size_t kCellDimension = kProgramAlphabet * kDataAlphabet;

/// Transition rules only distinguish fences from everything else ("*" = 0, 1 or dot).
enum class DataClass : std::uint8_t { Star, Fence };

/// Register cell of the compiled chain; carries the qubit index it holds.
struct RegisterSlot {
    std::size_t qubit = 0;
    friend bool operator==(const RegisterSlot&, const RegisterSlot&) = default;
};

/// Data cell of a compiled chain: a fixed format symbol or a register slot.
using DataCell = std::variant<DataSymbol, RegisterSlot>;

constexpr bool is_gate(ProgramSymbol s) noexcept { return s <= ProgramSymbol::A; }
constexpr bool is_marked(ProgramSymbol s) noexcept {
    return s >= ProgramSymbol::MarkedI && s <= ProgramSymbol::MarkedA;
}
/// Marked gates, hole, execution and turn-around; exactly one lives on a well-formed band.
constexpr bool is_control(ProgramSymbol s) noexcept {
    return s >= ProgramSymbol::MarkedI && s <= ProgramSymbol::TurnAround;
}
constexpr ProgramSymbol marked(ProgramSymbol gate) noexcept {
    return static_cast<ProgramSymbol>(static_cast<std::uint8_t>(gate) + 5);
}
constexpr ProgramSymbol unmarked(ProgramSymbol mark) noexcept {
    return static_cast<ProgramSymbol>(static_cast<std::uint8_t>(mark) - 5);
}

std::optional<GateKind> gate_kind(ProgramSymbol s);
ProgramSymbol gate_symbol(GateKind kind);

constexpr DataClass classify(DataSymbol d) noexcept {
    return d == DataSymbol::Fence ? DataClass::Fence : DataClass::Star;
}
DataClass classify(const DataCell& cell);
bool is_register(const DataCell& cell);

/// Band-dump tokens: program `I S W R A iI iS iW iR iA HO EX TA ..`,
/// data `0 1 || **` and `q<k>` for register slots.
std::string_view token(ProgramSymbol s);
std::string_view token(DataSymbol d);
std::string token(const DataCell& cell);
ProgramSymbol parse_program_token(std::string_view tok);
DataCell parse_data_token(std::string_view tok);

}  // namespace qca
