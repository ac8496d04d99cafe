#include "qca/symbols.hpp"

#include <charconv>

#include "qca/error.hpp"

namespace qca {

namespace {

constexpr std::array<std::string_view, kProgramAlphabet> kProgramTokens = {
    "I", "S", "W", "R", "A", "iI", "iS", "iW", "iR", "iA", "HO", "EX", "TA", "..",
};
constexpr std::array<std::string_view, kDataAlphabet> kDataTokens = {"0", "1", "||", "**"};

}  // namespace

std::optional<GateKind> gate_kind(ProgramSymbol s) {
    switch (s) {
        case ProgramSymbol::I:
            return GateKind::Identity;
        case ProgramSymbol::S:
            return GateKind::Swap;
        case ProgramSymbol::W:
            return GateKind::ControlledW;
        case ProgramSymbol::R:
            return GateKind::Readout;
        case ProgramSymbol::A:
            return GateKind::Annihilate;
        default:
            return std::nullopt;
    }
}

ProgramSymbol gate_symbol(GateKind kind) {
    switch (kind) {
        case GateKind::Identity:
            return ProgramSymbol::I;
        case GateKind::Swap:
            return ProgramSymbol::S;
        case GateKind::ControlledW:
            return ProgramSymbol::W;
        case GateKind::Readout:
            return ProgramSymbol::R;
        case GateKind::Annihilate:
            return ProgramSymbol::A;
    }
    return ProgramSymbol::I;
}

DataClass classify(const DataCell& cell) {
    if (const auto* d = std::get_if<DataSymbol>(&cell)) {
        return classify(*d);
    }
    return DataClass::Star;
}

bool is_register(const DataCell& cell) { return std::holds_alternative<RegisterSlot>(cell); }

std::string_view token(ProgramSymbol s) { return kProgramTokens[static_cast<std::size_t>(s)]; }

std::string_view token(DataSymbol d) { return kDataTokens[static_cast<std::size_t>(d)]; }

std::string token(const DataCell& cell) {
    if (const auto* slot = std::get_if<RegisterSlot>(&cell)) {
        return "q" + std::to_string(slot->qubit);
    }
    return std::string(token(std::get<DataSymbol>(cell)));
}

ProgramSymbol parse_program_token(std::string_view tok) {
    for (std::size_t i = 0; i < kProgramTokens.size(); ++i) {
        if (kProgramTokens[i] == tok) {
            return static_cast<ProgramSymbol>(i);
        }
    }
    throw ParseError(0, "unknown program token '" + std::string(tok) + "'");
}

DataCell parse_data_token(std::string_view tok) {
    for (std::size_t i = 0; i < kDataTokens.size(); ++i) {
        if (kDataTokens[i] == tok) {
            return static_cast<DataSymbol>(i);
        }
    }
    if (tok.size() > 1 && tok[0] == 'q') {
        std::size_t q = 0;
        auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + tok.size(), q);
        if (ec == std::errc() && ptr == tok.data() + tok.size()) {
            return RegisterSlot{q};
        }
    }
    throw ParseError(0, "unknown data token '" + std::string(tok) + "'");
}

}  // namespace qca
