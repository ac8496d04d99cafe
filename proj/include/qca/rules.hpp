#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qca/symbols.hpp"

namespace qca {

/// The nine rule families of the automaton.
enum class RuleId : std::uint8_t {
    HoleRight,       // 1a  (HO, G)  -> (G, HO)
    ExecuteRight,    // 1b  (EX, G)  -> (G, EX), gate G executes
    HoleTurn,        // 2a  (HO, ..) -> (TA, ..)  with * under HO
    ExecuteTurn,     // 2b  (EX, ..) -> (TA, ..)  with || under EX
    MarkCreate,      // 3   (G, TA)  -> (iG, ..)
    MarkPropagate,   // 4   (F, iG)  -> (iF, G)
    MarkRelease,     // 5   (.., iG) -> (TA, G)
    HoleCreate,      // 6a  (.., TA) -> (.., HO)  with * under TA
    ExecuteCreate,   // 6b  (.., TA) -> (.., EX)  with || under TA
};

/// Which data cell a rule inspects and what class it must have.
enum class DataCondition : std::uint8_t { None, StarLeft, FenceLeft, StarRight, FenceRight };

struct TransitionRule {
    RuleId id;
    ProgramSymbol lhs_left;
    ProgramSymbol lhs_right;
    ProgramSymbol rhs_left;
    ProgramSymbol rhs_right;
    DataCondition condition;
};

/// Every concrete instance of the nine families (gate wildcards expanded).
std::span<const TransitionRule> transition_rules();

bool condition_holds(DataCondition condition, DataClass left, DataClass right) noexcept;

/// Rules whose left-hand side matches the program pair and data classes.
std::span<const TransitionRule* const> forward_matches(ProgramSymbol left, ProgramSymbol right, DataClass data_left,
                                                       DataClass data_right);
/// Rules whose right-hand side matches (used to step backwards).
std::span<const TransitionRule* const> backward_matches(ProgramSymbol left, ProgramSymbol right,
                                                        DataClass data_left, DataClass data_right);

/// Short label: "1a", "1b", "2a", ..., "6b".
std::string_view rule_label(RuleId id);

}  // namespace qca
