#include "qca/rules.hpp"

#include <array>

namespace qca {

namespace {

constexpr std::array<ProgramSymbol, 5> kGates = {ProgramSymbol::I, ProgramSymbol::S, ProgramSymbol::W,
                                                 ProgramSymbol::R, ProgramSymbol::A};

std::vector<TransitionRule> build_rules() {
    using P = ProgramSymbol;
    std::vector<TransitionRule> rules;
    for (P g : kGates) {
        rules.push_back({RuleId::HoleRight, P::Hole, g, g, P::Hole, DataCondition::None});
    }
    for (P g : kGates) {
        rules.push_back({RuleId::ExecuteRight, P::Execute, g, g, P::Execute, DataCondition::None});
    }
    rules.push_back({RuleId::HoleTurn, P::Hole, P::Blank, P::TurnAround, P::Blank, DataCondition::StarLeft});
    rules.push_back({RuleId::ExecuteTurn, P::Execute, P::Blank, P::TurnAround, P::Blank, DataCondition::FenceLeft});
    for (P g : kGates) {
        rules.push_back({RuleId::MarkCreate, g, P::TurnAround, marked(g), P::Blank, DataCondition::None});
    }
    for (P f : kGates) {
        for (P g : kGates) {
            rules.push_back({RuleId::MarkPropagate, f, marked(g), marked(f), g, DataCondition::None});
        }
    }
    for (P g : kGates) {
        rules.push_back({RuleId::MarkRelease, P::Blank, marked(g), P::TurnAround, g, DataCondition::None});
    }
    rules.push_back({RuleId::HoleCreate, P::Blank, P::TurnAround, P::Blank, P::Hole, DataCondition::StarRight});
    rules.push_back({RuleId::ExecuteCreate, P::Blank, P::TurnAround, P::Blank, P::Execute, DataCondition::FenceRight});
    return rules;
}

constexpr std::size_t key(ProgramSymbol l, ProgramSymbol r, DataClass dl, DataClass dr) {
    return ((static_cast<std::size_t>(l) * kProgramAlphabet + static_cast<std::size_t>(r)) * 2 +
            static_cast<std::size_t>(dl)) *
               2 +
           static_cast<std::size_t>(dr);
}

struct Index {
    std::vector<TransitionRule> rules = build_rules();
    std::vector<std::vector<const TransitionRule*>> forward;
    std::vector<std::vector<const TransitionRule*>> backward;

    Index() {
        const std::size_t n = kProgramAlphabet * kProgramAlphabet * 4;
        forward.resize(n);
        backward.resize(n);
        for (std::size_t l = 0; l < kProgramAlphabet; ++l) {
            for (std::size_t r = 0; r < kProgramAlphabet; ++r) {
                for (DataClass dl : {DataClass::Star, DataClass::Fence}) {
                    for (DataClass dr : {DataClass::Star, DataClass::Fence}) {
                        const auto pl = static_cast<ProgramSymbol>(l);
                        const auto pr = static_cast<ProgramSymbol>(r);
                        const std::size_t k = key(pl, pr, dl, dr);
                        for (const auto& rule : rules) {
                            if (!condition_holds(rule.condition, dl, dr)) {
                                continue;
                            }
                            if (rule.lhs_left == pl && rule.lhs_right == pr) {
                                forward[k].push_back(&rule);
                            }
                            if (rule.rhs_left == pl && rule.rhs_right == pr) {
                                backward[k].push_back(&rule);
                            }
                        }
                    }
                }
            }
        }
    }
};

const Index& index() {
    static const Index idx;
    return idx;
}

}  // namespace

std::span<const TransitionRule> transition_rules() { return index().rules; }

bool condition_holds(DataCondition condition, DataClass left, DataClass right) noexcept {
    switch (condition) {
        case DataCondition::None:
            return true;
        case DataCondition::StarLeft:
            return left == DataClass::Star;
        case DataCondition::FenceLeft:
            return left == DataClass::Fence;
        case DataCondition::StarRight:
            return right == DataClass::Star;
        case DataCondition::FenceRight:
            return right == DataClass::Fence;
    }
    return false;
}

std::span<const TransitionRule* const> forward_matches(ProgramSymbol left, ProgramSymbol right, DataClass data_left,
                                                       DataClass data_right) {
    return index().forward[key(left, right, data_left, data_right)];
}

std::span<const TransitionRule* const> backward_matches(ProgramSymbol left, ProgramSymbol right,
                                                        DataClass data_left, DataClass data_right) {
    return index().backward[key(left, right, data_left, data_right)];
}

std::string_view rule_label(RuleId id) {
    switch (id) {
        case RuleId::HoleRight:
            return "1a";
        case RuleId::ExecuteRight:
            return "1b";
        case RuleId::HoleTurn:
            return "2a";
        case RuleId::ExecuteTurn:
            return "2b";
        case RuleId::MarkCreate:
            return "3";
        case RuleId::MarkPropagate:
            return "4";
        case RuleId::MarkRelease:
            return "5";
        case RuleId::HoleCreate:
            return "6a";
        case RuleId::ExecuteCreate:
            return "6b";
    }
    return "?";
}

}  // namespace qca
