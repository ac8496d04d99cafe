#pragma once

#include <string_view>

namespace qca {

/// Outcome of the readout: the NO branch dies at the readout, the YES branch
/// runs on to the final annihilation.
enum class Branch { No, Yes };

constexpr std::string_view branch_name(Branch b) noexcept { return b == Branch::Yes ? "YES" : "NO"; }

}  // namespace qca
