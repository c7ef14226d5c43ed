#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "drorder/analysis.hpp"
#include "drorder/config.hpp"

namespace drorder::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kDiverged = 1;
inline constexpr int kConfigError = 2;
inline constexpr int kVerifyFailed = 3;

enum class Order { AB, BA, BT };

/// Every checker that applies to the operand classes of `config`, sampled at
/// its start points plus `extra` seeded random points.
std::vector<IdentityReport> verify_config(const ProblemConfig& config, std::uint64_t seed,
                                          std::size_t n = 20, std::size_t extra = 8);

/// Applies DR_ORDER_TOL, when set, to config.tolerances.tau_num.
void apply_env_overrides(ProblemConfig& config);

/// Entry point; argv[0] is the program name.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace drorder::cli
