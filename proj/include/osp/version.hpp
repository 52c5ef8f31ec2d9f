#pragma once

#include <string_view>

namespace osp {

inline constexpr std::string_view kToolName = "ospbench";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace osp
