#pragma once

namespace ndsim {

inline constexpr const char* artifact_version = "0.1.0";

}  // namespace ndsim
