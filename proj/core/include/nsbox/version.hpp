#pragma once

namespace nsbox {

inline constexpr const char* kVersion = "nsbox 0.1.0";

}  // namespace nsbox
