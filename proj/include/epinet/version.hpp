#pragma once

namespace epinet {
inline constexpr const char* kVersion = "0.1.0";
}
