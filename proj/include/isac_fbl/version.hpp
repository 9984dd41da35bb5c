#pragma once

namespace isac_fbl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace isac_fbl
