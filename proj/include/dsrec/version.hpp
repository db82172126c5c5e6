#pragma once

namespace dsrec {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace dsrec
