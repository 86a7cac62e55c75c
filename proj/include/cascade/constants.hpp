#pragma once

namespace cascade {

inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;

} // namespace cascade
