#pragma once

#include <concepts>
#include <cstdint>

namespace bsmm {

using index_t = std::int64_t;

/// Scalar types the library is instantiated for.
template <typename T>
concept Scalar = std::same_as<T, float> || std::same_as<T, double>;

inline constexpr index_t ceil_div(index_t a, index_t b) { return (a + b - 1) / b; }

}  // namespace bsmm
