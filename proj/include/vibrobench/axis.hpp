#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vibrobench {

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr std::array<Axis, 3> all_axes{Axis::X, Axis::Y, Axis::Z};

inline std::string to_string(Axis axis) {
    switch (axis) {
    case Axis::X: return "X";
    case Axis::Y: return "Y";
    case Axis::Z: return "Z";
    }
    throw std::invalid_argument("unknown axis");
}

inline Axis axis_from_string(std::string_view s) {
    if (s == "X" || s == "x") return Axis::X;
    if (s == "Y" || s == "y") return Axis::Y;
    if (s == "Z" || s == "z") return Axis::Z;
    throw std::invalid_argument("unknown axis label: " + std::string(s));
}

template <typename T>
using PerAxis = std::array<T, 3>;

template <typename T>
T& axis_at(PerAxis<T>& arr, Axis axis) { return arr[static_cast<std::size_t>(axis)]; }

template <typename T>
const T& axis_at(const PerAxis<T>& arr, Axis axis) { return arr[static_cast<std::size_t>(axis)]; }

} // namespace vibrobench
