#pragma once

#include <numbers>

namespace fieldent {

// Matter-sector mass normalization 1/(8 pi^2): the oscillator kernel is
// (w^2 + w0^2)/(8 pi^2), shared by the plate model and the lattice oracle.
inline constexpr double kPiSq8 = 8.0 * std::numbers::pi * std::numbers::pi;

}  // namespace fieldent
