#pragma once

#include <array>
#include <optional>
#include <vector>

#include "floc/model.hpp"

namespace floc::figures {

/// mu_u = s/(1+s), mu_v = 0.7 s/(1+s), S_in = 2, D = 0.5, a = 1, b = 0.5.
Model fig4(std::optional<double> epsilon = std::nullopt);

/// mu_u = 2s/(1+s), mu_v = 1.5 s/(0.8+s), D_u = 1, D_v = 0.5, S_in = 0.9,
/// D = 1 and a/b = 4 (taken as a = 4, b = 1).
Model fig6();

inline constexpr std::array<double, 2> kFig4Epsilons{2.0, 0.5};
inline constexpr double kFig4TEnd = 60.0;
/// (s, u, v) at t = 0 for the fig4 runs.
inline constexpr FullState kFig4Initial{2.0, 0.05, 0.05};

inline constexpr double kFanXMin = 0.01;
inline constexpr double kFanXMax = 1.2;
inline constexpr int kFanPoints = 12;
inline constexpr double kFanTEnd = 400.0;

/// kFanPoints initial conditions evenly spaced (by arc length) on the boundary
/// of [0, S_in] x [kFanXMin, kFanXMax], counter-clockwise from (0, kFanXMin).
std::vector<ReducedState> phase_fan(double s_in);

}  // namespace floc::figures
