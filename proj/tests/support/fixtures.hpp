#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "floc/model.hpp"

namespace floc::test {

// mu_u = s/(1+s), mu_v = 0.7 s/(1+s), D = D_u = D_v = 0.5, S_in = 2, a = 1, b = 0.5
inline Model fig4_model(std::optional<double> eps = std::nullopt, double D = 0.5) {
  return Model(ChemostatParams::equal(D, 2.0, eps), Monod{1.0, 1.0}, Monod{0.7, 1.0},
               AttachmentLaws(LinearTotal{1.0}, ConstantDetachment{0.5}));
}

// mu_u = 2s/(1+s), mu_v = 1.5 s/(0.8+s), D = 1, D_u = 1, D_v = 0.5, S_in = 0.9, a = 4, b = 1
inline Model fig6_model() {
  ChemostatParams p{1.0, 0.9, 1.0, 0.5, std::nullopt};
  return Model(p, Monod{2.0, 1.0}, Monod{1.5, 0.8}, AttachmentLaws(LinearTotal{4.0}, ConstantDetachment{1.0}));
}

inline std::string config_path(const std::string& name) { return std::string(FLOC_CONFIG_DIR) + "/" + name; }

inline double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace floc::test
