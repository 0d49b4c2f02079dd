#include "figures.hpp"

namespace floc::figures {

Model fig4(std::optional<double> epsilon) {
  ChemostatParams p = ChemostatParams::equal(0.5, 2.0, epsilon);
  return Model(p, Monod{1.0, 1.0}, Monod{0.7, 1.0}, AttachmentLaws(LinearTotal{1.0}, ConstantDetachment{0.5}));
}

Model fig6() {
  ChemostatParams p{.D = 1.0, .S_in = 0.9, .D_u = 1.0, .D_v = 0.5, .epsilon = std::nullopt};
  return Model(p, Monod{2.0, 1.0}, Monod{1.5, 0.8}, AttachmentLaws(LinearTotal{4.0}, ConstantDetachment{1.0}));
}

std::vector<ReducedState> phase_fan(double s_in) {
  const double w = s_in;
  const double h = kFanXMax - kFanXMin;
  const double perimeter = 2.0 * (w + h);
  std::vector<ReducedState> out;
  for (int k = 0; k < kFanPoints; ++k) {
    double d = perimeter * k / kFanPoints;
    if (d < w) {
      out.push_back({d, kFanXMin});
      continue;
    }
    d -= w;
    if (d < h) {
      out.push_back({w, kFanXMin + d});
      continue;
    }
    d -= h;
    if (d < w) {
      out.push_back({w - d, kFanXMax});
      continue;
    }
    d -= w;
    out.push_back({0.0, kFanXMax - d});
  }
  return out;
}

}  // namespace floc::figures
