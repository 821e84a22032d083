#pragma once

#include "shadowgeom/sampling.hpp"

namespace shadowgeom::detail {

struct ScreenedMin {
  Direction direction;
  double value = 0.0;
};

/// Best of a random screen plus candidate directions, refined by local descent.
ScreenedMin screened_sphere_min(const SphereObjective& f, int n, RngSeed seed, int screen,
                                const std::vector<Direction>& candidates);

double screened_grassmann_min(const GrassmannObjective& f, int n, int k, RngSeed seed, int screen);

}  // namespace shadowgeom::detail
