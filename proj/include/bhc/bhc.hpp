#pragma once

// Bridged Hamiltonian cycles on random geometric graphs below the
// connectivity threshold: tiling, backbone extraction, cycle assembly,
// Monte Carlo experiments, and rendering.

#include "backbone.hpp"
#include "crossing.hpp"
#include "cycle.hpp"
#include "density.hpp"
#include "experiment.hpp"
#include "geometry.hpp"
#include "grid.hpp"
#include "instance.hpp"
#include "io.hpp"
#include "params.hpp"
#include "render.hpp"
#include "rng.hpp"
