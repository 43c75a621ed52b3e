#pragma once

// Umbrella header for the CCPB library: steady-state 1D Poisson-Boltzmann
// between blocking electrodes with global charge conservation, plus the
// matched-asymptotic approximations, finite-domain diagnostics, and
// Donnan-equilibrium estimators built on top of it.

#include "analysis.hpp"
#include "asymptotic.hpp"
#include "constants.hpp"
#include "donnan.hpp"
#include "fd.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"
#include "roots.hpp"
#include "solver.hpp"
