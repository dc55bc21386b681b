#pragma once

// Umbrella header for the hybrid atom-photon Bell-test laboratory.

#include "hybell/constants.hpp"
#include "hybell/errors.hpp"
#include "hybell/format.hpp"
#include "hybell/rng.hpp"
#include "hybell/quadrature.hpp"
#include "hybell/state.hpp"
#include "hybell/elements.hpp"
#include "hybell/chsh.hpp"
#include "hybell/nelder_mead.hpp"
#include "hybell/parallel.hpp"
#include "hybell/optimize.hpp"
#include "hybell/fock.hpp"
#include "hybell/validate.hpp"
#include "hybell/cavity.hpp"
#include "hybell/rows.hpp"
#include "hybell/config.hpp"
#include "hybell/feasibility.hpp"
#include "hybell/records.hpp"
