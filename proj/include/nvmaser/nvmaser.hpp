#pragma once

// Umbrella header for the NV- maser modeling toolkit.

#include "nvmaser/calibration.hpp"
#include "nvmaser/config.hpp"
#include "nvmaser/constants.hpp"
#include "nvmaser/crystal_geometry.hpp"
#include "nvmaser/csv.hpp"
#include "nvmaser/errors.hpp"
#include "nvmaser/maser_threshold.hpp"
#include "nvmaser/resonator.hpp"
#include "nvmaser/spin_model.hpp"
