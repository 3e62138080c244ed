// rcps.hpp
// Umbrella header.

#pragma once

#include "rcps/analytic_moments.hpp"
#include "rcps/config.hpp"
#include "rcps/estimator.hpp"
#include "rcps/experiment.hpp"
#include "rcps/measurement.hpp"
#include "rcps/process.hpp"
#include "rcps/random_stream.hpp"
#include "rcps/state.hpp"
