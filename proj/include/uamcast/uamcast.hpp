#pragma once

// Umbrella header: the whole forecasting library in one include.

#include "uamcast/choice.hpp"
#include "uamcast/city.hpp"
#include "uamcast/config.hpp"
#include "uamcast/demand.hpp"
#include "uamcast/fleet.hpp"
#include "uamcast/geometry.hpp"
#include "uamcast/io.hpp"
#include "uamcast/population.hpp"
#include "uamcast/scenario.hpp"
#include "uamcast/transport.hpp"
#include "uamcast/trips.hpp"
