#pragma once

#include "cornsim/agronomy.hpp"
#include "cornsim/calendar.hpp"
#include "cornsim/climate_sim.hpp"
#include "cornsim/econ.hpp"
#include "cornsim/error.hpp"
#include "cornsim/gev.hpp"
#include "cornsim/ingest.hpp"
#include "cornsim/pipeline.hpp"
#include "cornsim/stats.hpp"
#include "cornsim/trends.hpp"
