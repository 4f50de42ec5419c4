#pragma once

#include "ddl_radar/cfar.hpp"
#include "ddl_radar/config.hpp"
#include "ddl_radar/detectors.hpp"
#include "ddl_radar/doppler.hpp"
#include "ddl_radar/experiments.hpp"
#include "ddl_radar/monte_carlo.hpp"
#include "ddl_radar/optimize.hpp"
#include "ddl_radar/performance.hpp"
#include "ddl_radar/random.hpp"
#include "ddl_radar/rptd.hpp"
#include "ddl_radar/signal_model.hpp"
#include "ddl_radar/types.hpp"
