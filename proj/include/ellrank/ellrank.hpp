#pragma once

#include "ellrank/arith.hpp"
#include "ellrank/elliptic_core.hpp"
#include "ellrank/errors.hpp"
#include "ellrank/orbit_theory.hpp"
#include "ellrank/parallel.hpp"
#include "ellrank/rank_estimator.hpp"
#include "ellrank/scan_cache.hpp"
#include "ellrank/surface_io.hpp"
#include "ellrank/surface_model.hpp"
#include "ellrank/trace_engine.hpp"
