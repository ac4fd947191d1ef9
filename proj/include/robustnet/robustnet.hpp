#pragma once

// Umbrella header: LP-based approximation algorithms for min-max (robust,
// K-scenario) shortest path and spanning tree, with gap-instance generators
// and exact enumeration oracles.

#include "robustnet/brute_force.hpp"
#include "robustnet/errors.hpp"
#include "robustnet/flow_graph.hpp"
#include "robustnet/generators.hpp"
#include "robustnet/instance.hpp"
#include "robustnet/json_io.hpp"
#include "robustnet/log.hpp"
#include "robustnet/lp_engine.hpp"
#include "robustnet/mincut.hpp"
#include "robustnet/mst_approx.hpp"
#include "robustnet/rational.hpp"
#include "robustnet/report.hpp"
#include "robustnet/rounding.hpp"
#include "robustnet/simplex.hpp"
#include "robustnet/sp_approx.hpp"
