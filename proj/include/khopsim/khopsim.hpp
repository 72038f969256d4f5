#pragma once

// Umbrella header for the whole library.

#include "khopsim/experiment.hpp"
#include "khopsim/gcn.hpp"
#include "khopsim/generate.hpp"
#include "khopsim/graph.hpp"
#include "khopsim/io.hpp"
#include "khopsim/matrix.hpp"
#include "khopsim/metrics.hpp"
#include "khopsim/reachability.hpp"
#include "khopsim/rng.hpp"
#include "khopsim/sbm.hpp"
#include "khopsim/shortest_paths.hpp"
