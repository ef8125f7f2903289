#pragma once

// Block-sparsifying dictionary learning: greedy pursuit coders (OMP/BOMP),
// sparse agglomerative clustering of atom usage patterns, SVD-based block
// dictionary updates, and a synthetic evaluation harness.

#include "bsdl/dict_update.hpp"
#include "bsdl/experiment.hpp"
#include "bsdl/framework.hpp"
#include "bsdl/io.hpp"
#include "bsdl/metrics.hpp"
#include "bsdl/pursuit.hpp"
#include "bsdl/rng.hpp"
#include "bsdl/sac.hpp"
#include "bsdl/synth.hpp"
#include "bsdl/types.hpp"
