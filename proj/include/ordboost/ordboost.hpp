#pragma once

// Umbrella header for the core library (no network or image dependencies;
// see wine.hpp and plot.hpp for those).

#include "ordboost/boosting.hpp"
#include "ordboost/dataset.hpp"
#include "ordboost/learners.hpp"
#include "ordboost/line_search.hpp"
#include "ordboost/link.hpp"
#include "ordboost/matrix.hpp"
#include "ordboost/metrics.hpp"
#include "ordboost/ordinal.hpp"
#include "ordboost/rng.hpp"
#include "ordboost/serialize.hpp"
