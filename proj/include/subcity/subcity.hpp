#pragma once

// Umbrella header for the subcity mobility-network toolkit.

#include "subcity/centrality.hpp"
#include "subcity/compare.hpp"
#include "subcity/csv.hpp"
#include "subcity/errors.hpp"
#include "subcity/export.hpp"
#include "subcity/geo.hpp"
#include "subcity/graph.hpp"
#include "subcity/io.hpp"
#include "subcity/louvain.hpp"
#include "subcity/modularity.hpp"
#include "subcity/partition.hpp"
#include "subcity/rng.hpp"
#include "subcity/segregation.hpp"
#include "subcity/synth.hpp"
