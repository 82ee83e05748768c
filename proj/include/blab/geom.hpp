#pragma once

#include "blab/geom/constructions.hpp"
#include "blab/geom/distance.hpp"
#include "blab/geom/grid.hpp"
#include "blab/geom/io.hpp"
#include "blab/geom/metrics.hpp"
#include "blab/geom/shape.hpp"
#include "blab/geom/topology.hpp"
