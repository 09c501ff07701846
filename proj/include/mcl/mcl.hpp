#pragma once

// Umbrella header.

#include "mcl/curve.hpp"
#include "mcl/delaunay.hpp"
#include "mcl/errors.hpp"
#include "mcl/features.hpp"
#include "mcl/geometry.hpp"
#include "mcl/io.hpp"
#include "mcl/newton.hpp"
#include "mcl/parallel.hpp"
#include "mcl/poly.hpp"
#include "mcl/predicates.hpp"
#include "mcl/reach.hpp"
#include "mcl/sampler.hpp"
#include "mcl/solver.hpp"
#include "mcl/svg.hpp"
#include "mcl/voronoi.hpp"
