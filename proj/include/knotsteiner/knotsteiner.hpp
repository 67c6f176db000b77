#pragma once

#include "knotsteiner/error.hpp"
#include "knotsteiner/point.hpp"
#include "knotsteiner/geometry.hpp"
#include "knotsteiner/graph.hpp"
#include "knotsteiner/continuum.hpp"
#include "knotsteiner/topology.hpp"
#include "knotsteiner/optimize.hpp"
#include "knotsteiner/parallel.hpp"
#include "knotsteiner/solver.hpp"
#include "knotsteiner/construction.hpp"
#include "knotsteiner/polynomial.hpp"
#include "knotsteiner/knot.hpp"
#include "knotsteiner/lemmas.hpp"
#include "knotsteiner/json_io.hpp"
