#ifndef GEONUM_GEONUM_HPP
#define GEONUM_GEONUM_HPP

#include "geonum/counting.hpp"
#include "geonum/enumerate.hpp"
#include "geonum/error.hpp"
#include "geonum/haar.hpp"
#include "geonum/integer.hpp"
#include "geonum/lattice.hpp"
#include "geonum/minima.hpp"
#include "geonum/partition.hpp"
#include "geonum/reduce.hpp"
#include "geonum/region.hpp"
#include "geonum/semicontinuity.hpp"
#include "geonum/sphere.hpp"
#include "geonum/star_body.hpp"
#include "geonum/stats.hpp"
#include "geonum/witness.hpp"

#endif  // GEONUM_GEONUM_HPP
