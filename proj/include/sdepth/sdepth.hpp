#pragma once

#include "sdepth/classify.hpp"
#include "sdepth/combinatorics.hpp"
#include "sdepth/depth.hpp"
#include "sdepth/distribution.hpp"
#include "sdepth/error.hpp"
#include "sdepth/geometry.hpp"
#include "sdepth/io.hpp"
#include "sdepth/parallel.hpp"
#include "sdepth/regions.hpp"
#include "sdepth/rng.hpp"
#include "sdepth/sigma_transform.hpp"
#include "sdepth/sim.hpp"
#include "sdepth/symmetry.hpp"
#include "sdepth/types.hpp"
