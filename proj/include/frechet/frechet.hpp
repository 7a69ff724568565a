#pragma once

#include "frechet/cell_sampling.hpp"
#include "frechet/curve_io.hpp"
#include "frechet/discrete_frechet.hpp"
#include "frechet/free_space.hpp"
#include "frechet/geometry.hpp"
#include "frechet/index_io.hpp"
#include "frechet/linearization.hpp"
#include "frechet/multipoly.hpp"
#include "frechet/polynomials.hpp"
#include "frechet/radius.hpp"
#include "frechet/range_index.hpp"
#include "frechet/scalar.hpp"
#include "frechet/simplification.hpp"
#include "frechet/subcurve.hpp"
#include "frechet/surd.hpp"
