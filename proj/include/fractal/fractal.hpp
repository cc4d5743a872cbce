#pragma once

#include "fractal/asymptotics.hpp"
#include "fractal/covariance.hpp"
#include "fractal/error.hpp"
#include "fractal/estimators.hpp"
#include "fractal/fieldgen.hpp"
#include "fractal/grid.hpp"
#include "fractal/increment.hpp"
#include "fractal/io.hpp"
#include "fractal/montecarlo.hpp"
#include "fractal/multi_index.hpp"
#include "fractal/normal.hpp"
#include "fractal/regression.hpp"
#include "fractal/rng.hpp"
#include "fractal/summation.hpp"
#include "fractal/transforms.hpp"
