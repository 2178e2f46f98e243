#pragma once

#include "skew_euler/boundary.hpp"
#include "skew_euler/config.hpp"
#include "skew_euler/errors.hpp"
#include "skew_euler/grid.hpp"
#include "skew_euler/manufactured.hpp"
#include "skew_euler/matrices.hpp"
#include "skew_euler/random.hpp"
#include "skew_euler/sbp.hpp"
#include "skew_euler/solver.hpp"
#include "skew_euler/state.hpp"
#include "skew_euler/studies.hpp"
#include "skew_euler/verify.hpp"
