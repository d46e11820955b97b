#pragma once

#include "component_dp.hpp"
#include "core_model.hpp"
#include "decomposition.hpp"
#include "directed.hpp"
#include "dropcalc.hpp"
#include "generate.hpp"
#include "oracle.hpp"
#include "reduction.hpp"
#include "solvers.hpp"
#include "thinness.hpp"
#include "union_find.hpp"
