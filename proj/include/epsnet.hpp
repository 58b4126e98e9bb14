#pragma once

#include "epsnet/number.hpp"
#include "epsnet/index_set.hpp"
#include "epsnet/geometry.hpp"
#include "epsnet/random.hpp"
#include "epsnet/range_oracle.hpp"
#include "epsnet/net_builder.hpp"
#include "epsnet/envelope.hpp"
#include "epsnet/dual_metrics.hpp"
#include "epsnet/dual_pipeline.hpp"
#include "epsnet/experiments.hpp"
