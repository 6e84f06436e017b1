#pragma once

#include "driftprice/core.hpp"
#include "driftprice/random.hpp"
#include "driftprice/environments.hpp"
#include "driftprice/strategy.hpp"
#include "driftprice/known_rate.hpp"
#include "driftprice/adaptive_rate.hpp"
#include "driftprice/exp3.hpp"
#include "driftprice/registry.hpp"
#include "driftprice/engine.hpp"
#include "driftprice/oracle.hpp"
#include "driftprice/trace_io.hpp"
#include "driftprice/harness.hpp"
