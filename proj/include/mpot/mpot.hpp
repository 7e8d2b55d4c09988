#pragma once

#include "mpot/cost.hpp"
#include "mpot/error.hpp"
#include "mpot/flow_network.hpp"
#include "mpot/grid.hpp"
#include "mpot/histogram.hpp"
#include "mpot/io.hpp"
#include "mpot/network_simplex.hpp"
#include "mpot/oracle.hpp"
#include "mpot/sinkhorn.hpp"
#include "mpot/transport.hpp"
