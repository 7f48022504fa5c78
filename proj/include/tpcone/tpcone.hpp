#pragma once

#include "tpcone/arith.hpp"
#include "tpcone/cone.hpp"
#include "tpcone/lp.hpp"
#include "tpcone/network.hpp"
#include "tpcone/parallel.hpp"
#include "tpcone/pluecker.hpp"
#include "tpcone/polynomial.hpp"
#include "tpcone/primitive.hpp"
#include "tpcone/random.hpp"
#include "tpcone/raylab.hpp"
#include "tpcone/tropical.hpp"
