#pragma once

#include "core.hpp"
#include "rng.hpp"
#include "generator.hpp"
#include "stats.hpp"
#include "quadrature.hpp"
#include "theory.hpp"
#include "oracle.hpp"
#include "harness.hpp"
