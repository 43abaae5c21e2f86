#pragma once

// Umbrella header.

#include "irrcert/erdos_straus.hpp"
#include "irrcert/exact/crossover.hpp"
#include "irrcert/hancl.hpp"
#include "irrcert/io/report.hpp"
#include "irrcert/io/spec.hpp"
#include "irrcert/primes.hpp"
#include "irrcert/roth.hpp"
#include "irrcert/series.hpp"
