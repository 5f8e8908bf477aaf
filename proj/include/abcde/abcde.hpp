#pragma once

#include "abcde/assignment.hpp"
#include "abcde/bench.hpp"
#include "abcde/engine.hpp"
#include "abcde/errors.hpp"
#include "abcde/graph.hpp"
#include "abcde/kernels.hpp"
#include "abcde/metrics.hpp"
#include "abcde/rng.hpp"
#include "abcde/sampling.hpp"
