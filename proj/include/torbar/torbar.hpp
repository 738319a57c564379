#pragma once

#include "torbar/constructions.hpp"
#include "torbar/cycle_space.hpp"
#include "torbar/errors.hpp"
#include "torbar/gain.hpp"
#include "torbar/graph.hpp"
#include "torbar/harness.hpp"
#include "torbar/induced.hpp"
#include "torbar/io.hpp"
#include "torbar/lattice.hpp"
#include "torbar/prime_field.hpp"
#include "torbar/rigidity.hpp"
#include "torbar/rng.hpp"
#include "torbar/sparsity.hpp"
