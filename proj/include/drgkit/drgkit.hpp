#pragma once

#include <drgkit/errors.hpp>
#include <drgkit/scalar.hpp>
#include <drgkit/matrix.hpp>
#include <drgkit/linalg.hpp>
#include <drgkit/subspace.hpp>
#include <drgkit/graph.hpp>
#include <drgkit/families.hpp>
#include <drgkit/drg.hpp>
#include <drgkit/terwilliger.hpp>
