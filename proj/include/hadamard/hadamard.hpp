#pragma once

// Umbrella header.
#include "hadamard/catalog.hpp"
#include "hadamard/diagnostics.hpp"
#include "hadamard/fields.hpp"
#include "hadamard/geometry.hpp"
#include "hadamard/model_spaces.hpp"
#include "hadamard/resolvent.hpp"
#include "hadamard/semigroup.hpp"
#include "hadamard/tangent.hpp"
