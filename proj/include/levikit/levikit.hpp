#pragma once

// Umbrella header.

#include "levikit/cli.hpp"
#include "levikit/common.hpp"
#include "levikit/conditions.hpp"
#include "levikit/dfn.hpp"
#include "levikit/expr.hpp"
#include "levikit/jet.hpp"
#include "levikit/json_writer.hpp"
#include "levikit/levi.hpp"
#include "levikit/linalg.hpp"
#include "levikit/model.hpp"
#include "levikit/quadrature.hpp"
#include "levikit/upsilon.hpp"
