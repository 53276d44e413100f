#pragma once

// Umbrella header: counterexample-driven fault localization for integer
// programs. Parse a program, unroll its loops, then localize() propagates a
// counterexample through the control-flow graph, deviates up to k branch
// conditions, and enumerates bounded minimal correction sets per path.

#include "locfaults/ast.hpp"
#include "locfaults/cfg.hpp"
#include "locfaults/constraints.hpp"
#include "locfaults/driver.hpp"
#include "locfaults/interp.hpp"
#include "locfaults/mcs.hpp"
#include "locfaults/parser.hpp"
#include "locfaults/report.hpp"
#include "locfaults/solver.hpp"
#include "locfaults/unroll.hpp"
