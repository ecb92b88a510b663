#pragma once

#include "hc3/bifurcation.hpp"
#include "hc3/branch.hpp"
#include "hc3/errors.hpp"
#include "hc3/fertile_graphs.hpp"
#include "hc3/finite_tree.hpp"
#include "hc3/numerics.hpp"
#include "hc3/recursion.hpp"
#include "hc3/report.hpp"
#include "hc3/ti_solver.hpp"
