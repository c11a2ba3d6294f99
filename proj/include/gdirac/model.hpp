#pragma once

#include "gdirac/graph.hpp"

namespace gdirac {

/// Three-edge star: half-lines e1, e2 and segment e3 (length 1) leaving the
/// centre v0, with m = 1/2, c = 1. The free end v1 of e3 carries the row
/// (2/3) a Gamma0 = -i (2/3) b Gamma1 of model_condition_matrices, i.e.
/// EndpointCondition{a, -i b}. The default a = 0, b = 1 forces psi1(1) = 0.
GraphDocument builtin_model(cplx a = 0.0, cplx b = 1.0);

}  // namespace gdirac
