#pragma once

#include "lqo/matfun.hpp"
#include "lqo/system.hpp"

namespace lqo {

struct ProjectionPair {
  Matrix v;
  Matrix w;
};

/// Biorthogonal Gram-Schmidt, one column at a time: deflate v_l and w_l
/// against the already fixed columns, normalize both, then scale v_l so that
/// w_l^T v_l = 1. Spans are preserved and W^T V = I on return.
ProjectionPair biorthogonalize(const Matrix& v, const Matrix& w);

/// Petrov-Galerkin projection: (W^T A V, W^T B, C V, {V^T M_i V}).
LqoSystem project(const LqoSystem& system, const ProjectionPair& pair);

}  // namespace lqo
