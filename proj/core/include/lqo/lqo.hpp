#pragma once

#include "lqo/errors.hpp"
#include "lqo/gramians.hpp"
#include "lqo/io.hpp"
#include "lqo/matfun.hpp"
#include "lqo/norms.hpp"
#include "lqo/optimality.hpp"
#include "lqo/projection.hpp"
#include "lqo/reductors.hpp"
#include "lqo/signal.hpp"
#include "lqo/system.hpp"
