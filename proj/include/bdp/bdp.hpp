#ifndef BDP_BDP_HPP
#define BDP_BDP_HPP

#include "bdp/contfrac.hpp"
#include "bdp/expr.hpp"
#include "bdp/grid.hpp"
#include "bdp/laplace.hpp"
#include "bdp/model.hpp"
#include "bdp/model_io.hpp"
#include "bdp/parallel.hpp"
#include "bdp/passage.hpp"
#include "bdp/reward.hpp"
#include "bdp/search.hpp"
#include "bdp/simulate.hpp"

#endif  // BDP_BDP_HPP
