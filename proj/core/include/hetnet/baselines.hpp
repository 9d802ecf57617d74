#pragma once

#include "hetnet/model.hpp"

namespace hetnet {

/// Direct Serving Method: the CBS serves every user, optimizing bandwidth and
/// power only. When the budget cannot cover all minimum bandwidths, users are
/// admitted greedily in increasing w_min order; the rest get zero allocation
/// and count against the service rate.
SolveOutcome solve_dsm(const Scenario& scenario, const BidMatrix& bids);

}  // namespace hetnet
