#pragma once

#include <string>
#include <vector>

#include "snc/network.hpp"

namespace snc::corpus {

/// On-Off arrivals: P(Off->On) = 0.7, P(On->Off) = 0.1, Poisson(2) when On.
Mmp shared_arrival();

/// Two servers with ScaledBernoulli(5, p) and ScaledBernoulli(6, q) service,
/// flow 1 only.
TandemNetwork fig1a(double p = 0.5, double q = 0.5);

/// Constant rates (5, c2, 6); flows 1:[1,3], 2:[1,2], 3:[2,3].
TandemNetwork fig1b(double c2 = 7.0);

/// Sink tree, flows 1:[1,3], 2:[2,3], 3:[3,3]; rates 3 + i.
TandemNetwork sinktree_up();

/// Same topology with rates 3i - 1.
TandemNetwork sinktree_down();

std::vector<std::string> names();

bool is_name(const std::string& name);

/// Throws std::invalid_argument for an unknown name.
TandemNetwork by_name(const std::string& name);

}  // namespace snc::corpus
