#pragma once

#include <cstdint>

#include "qprelax/instance.hpp"

namespace qprelax {

struct GenOptions {
  int n = 5;
  double density = 0.5;   // edge probability
  int plus_count = 2;     // nodes given positive diagonals
  uint64_t seed = 1;
  bool no_triplet = false;  // repair until plus components have size <= 2
  int coeff_range = 10000;  // coefficients drawn from +-range
};

// Deterministic pseudorandom instance; same options give identical
// instances. With no_triplet, plus loops are demoted until every plus
// component has at most two nodes.
QpInstance generate_instance(const GenOptions& opts);

}  // namespace qprelax
