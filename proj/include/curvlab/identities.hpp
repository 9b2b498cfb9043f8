#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "curvlab/chart.hpp"

namespace curvlab {

// One row of the randomized invariant battery: differential identities,
// scaling laws and conformal laws, each checked on pinned-seed samples
// against its stated tolerance.
struct IdentityRow {
  std::string name;
  double max_err = 0.0;
  double tol = 0.0;
  int samples = 0;
  bool pass = false;
};

std::vector<IdentityRow> identity_battery(std::uint64_t seed);

// Deterministic helpers shared with the battery's consumers.
class DetRng {
 public:
  explicit DetRng(std::uint64_t seed) : state_(seed ? seed : 1) {}
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi);

 private:
  std::uint64_t state_;
};

// Random SPD diagonal metric with trigonometric components (uniformly SPD
// on all of R^3) and a generic sample point for it.
MetricChart random_diagonal_metric(DetRng& rng);
Point random_sample_point(DetRng& rng);

}  // namespace curvlab
