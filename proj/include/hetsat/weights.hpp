#pragma once

namespace hetsat {

/// Convex weights of the weighted metric: CP, NHP, DOP.
struct WeightVector {
  double w1 = 1.0 / 3.0;
  double w2 = 1.0 / 3.0;
  double w3 = 1.0 / 3.0;

  void validate() const;
};

}  // namespace hetsat
