#pragma once

// Values produced by the dense oracle (dense_norm.hpp) before the
// power-iteration estimator was written. test_oracle recomputes them.

#include <cmath>
#include <cstddef>

namespace oracle::frozen {

struct AverageNorm {
  int J;
  int depth;
  std::size_t points;
  double norm;
};

// F2, h = a, g = b: sqrt(lambda_max) of the compressed T*T for the uniform average
inline constexpr AverageNorm kFreeAverages[] = {
    {1, 5, 1, 1.0},
    {2, 5, 11, 0.991444861374},
    {3, 5, 2047, 0.921361677246},
    {4, 3, 1093, 0.822167937832},  // depth 4 is ~10^4 points, too big for a dense solve
};

// Z/2 * Z/3, h = t, g = s, even J: M_J = (t + sts)/2. Depth 8 gives 17 points;
// deeper compressions creep up towards 1.
inline constexpr int kTorsionDepth = 8;
inline constexpr std::size_t kTorsionPoints = 17;
inline constexpr double kTorsionHalfHalf = 0.996194698092;

/// ||(1/J) sum_j lambda(b^-j a b^j)|| in F2: the free family's closed form.
inline double free_average_norm(int J) { return J == 1 ? 1.0 : 2.0 * std::sqrt(J - 1.0) / J; }

}  // namespace oracle::frozen
