#pragma once

// Brute-force evaluators written directly from the scoring definitions, kept
// free of any library scoring code so they can check it.

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct Inputs {
  std::vector<int> levels;                 // IMML per organization
  std::array<std::array<int, 6>, 4> dc{};  // incompatibility marks
  double ds = 1, qos = 1, ts = 1;
  double w1 = 1, w2 = 1, w3 = 1;
};

struct Scores {
  double pi, dc, po, ratlop;
};

inline Scores evaluate(const Inputs& in) {
  double pi = std::numeric_limits<double>::infinity();
  for (int level : in.levels) pi = std::fmin(pi, 0.2 * level);
  double sum = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 6; ++j) sum += in.dc[i][j] / 24.0;
  const double dc = 1.0 - sum;
  const double po = std::pow(in.ds * in.qos * in.ts, 1.0 / 3.0);
  const double ratlop = (in.w1 * pi + in.w2 * dc + in.w3 * po) / (in.w1 + in.w2 + in.w3);
  return {pi, dc, po, ratlop};
}

}  // namespace oracle
