#include "spde_lrt/rng.hpp"

#include <cmath>

namespace spde_lrt {

const ZigguratTables& ZigguratTables::instance() {
  static const ZigguratTables tables = [] {
    ZigguratTables t;
    constexpr int c = kStrips;
    double f = std::exp(-0.5 * kTailStart * kTailStart);
    t.x[0] = kStripArea / f;
    t.x[1] = kTailStart;
    t.x[c] = 0.0;
    for (int i = 2; i < c; ++i) {
      t.x[i] = std::sqrt(-2.0 * std::log(kStripArea / t.x[i - 1] + f));
      f = std::exp(-0.5 * t.x[i] * t.x[i]);
    }
    for (int i = 0; i < c; ++i) t.ratio[i] = t.x[i + 1] / t.x[i];
    return t;
  }();
  return tables;
}

}  // namespace spde_lrt
