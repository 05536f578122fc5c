#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gremfield {

/// Finite descending multiset of points. `truncation` is the number of
/// leading points of the underlying (possibly infinite) process retained.
struct PointSample {
  std::vector<double> points;
  std::size_t truncation = 0;
  std::string meta;

  bool empty() const { return points.empty(); }
  double top() const { return points.front(); }
  double lowest() const { return points.back(); }
};

}  // namespace gremfield
