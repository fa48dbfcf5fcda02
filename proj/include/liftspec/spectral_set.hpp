#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace liftspec {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A closed subset of the real line: either a finite multiset of points, or a
// union of disjoint closed intervals plus isolated points.
class SpectralSet {
 public:
  SpectralSet() = default;

  // Finite multiset; duplicates are kept.
  static SpectralSet finite(std::vector<double> values);

  // Sorts and merges overlapping intervals, drops points covered by an
  // interval and duplicate points.
  static SpectralSet from_parts(std::vector<Interval> intervals,
                                std::vector<double> points);

  const std::vector<Interval>& intervals() const { return intervals_; }
  const std::vector<double>& points() const { return points_; }

  bool empty() const { return intervals_.empty() && points_.empty(); }
  bool is_finite() const { return intervals_.empty(); }

  double min() const;
  double max() const;

  // Distance from x to the closest element; EmptySet on an empty set.
  double distance_to(double x) const;

 private:
  std::vector<Interval> intervals_;
  std::vector<double> points_;
};

// sup_{s in from} dist(s, to), exact: the supremum over an interval of a
// piecewise-linear distance function is attained at interval endpoints or
// at midpoints of gaps of the target set.
double directed_distance(const SpectralSet& from, const SpectralSet& to);

double hausdorff(const SpectralSet& s, const SpectralSet& t);

// {"intervals": [[lo, hi], ...], "points": [...]}
nlohmann::json to_json(const SpectralSet& s);
SpectralSet spectral_set_from_json(const nlohmann::json& j);

}  // namespace liftspec
