#include "liftspec/spectral_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

// Every element as a closed component, sorted by lower end.
std::vector<Interval> components(const SpectralSet& s) {
  std::vector<Interval> c = s.intervals();
  for (double p : s.points()) c.push_back({p, p});
  std::sort(c.begin(), c.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  return c;
}

double distance_sorted(const std::vector<Interval>& comps, double x) {
  // First component whose lower end exceeds x.
  auto it = std::upper_bound(comps.begin(), comps.end(), x,
                             [](double v, const Interval& c) { return v < c.lo; });
  double best = std::numeric_limits<double>::infinity();
  if (it != comps.end()) best = it->lo - x;
  // Components starting at or before x; any of them may reach furthest right.
  // Components are disjoint after normalization, so the previous one suffices
  // except for finite multisets where all are points.
  if (it != comps.begin()) {
    const Interval& prev = *(it - 1);
    best = std::min(best, x <= prev.hi ? 0.0 : x - prev.hi);
  }
  return best;
}

}  // namespace

SpectralSet SpectralSet::finite(std::vector<double> values) {
  SpectralSet s;
  std::sort(values.begin(), values.end());
  s.points_ = std::move(values);
  return s;
}

SpectralSet SpectralSet::from_parts(std::vector<Interval> intervals,
                                    std::vector<double> points) {
  SpectralSet s;
  for (auto& iv : intervals)
    if (iv.lo > iv.hi) std::swap(iv.lo, iv.hi);
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : intervals) {
    if (!s.intervals_.empty() && iv.lo <= s.intervals_.back().hi) {
      s.intervals_.back().hi = std::max(s.intervals_.back().hi, iv.hi);
    } else {
      s.intervals_.push_back(iv);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  for (double p : points) {
    const bool covered = std::any_of(
        s.intervals_.begin(), s.intervals_.end(),
        [p](const Interval& iv) { return iv.lo <= p && p <= iv.hi; });
    if (!covered) s.points_.push_back(p);
  }
  return s;
}

double SpectralSet::min() const {
  if (empty()) throw EmptySet("min of an empty spectral set");
  double m = std::numeric_limits<double>::infinity();
  if (!intervals_.empty()) m = intervals_.front().lo;
  if (!points_.empty()) m = std::min(m, points_.front());
  return m;
}

double SpectralSet::max() const {
  if (empty()) throw EmptySet("max of an empty spectral set");
  double m = -std::numeric_limits<double>::infinity();
  if (!intervals_.empty()) m = intervals_.back().hi;
  if (!points_.empty()) m = std::max(m, points_.back());
  return m;
}

double SpectralSet::distance_to(double x) const {
  if (empty()) throw EmptySet("distance to an empty spectral set");
  return distance_sorted(components(*this), x);
}

double directed_distance(const SpectralSet& from, const SpectralSet& to) {
  if (from.empty() || to.empty()) throw EmptySet("directed distance with an empty set");
  const auto target = components(to);
  double worst = 0.0;
  for (double p : from.points()) worst = std::max(worst, distance_sorted(target, p));
  for (const auto& iv : from.intervals()) {
    worst = std::max(worst, distance_sorted(target, iv.lo));
    worst = std::max(worst, distance_sorted(target, iv.hi));
    for (size_t k = 0; k + 1 < target.size(); ++k) {
      const double gap_lo = target[k].hi;
      const double gap_hi = target[k + 1].lo;
      if (gap_hi <= gap_lo) continue;
      const double mid = 0.5 * (gap_lo + gap_hi);
      if (iv.lo <= mid && mid <= iv.hi)
        worst = std::max(worst, distance_sorted(target, mid));
    }
  }
  return worst;
}

double hausdorff(const SpectralSet& s, const SpectralSet& t) {
  return std::max(directed_distance(s, t), directed_distance(t, s));
}

nlohmann::json to_json(const SpectralSet& s) {
  nlohmann::json j;
  j["intervals"] = nlohmann::json::array();
  for (const auto& iv : s.intervals())
    j["intervals"].push_back(nlohmann::json::array({iv.lo, iv.hi}));
  j["points"] = s.points();
  return j;
}

SpectralSet spectral_set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("intervals") || !j.contains("points"))
    throw ParseError("spectral set: expected {intervals, points}", 0, "");
  std::vector<Interval> ivs;
  for (const auto& iv : j.at("intervals")) {
    if (!iv.is_array() || iv.size() != 2)
      throw ParseError("spectral set: intervals must be [lo, hi] pairs", 0, "intervals");
    ivs.push_back({iv[0].get<double>(), iv[1].get<double>()});
  }
  auto pts = j.at("points").get<std::vector<double>>();
  if (ivs.empty()) return SpectralSet::finite(std::move(pts));
  return SpectralSet::from_parts(std::move(ivs), std::move(pts));
}

}  // namespace liftspec
