#include "regpath/metrics.hpp"

#include "regpath/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace regpath {

namespace {

double inflate(double max_value) {
  if (max_value > 0.0) return 1.1 * max_value;
  // 1.1×max would not be strictly worse for non-positive maxima.
  return max_value + std::max(1.0, 0.1 * std::abs(max_value));
}

struct Obj {
  double f1;
  double g2;
};

std::vector<Obj> sorted_nondominated(const FrontArchive& front) {
  const FrontArchive nd = front_filter_nondominated(front);
  std::vector<Obj> pts;
  pts.reserve(nd.size());
  for (const auto& p : nd.points()) pts.push_back({p.f1_train, p.g2});
  std::sort(pts.begin(), pts.end(),
            [](const Obj& a, const Obj& b) { return a.g2 < b.g2 || (a.g2 == b.g2 && a.f1 < b.f1); });
  // Exact duplicates do not dominate each other; keep one.
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Obj& a, const Obj& b) { return a.f1 == b.f1 && a.g2 == b.g2; }),
            pts.end());
  return pts;
}

}  // namespace

ReferencePoint default_reference(std::initializer_list<const FrontArchive*> fronts) {
  double f1_max = -std::numeric_limits<double>::infinity();
  double g2_max = -std::numeric_limits<double>::infinity();
  for (const FrontArchive* f : fronts) {
    for (const auto& p : f->points()) {
      f1_max = std::max(f1_max, p.f1_train);
      g2_max = std::max(g2_max, p.g2);
    }
  }
  if (!std::isfinite(f1_max) || !std::isfinite(g2_max))
    throw std::invalid_argument("default_reference: no points");
  return {inflate(f1_max), inflate(g2_max)};
}

double hypervolume_2d(const FrontArchive& front, const ReferencePoint& ref) {
  for (const auto& p : front.points()) {
    if (!(p.f1_train < ref.f1_ref && p.g2 < ref.g2_ref)) {
      std::ostringstream os;
      os << "hypervolume_2d: reference (" << ref.f1_ref << ", " << ref.g2_ref
         << ") does not dominate point " << to_string(p.direction) << '#' << p.index << " (f1="
         << p.f1_train << ", g2=" << p.g2 << ")";
      throw std::invalid_argument(os.str());
    }
  }
  const auto pts = sorted_nondominated(front);
  double area = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double g_next = i + 1 < pts.size() ? pts[i + 1].g2 : ref.g2_ref;
    area += (g_next - pts[i].g2) * (ref.f1_ref - pts[i].f1);
  }
  return area;
}

double max_gap(const FrontArchive& front) {
  const auto pts = sorted_nondominated(front);
  if (pts.size() < 2) throw std::invalid_argument("max_gap: need at least 2 non-dominated points");
  double f_lo = pts.front().f1, f_hi = pts.front().f1;
  for (const auto& p : pts) {
    f_lo = std::min(f_lo, p.f1);
    f_hi = std::max(f_hi, p.f1);
  }
  const double g_lo = pts.front().g2, g_hi = pts.back().g2;
  auto norm = [](double v, double lo, double hi) { return hi > lo ? (v - lo) / (hi - lo) : 0.0; };
  double gap = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double df = norm(pts[i].f1, f_lo, f_hi) - norm(pts[i - 1].f1, f_lo, f_hi);
    const double dg = norm(pts[i].g2, g_lo, g_hi) - norm(pts[i - 1].g2, g_lo, g_hi);
    gap = std::max(gap, std::hypot(df, dg));
  }
  return gap;
}

Budget budget_report(const Trace& trace) { return trace.budget; }

}  // namespace regpath
