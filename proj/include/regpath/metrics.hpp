#pragma once

#include "regpath/core.hpp"
#include "regpath/mpg.hpp"

#include <initializer_list>
#include <vector>

namespace regpath {

struct ReferencePoint {
  double f1_ref = 0.0;
  double g2_ref = 0.0;
};

// 1.1 × the componentwise maximum over every point of every front, so that
// compared fronts share one reference.
ReferencePoint default_reference(std::initializer_list<const FrontArchive*> fronts);

// Area dominated by the front and bounded by ref. Throws if some point is
// not strictly better than ref in both objectives.
double hypervolume_2d(const FrontArchive& front, const ReferencePoint& ref);

// Largest Euclidean distance between consecutive non-dominated points,
// sorted by g2, after scaling both objectives to [0,1] over the
// non-dominated points' bounding box.
double max_gap(const FrontArchive& front);

Budget budget_report(const Trace& trace);

}  // namespace regpath
