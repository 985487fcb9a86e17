#include "dwdt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dwdt {

double WeightedPointSet::bbox_diagonal() const {
  if (positions.empty()) return 0.0;
  double lox = positions[0].x, hix = positions[0].x;
  double loy = positions[0].y, hiy = positions[0].y;
  for (const Vec2& p : positions) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  return std::hypot(hix - lox, hiy - loy);
}

bool NeighborTable::contains(int vertex, int candidate) const {
  const std::vector<int>& list = neighbors[static_cast<std::size_t>(vertex)];
  return std::find(list.begin(), list.end(), candidate) != list.end();
}

namespace {

struct DistIdx {
  double d2;
  int idx;
};

inline bool closer(const DistIdx& a, const DistIdx& b) {
  if (a.d2 != b.d2) return a.d2 < b.d2;
  return a.idx < b.idx;
}

}  // namespace

NeighborTable knn_brute_force(std::span<const Vec2> points, int k) {
  const int n = static_cast<int>(points.size());
  k = std::min(k, n - 1);
  NeighborTable table;
  table.k = k;
  table.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<DistIdx> scratch;
  for (int i = 0; i < n; ++i) {
    scratch.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      scratch.push_back({norm2(points[j] - points[i]), j});
    }
    std::partial_sort(scratch.begin(), scratch.begin() + k, scratch.end(), closer);
    std::vector<int>& out = table.neighbors[static_cast<std::size_t>(i)];
    out.resize(static_cast<std::size_t>(k));
    for (int t = 0; t < k; ++t) out[static_cast<std::size_t>(t)] = scratch[static_cast<std::size_t>(t)].idx;
  }
  return table;
}

// Uniform-grid kNN: bucket the points, then search ring-by-ring outward
// until the k-th best distance beats everything a farther ring could hold.
NeighborTable knn(std::span<const Vec2> points, int k) {
  const int n = static_cast<int>(points.size());
  k = std::min(k, n - 1);
  if (n <= 64 || k >= n - 1) return knn_brute_force(points, k);

  double lox = points[0].x, hix = points[0].x;
  double loy = points[0].y, hiy = points[0].y;
  for (const Vec2& p : points) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  const double w = std::max(hix - lox, 1e-300);
  const double h = std::max(hiy - loy, 1e-300);
  // Aim for O(k) points within the first couple of rings.
  const int cells = std::max(1, static_cast<int>(std::floor(
                                    std::sqrt(static_cast<double>(n) /
                                              std::max(1.0, 0.25 * k)))));
  const int gx = cells, gy = cells;
  const double cw = w / gx, ch = h / gy;

  auto cell_of = [&](const Vec2& p) {
    int cx = std::min(gx - 1, static_cast<int>((p.x - lox) / cw));
    int cy = std::min(gy - 1, static_cast<int>((p.y - loy) / ch));
    return std::pair<int, int>(std::max(0, cx), std::max(0, cy));
  };

  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(gx * gy));
  for (int i = 0; i < n; ++i) {
    auto [cx, cy] = cell_of(points[i]);
    buckets[static_cast<std::size_t>(cy * gx + cx)].push_back(i);
  }

  NeighborTable table;
  table.k = k;
  table.neighbors.resize(static_cast<std::size_t>(n));
  std::vector<DistIdx> heap;  // max-heap on (d2, idx) keeping the best k
  heap.reserve(static_cast<std::size_t>(k) + 1);
  auto worse = [](const DistIdx& a, const DistIdx& b) { return closer(a, b); };

  for (int i = 0; i < n; ++i) {
    heap.clear();
    auto [cx, cy] = cell_of(points[i]);
    const int max_ring = std::max(gx, gy);
    for (int ring = 0; ring <= max_ring; ++ring) {
      if (static_cast<int>(heap.size()) == k) {
        // Any point in ring r is at least (r-1)*min(cw,ch) away.
        const double guard = (ring - 1) * std::min(cw, ch);
        if (guard > 0.0 && guard * guard > heap.front().d2) break;
      }
      const int x0 = cx - ring, x1 = cx + ring;
      const int y0 = cy - ring, y1 = cy + ring;
      for (int y = y0; y <= y1; ++y) {
        if (y < 0 || y >= gy) continue;
        for (int x = x0; x <= x1; ++x) {
          if (x < 0 || x >= gx) continue;
          if (ring > 0 && x != x0 && x != x1 && y != y0 && y != y1) continue;
          for (int j : buckets[static_cast<std::size_t>(y * gx + x)]) {
            if (j == i) continue;
            DistIdx cand{norm2(points[j] - points[i]), j};
            if (static_cast<int>(heap.size()) < k) {
              heap.push_back(cand);
              std::push_heap(heap.begin(), heap.end(), worse);
            } else if (closer(cand, heap.front())) {
              std::pop_heap(heap.begin(), heap.end(), worse);
              heap.back() = cand;
              std::push_heap(heap.begin(), heap.end(), worse);
            }
          }
        }
      }
    }
    std::sort(heap.begin(), heap.end(), closer);
    std::vector<int>& out = table.neighbors[static_cast<std::size_t>(i)];
    out.resize(heap.size());
    for (std::size_t t = 0; t < heap.size(); ++t) out[t] = heap[t].idx;
  }
  return table;
}

}  // namespace dwdt
