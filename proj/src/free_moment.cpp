#include "liftspec/freelimit.hpp"

#include <algorithm>
#include <string>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

constexpr double kMaxBallEntries = 2e7;

// Reduced words of length <= h; nbr[v * d + i] is the vertex w g_i, or -1
// outside the ball.
struct Ball {
  int size = 0;
  std::vector<int> nbr;
};

Ball cayley_ball(const WeightSystem& ws, int h) {
  const int d = ws.d();
  double count = 1.0;
  double layer = d;
  for (int t = 0; t < h; ++t) {
    count += layer;
    layer *= std::max(d - 1, 0);
  }
  if (count * ws.r * ws.r > kMaxBallEntries)
    throw DepthTooLarge("free_moment: Cayley ball of depth " + std::to_string(h) + " has " +
                        std::to_string(count) + " vertices");
  Ball b;
  std::vector<int> last{-1};
  std::vector<int> depth{0};
  b.nbr.assign(static_cast<size_t>(d), -1);
  for (int v = 0; v < static_cast<int>(last.size()); ++v) {
    if (depth[static_cast<size_t>(v)] == h) continue;
    for (int i = 0; i < d; ++i) {
      const int lv = last[static_cast<size_t>(v)];
      if (lv >= 0 && i == ws.star[static_cast<size_t>(lv)]) continue;
      const int c = static_cast<int>(last.size());
      last.push_back(i);
      depth.push_back(depth[static_cast<size_t>(v)] + 1);
      b.nbr.resize(b.nbr.size() + static_cast<size_t>(d), -1);
      b.nbr[static_cast<size_t>(v) * d + i] = c;
      b.nbr[static_cast<size_t>(c) * d + ws.star[static_cast<size_t>(i)]] = v;
    }
  }
  b.size = static_cast<int>(last.size());
  return b;
}

}  // namespace

double free_moment(const WeightSystem& ws, int k) {
  require_valid(ws);
  if (k < 0) throw InvalidArgument("free_moment: k must be >= 0");
  if (k > kMaxFreeMomentOrder)
    throw DepthTooLarge("free_moment: k = " + std::to_string(k) + " exceeds " +
                        std::to_string(kMaxFreeMomentOrder));
  const int r = ws.r;
  const int d = ws.d();
  const Ball ball = cayley_ball(ws, (k + 1) / 2);
  // F(w) is r x r; column block w of f. (A F)(w) = a0 F(w) + sum_i a_i F(w g_i).
  CMatrix f = CMatrix::Zero(r, static_cast<Eigen::Index>(r) * ball.size);
  f.leftCols(r).setIdentity();
  CMatrix g(f.rows(), f.cols());
  for (int step = 0; step < k; ++step) {
    for (int v = 0; v < ball.size; ++v) {
      auto dst = g.middleCols(static_cast<Eigen::Index>(v) * r, r);
      dst.noalias() = ws.a0 * f.middleCols(static_cast<Eigen::Index>(v) * r, r);
      for (int i = 0; i < d; ++i) {
        const int w = ball.nbr[static_cast<size_t>(v) * d + i];
        if (w >= 0)
          dst.noalias() += ws.weights[static_cast<size_t>(i)] *
                           f.middleCols(static_cast<Eigen::Index>(w) * r, r);
      }
    }
    f.swap(g);
  }
  return f.leftCols(r).trace().real() / r;
}

}  // namespace liftspec
