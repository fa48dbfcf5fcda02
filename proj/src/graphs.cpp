#include "liftspec/graphs.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "liftspec/errors.hpp"

namespace liftspec {

namespace {

void build_adjacency(ColoredGraph& g) {
  g.adj.assign(static_cast<size_t>(g.n), {});
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    const auto& ed = g.edges[static_cast<size_t>(e)];
    g.adj[static_cast<size_t>(ed.x)].emplace_back(ed.y, e);
    if (ed.x != ed.y) g.adj[static_cast<size_t>(ed.y)].emplace_back(ed.x, e);
  }
}

void check_vertex(const ColoredGraph& g, int x) {
  if (x < 0 || x >= g.n)
    throw IndexOutOfRange("vertex " + std::to_string(x + 1) + " outside [1, " +
                          std::to_string(g.n) + "]");
}

// BFS distances from x up to h; visited vertices in BFS order.
struct Bfs {
  std::vector<int> dist;
  std::vector<int> order;
};

void bfs(const ColoredGraph& g, int x, int h, Bfs& s) {
  if (s.dist.size() != static_cast<size_t>(g.n)) s.dist.assign(static_cast<size_t>(g.n), -1);
  for (int v : s.order) s.dist[static_cast<size_t>(v)] = -1;
  s.order.clear();
  s.dist[static_cast<size_t>(x)] = 0;
  s.order.push_back(x);
  for (size_t k = 0; k < s.order.size(); ++k) {
    const int u = s.order[k];
    const int du = s.dist[static_cast<size_t>(u)];
    if (du >= h) continue;
    for (const auto& [v, e] : g.adj[static_cast<size_t>(u)]) {
      (void)e;
      if (s.dist[static_cast<size_t>(v)] < 0) {
        s.dist[static_cast<size_t>(v)] = du + 1;
        s.order.push_back(v);
      }
    }
  }
}

// Edge indices of the ball: incident to a vertex at distance <= h - 1.
std::vector<int> ball_edges(const ColoredGraph& g, const Bfs& s, int h) {
  std::vector<int> es;
  for (int u : s.order) {
    if (s.dist[static_cast<size_t>(u)] > h - 1) continue;
    for (const auto& [v, e] : g.adj[static_cast<size_t>(u)]) {
      (void)v;
      es.push_back(e);
    }
  }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return es;
}

void count_from(const ColoredGraph& g, int start, int u, int depth, int l,
                std::vector<char>& on_path, std::vector<char>& used, long long& total) {
  for (const auto& [v, e] : g.adj[static_cast<size_t>(u)]) {
    if (used[static_cast<size_t>(e)] || v == u) continue;
    if (depth + 1 == l) {
      if (v == start) ++total;
      continue;
    }
    if (v <= start || on_path[static_cast<size_t>(v)]) continue;
    on_path[static_cast<size_t>(v)] = 1;
    used[static_cast<size_t>(e)] = 1;
    count_from(g, start, v, depth + 1, l, on_path, used, total);
    used[static_cast<size_t>(e)] = 0;
    on_path[static_cast<size_t>(v)] = 0;
  }
}

}  // namespace

ColoredEdge canonical_edge(int x, int i, int y, const std::vector<int>& star) {
  const ColoredEdge a{x, i, y};
  const ColoredEdge b{y, star[static_cast<size_t>(i)], x};
  return std::min(a, b);
}

ColoredGraph build_colored_graph(const PermutationFamily& pf) {
  const auto violations = validate(pf);
  if (!violations.empty()) throw ValidationError("permutation family: " + violations.front().message);
  ColoredGraph g;
  g.n = pf.n;
  g.star = canonical_star(pf.q, pf.d());
  g.vertices.resize(static_cast<size_t>(pf.n));
  for (int x = 0; x < pf.n; ++x) g.vertices[static_cast<size_t>(x)] = x;
  for (int i = 0; i < pf.d(); ++i)
    for (int x = 0; x < pf.n; ++x)
      g.edges.push_back(canonical_edge(x, i, pf.perms[static_cast<size_t>(i)][static_cast<size_t>(x)], g.star));
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  build_adjacency(g);
  return g;
}

ColoredGraph ball(const ColoredGraph& g, int x, int h) {
  check_vertex(g, x);
  if (h < 0) throw InvalidArgument("ball: h must be >= 0");
  Bfs s;
  bfs(g, x, h, s);
  ColoredGraph out;
  out.n = g.n;
  out.star = g.star;
  for (int e : ball_edges(g, s, h)) out.edges.push_back(g.edges[static_cast<size_t>(e)]);
  out.vertices.push_back(x);
  for (const auto& e : out.edges) {
    out.vertices.push_back(e.x);
    out.vertices.push_back(e.y);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
  build_adjacency(out);
  return out;
}

long long count_cycles(const ColoredGraph& g, int l) {
  if (l < 1) throw InvalidArgument("count_cycles: l must be >= 1");
  if (l > kMaxCycleLength)
    throw InvalidArgument("count_cycles: l = " + std::to_string(l) + " exceeds " +
                          std::to_string(kMaxCycleLength));
  if (l == 1) {
    return std::count_if(g.edges.begin(), g.edges.end(),
                         [](const ColoredEdge& e) { return e.x == e.y; });
  }
  std::vector<char> on_path(static_cast<size_t>(g.n), 0);
  std::vector<char> used(g.edges.size(), 0);
  long long total = 0;
  for (int s : g.vertices) {
    on_path[static_cast<size_t>(s)] = 1;
    count_from(g, s, s, 0, l, on_path, used, total);
    on_path[static_cast<size_t>(s)] = 0;
  }
  return total / 2;
}

int ball_excess(const ColoredGraph& g, int x, int h) {
  check_vertex(g, x);
  Bfs s;
  bfs(g, x, h, s);
  const auto es = ball_edges(g, s, h);
  return static_cast<int>(es.size()) - static_cast<int>(s.order.size()) + 1;
}

bool is_tangle_free(const ColoredGraph& g, int l) {
  if (l < 1) throw InvalidArgument("is_tangle_free: l must be >= 1");
  Bfs s;
  for (int x : g.vertices) {
    bfs(g, x, l, s);
    const auto es = ball_edges(g, s, l);
    if (static_cast<int>(es.size()) - static_cast<int>(s.order.size()) + 1 > 1) return false;
  }
  return true;
}

double local_moment(const LiftOperator& a, int x, int k) {
  if (x < 0 || x >= a.n())
    throw IndexOutOfRange("local_moment: vertex " + std::to_string(x + 1) + " out of range");
  if (k < 0) throw InvalidArgument("local_moment: k must be >= 0");
  const int r = a.r();
  Complex total = 0.0;
  CVector v(a.dim());
  CVector w(a.dim());
  for (int b = 0; b < r; ++b) {
    v.setZero();
    v[static_cast<Eigen::Index>(x) * r + b] = 1.0;
    for (int s = 0; s < k; ++s) {
      a.apply(v, w);
      v.swap(w);
    }
    total += v[static_cast<Eigen::Index>(x) * r + b];
  }
  return total.real() / r;
}

void write_edge_list(std::ostream& os, const ColoredGraph& g, int q) {
  os << "# liftspec-graph-1 n=" << g.n << " d=" << g.d() << " q=" << q << "\n";
  for (const auto& e : g.edges) os << e.x + 1 << ' ' << e.i + 1 << ' ' << e.y + 1 << "\n";
}

}  // namespace liftspec
