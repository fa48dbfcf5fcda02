#include "liftspec/model.hpp"

#include <algorithm>
#include <charconv>
#include <string>

#include "liftspec/errors.hpp"
#include "liftspec/rng.hpp"

namespace liftspec {

namespace {

constexpr double kSymmetryTol = 1e-12;

std::string pair_label(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

void shuffle(std::vector<int>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<size_t>(rng.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::vector<Violation> validate(const WeightSystem& ws) {
  std::vector<Violation> out;
  const int d = ws.d();
  if (ws.r < 1) {
    out.push_back({"shape", "block dimension r must be >= 1"});
    return out;
  }
  if (static_cast<int>(ws.star.size()) != d) {
    out.push_back({"star-size", "star has " + std::to_string(ws.star.size()) +
                                    " entries but d = " + std::to_string(d)});
    return out;
  }
  bool star_ok = true;
  for (int i = 0; i < d; ++i) {
    const int s = ws.star[static_cast<size_t>(i)];
    if (s < 0 || s >= d) {
      out.push_back({"star-range", "star(" + std::to_string(i + 1) +
                                       ") out of range"});
      star_ok = false;
    } else if (ws.star[static_cast<size_t>(s)] != i) {
      out.push_back({"star-involution",
                     "star(star(" + std::to_string(i + 1) + ")) != " +
                         std::to_string(i + 1)});
      star_ok = false;
    }
  }
  auto check_shape = [&](const CMatrix& m, const std::string& name) {
    if (m.rows() != ws.r || m.cols() != ws.r) {
      out.push_back({"shape", name + " is " + std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()) + ", expected " +
                                  std::to_string(ws.r) + "x" +
                                  std::to_string(ws.r)});
      return false;
    }
    if (!all_finite(m)) {
      out.push_back({"non-finite", name + " has non-finite entries"});
      return false;
    }
    return true;
  };
  bool shapes_ok = check_shape(ws.a0, "a0");
  for (int i = 0; i < d; ++i)
    shapes_ok = check_shape(ws.weights[static_cast<size_t>(i)],
                            "a" + std::to_string(i + 1)) && shapes_ok;
  if (!shapes_ok || !star_ok || !ws.symmetric) return out;

  const double a0_scale = std::max(1.0, ws.a0.norm());
  if ((ws.a0 - ws.a0.adjoint()).norm() > kSymmetryTol * a0_scale) {
    out.push_back({"symmetry-a0", "a0 is not Hermitian"});
  }
  for (int i = 0; i < d; ++i) {
    const int j = ws.star[static_cast<size_t>(i)];
    if (j < i) continue;
    const CMatrix& ai = ws.weights[static_cast<size_t>(i)];
    const CMatrix& aj = ws.weights[static_cast<size_t>(j)];
    const double scale = std::max({1.0, ai.norm(), aj.norm()});
    if ((ai.adjoint() - aj).norm() > kSymmetryTol * scale) {
      out.push_back({"symmetry-pair",
                     "symmetry violation on pair " + pair_label(i, j)});
    }
  }
  return out;
}

void require_valid(const WeightSystem& ws) {
  const auto v = validate(ws);
  if (!v.empty()) throw ValidationError("invalid weight system: " + v.front().message);
}

CMatrix base_adjacency(const WeightSystem& ws) {
  CMatrix m = ws.a0;
  for (const auto& a : ws.weights) m += a;
  return m;
}

double norm_bound(const WeightSystem& ws) {
  double s = op_norm(ws.a0);
  for (const auto& a : ws.weights) s += op_norm(a);
  return s;
}

std::vector<int> canonical_star(int q, int d) {
  if (q < 0 || 2 * q > d) throw InvalidArgument("canonical_star: need 0 <= 2q <= d");
  std::vector<int> star(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) {
    if (i < q)
      star[static_cast<size_t>(i)] = i + q;
    else if (i < 2 * q)
      star[static_cast<size_t>(i)] = i - q;
    else
      star[static_cast<size_t>(i)] = i;
  }
  return star;
}

int canonical_q(const WeightSystem& ws) {
  const int d = ws.d();
  for (int cand = 0; 2 * cand <= d; ++cand) {
    if (canonical_star(cand, d) == ws.star) return cand;
  }
  throw ValidationError(
      "star is not in the canonical layout (i <-> i+q, then fixed points); "
      "sampling requires it");
}

WeightSystem from_base_graph(const BaseGraphSpec& spec) {
  if (spec.r < 1) throw InvalidArgument("base graph needs r >= 1");
  const int m = static_cast<int>(spec.edges.size());
  WeightSystem ws;
  ws.r = spec.r;
  ws.a0 = CMatrix::Zero(spec.r, spec.r);
  ws.star = canonical_star(m, 2 * m);
  ws.weights.assign(static_cast<size_t>(2 * m), CMatrix::Zero(spec.r, spec.r));
  for (int k = 0; k < m; ++k) {
    const auto [u, v] = spec.edges[static_cast<size_t>(k)];
    if (u < 1 || u > spec.r || v < 1 || v > spec.r) {
      throw IndexOutOfRange("edge " + std::to_string(k + 1) + " = (" +
                            std::to_string(u) + "," + std::to_string(v) +
                            ") has a vertex outside [1, " +
                            std::to_string(spec.r) + "]");
    }
    ws.weights[static_cast<size_t>(k)](u - 1, v - 1) = 1.0;
    ws.weights[static_cast<size_t>(k + m)](v - 1, u - 1) = 1.0;
  }
  return ws;
}

BaseGraphSpec figure1_base_graph() {
  return {5, {{1, 5}, {1, 2}, {1, 3}, {1, 4}, {2, 5}, {3, 5}, {4, 5}}};
}

WeightSystem preset(std::string_view name) {
  if (name == "figure1") return from_base_graph(figure1_base_graph());
  constexpr std::string_view kRegular = "regular:";
  if (name.substr(0, kRegular.size()) == kRegular) {
    const auto digits = name.substr(kRegular.size());
    int d = 0;
    const auto [ptr, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || d < 1) {
      throw InvalidArgument("bad preset '" + std::string(name) +
                            "': expected regular:<d> with d >= 1");
    }
    WeightSystem ws;
    ws.r = 1;
    ws.a0 = CMatrix::Zero(1, 1);
    ws.star = canonical_star(d / 2, d);
    ws.weights.assign(static_cast<size_t>(d), CMatrix::Ones(1, 1));
    return ws;
  }
  throw InvalidArgument("unknown preset '" + std::string(name) +
                        "' (known: figure1, regular:<d>)");
}

std::vector<Violation> validate(const PermutationFamily& pf) {
  std::vector<Violation> out;
  const int d = pf.d();
  if (pf.q < 0 || 2 * pf.q > d) {
    out.push_back({"layout", "need 0 <= 2q <= d"});
    return out;
  }
  for (int i = 0; i < d; ++i) {
    const auto& p = pf.perms[static_cast<size_t>(i)];
    std::vector<char> seen(static_cast<size_t>(pf.n), 0);
    bool ok = static_cast<int>(p.size()) == pf.n;
    for (int x = 0; ok && x < pf.n; ++x) {
      const int y = p[static_cast<size_t>(x)];
      if (y < 0 || y >= pf.n || seen[static_cast<size_t>(y)]) ok = false;
      else seen[static_cast<size_t>(y)] = 1;
    }
    if (!ok) {
      out.push_back({"bijection", "perms[" + std::to_string(i + 1) +
                                      "] is not a permutation of [n]"});
      continue;
    }
    if (i < pf.q) {
      const auto& inv = pf.perms[static_cast<size_t>(i + pf.q)];
      for (int x = 0; x < pf.n; ++x) {
        if (static_cast<int>(inv.size()) != pf.n ||
            inv[static_cast<size_t>(p[static_cast<size_t>(x)])] != x) {
          out.push_back({"inverse", "perms[" + std::to_string(i + pf.q + 1) +
                                        "] is not the inverse of perms[" +
                                        std::to_string(i + 1) + "]"});
          break;
        }
      }
    } else if (i >= 2 * pf.q) {
      for (int x = 0; x < pf.n; ++x) {
        const int y = p[static_cast<size_t>(x)];
        if (y == x || p[static_cast<size_t>(y)] != x) {
          out.push_back({"matching", "perms[" + std::to_string(i + 1) +
                                         "] is not a fixed-point-free involution"});
          break;
        }
      }
    }
  }
  return out;
}

PermutationFamily sample_symmetric(int n, int q, int d, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sample_symmetric: need n >= 2");
  if (q < 0 || 2 * q > d) throw InvalidArgument("sample_symmetric: need 0 <= 2q <= d");
  if (2 * q < d && n % 2 != 0) {
    throw OddGroundSet("sample_symmetric: matchings need an even n, got n = " +
                       std::to_string(n));
  }
  Rng rng(seed);
  PermutationFamily pf;
  pf.n = n;
  pf.q = q;
  pf.perms.assign(static_cast<size_t>(d), std::vector<int>(static_cast<size_t>(n)));
  std::vector<int> base(static_cast<size_t>(n));
  for (int i = 0; i < q; ++i) {
    for (int x = 0; x < n; ++x) base[static_cast<size_t>(x)] = x;
    shuffle(base, rng);
    auto& p = pf.perms[static_cast<size_t>(i)];
    auto& inv = pf.perms[static_cast<size_t>(i + q)];
    p = base;
    for (int x = 0; x < n; ++x) inv[static_cast<size_t>(p[static_cast<size_t>(x)])] = x;
  }
  for (int i = 2 * q; i < d; ++i) {
    for (int x = 0; x < n; ++x) base[static_cast<size_t>(x)] = x;
    shuffle(base, rng);
    auto& p = pf.perms[static_cast<size_t>(i)];
    for (int k = 0; k + 1 < n; k += 2) {
      const int x = base[static_cast<size_t>(k)];
      const int y = base[static_cast<size_t>(k + 1)];
      p[static_cast<size_t>(x)] = y;
      p[static_cast<size_t>(y)] = x;
    }
  }
  return pf;
}

PermutationFamily sample_for(const WeightSystem& ws, int n, std::uint64_t seed) {
  return sample_symmetric(n, canonical_q(ws), ws.d(), seed);
}

}  // namespace liftspec
