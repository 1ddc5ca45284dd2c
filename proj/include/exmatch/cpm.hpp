#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "exmatch/graph.hpp"
#include "exmatch/oracles.hpp"

namespace exmatch {

// Dense bit vector over F2, indexed by edge id.
class F2Vector {
public:
  explicit F2Vector(int dim) : dim_(dim), words_((static_cast<std::size_t>(dim) + 63) / 64, 0) {}

  static F2Vector from_edges(int dim, const std::vector<int>& edge_ids) {
    F2Vector v(dim);
    for (int id : edge_ids) v.set(id);
    return v;
  }

  int dim() const { return dim_; }

  void set(int i) {
    check(i);
    words_[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
  }

  bool test(int i) const {
    check(i);
    return (words_[static_cast<std::size_t>(i) / 64] >> (i % 64)) & 1;
  }

  void xor_with(const F2Vector& o) {
    if (o.dim_ != dim_) throw InputError("dimension mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
  }

  bool dot(const F2Vector& o) const {
    if (o.dim_ != dim_) throw InputError("dimension mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      acc ^= words_[i] & o.words_[i];
    return std::popcount(acc) % 2 == 1;
  }

  bool zero() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  int lowest_set() const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i]) return static_cast<int>(i * 64 + std::countr_zero(words_[i]));
    return -1;
  }

  bool operator==(const F2Vector& o) const {
    return dim_ == o.dim_ && words_ == o.words_;
  }

private:
  void check(int i) const {
    if (i < 0 || i >= dim_) throw InputError("bit index out of range");
  }

  int dim_;
  std::vector<std::uint64_t> words_;
};

inline F2Vector red_vector(const ColoredGraph& g) {
  return F2Vector::from_edges(g.m(), g.red_edge_ids());
}

inline F2Vector vertex_star_vector(const ColoredGraph& g, int v) {
  return F2Vector::from_edges(g.m(), g.incident(v));
}

// Supplies a spanning set of the F2 span of perfect-matching incidence
// vectors. The built-in provider enumerates matchings outright; an external
// provider can swap in something stronger without touching the layers above.
using HullProvider = std::function<std::vector<F2Vector>(const ColoredGraph&)>;

struct HullBasis {
  enum class Provenance { brute_force, external };
  int dim = 0;
  std::vector<F2Vector> vectors;
  Provenance provenance = Provenance::brute_force;
};

inline HullProvider brute_hull_provider(OracleCaps caps = {}) {
  return [caps](const ColoredGraph& g) {
    std::vector<F2Vector> vs;
    for (const auto& ids : enumerate_pms(g, caps))
      vs.push_back(F2Vector::from_edges(g.m(), ids));
    return vs;
  };
}

namespace detail {

inline std::vector<F2Vector> gauss_basis(const std::vector<F2Vector>& vecs) {
  std::vector<F2Vector> basis;
  std::vector<int> pivot;
  for (F2Vector v : vecs) {
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (v.test(pivot[i])) v.xor_with(basis[i]);
    int p = v.lowest_set();
    if (p < 0) continue;
    basis.push_back(std::move(v));
    pivot.push_back(p);
  }
  return basis;
}

}  // namespace detail

inline HullBasis hull_basis(const ColoredGraph& g, const HullProvider& provider,
                            HullBasis::Provenance provenance) {
  HullBasis b;
  b.dim = g.m();
  b.vectors = detail::gauss_basis(provider(g));
  b.provenance = provenance;
  return b;
}

inline HullBasis hull_basis(const ColoredGraph& g, OracleCaps caps = {}) {
  return hull_basis(g, brute_hull_provider(caps), HullBasis::Provenance::brute_force);
}

// Some perfect matching has an odd number of red edges iff some basis vector
// of the matching span has odd product with the red indicator.
inline bool exists_odd_red_pm(const HullBasis& basis, const F2Vector& red) {
  for (const F2Vector& x : basis.vectors)
    if (x.dot(red)) return true;
  return false;
}

// Is there a perfect matching whose red count has the parity of k?
// Odd k reads off the basis directly. Even k is the same question on the
// graph extended by one always-matched red edge; since that edge lies in
// every matching of the extended graph, extending a basis vector by the
// parity of its decomposition (its product with any vertex star) simulates
// the gadget without mutating the graph.
inline bool decide_cpm(const ColoredGraph& g, int k, const HullBasis& basis) {
  if (k < 0) throw InputError("negative target");
  F2Vector target = red_vector(g);
  if (k % 2 == 0) target.xor_with(vertex_star_vector(g, 1));
  return exists_odd_red_pm(basis, target);
}

namespace detail {

inline ColoredGraph subgraph(const ColoredGraph& g, const std::vector<bool>& alive,
                             int skip_id) {
  std::optional<int> side = g.bipartite() ? std::optional<int>(g.side_a_count())
                                          : std::nullopt;
  ColoredGraph h(g.n(), side);
  for (int id = 0; id < g.m(); ++id) {
    if (!alive[static_cast<std::size_t>(id)] || id == skip_id) continue;
    const Edge& e = g.edge(id);
    h.add_edge(e.u, e.v, e.color);
  }
  return h;
}

}  // namespace detail

struct CpmResult {
  PerfectMatching matching;
  int decide_calls = 0;
};

// Self-reduction: keep deleting edges while the parity question stays
// solvable; once nothing is deletable the surviving edges are themselves the
// matching. At most |E|^2 + 1 decide calls.
inline std::optional<CpmResult> solve_cpm(const ColoredGraph& g, int k,
                                          const HullProvider& provider,
                                          HullBasis::Provenance provenance =
                                              HullBasis::Provenance::external) {
  if (k < 0) throw InputError("negative target");
  int calls = 0;
  auto decide_sub = [&](const ColoredGraph& h) {
    ++calls;
    HullBasis b = hull_basis(h, provider, provenance);
    return decide_cpm(h, k, b);
  };
  if (!decide_sub(g)) return std::nullopt;
  std::vector<bool> alive(static_cast<std::size_t>(g.m()), true);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int id = 0; id < g.m(); ++id) {
      if (!alive[static_cast<std::size_t>(id)]) continue;
      if (decide_sub(detail::subgraph(g, alive, id))) {
        alive[static_cast<std::size_t>(id)] = false;
        changed = true;
      }
    }
  }
  std::vector<int> ids;
  for (int id = 0; id < g.m(); ++id)
    if (alive[static_cast<std::size_t>(id)]) ids.push_back(id);
  PerfectMatching m(g, std::move(ids));  // throws if the survivors are not one
  if ((m.red_count() - k) % 2 != 0)
    throw InputError("parity lost during reduction");
  return CpmResult{std::move(m), calls};
}

inline std::optional<CpmResult> solve_cpm(const ColoredGraph& g, int k,
                                          OracleCaps caps = {}) {
  return solve_cpm(g, k, brute_hull_provider(caps),
                   HullBasis::Provenance::brute_force);
}

}  // namespace exmatch
