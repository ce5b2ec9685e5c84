// Exact diameters and ball growth of finite coset spaces by layered breadth
// first search, and the subgroup sandwich check for towers K <= H <= G.

#ifndef POLYFLAT_DIAMETER_HPP_
#define POLYFLAT_DIAMETER_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "quotients.hpp"

namespace polyflat {

constexpr std::uint64_t default_bfs_cap = 20'000'000;

struct GrowthProfile {
  std::vector<std::uint64_t> ball_sizes;  // ball_sizes[r] = |S^r H / H|
  std::uint64_t diameter = 0;
  std::uint64_t coset_count = 0;
};

namespace detail {

inline void check_cap(std::uint64_t states, std::uint64_t cap) {
  if (states > cap)
    throw ResourceRefusal("coset space has " + std::to_string(states) +
                          " states, above the BFS cap of " + std::to_string(cap));
}

constexpr std::uint32_t no_parent = 0xffffffffu;

// Layered BFS over vertices 0..count-1. expand(u, visit) must call
// visit(gen, v) for every edge u -> v. When `parent` is given it receives,
// per vertex, the predecessor and the generator used (no_parent at start).
// `order`, when given, receives the vertices in visiting order.
template <class Expand>
GrowthProfile layered_bfs(std::uint64_t count, std::uint64_t start, Expand&& expand,
                          std::vector<std::pair<std::uint64_t, std::uint32_t>>* parent = nullptr,
                          std::vector<std::uint64_t>* order = nullptr) {
  std::vector<bool> seen(count, false);
  if (parent)
    parent->assign(count, {0, no_parent});
  std::vector<std::uint64_t> frontier{start}, next;
  seen[start] = true;
  GrowthProfile prof;
  prof.coset_count = count;
  std::uint64_t total = 1;
  prof.ball_sizes.push_back(1);
  if (order)
    order->assign(1, start);
  while (total < count) {
    next.clear();
    for (std::uint64_t u : frontier)
      expand(u, [&](std::uint32_t gen, std::uint64_t v) {
        if (seen[v])
          return;
        seen[v] = true;
        if (parent)
          (*parent)[v] = {u, gen};
        next.push_back(v);
      });
    if (next.empty())
      fail("generating set does not act transitively: reached " + std::to_string(total) + " of " +
           std::to_string(count) + " cosets");
    total += next.size();
    if (order)
      order->insert(order->end(), next.begin(), next.end());
    prof.ball_sizes.push_back(total);
    std::swap(frontier, next);
  }
  prof.diameter = prof.ball_sizes.size() - 1;
  return prof;
}

template <class ShapeT>
auto shape_expander(const ShapeT& shape, const std::vector<Generator>& gens) {
  using Action = typename ShapeT::Action;
  std::vector<std::pair<std::uint32_t, Action>> actions;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& e = gens[i].element;
    if (std::all_of(e.begin(), e.end(), [](std::int64_t x) { return x == 0; }))
      continue;  // identity
    actions.emplace_back(static_cast<std::uint32_t>(i), shape.prepare(e));
  }
  return [&shape, actions = std::move(actions), cur = Coords(shape.arity()),
          out = Coords(shape.arity())](std::uint64_t u, auto&& visit) mutable {
    shape.unrank(u, cur);
    for (const auto& [gen, act] : actions) {
      shape.act(act, cur, out);
      visit(gen, shape.rank(out));
    }
  };
}

}  // namespace detail

/// Growth profile of the ball around `start` (default: the base coset H).
template <class ShapeT>
GrowthProfile bfs_profile(const ShapeT& shape, const std::vector<Generator>& gens,
                          std::uint64_t cap = default_bfs_cap,
                          const std::optional<Coords>& start = std::nullopt) {
  detail::check_cap(shape.size(), cap);
  std::uint64_t s = start ? shape.rank(shape.canonicalise(*start)) : 0;
  return detail::layered_bfs(shape.size(), s, detail::shape_expander(shape, gens));
}

inline GrowthProfile bfs_profile(const CosetSpace& space, std::uint64_t cap = default_bfs_cap,
                                 const std::optional<Coords>& start = std::nullopt) {
  return std::visit([&](const auto& s) { return bfs_profile(s, space.generators(), cap, start); },
                    space.shape());
}

inline std::uint64_t diameter(const CosetSpace& space, std::uint64_t cap = default_bfs_cap) {
  return bfs_profile(space, cap).diameter;
}

/// Shortest word w = (s_1, ..., s_k) with s_1 s_2 ... s_k H = target.
inline std::vector<std::string> witness_word(const CosetSpace& space, const Coords& target,
                                             std::uint64_t cap = default_bfs_cap) {
  return std::visit(
      [&](const auto& shape) {
        detail::check_cap(shape.size(), cap);
        std::vector<std::pair<std::uint64_t, std::uint32_t>> parent;
        detail::layered_bfs(shape.size(), 0, detail::shape_expander(shape, space.generators()),
                            &parent);
        std::vector<std::string> word;
        std::uint64_t v = shape.rank(shape.canonicalise(target));
        // Each step left-multiplies, so the outermost generator comes first.
        while (parent[v].second != detail::no_parent) {
          word.push_back(space.generators()[parent[v].second].name);
          v = parent[v].first;
        }
        return word;
      },
      space.shape());
}

// SUBGROUP TOWERS

/// Elements of H/K (as canonical G/K coordinates) together with words in S.
struct InducedGenerators {
  std::vector<Coords> elements;
  std::vector<std::vector<std::string>> words;
};

struct SandwichResult {
  std::uint64_t d1 = 0;  // diam_T(H/K)
  std::uint64_t d2 = 0;  // diam_S(G/K)
  std::uint64_t d3 = 0;  // diam_S(G/H)
  bool holds = false;
  std::size_t t_size = 0;
};

/// A tower K <= H <= G: G/K a normal triangular quotient and H/K given by a
/// membership test on canonical G/K coordinates.
class SubgroupTower {
 public:
  using Membership = std::function<bool(const Coords&)>;

  SubgroupTower(TriangularQuotient gk, Membership in_h, std::vector<Generator> gens = {},
                std::uint64_t cap = default_bfs_cap)
      : gk_(std::move(gk)), in_h_(std::move(in_h)) {
    if (gens.empty())
      gens = gk_.default_generators();
    space_ = std::make_unique<CosetSpace>(gk_, gens);
    if (!space_->is_normal())
      fail("sandwich check needs K normal in G");
    detail::check_cap(gk_.size(), cap);
    cap_ = cap;
    index_elements();
    check_subgroup();
    index_cosets();
  }

  const TriangularQuotient& quotient() const { return gk_; }
  const CosetSpace& space() const { return *space_; }
  std::uint64_t subgroup_order() const { return h_elems_.size(); }
  std::uint64_t coset_count_gh() const { return coset_total_; }

  /// diam_S(G/H): least r with S^r K meeting every coset of H.
  std::uint64_t diam_g_over_h() const {
    std::vector<bool> hit(coset_total_, false);
    std::uint64_t hits = 0;
    std::uint64_t radius = 0;
    auto mark = [&](std::uint64_t v) {
      if (!hit[coset_of_[v]]) {
        hit[coset_of_[v]] = true;
        ++hits;
      }
    };
    auto prof = ball_layers();
    for (const auto& layer : prof) {
      for (auto v : layer)
        mark(v);
      if (hits == coset_total_)
        return radius;
      ++radius;
    }
    fail("generating set does not generate G");
  }

  /// T = S^{2 diam_S(G/H) + 1} intersected with H, as elements of H/K.
  InducedGenerators induced_generating_set() const {
    std::uint64_t radius = 2 * diam_g_over_h() + 1;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> parent;
    auto layers = ball_layers(&parent);
    InducedGenerators t;
    Coords c(gk_.arity());
    for (std::uint64_t r = 0; r < layers.size() && r <= radius; ++r)
      for (auto v : layers[r]) {
        if (h_index_[v] < 0)
          continue;
        gk_.unrank(v, c);
        t.elements.push_back(c);
        std::vector<std::string> word;
        for (std::uint64_t u = v; parent[u].second != detail::no_parent; u = parent[u].first)
          word.push_back(space_->generators()[parent[u].second].name);
        t.words.push_back(std::move(word));
      }
    return t;
  }

  /// diam_T(H/K) for the given generating elements of H/K.
  std::uint64_t diam_h_over_k(const std::vector<Coords>& t) const {
    std::vector<Coords> gens;
    for (const auto& g : t)
      if (std::any_of(g.begin(), g.end(), [](std::int64_t x) { return x != 0; }))
        gens.push_back(g);
    Coords cur(gk_.arity()), out(gk_.arity());
    auto prof = detail::layered_bfs(h_elems_.size(), h_index_[0], [&](std::uint64_t u, auto&& visit) {
      gk_.unrank(h_elems_[u], cur);
      for (std::uint32_t i = 0; i < gens.size(); ++i) {
        gk_.act(gens[i], cur, out);
        auto idx = h_index_[gk_.rank(out)];
        if (idx < 0)
          fail("induced generator leaves H");
        visit(i, static_cast<std::uint64_t>(idx));
      }
    });
    return prof.diameter;
  }

  SandwichResult sandwich_check() const {
    SandwichResult res;
    res.d3 = diam_g_over_h();
    auto t = induced_generating_set();
    res.t_size = t.elements.size();
    res.d1 = diam_h_over_k(t.elements);
    res.d2 = bfs_profile(*space_, cap_).diameter;
    res.holds = res.d1 <= res.d2;
    // At H = G or H = K the upper bound degenerates to zero; only the
    // lower inequality is meaningful there.
    if (res.d1 > 0 && res.d3 > 0)
      res.holds = res.holds && res.d2 <= 4 * res.d3 * res.d1;
    return res;
  }

 private:
  std::vector<std::vector<std::uint64_t>> ball_layers(
      std::vector<std::pair<std::uint64_t, std::uint32_t>>* parent = nullptr) const {
    std::vector<std::uint64_t> order;
    auto prof = detail::layered_bfs(gk_.size(), 0, detail::shape_expander(gk_, space_->generators()),
                                    parent, &order);
    std::vector<std::vector<std::uint64_t>> layers;
    std::uint64_t from = 0;
    for (auto upto : prof.ball_sizes) {
      layers.emplace_back(order.begin() + from, order.begin() + upto);
      from = upto;
    }
    return layers;
  }

  void index_elements() {
    h_index_.assign(gk_.size(), -1);
    Coords c(gk_.arity());
    for (std::uint64_t v = 0; v < gk_.size(); ++v) {
      gk_.unrank(v, c);
      if (in_h_(c)) {
        h_index_[v] = static_cast<std::int64_t>(h_elems_.size());
        h_elems_.push_back(v);
      }
    }
  }

  void check_subgroup() const {
    if (h_index_[0] < 0)
      fail("membership test rejects the identity");
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, h_elems_.size() - 1);
    std::size_t trials = std::min<std::size_t>(h_elems_.size() * h_elems_.size(), 4000);
    Coords a(gk_.arity()), b(gk_.arity());
    for (std::size_t k = 0; k < trials; ++k) {
      gk_.unrank(h_elems_[pick(rng)], a);
      gk_.unrank(h_elems_[pick(rng)], b);
      Coords prod = gk_.canonicalise(gk_.multiply(a, gk_.inverse(b)));
      if (!in_h_(prod))
        fail("membership test is not closed under a * b^-1");
    }
  }

  void index_cosets() {
    coset_of_.assign(gk_.size(), no_coset);
    Coords g(gk_.arity()), h(gk_.arity()), out(gk_.arity());
    for (std::uint64_t v = 0; v < gk_.size(); ++v) {
      if (coset_of_[v] != no_coset)
        continue;
      gk_.unrank(v, g);
      for (auto hv : h_elems_) {
        gk_.unrank(hv, h);
        gk_.multiply_into(g, h, out);
        gk_.canonicalise_in_place(out);
        coset_of_[gk_.rank(out)] = coset_total_;
      }
      ++coset_total_;
    }
  }

  static constexpr std::uint64_t no_coset = ~std::uint64_t{0};

  TriangularQuotient gk_;
  Membership in_h_;
  std::unique_ptr<CosetSpace> space_;
  std::uint64_t cap_ = default_bfs_cap;
  std::vector<std::int64_t> h_index_;
  std::vector<std::uint64_t> h_elems_;
  std::vector<std::uint64_t> coset_of_;
  std::uint64_t coset_total_ = 0;
};

/// Membership "every coordinate is divisible by the matching modulus",
/// which describes K_m inside Heisenberg quotients and mZ inside Z/NZ.
inline SubgroupTower::Membership divisible_by(std::vector<std::int64_t> moduli) {
  return [moduli = std::move(moduli)](const Coords& c) {
    for (std::size_t i = 0; i < c.size(); ++i)
      if (c[i] % moduli.at(i) != 0)
        return false;
    return true;
  };
}

inline InducedGenerators induced_generating_set(const SubgroupTower& tower) {
  return tower.induced_generating_set();
}

inline SandwichResult sandwich_check(const SubgroupTower& tower) { return tower.sandwich_check(); }

}  // namespace polyflat

#endif  // POLYFLAT_DIAMETER_HPP_
