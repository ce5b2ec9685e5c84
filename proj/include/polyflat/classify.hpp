// Virtual nilpotence of Z^n x| Z^m: the roots-of-unity eigenvalue test and
// the lattice lower central series.

#ifndef POLYFLAT_CLASSIFY_HPP_
#define POLYFLAT_CLASSIFY_HPP_

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "core.hpp"
#include "exact.hpp"

namespace polyflat {

inline std::uint64_t euler_phi(std::uint64_t d) {
  std::uint64_t result = d;
  for (std::uint64_t q = 2; q * q <= d; ++q) {
    if (d % q)
      continue;
    while (d % q == 0)
      d /= q;
    result -= result / q;
  }
  if (d > 1)
    result -= result / d;
  return result;
}

/// Phi_d, from x^d - 1 = prod_{e | d} Phi_e.
inline IntPoly cyclotomic(std::uint64_t d) {
  if (d == 0)
    fail("cyclotomic index must be positive");
  static std::map<std::uint64_t, IntPoly> cache;
  static std::mutex lock;
  {
    std::lock_guard<std::mutex> g(lock);
    if (auto it = cache.find(d); it != cache.end())
      return it->second;
  }
  IntPoly f = IntPoly::monomial(d) - IntPoly{1};
  for (std::uint64_t e = 1; e < d; ++e)
    if (d % e == 0)
      f = f.divmod_monic(cyclotomic(e)).first;
  std::lock_guard<std::mutex> g(lock);
  cache.emplace(d, f);
  return f;
}

/// Whether every eigenvalue of the unimodular matrix M is a root of unity,
/// i.e. ch(M) is a product of cyclotomic polynomials.
inline bool is_roots_of_unity(const IntMatrix& m) {
  if (!m.is_unimodular())
    fail("matrix must be unimodular");
  const std::uint64_t n = m.dim();
  IntPoly f = char_poly(m);
  // phi(d) >= sqrt(d/2), so phi(d) <= n forces d <= 2n^2.
  for (std::uint64_t d = 1; d <= 2 * n * n && f.degree() > 0; ++d) {
    if (euler_phi(d) > n)
      continue;
    IntPoly phi = cyclotomic(d);
    for (;;) {
      auto [q, r] = f.divmod_monic(phi);
      if (!r.is_zero())
        break;
      f = q;
    }
  }
  return f == IntPoly{1};
}

// LOWER CENTRAL SERIES

struct LcsReport {
  std::vector<Lattice> terms;  // terms[i - 1] = P_i, starting from P_1 = Z^n
  std::size_t stabilised_at = 0;  // index of the last term computed
  bool nilpotent = false;
  std::size_t nilpotency_class = 0;  // last index with a nonzero term
};

namespace detail {

inline void check_family(const std::vector<IntMatrix>& ms) {
  if (ms.empty())
    fail("need at least one matrix");
  for (const auto& m : ms) {
    if (m.dim() != ms[0].dim())
      fail("matrices must share a dimension");
    if (!m.is_unimodular())
      fail("matrices must be unimodular");
  }
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if (!ms[i].commutes_with(ms[j]))
        fail("matrices must pairwise commute");
}

}  // namespace detail

/// P_2 = <(I - M_j) Z^n>, P_{i+1} = <(I - M_j) P_i>, each closed under the
/// action. Stops at the zero lattice, or once two consecutive terms have
/// the same nonzero rank (from then on the rank can never drop).
inline LcsReport lower_central_series(const std::vector<IntMatrix>& matrices) {
  detail::check_family(matrices);
  const std::size_t n = matrices[0].dim();
  std::vector<IntMatrix> shifts;
  for (const auto& m : matrices)
    shifts.push_back(IntMatrix::identity(n) - m);

  LcsReport rep;
  rep.terms.push_back(full_lattice(n));
  for (;;) {
    const Lattice& cur = rep.terms.back();
    std::vector<IntVector> gens;
    for (const auto& s : shifts)
      for (const auto& b : cur.basis())
        gens.push_back(s.apply(b));
    Lattice next = saturate_under(hnf(std::move(gens), n), matrices);
    bool same_rank = next.rank() == cur.rank();
    rep.terms.push_back(std::move(next));
    const Lattice& last = rep.terms.back();
    if (last.is_zero()) {
      rep.nilpotent = true;
      rep.nilpotency_class = rep.terms.size() - 1;
      break;
    }
    if (same_rank)
      break;
  }
  rep.stabilised_at = rep.terms.size();
  return rep;
}

struct Classification {
  bool virtually_nilpotent = false;
  bool nilpotent = false;
  std::optional<std::size_t> witness_matrix_index;  // 1-based
  LcsReport series;
};

inline Classification classify_zn_by_zm(const std::vector<IntMatrix>& matrices) {
  detail::check_family(matrices);
  Classification c;
  c.virtually_nilpotent = true;
  for (std::size_t i = 0; i < matrices.size(); ++i)
    if (!is_roots_of_unity(matrices[i])) {
      c.virtually_nilpotent = false;
      c.witness_matrix_index = i + 1;
      break;
    }
  c.series = lower_central_series(matrices);
  c.nilpotent = c.series.nilpotent;
  return c;
}

}  // namespace polyflat

#endif  // POLYFLAT_CLASSIFY_HPP_
