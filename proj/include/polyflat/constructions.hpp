// Builders for the concrete subgroup families: Heisenberg K_p and H_n, the
// index-p lattice A_v, the quotient Gamma_p of Z^n x| Z, and its extension
// to Z^n x| Z^m.

#ifndef POLYFLAT_CONSTRUCTIONS_HPP_
#define POLYFLAT_CONSTRUCTIONS_HPP_

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "eigenp.hpp"
#include "exact.hpp"
#include "modp.hpp"
#include "quotients.hpp"

namespace polyflat {

// HEISENBERG

// Coordinates (a, b, c) are the normal form x^a y^b z^c with x = E12,
// y = E23 and z = E13 = [x, y]. The matrix with entries a, b and corner c'
// has normal coordinates (a, b, c' - ab).

inline Coords heisenberg_from_matrix(const Coords& m) { return {m[0], m[1], m[2] - m[0] * m[1]}; }
inline Coords heisenberg_to_matrix(const Coords& l) { return {l[0], l[1], l[2] + l[0] * l[1]}; }

/// H / <x^{q0}, y^{q1}, z^{q2}> with S = {1, x^+-1, y^+-1, z^+-1}.
inline TriangularQuotient heisenberg_quotient(std::int64_t qx, std::int64_t qy, std::int64_t qz) {
  return TriangularQuotient(3, {{0, 1, {0, 0, 1}}}, {qx, qy, qz}, {false, false, true},
                            {"x", "y", "z"});
}

inline CosetSpace heisenberg_Kp(std::int64_t p) {
  if (p < 2 || !is_prime(static_cast<u64>(p)))
    fail(std::to_string(p) + " is not prime");
  return CosetSpace(heisenberg_quotient(p, p, p));
}

inline CosetSpace heisenberg_Hn(std::int64_t n) {
  if (n < 1)
    fail("H_n needs n >= 1");
  if (n > 3'037'000'499)
    throw ResourceRefusal("n^2 does not fit in 63 bits");
  return CosetSpace(heisenberg_quotient(n, n, n * n));
}

/// Product of a word of generator names, exactly in the ambient group.
inline Coords word_product(const TriangularQuotient& g, const std::vector<Generator>& gens,
                           const std::vector<std::string>& word) {
  Coords acc = g.identity();
  for (const auto& w : word) {
    auto it = std::find_if(gens.begin(), gens.end(), [&](const Generator& s) { return s.name == w; });
    if (it == gens.end())
      fail("unknown generator '" + w + "'");
    acc = g.multiply(acc, it->element);
  }
  return acc;
}

/// A word of length <= 8n in x^+-1, y^+-1 equal to z^c, from the base-n
/// digits c = c0 + c1 n via z^c = [x^c0, y][x^c1, y^n].
inline std::vector<std::string> short_central_word(std::int64_t c, std::int64_t n) {
  if (n < 1)
    fail("n must be positive");
  if (c < 0 || c >= n * n)
    fail("c must lie in [0, n^2)");
  std::vector<std::string> word;
  auto repeat = [&](const std::string& s, std::int64_t k) {
    for (std::int64_t i = 0; i < k; ++i)
      word.push_back(s);
  };
  // [x^k, y^l] = x^-k y^-l x^k y^l = z^{kl}
  auto commutator = [&](std::int64_t k, std::int64_t l) {
    if (k == 0 || l == 0)
      return;
    repeat("x^-1", k);
    repeat("y^-1", l);
    repeat("x", k);
    repeat("y", l);
  };
  commutator(c % n, 1);
  commutator(c / n, n);
  Coords check = word_product(heisenberg_quotient(1, 1, 1),
                              heisenberg_quotient(1, 1, 1).default_generators(), word);
  if (check != Coords{0, 0, c})
    throw Error("internal error: central word does not multiply out to z^c");
  return word;
}

// THE LATTICE A_v

struct AvResult {
  Lattice lattice;
  u64 p = 0;
  u64 lambda = 0;
  VecModP v;
  std::vector<VecModP> basis;  // B, with v last
  VecModP functional;          // phi: phi(v) = 1, phi(B \ {v}) = 0; A_v = ker(phi) + pZ^n
  bool distinct_roots = false;
};

namespace detail {

inline IntVector lift(const VecModP& v) {
  IntVector out;
  for (auto x : v)
    out.push_back(x);
  return out;
}

// Eigenvalue with the largest multiplicative order; smallest wins ties.
inline u64 preferred_eigenvalue(const std::vector<u64>& values, u64 p) {
  u64 best = 0, best_order = 0;
  for (u64 mu : values) {
    u64 o = mult_order(mu, p);
    if (o > best_order) {
      best = mu;
      best_order = o;
    }
  }
  return best;
}

}  // namespace detail

/// Index-p, M-invariant lattice A_v = <B \ {v}, p e_i> on whose quotient M
/// acts as multiplication by lambda.
inline AvResult build_Av(const IntMatrix& m, u64 p) {
  if (!m.is_unimodular())
    fail("matrix must be unimodular");
  SplitReport rep = split_over(char_poly(m), p);
  if (!rep.splits)
    fail("characteristic polynomial does not split over F_" + std::to_string(p));
  if (rep.has_zero_root)
    fail("characteristic polynomial has a zero root over F_" + std::to_string(p));
  const std::size_t n = m.dim();
  MatModP a = MatModP::from(m, p);
  auto decomposition = eigen_decompose(a);
  std::vector<u64> values;
  for (const auto& d : decomposition)
    values.push_back(d.eigenvalue);

  AvResult res;
  res.p = p;
  res.distinct_roots = rep.distinct;
  res.lambda = detail::preferred_eigenvalue(values, p);
  res.v = last_generalized_eigenvector(a, res.lambda);

  std::vector<VecModP> span;  // running rref span of the chosen vectors
  auto take = [&](const VecModP& x) {
    if (fp::in_span(span, x, p))
      return;
    res.basis.push_back(x);
    span.push_back(x);
    span = fp::rref(std::move(span), p);
  };
  for (const auto& d : decomposition)
    if (d.eigenvalue != res.lambda)
      for (const auto& x : d.gen_eigenspace_basis)
        take(x);
  const auto& ge = std::find_if(decomposition.begin(), decomposition.end(), [&](const EigenData& d) {
                     return d.eigenvalue == res.lambda;
                   })->gen_eigenspace_basis;
  for (const auto& x : fp::image(a.shifted(res.lambda), ge))
    take(x);
  span.push_back(res.v);  // reserve v so the extension avoids its span
  span = fp::rref(std::move(span), p);
  for (const auto& x : ge)
    take(x);
  res.basis.push_back(res.v);
  if (res.basis.size() != n)
    throw Error("internal error: generalised eigenvector basis is incomplete");

  std::vector<IntVector> gens;
  MatModP rest(p, n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    gens.push_back(detail::lift(res.basis[i]));
    for (std::size_t j = 0; j < n; ++j)
      rest(i, j) = res.basis[i][j];
  }
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, 0);
    e[i] = p;
    gens.push_back(std::move(e));
  }
  res.lattice = hnf(std::move(gens), n);

  auto ker = fp::kernel(rest);
  if (ker.size() != 1)
    throw Error("internal error: B \\ {v} is not a hyperplane");
  VecModP phi = ker[0];
  u64 at_v = 0;
  for (std::size_t j = 0; j < n; ++j)
    at_v = (at_v + mulmod(phi[j], res.v[j], p)) % p;
  u64 scale = invmod(at_v, p);
  for (auto& x : phi)
    x = mulmod(x, scale, p);
  res.functional = std::move(phi);
  return res;
}

/// M e_i - lambda e_i lies in A_v for every i.
inline bool acts_as_scalar(const IntMatrix& m, const Lattice& l, u64 lambda) {
  for (std::size_t i = 0; i < m.dim(); ++i) {
    IntVector e(m.dim(), 0);
    e[i] = 1;
    IntVector w = m.apply(e);
    w[i] -= lambda;
    if (!l.contains(w))
      return false;
  }
  return true;
}

// THE QUOTIENTS Gamma_p

enum class Variant { one, ord };

inline std::string to_string(Variant v) { return v == Variant::one ? "1" : "ord"; }

struct Gamma {
  AvResult av;
  Variant variant = Variant::ord;
  u64 r = 1;          // torsion modulus of t in H_p
  CosetSpace space;   // ZpZr for ord, lattice coset space for 1
  LatticeSemidirectQuotient lattice_form;  // G / (A_v x| rZ) in Z^n x| Z
};

/// Coset space of H_p = A_v x| rZ in Z^n x| Z with r = ord_p(lambda) or 1.
inline Gamma build_gamma(const IntMatrix& m, u64 p, Variant variant) {
  AvResult av = build_Av(m, p);
  u64 r = variant == Variant::ord ? mult_order(av.lambda, p) : 1;
  LatticeSemidirectQuotient lattice_form({m}, av.lattice, {static_cast<std::int64_t>(r)});
  if (variant == Variant::ord) {
    ZpZrGroup group(p, r, av.lambda, av.functional);
    return Gamma{std::move(av), variant, r, CosetSpace(std::move(group)), std::move(lattice_form)};
  }
  CosetSpace space(lattice_form);
  return Gamma{std::move(av), variant, r, std::move(space), std::move(lattice_form)};
}

/// The coset space of H' = H x| <t_2, ..., t_m> in Z^n x| Z^m built from a
/// base coset space of Z^n x| Z.
inline CosetSpace extend_to_zm(const LatticeSemidirectQuotient& base,
                               const std::vector<IntMatrix>& extra) {
  if (base.m() != 1)
    fail("base coset space must live in Z^n x| Z");
  std::vector<IntMatrix> matrices = base.matrices();
  matrices.insert(matrices.end(), extra.begin(), extra.end());
  std::vector<std::int64_t> torsion = base.torsion();
  torsion.resize(matrices.size(), 1);
  // The constructor checks commutation and invariance of the lattice.
  return CosetSpace(LatticeSemidirectQuotient(std::move(matrices), base.lattice(), std::move(torsion)));
}

// FAMILY SPECIFICATIONS

enum class FamilyKind { heis_quotients, heis_cosets, zn_by_z, zn_by_zm };

inline std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::heis_quotients: return "heis_quotients";
    case FamilyKind::heis_cosets: return "heis_cosets";
    case FamilyKind::zn_by_z: return "zn_by_z";
    default: return "zn_by_zm";
  }
}

struct FamilySpec {
  FamilyKind kind = FamilyKind::heis_quotients;
  std::vector<IntMatrix> matrices;
  u64 param_min = 1;
  u64 param_max = 0;
  std::vector<Variant> variants{Variant::ord};

  void validate() const {
    bool semidirect = kind == FamilyKind::zn_by_z || kind == FamilyKind::zn_by_zm;
    if (semidirect && matrices.empty())
      fail("family " + to_string(kind) + " needs at least one matrix");
    if (kind == FamilyKind::zn_by_z && matrices.size() != 1)
      fail("zn_by_z takes exactly one matrix");
    if (!semidirect && !matrices.empty())
      fail("Heisenberg families take no matrices");
    if (variants.empty())
      fail("at least one variant is required");
    for (const auto& mat : matrices) {
      if (mat.dim() != matrices[0].dim())
        fail("matrices must share a dimension");
      if (!mat.is_unimodular())
        fail("matrices must be unimodular");
    }
    for (std::size_t i = 0; i < matrices.size(); ++i)
      for (std::size_t j = i + 1; j < matrices.size(); ++j)
        if (!matrices[i].commutes_with(matrices[j]))
          fail("matrices must pairwise commute");
    if (param_max < param_min)
      fail("parameter range is empty");
  }

  /// Parameters of the family members, ascending.
  std::vector<u64> parameters() const {
    std::vector<u64> out;
    switch (kind) {
      case FamilyKind::heis_quotients:
        for (u64 p : primes_up_to(param_max))
          if (p >= param_min)
            out.push_back(p);
        break;
      case FamilyKind::heis_cosets:
        for (u64 n = std::max<u64>(param_min, 1); n <= param_max; ++n)
          out.push_back(n);
        break;
      default: {
        std::vector<IntPoly> polys;
        for (const auto& mat : matrices)
          polys.push_back(char_poly(mat));
        for (u64 p : splitting_primes(polys, param_max))
          if (p >= param_min)
            out.push_back(p);
      }
    }
    return out;
  }
};

}  // namespace polyflat

#endif  // POLYFLAT_CONSTRUCTIONS_HPP_
