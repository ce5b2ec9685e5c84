// Finite coset spaces G/H for three group shapes, with canonical coset
// representatives and the left action of a generating set.
//
// Cosets are gH and a generator s sends gH to sgH, so the ball of radius r
// around the base coset is exactly S^r H / H. Every shape numbers its cosets
// 0..size()-1 (mixed radix over the canonical coordinates); the breadth
// first search in diameter.hpp runs on those numbers.

#ifndef POLYFLAT_QUOTIENTS_HPP_
#define POLYFLAT_QUOTIENTS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"
#include "exact.hpp"
#include "modp.hpp"

namespace polyflat {

using Coords = std::vector<std::int64_t>;

struct Generator {
  std::string name;
  Coords element;  // normal coordinates in the ambient group
};

namespace detail {

inline void check_arity(std::size_t got, std::size_t want) {
  if (got != want)
    fail("expected " + std::to_string(want) + " coordinates, got " + std::to_string(got));
}

inline std::uint64_t checked_product(const std::vector<std::int64_t>& radix) {
  unsigned __int128 total = 1;
  for (auto q : radix) {
    total *= static_cast<unsigned __int128>(q);
    if (total > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
      throw ResourceRefusal("coset count does not fit in 63 bits");
  }
  return static_cast<std::uint64_t>(total);
}

inline std::uint64_t mixed_rank(std::span<const std::int64_t> c,
                                const std::vector<std::int64_t>& radix) {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < radix.size(); ++i)
    idx = idx * static_cast<std::uint64_t>(radix[i]) + static_cast<std::uint64_t>(c[i]);
  return idx;
}

inline void mixed_unrank(std::uint64_t idx, std::span<std::int64_t> c,
                         const std::vector<std::int64_t>& radix) {
  for (std::size_t i = radix.size(); i-- > 0;) {
    c[i] = static_cast<std::int64_t>(idx % static_cast<std::uint64_t>(radix[i]));
    idx /= static_cast<std::uint64_t>(radix[i]);
  }
}

inline std::int64_t mulmod_signed(std::int64_t a, std::int64_t b, std::int64_t m) {
  return floor_mod128(static_cast<__int128>(a) * b, m);
}

}  // namespace detail

// TRIANGULAR (class <= 2) QUOTIENTS

/// G given by generators x_1..x_h with unique normal form
/// x_1^{l_1}...x_h^{l_h}, every commutator [x_i, x_j] (i < j) a word in the
/// central generators after x_j; H = {x_1^{q_1 k_1}...x_h^{q_h k_h}}.
/// Indices are 0-based in code; commutators use [a, b] = a^-1 b^-1 a b.
class TriangularQuotient {
 public:
  struct Relation {
    std::size_t i, j;  // i < j
    Coords value;      // exponents of [x_i, x_j]
  };

  TriangularQuotient(std::size_t h, std::vector<Relation> relations,
                     std::vector<std::int64_t> moduli, std::vector<bool> central = {},
                     std::vector<std::string> names = {})
      : h_(h), q_(std::move(moduli)), central_(std::move(central)), names_(std::move(names)) {
    if (h == 0)
      fail("triangular quotient needs at least one generator");
    detail::check_arity(q_.size(), h);
    for (auto q : q_)
      if (q < 1)
        fail("moduli must be positive integers");
    std::vector<std::int64_t> comm(h * h * h, 0);
    for (const auto& r : relations) {
      if (r.i >= r.j || r.j >= h)
        fail("commutator relation needs 0 <= i < j < h");
      detail::check_arity(r.value.size(), h);
      for (std::size_t k = 0; k < h; ++k)
        comm[(r.i * h + r.j) * h + k] = r.value[k];
    }
    if (central_.empty()) {
      central_.assign(h, true);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = i + 1; j < h; ++j)
          for (std::size_t k = 0; k < h; ++k)
            if (comm[(i * h + j) * h + k] != 0)
              central_[i] = central_[j] = false;
    }
    detail::check_arity(central_.size(), h);
    if (names_.empty())
      for (std::size_t i = 0; i < h; ++i)
        names_.push_back("x" + std::to_string(i + 1));
    detail::check_arity(names_.size(), h);

    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = i + 1; j < h; ++j) {
        Term t{i, j, {}};
        for (std::size_t k = 0; k < h; ++k) {
          std::int64_t c = comm[(i * h + j) * h + k];
          if (c == 0)
            continue;
          if (central_[i] || central_[j])
            fail("central generator " + names_[central_[i] ? i : j] +
                 " has a nontrivial commutator");
          if (k <= j)
            fail("[x_i, x_j] must lie in <x_{j+1}, ..., x_h>");
          if (!central_[k])
            fail("commutators must land in central generators (class <= 2)");
          // H is closed under products iff q_i q_j c = 0 mod q_k
          if (static_cast<__int128>(q_[i]) * q_[j] * c % q_[k] != 0)
            fail("the subgroup {x^(q l)} is not closed under multiplication");
          t.support.emplace_back(k, c);
        }
        if (!t.support.empty())
          terms_.push_back(std::move(t));
      }
    size_ = detail::checked_product(q_);
  }

  std::size_t arity() const { return h_; }
  const std::vector<std::int64_t>& moduli() const { return q_; }
  const std::vector<bool>& central_flags() const { return central_; }
  const std::vector<std::string>& names() const { return names_; }
  std::uint64_t size() const { return size_; }
  Int coset_count() const {
    Int c = 1;
    for (auto q : q_)
      c *= q;
    return c;
  }

  std::vector<Relation> relations() const {
    std::vector<Relation> out;
    for (const auto& t : terms_) {
      Coords v(h_, 0);
      for (auto [k, c] : t.support)
        v[k] = c;
      out.push_back({t.i, t.j, std::move(v)});
    }
    return out;
  }

  /// Exact product in G (no reduction modulo H).
  void multiply_into(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                     std::span<std::int64_t> out) const {
    for (std::size_t k = 0; k < h_; ++k)
      out[k] = a[k] + b[k];
    // x_j^a x_i^b = x_i^b x_j^a [x_i, x_j]^(-ab) for i < j
    for (const auto& t : terms_) {
      __int128 coeff = static_cast<__int128>(a[t.j]) * b[t.i];
      if (coeff == 0)
        continue;
      for (auto [k, c] : t.support)
        out[k] = static_cast<std::int64_t>(out[k] - coeff * c);
    }
  }

  Coords multiply(const Coords& a, const Coords& b) const {
    detail::check_arity(a.size(), h_);
    detail::check_arity(b.size(), h_);
    Coords out(h_);
    multiply_into(a, b, out);
    return out;
  }

  Coords inverse(const Coords& a) const {
    detail::check_arity(a.size(), h_);
    Coords out(h_);
    for (std::size_t k = 0; k < h_; ++k)
      out[k] = -a[k];
    for (const auto& t : terms_) {
      __int128 coeff = static_cast<__int128>(a[t.j]) * a[t.i];
      for (auto [k, c] : t.support)
        out[k] = static_cast<std::int64_t>(out[k] - coeff * c);
    }
    return out;
  }

  /// Representative x_1^{r_1}...x_h^{r_h}, 0 <= r_i < q_i, of the left coset
  /// gH. Writing g = r k with k in H, the non-central exponents reduce
  /// directly and pushing k to the right leaves central corrections
  /// r_c = l_c + sum_{i<j} r_j k_i c_ijc (mod q_c).
  void canonicalise_in_place(std::span<std::int64_t> l) const {
    // Terms only write central coordinates and only read non-central ones.
    for (const auto& t : terms_) {
      std::int64_t rj = floor_mod(l[t.j], q_[t.j]);
      std::int64_t ki = l[t.i] - floor_mod(l[t.i], q_[t.i]);
      if (rj == 0 || ki == 0)
        continue;
      for (auto [k, c] : t.support) {
        std::int64_t m = q_[k];
        __int128 corr = static_cast<__int128>(detail::mulmod_signed(rj, ki, m)) * floor_mod(c, m);
        l[k] = floor_mod128(static_cast<__int128>(floor_mod(l[k], m)) + corr, m);
      }
    }
    for (std::size_t k = 0; k < h_; ++k)
      l[k] = floor_mod(l[k], q_[k]);
  }

  Coords canonicalise(Coords l) const {
    detail::check_arity(l.size(), h_);
    canonicalise_in_place(l);
    return l;
  }

  std::uint64_t rank(std::span<const std::int64_t> c) const { return detail::mixed_rank(c, q_); }
  void unrank(std::uint64_t idx, std::span<std::int64_t> c) const {
    detail::mixed_unrank(idx, c, q_);
  }

  using Action = Coords;
  Action prepare(const Coords& s) const {
    detail::check_arity(s.size(), h_);
    return s;
  }
  void act(const Action& s, std::span<const std::int64_t> c, std::span<std::int64_t> out) const {
    multiply_into(s, c, out);
    canonicalise_in_place(out);
  }

  Coords identity() const { return Coords(h_, 0); }

  /// True iff a * b is exactly the identity of G.
  bool are_inverse(const Coords& a, const Coords& b) const {
    Coords prod = multiply(a, b);
    return std::all_of(prod.begin(), prod.end(), [](std::int64_t x) { return x == 0; });
  }

  /// Conjugate s h s^-1 in G.
  Coords conjugate(const Coords& s, const Coords& h) const {
    return multiply(multiply(s, h), inverse(s));
  }

  /// x_i^{q_i}
  std::vector<Coords> subgroup_generators() const {
    std::vector<Coords> gens;
    for (std::size_t i = 0; i < h_; ++i) {
      Coords g(h_, 0);
      g[i] = q_[i];
      gens.push_back(std::move(g));
    }
    return gens;
  }

  std::vector<Generator> default_generators() const {
    std::vector<Generator> gens{{"1", identity()}};
    for (std::size_t i = 0; i < h_; ++i) {
      Coords g(h_, 0);
      g[i] = 1;
      gens.push_back({names_[i], g});
      g[i] = -1;
      gens.push_back({names_[i] + "^-1", g});
    }
    return gens;
  }

 private:
  struct Term {
    std::size_t i, j;
    std::vector<std::pair<std::size_t, std::int64_t>> support;
  };

  std::size_t h_;
  std::vector<std::int64_t> q_;
  std::vector<bool> central_;
  std::vector<std::string> names_;
  std::vector<Term> terms_;
  std::uint64_t size_ = 0;
};

// LATTICE SEMIDIRECT QUOTIENTS

/// G = Z^n x| Z^m with t_j acting by M_j, H = L x| (r_1 Z x ... x r_m Z)
/// for a full-rank lattice L invariant under every M_j. Elements are
/// (v, k) with product (v, k)(w, l) = (v + M^k w, k + l), M^k = prod M_j^{k_j}.
/// Cosets are (v mod L, k mod r), v reduced against the HNF basis of L.
class LatticeSemidirectQuotient {
 public:
  LatticeSemidirectQuotient(std::vector<IntMatrix> matrices, Lattice lattice,
                            std::vector<std::int64_t> torsion)
      : matrices_(std::move(matrices)), lattice_(std::move(lattice)), torsion_(std::move(torsion)) {
    n_ = lattice_.ambient_dim();
    m_ = matrices_.size();
    if (n_ == 0)
      fail("lattice dimension must be positive");
    if (!lattice_.full_rank())
      fail("the vector lattice must have full rank for a finite coset space");
    detail::check_arity(torsion_.size(), m_);
    for (auto r : torsion_)
      if (r < 1)
        fail("torsion moduli must be positive integers");
    for (const auto& mat : matrices_) {
      if (mat.dim() != n_)
        fail("matrix dimension does not match the lattice");
      if (!mat.is_unimodular())
        fail("action matrices must be unimodular");
    }
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = i + 1; j < m_; ++j)
        if (!matrices_[i].commutes_with(matrices_[j]))
          fail("action matrices must pairwise commute");
    if (!(saturate_under(lattice_, matrices_) == lattice_))
      fail("lattice is not invariant under the action matrices");

    Int index = *lattice_index(lattice_);
    if (index > Int(1) << 31)
      throw ResourceRefusal("lattice index exceeds 2^31");
    modulus_ = static_cast<std::int64_t>(index);
    for (const auto& row : lattice_.basis()) {
      Coords r;
      for (const auto& x : row)
        r.push_back(static_cast<std::int64_t>(x));
      basis_.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < n_; ++i)
      radix_.push_back(basis_[i][i]);
    for (auto r : torsion_)
      radix_.push_back(r);
    size_ = detail::checked_product(radix_);
    for (const auto& mat : matrices_) {
      forward_.push_back(reduce_matrix(mat));
      backward_.push_back(reduce_matrix(mat.inverse()));
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t arity() const { return n_ + m_; }
  const std::vector<IntMatrix>& matrices() const { return matrices_; }
  const Lattice& lattice() const { return lattice_; }
  const std::vector<std::int64_t>& torsion() const { return torsion_; }
  std::uint64_t size() const { return size_; }
  Int coset_count() const {
    Int c = *lattice_index(lattice_);
    for (auto r : torsion_)
      c *= r;
    return c;
  }

  /// prod_j M_j^{k_j} with entries reduced mod the lattice index N
  /// (N Z^n lies inside L, so this is all a coset computation needs).
  Coords matrix_power(std::span<const std::int64_t> k) const {
    Coords acc = identity_matrix();
    for (std::size_t j = 0; j < m_; ++j) {
      if (k[j] == 0)
        continue;
      Coords base = k[j] > 0 ? forward_[j] : backward_[j];
      std::uint64_t e = k[j] > 0 ? static_cast<std::uint64_t>(k[j]) : static_cast<std::uint64_t>(-k[j]);
      while (e) {
        if (e & 1)
          acc = matmul(acc, base);
        e >>= 1;
        if (e)
          base = matmul(base, base);
      }
    }
    return acc;
  }

  /// Product in G with the vector part taken mod N; torsion parts exact.
  Coords multiply(const Coords& a, const Coords& b) const {
    detail::check_arity(a.size(), arity());
    detail::check_arity(b.size(), arity());
    Coords out(arity());
    Coords power = matrix_power(std::span(a).subspan(n_));
    apply_into(power, std::span(a).first(n_), std::span(b).first(n_), out);
    for (std::size_t j = 0; j < m_; ++j)
      out[n_ + j] = a[n_ + j] + b[n_ + j];
    return out;
  }

  Coords inverse(const Coords& a) const {
    detail::check_arity(a.size(), arity());
    Coords negk(m_);
    for (std::size_t j = 0; j < m_; ++j)
      negk[j] = -a[n_ + j];
    Coords power = matrix_power(negk);
    Coords out(arity(), 0);
    Coords zero(n_, 0), negv(n_);
    for (std::size_t i = 0; i < n_; ++i)
      negv[i] = floor_mod(-a[i], modulus_);
    apply_into(power, zero, negv, out);
    for (std::size_t j = 0; j < m_; ++j)
      out[n_ + j] = negk[j];
    return out;
  }

  Coords conjugate(const Coords& s, const Coords& h) const {
    return multiply(multiply(s, h), inverse(s));
  }

  /// Exact check (over Z, no reduction) that a * b is the identity.
  bool are_inverse(const Coords& a, const Coords& b) const {
    detail::check_arity(a.size(), arity());
    detail::check_arity(b.size(), arity());
    IntMatrix power = IntMatrix::identity(n_);
    for (std::size_t j = 0; j < m_; ++j)
      power = power * matrices_[j].pow(a[n_ + j]);
    IntVector w(n_);
    for (std::size_t i = 0; i < n_; ++i)
      w[i] = b[i];
    IntVector mw = power.apply(w);
    for (std::size_t i = 0; i < n_; ++i)
      if (a[i] + mw[i] != 0)
        return false;
    for (std::size_t j = 0; j < m_; ++j)
      if (a[n_ + j] + b[n_ + j] != 0)
        return false;
    return true;
  }

  void canonicalise_in_place(std::span<std::int64_t> c) const {
    for (std::size_t i = 0; i < n_; ++i)
      c[i] = floor_mod(c[i], modulus_);
    for (std::size_t i = 0; i < n_; ++i) {
      std::int64_t q = c[i] / basis_[i][i];
      if (q == 0)
        continue;
      for (std::size_t j = i; j < n_; ++j)
        c[j] = floor_mod128(static_cast<__int128>(c[j]) - static_cast<__int128>(q) * basis_[i][j],
                            modulus_);
    }
    for (std::size_t j = 0; j < m_; ++j)
      c[n_ + j] = floor_mod(c[n_ + j], torsion_[j]);
  }

  Coords canonicalise(Coords c) const {
    detail::check_arity(c.size(), arity());
    canonicalise_in_place(c);
    return c;
  }

  std::uint64_t rank(std::span<const std::int64_t> c) const { return detail::mixed_rank(c, radix_); }
  void unrank(std::uint64_t idx, std::span<std::int64_t> c) const {
    detail::mixed_unrank(idx, c, radix_);
  }

  struct Action {
    Coords shift;   // (v_s mod N, k_s)
    Coords matrix;  // M^{k_s} mod N, row-major
  };
  Action prepare(const Coords& s) const {
    detail::check_arity(s.size(), arity());
    Action a{s, matrix_power(std::span(s).subspan(n_))};
    for (std::size_t i = 0; i < n_; ++i)
      a.shift[i] = floor_mod(a.shift[i], modulus_);
    return a;
  }
  void act(const Action& a, std::span<const std::int64_t> c, std::span<std::int64_t> out) const {
    apply_into(a.matrix, std::span<const std::int64_t>(a.shift).first(n_), c.first(n_), out);
    for (std::size_t j = 0; j < m_; ++j)
      out[n_ + j] = a.shift[n_ + j] + c[n_ + j];
    canonicalise_in_place(out);
  }

  Coords identity() const { return Coords(arity(), 0); }

  /// Basis rows of L (as (b, 0)) and t_j^{r_j}.
  std::vector<Coords> subgroup_generators() const {
    std::vector<Coords> gens;
    for (const auto& row : basis_) {
      Coords g(arity(), 0);
      std::copy(row.begin(), row.end(), g.begin());
      gens.push_back(std::move(g));
    }
    for (std::size_t j = 0; j < m_; ++j) {
      Coords g(arity(), 0);
      g[n_ + j] = torsion_[j];
      gens.push_back(std::move(g));
    }
    return gens;
  }

  /// The natural generating set {1, +-e_i, t_j^{+-1}}.
  std::vector<Generator> default_generators() const {
    std::vector<Generator> gens{{"1", identity()}};
    for (std::size_t i = 0; i < n_; ++i) {
      Coords g(arity(), 0);
      g[i] = 1;
      gens.push_back({"e" + std::to_string(i + 1), g});
      g[i] = -1;
      gens.push_back({"-e" + std::to_string(i + 1), g});
    }
    for (std::size_t j = 0; j < m_; ++j) {
      Coords g(arity(), 0);
      g[n_ + j] = 1;
      gens.push_back({"t" + std::to_string(j + 1), g});
      g[n_ + j] = -1;
      gens.push_back({"t" + std::to_string(j + 1) + "^-1", g});
    }
    return gens;
  }

 private:
  Coords reduce_matrix(const IntMatrix& mat) const {
    Coords out(n_ * n_);
    Int mod = modulus_;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Int r = mat(i, j) % mod;
        if (r < 0)
          r += mod;
        out[i * n_ + j] = static_cast<std::int64_t>(r);
      }
    return out;
  }
  Coords identity_matrix() const {
    Coords id(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      id[i * n_ + i] = 1 % modulus_;
    return id;
  }
  Coords matmul(const Coords& a, const Coords& b) const {
    Coords c(n_ * n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        __int128 acc = 0;
        for (std::size_t k = 0; k < n_; ++k)
          acc += static_cast<__int128>(a[i * n_ + k]) * b[k * n_ + j];
        c[i * n_ + j] = floor_mod128(acc, modulus_);
      }
    return c;
  }
  // out[0..n) = shift + matrix * v  (mod N)
  void apply_into(const Coords& matrix, std::span<const std::int64_t> shift,
                  std::span<const std::int64_t> v, std::span<std::int64_t> out) const {
    for (std::size_t i = 0; i < n_; ++i) {
      __int128 acc = shift[i];
      for (std::size_t j = 0; j < n_; ++j)
        acc += static_cast<__int128>(matrix[i * n_ + j]) * v[j];
      out[i] = floor_mod128(acc, modulus_);
    }
  }

  std::vector<IntMatrix> matrices_;
  Lattice lattice_;
  std::vector<std::int64_t> torsion_;
  std::size_t n_ = 0, m_ = 0;
  std::int64_t modulus_ = 1;
  std::vector<Coords> basis_;
  std::vector<std::int64_t> radix_;
  std::vector<Coords> forward_, backward_;
  std::uint64_t size_ = 0;
};

// Z_p x| Z_r

/// Z_p x| Z_r with (a1, b1)(a2, b2) = (a1 + m^b1 a2, b1 + b2), ord_p(m) = r.
/// `translations` are the images in Z_p of the standard basis vectors of
/// Z^n; they define the natural generating set {1, +-e_i, t^{+-1}}.
class ZpZrGroup {
 public:
  ZpZrGroup(u64 p, u64 r, u64 multiplier, std::vector<u64> translations = {1})
      : p_(p), r_(r), m_(multiplier % p), translations_(std::move(translations)) {
    if (!is_prime(p))
      fail(std::to_string(p) + " is not prime");
    if (m_ == 0)
      fail("multiplier must be nonzero mod p");
    if (mult_order(m_, p) != r)
      fail("multiplier " + std::to_string(m_) + " does not have order " + std::to_string(r) +
           " mod " + std::to_string(p));
    for (auto& t : translations_)
      t %= p;
    radix_ = {static_cast<std::int64_t>(r_), static_cast<std::int64_t>(p_)};
    powers_.resize(r_);
    u64 acc = 1;
    for (u64 k = 0; k < r_; ++k) {
      powers_[k] = acc;
      acc = mulmod(acc, m_, p_);
    }
  }

  u64 p() const { return p_; }
  u64 r() const { return r_; }
  u64 multiplier() const { return m_; }
  const std::vector<u64>& translations() const { return translations_; }
  std::size_t arity() const { return 2; }
  std::uint64_t size() const { return p_ * r_; }
  Int coset_count() const { return Int(p_) * r_; }

  Coords multiply(const Coords& x, const Coords& y) const {
    detail::check_arity(x.size(), 2);
    detail::check_arity(y.size(), 2);
    Coords out(2);
    act(x, y, out);
    return out;
  }
  Coords inverse(const Coords& x) const {
    detail::check_arity(x.size(), 2);
    Coords c = canonicalise(x);
    std::int64_t b = c[1] == 0 ? 0 : static_cast<std::int64_t>(r_) - c[1];
    u64 a = mulmod(powers_[static_cast<std::size_t>(b)], static_cast<u64>(c[0]), p_);
    return {static_cast<std::int64_t>((p_ - a) % p_), b};
  }
  Coords conjugate(const Coords& s, const Coords& h) const {
    return multiply(multiply(s, h), inverse(s));
  }
  bool are_inverse(const Coords& a, const Coords& b) const {
    Coords prod = multiply(a, b);
    return prod[0] == 0 && prod[1] == 0;
  }

  void canonicalise_in_place(std::span<std::int64_t> c) const {
    c[0] = floor_mod(c[0], static_cast<std::int64_t>(p_));
    c[1] = floor_mod(c[1], static_cast<std::int64_t>(r_));
  }
  Coords canonicalise(Coords c) const {
    detail::check_arity(c.size(), 2);
    canonicalise_in_place(c);
    return c;
  }

  // rank orders by (b, a)
  std::uint64_t rank(std::span<const std::int64_t> c) const {
    return static_cast<std::uint64_t>(c[1]) * p_ + static_cast<std::uint64_t>(c[0]);
  }
  void unrank(std::uint64_t idx, std::span<std::int64_t> c) const {
    c[0] = static_cast<std::int64_t>(idx % p_);
    c[1] = static_cast<std::int64_t>(idx / p_);
  }

  using Action = Coords;
  Action prepare(const Coords& s) const { return canonicalise(s); }
  void act(std::span<const std::int64_t> s, std::span<const std::int64_t> c,
           std::span<std::int64_t> out) const {
    std::int64_t sa = floor_mod(s[0], static_cast<std::int64_t>(p_));
    std::int64_t sb = floor_mod(s[1], static_cast<std::int64_t>(r_));
    std::int64_t ca = floor_mod(c[0], static_cast<std::int64_t>(p_));
    u64 moved = mulmod(powers_[static_cast<std::size_t>(sb)], static_cast<u64>(ca), p_);
    out[0] = static_cast<std::int64_t>((static_cast<u64>(sa) + moved) % p_);
    out[1] = floor_mod(sb + c[1], static_cast<std::int64_t>(r_));
  }

  Coords identity() const { return {0, 0}; }
  std::vector<Coords> subgroup_generators() const { return {}; }

  std::vector<Generator> default_generators() const {
    std::vector<Generator> gens{{"1", identity()}};
    for (std::size_t i = 0; i < translations_.size(); ++i) {
      auto t = static_cast<std::int64_t>(translations_[i]);
      gens.push_back({"e" + std::to_string(i + 1), {t, 0}});
      gens.push_back({"-e" + std::to_string(i + 1), {floor_mod(-t, static_cast<std::int64_t>(p_)), 0}});
    }
    gens.push_back({"t", {0, 1}});
    gens.push_back({"t^-1", {0, static_cast<std::int64_t>(r_) - 1}});
    return gens;
  }

 private:
  u64 p_, r_, m_;
  std::vector<u64> translations_;
  std::vector<std::int64_t> radix_;
  std::vector<u64> powers_;
};

// COSET SPACES

using Shape = std::variant<TriangularQuotient, LatticeSemidirectQuotient, ZpZrGroup>;

/// A finite coset space G/H together with a symmetric generating set of G
/// that contains the identity.
class CosetSpace {
 public:
  explicit CosetSpace(Shape shape) : shape_(std::move(shape)) {
    generators_ = std::visit([](const auto& s) { return s.default_generators(); }, shape_);
  }
  CosetSpace(Shape shape, std::vector<Generator> generators)
      : shape_(std::move(shape)), generators_(std::move(generators)) {
    validate_generators();
  }

  const Shape& shape() const { return shape_; }
  const std::vector<Generator>& generators() const { return generators_; }
  std::size_t arity() const {
    return std::visit([](const auto& s) { return s.arity(); }, shape_);
  }

  Coords identity() const {
    return std::visit([](const auto& s) { return s.identity(); }, shape_);
  }

  Coords canonicalise(const Coords& raw) const {
    return std::visit([&](const auto& s) { return s.canonicalise(raw); }, shape_);
  }

  /// canonicalise(s * coset)
  Coords apply_generator(const Coords& coset, std::size_t gen) const {
    if (gen >= generators_.size())
      fail("unknown generator index " + std::to_string(gen));
    return std::visit(
        [&](const auto& s) {
          detail::check_arity(coset.size(), s.arity());
          Coords out(s.arity());
          auto action = s.prepare(generators_[gen].element);
          s.act(action, coset, out);
          return out;
        },
        shape_);
  }

  Coords apply_generator(const Coords& coset, const std::string& name) const {
    return apply_generator(coset, generator_index(name));
  }

  std::size_t generator_index(const std::string& name) const {
    for (std::size_t i = 0; i < generators_.size(); ++i)
      if (generators_[i].name == name)
        return i;
    fail("unknown generator '" + name + "'");
  }

  /// Exact index [G:H].
  Int coset_count() const {
    return std::visit([](const auto& s) { return s.coset_count(); }, shape_);
  }

  /// Whether H is normal: every conjugate s h s^-1 of a defining generator
  /// h of H by a generator s lands in the identity coset.
  bool is_normal() const {
    return std::visit(
        [&](const auto& s) {
          Coords id = s.identity();
          for (const auto& h : s.subgroup_generators())
            for (const auto& g : generators_)
              if (s.canonicalise(s.conjugate(g.element, h)) != id)
                return false;
          return true;
        },
        shape_);
  }

  std::string shape_name() const {
    switch (shape_.index()) {
      case 0: return "triangular";
      case 1: return "lattice_semidirect";
      default: return "zpzr";
    }
  }

 private:
  void validate_generators() const {
    std::visit(
        [&](const auto& s) {
          bool has_identity = false;
          for (const auto& g : generators_) {
            detail::check_arity(g.element.size(), s.arity());
            if (std::all_of(g.element.begin(), g.element.end(), [](std::int64_t x) { return x == 0; }))
              has_identity = true;
          }
          if (!has_identity)
            fail("generating set must contain the identity");
          for (const auto& g : generators_) {
            bool found = std::any_of(generators_.begin(), generators_.end(), [&](const Generator& o) {
              return s.are_inverse(g.element, o.element);
            });
            if (!found)
              fail("generating set is not symmetric: no inverse for '" + g.name + "'");
          }
        },
        shape_);
  }

  Shape shape_;
  std::vector<Generator> generators_;
};

inline Coords canonicalise(const CosetSpace& space, const Coords& raw) { return space.canonicalise(raw); }
inline Coords apply_generator(const CosetSpace& space, const Coords& coset, std::size_t gen) {
  return space.apply_generator(coset, gen);
}
inline Int coset_count(const CosetSpace& space) { return space.coset_count(); }
inline bool is_normal(const CosetSpace& space) { return space.is_normal(); }

}  // namespace polyflat

#endif  // POLYFLAT_QUOTIENTS_HPP_
