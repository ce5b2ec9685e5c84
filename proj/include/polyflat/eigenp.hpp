// Linear algebra over F_p: eigenspaces, generalised eigenspaces and last
// generalised eigenvectors, including common ones for commuting families.
//
// Vectors are plain std::vector<u64> with entries in [0, p). Every basis
// returned here is in reduced row echelon form, which makes "first basis
// vector" a well-defined deterministic choice.

#ifndef POLYFLAT_EIGENP_HPP_
#define POLYFLAT_EIGENP_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exact.hpp"
#include "modp.hpp"

namespace polyflat {

using VecModP = std::vector<u64>;

class MatModP {
 public:
  MatModP(u64 p, std::size_t n) : p_(p), n_(n), a_(n * n, 0) {
    if (n == 0)
      fail("matrix dimension must be positive");
    if (!is_prime(p))
      fail(std::to_string(p) + " is not prime");
  }
  static MatModP from(const IntMatrix& m, u64 p) {
    MatModP out(p, m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i)
      for (std::size_t j = 0; j < m.dim(); ++j)
        out(i, j) = reduce_mod(m(i, j), p);
    return out;
  }
  static MatModP identity(u64 p, std::size_t n) {
    MatModP m(p, n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  u64 modulus() const { return p_; }
  std::size_t dim() const { return n_; }
  u64& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  u64 operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  VecModP apply(const VecModP& v) const {
    VecModP out(n_, 0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        out[i] = (out[i] + mulmod((*this)(i, j), v[j], p_)) % p_;
    return out;
  }

  /// A - lambda*I
  MatModP shifted(u64 lambda) const {
    MatModP m = *this;
    for (std::size_t i = 0; i < n_; ++i)
      m(i, i) = (m(i, i) + p_ - lambda % p_) % p_;
    return m;
  }

  friend MatModP operator*(const MatModP& a, const MatModP& b) {
    MatModP c(a.p_, a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k)
        for (std::size_t j = 0; j < a.n_; ++j)
          c(i, j) = (c(i, j) + mulmod(a(i, k), b(k, j), a.p_)) % a.p_;
    return c;
  }
  friend bool operator==(const MatModP& a, const MatModP& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.a_ == b.a_;
  }

  MatModP pow(u64 e) const {
    MatModP r = identity(p_, n_), b = *this;
    while (e) {
      if (e & 1)
        r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }

  std::vector<std::vector<u64>> rows() const {
    std::vector<std::vector<u64>> r(n_, std::vector<u64>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        r[i][j] = (*this)(i, j);
    return r;
  }

 private:
  u64 p_;
  std::size_t n_;
  std::vector<u64> a_;
};

namespace fp {

/// Reduced row echelon basis of the span of `rows`.
inline std::vector<VecModP> rref(std::vector<VecModP> rows, u64 p) {
  if (rows.empty())
    return rows;
  const std::size_t n = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0)
      ++piv;
    if (piv == rows.size())
      continue;
    std::swap(rows[r], rows[piv]);
    u64 inv = invmod(rows[r][c], p);
    for (auto& x : rows[r])
      x = mulmod(x, inv, p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0)
        continue;
      u64 f = rows[i][c];
      for (std::size_t j = 0; j < n; ++j)
        rows[i][j] = (rows[i][j] + p - mulmod(f, rows[r][j], p)) % p;
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

inline std::size_t pivot(const VecModP& v) {
  std::size_t k = 0;
  while (k < v.size() && v[k] == 0)
    ++k;
  return k;
}

/// Coordinates of v along an rref basis, or nullopt if v is outside the span.
inline std::optional<std::vector<u64>> coordinates(const std::vector<VecModP>& basis,
                                                   VecModP v, u64 p) {
  std::vector<u64> coords(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::size_t c = pivot(basis[i]);
    coords[i] = v[c];
    if (v[c] == 0)
      continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] = (v[j] + p - mulmod(coords[i], basis[i][j], p)) % p;
  }
  if (std::any_of(v.begin(), v.end(), [](u64 x) { return x != 0; }))
    return std::nullopt;
  return coords;
}

inline bool in_span(const std::vector<VecModP>& basis, const VecModP& v, u64 p) {
  return coordinates(basis, v, p).has_value();
}

/// Reduced echelon basis of ker(A).
inline std::vector<VecModP> kernel(const MatModP& a) {
  const u64 p = a.modulus();
  const std::size_t n = a.dim();
  auto r = rref(a.rows(), p);
  std::vector<std::size_t> pivots;
  for (const auto& row : r)
    pivots.push_back(pivot(row));
  std::vector<VecModP> ker;
  for (std::size_t free = 0; free < n; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end())
      continue;
    VecModP v(n, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < r.size(); ++i)
      v[pivots[i]] = (p - r[i][free]) % p;
    ker.push_back(std::move(v));
  }
  return rref(std::move(ker), p);
}

inline std::vector<VecModP> image(const MatModP& a, const std::vector<VecModP>& basis) {
  std::vector<VecModP> img;
  for (const auto& b : basis)
    img.push_back(a.apply(b));
  return rref(std::move(img), a.modulus());
}

/// Basis of the intersection of two subspaces given by rref bases.
inline std::vector<VecModP> intersect(const std::vector<VecModP>& u, const std::vector<VecModP>& w,
                                      u64 p) {
  if (u.empty() || w.empty())
    return {};
  const std::size_t n = u[0].size();
  // Solve sum a_i u_i - sum b_j w_j = 0 and map solutions back through u.
  const std::size_t k = u.size() + w.size();
  std::vector<VecModP> eq(n, VecModP(k, 0));
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t r = 0; r < n; ++r)
      eq[r][i] = u[i][r];
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t r = 0; r < n; ++r)
      eq[r][u.size() + j] = (p - w[j][r]) % p;
  auto red = rref(eq, p);
  std::vector<std::size_t> pivots;
  for (const auto& row : red)
    pivots.push_back(pivot(row));
  std::vector<VecModP> out;
  for (std::size_t free = 0; free < k; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end())
      continue;
    VecModP sol(k, 0);
    sol[free] = 1;
    for (std::size_t i = 0; i < red.size(); ++i)
      sol[pivots[i]] = (p - red[i][free]) % p;
    VecModP v(n, 0);
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t r = 0; r < n; ++r)
        v[r] = (v[r] + mulmod(sol[i], u[i][r], p)) % p;
    out.push_back(std::move(v));
  }
  return rref(std::move(out), p);
}

struct FpRing {
  u64 p;
  u64 zero() const { return 0; }
  u64 one() const { return 1 % p; }
  u64 add(u64 a, u64 b) const { return (a + b) % p; }
  u64 sub(u64 a, u64 b) const { return (a + p - b) % p; }
  u64 mul(u64 a, u64 b) const { return mulmod(a, b, p); }
};

inline PolyModP char_poly(const MatModP& a) {
  auto hi = detail::berkowitz(a.rows(), FpRing{a.modulus()});
  std::reverse(hi.begin(), hi.end());
  return PolyModP(a.modulus(), std::move(hi));
}

inline bool is_zero(const VecModP& v) {
  return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

}  // namespace fp

struct EigenData {
  u64 eigenvalue = 0;
  std::size_t algebraic_multiplicity = 0;
  std::vector<VecModP> eigenspace_basis;
  std::vector<VecModP> gen_eigenspace_basis;
};

/// Distinct eigenvalues (ascending) of a matrix whose characteristic
/// polynomial splits over F_p.
inline std::vector<u64> eigenvalues(const MatModP& a) {
  SplitReport rep = split_modp(fp::char_poly(a));
  if (!rep.splits)
    fail("characteristic polynomial does not split over F_" + std::to_string(a.modulus()));
  return rep.distinct_roots();
}

inline std::vector<VecModP> generalized_eigenspace(const MatModP& a, u64 lambda) {
  return fp::kernel(a.shifted(lambda).pow(a.dim()));
}

inline std::vector<EigenData> eigen_decompose(const MatModP& a) {
  SplitReport rep = split_modp(fp::char_poly(a));
  if (!rep.splits)
    fail("characteristic polynomial does not split over F_" + std::to_string(a.modulus()));
  std::vector<EigenData> out;
  for (u64 lambda : rep.distinct_roots()) {
    EigenData d;
    d.eigenvalue = lambda;
    d.algebraic_multiplicity =
        static_cast<std::size_t>(std::count(rep.roots.begin(), rep.roots.end(), lambda));
    d.eigenspace_basis = fp::kernel(a.shifted(lambda));
    d.gen_eigenspace_basis = generalized_eigenspace(a, lambda);
    out.push_back(std::move(d));
  }
  return out;
}

/// True iff v lies in GE_lambda(A) but not in (A - lambda I)(GE_lambda(A)).
inline bool is_last_generalized_eigenvector(const MatModP& a, u64 lambda, const VecModP& v) {
  const u64 p = a.modulus();
  if (v.size() != a.dim() || fp::is_zero(v))
    return false;
  MatModP shift = a.shifted(lambda);
  if (!fp::is_zero(shift.pow(a.dim()).apply(v)))
    return false;
  return !fp::in_span(fp::image(shift, generalized_eigenspace(a, lambda)), v, p);
}

/// First reduced-echelon basis vector of GE_lambda that lies outside the
/// image (A - lambda I)(GE_lambda).
inline VecModP last_generalized_eigenvector(const MatModP& a, u64 lambda) {
  const u64 p = a.modulus();
  lambda %= p;
  auto ge = generalized_eigenspace(a, lambda);
  if (fp::kernel(a.shifted(lambda)).empty())
    fail(std::to_string(lambda) + " is not an eigenvalue mod " + std::to_string(p));
  auto img = fp::image(a.shifted(lambda), ge);
  for (const auto& v : ge)
    if (!fp::in_span(img, v, p))
      return v;
  fail("no last generalised eigenvector found");  // unreachable: image is a proper subspace
}

struct CommonLastEigenvector {
  VecModP vector;
  std::vector<u64> eigenvalues;  // eigenvalue of each family member on `vector`
};

namespace detail {

// Eigenvalue mu of A with v in GE_mu(A).
inline u64 eigenvalue_on(const MatModP& a, const VecModP& v) {
  for (u64 mu : eigenvalues(a))
    if (fp::is_zero(a.shifted(mu).pow(a.dim()).apply(v)))
      return mu;
  fail("vector is not a generalised eigenvector");
}

inline MatModP restrict_to(const MatModP& a, const std::vector<VecModP>& basis) {
  const u64 p = a.modulus();
  MatModP r(p, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    auto c = fp::coordinates(basis, a.apply(basis[j]), p);
    if (!c)
      fail("subspace is not invariant");
    for (std::size_t i = 0; i < basis.size(); ++i)
      r(i, j) = (*c)[i];
  }
  return r;
}

// Induction on dim GE_{lambda1}(A1): find a common eigenvector v, pass to
// F^n/<v>, recurse, and lift the result back.
inline VecModP common_last_by_induction(const std::vector<MatModP>& family, u64 lambda1) {
  const MatModP& a1 = family[0];
  const u64 p = a1.modulus();
  const std::size_t n = a1.dim();
  auto ge = generalized_eigenspace(a1, lambda1);
  if (ge.size() == 1)
    return ge[0];

  // Common eigenvector inside E_{lambda1}(A1).
  auto u = fp::kernel(a1.shifted(lambda1));
  for (std::size_t i = 1; i < family.size(); ++i) {
    MatModP r = restrict_to(family[i], u);
    u64 mu = eigenvalues(r).front();
    u = fp::intersect(u, fp::kernel(family[i].shifted(mu)), p);
  }
  const VecModP& v = u.front();
  const std::size_t k = fp::pivot(v);  // v[k] == 1 (rref)

  auto project = [&](const VecModP& x) {
    VecModP y;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k)
        y.push_back((x[j] + p - mulmod(x[k], v[j], p)) % p);
    return y;
  };
  auto lift = [&](const VecModP& y) {
    VecModP x(n, 0);
    for (std::size_t j = 0, t = 0; j < n; ++j)
      if (j != k)
        x[j] = y[t++];
    return x;
  };

  std::vector<MatModP> quotient;
  for (const auto& a : family) {
    MatModP q(p, n - 1);
    for (std::size_t c = 0; c + 1 < n; ++c) {
      VecModP e(n - 1, 0);
      e[c] = 1;
      VecModP col = project(a.apply(lift(e)));
      for (std::size_t r = 0; r + 1 < n; ++r)
        q(r, c) = col[r];
    }
    quotient.push_back(std::move(q));
  }
  return lift(common_last_by_induction(quotient, lambda1));
}

}  // namespace detail

/// A vector of GE_{lambda1}(A_1) that is a last generalised eigenvector of
/// every member of a commuting family, with each member's eigenvalue on it.
///
/// Existence comes from the quotient induction; among valid witnesses the
/// first reduced-echelon basis vector of the joint generalised eigenspace is
/// preferred so results are reproducible. A one-matrix family reduces to
/// last_generalized_eigenvector.
inline CommonLastEigenvector common_last_eigenvector(const std::vector<MatModP>& family,
                                                     u64 lambda1) {
  if (family.empty())
    fail("empty matrix family");
  const u64 p = family[0].modulus();
  lambda1 %= p;
  for (const auto& a : family) {
    if (a.modulus() != p || a.dim() != family[0].dim())
      fail("family members must share modulus and dimension");
    eigenvalues(a);  // throws if a member does not split
  }
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (!(family[i] * family[j] == family[j] * family[i]))
        fail("family does not commute");
  if (fp::kernel(family[0].shifted(lambda1)).empty())
    fail(std::to_string(lambda1) + " is not an eigenvalue of the first matrix");

  if (family.size() == 1)
    return {last_generalized_eigenvector(family[0], lambda1), {lambda1}};

  VecModP witness = detail::common_last_by_induction(family, lambda1);
  std::vector<u64> lambdas;
  for (const auto& a : family)
    lambdas.push_back(detail::eigenvalue_on(a, witness));

  auto valid = [&](const VecModP& v) {
    for (std::size_t i = 0; i < family.size(); ++i)
      if (!is_last_generalized_eigenvector(family[i], lambdas[i], v))
        return false;
    return true;
  };
  if (!valid(witness))
    throw Error("internal error: induction produced an invalid common last eigenvector");

  auto joint = generalized_eigenspace(family[0], lambdas[0]);
  for (std::size_t i = 1; i < family.size(); ++i)
    joint = fp::intersect(joint, generalized_eigenspace(family[i], lambdas[i]), p);
  for (const auto& v : joint)
    if (valid(v))
      return {v, lambdas};
  return {witness, lambdas};
}

}  // namespace polyflat

#endif  // POLYFLAT_EIGENP_HPP_
