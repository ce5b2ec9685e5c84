// Exact integer linear algebra: square matrices, integer polynomials and
// lattices of Z^n kept in row Hermite normal form.

#ifndef POLYFLAT_EXACT_HPP_
#define POLYFLAT_EXACT_HPP_

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace polyflat {

namespace detail {

struct IntRing {
  Int zero() const { return 0; }
  Int one() const { return 1; }
  Int add(const Int& a, const Int& b) const { return a + b; }
  Int sub(const Int& a, const Int& b) const { return a - b; }
  Int mul(const Int& a, const Int& b) const { return a * b; }
};

// Berkowitz' division-free characteristic polynomial. Works over any
// commutative ring; returns coefficients of det(xI - A), highest degree first.
template <class T, class Ring>
std::vector<T> berkowitz(const std::vector<std::vector<T>>& a, const Ring& ring) {
  const std::size_t n = a.size();
  if (n == 0)
    return {ring.one()};
  std::vector<T> v{ring.one(), ring.sub(ring.zero(), a[0][0])};
  for (std::size_t r = 1; r < n; ++r) {
    std::vector<T> t{ring.one(), ring.sub(ring.zero(), a[r][r])};
    std::vector<T> x(r);
    for (std::size_t i = 0; i < r; ++i)
      x[i] = a[i][r];
    for (std::size_t k = 0; k < r; ++k) {
      T dot = ring.zero();
      for (std::size_t i = 0; i < r; ++i)
        dot = ring.add(dot, ring.mul(a[r][i], x[i]));
      t.push_back(ring.sub(ring.zero(), dot));
      std::vector<T> nx(r, ring.zero());
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
          nx[i] = ring.add(nx[i], ring.mul(a[i][j], x[j]));
      x = std::move(nx);
    }
    std::vector<T> nv(r + 2, ring.zero());
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j)
        nv[i] = ring.add(nv[i], ring.mul(t[i - j], v[j]));
    v = std::move(nv);
  }
  return v;
}

// Fraction-free (Bareiss) determinant of a square integer matrix.
inline Int bareiss_det(std::vector<std::vector<Int>> m) {
  const std::size_t n = m.size();
  if (n == 0)
    return 1;
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t swap_row = k + 1;
      while (swap_row < n && m[swap_row][k] == 0)
        ++swap_row;
      if (swap_row == n)
        return 0;
      std::swap(m[k], m[swap_row]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace detail

// INTEGER MATRICES

class IntMatrix {
 public:
  IntMatrix() = default;
  explicit IntMatrix(std::size_t n) : n_(n), a_(n * n) {
    if (n == 0)
      fail("matrix dimension must be positive");
  }
  IntMatrix(std::initializer_list<std::initializer_list<long long>> rows)
      : IntMatrix(rows.size()) {
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != n_)
        fail("matrix must be square");
      std::size_t j = 0;
      for (long long x : row)
        (*this)(i, j++) = x;
      ++i;
    }
  }

  static IntMatrix from_rows(const std::vector<IntVector>& rows) {
    IntMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != rows.size())
        fail("matrix must be square");
      for (std::size_t j = 0; j < rows.size(); ++j)
        m(i, j) = rows[i][j];
    }
    return m;
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
      m(i, i) = 1;
    return m;
  }

  /// Companion matrix of a monic polynomial given constant-term-first.
  static IntMatrix companion(const IntVector& coeffs) {
    if (coeffs.size() < 2 || coeffs.back() != 1)
      fail("companion matrix needs a monic polynomial of degree >= 1");
    std::size_t n = coeffs.size() - 1;
    IntMatrix m(n);
    for (std::size_t i = 1; i < n; ++i)
      m(i, i - 1) = 1;
    for (std::size_t i = 0; i < n; ++i)
      m(i, n - 1) = -coeffs[i];
    return m;
  }

  std::size_t dim() const { return n_; }
  Int& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  std::vector<IntVector> rows() const {
    std::vector<IntVector> r(n_, IntVector(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        r[i][j] = (*this)(i, j);
    return r;
  }

  IntVector apply(const IntVector& v) const {
    if (v.size() != n_)
      fail("vector length does not match matrix dimension");
    IntVector out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        out[i] += (*this)(i, j) * v[j];
    return out;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    a.check_same(b);
    IntMatrix c(a.n_);
    for (std::size_t i = 0; i < a.n_; ++i)
      for (std::size_t k = 0; k < a.n_; ++k) {
        if (a(i, k) == 0)
          continue;
        for (std::size_t j = 0; j < a.n_; ++j)
          c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.a_.size(); ++i)
      a.a_[i] += b.a_[i];
    return a;
  }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) {
    a.check_same(b);
    for (std::size_t i = 0; i < a.a_.size(); ++i)
      a.a_[i] -= b.a_[i];
    return a;
  }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.n_ == b.n_ && a.a_ == b.a_;
  }

  Int det() const { return detail::bareiss_det(rows()); }
  bool is_unimodular() const {
    Int d = det();
    return d == 1 || d == -1;
  }

  /// Exact inverse of a unimodular matrix (Gauss-Jordan over Q).
  IntMatrix inverse() const {
    std::vector<std::vector<Rational>> m(n_, std::vector<Rational>(2 * n_));
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j)
        m[i][j] = Rational((*this)(i, j));
      m[i][n_ + i] = 1;
    }
    for (std::size_t c = 0; c < n_; ++c) {
      std::size_t piv = c;
      while (piv < n_ && m[piv][c] == 0)
        ++piv;
      if (piv == n_)
        fail("matrix is singular");
      std::swap(m[c], m[piv]);
      Rational inv = 1 / m[c][c];
      for (auto& x : m[c])
        x *= inv;
      for (std::size_t r = 0; r < n_; ++r) {
        if (r == c || m[r][c] == 0)
          continue;
        Rational f = m[r][c];
        for (std::size_t j = 0; j < 2 * n_; ++j)
          m[r][j] -= f * m[c][j];
      }
    }
    IntMatrix out(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        const Rational& x = m[i][n_ + j];
        if (denominator(x) != 1)
          fail("matrix is not unimodular: inverse is not integral");
        out(i, j) = numerator(x);
      }
    return out;
  }

  /// M^k for any integer k; negative powers need a unimodular matrix.
  IntMatrix pow(long long k) const {
    IntMatrix base = k < 0 ? inverse() : *this;
    unsigned long long e = k < 0 ? static_cast<unsigned long long>(-k) : k;
    IntMatrix result = identity(n_);
    while (e) {
      if (e & 1)
        result = result * base;
      e >>= 1;
      if (e)
        base = base * base;
    }
    return result;
  }

  bool commutes_with(const IntMatrix& other) const { return (*this) * other == other * (*this); }

 private:
  void check_same(const IntMatrix& b) const {
    if (n_ != b.n_)
      fail("matrix dimensions differ");
  }

  std::size_t n_ = 0;
  std::vector<Int> a_;
};

// INTEGER POLYNOMIALS

/// Integer polynomial, coefficients stored constant term first with no
/// trailing zeros (the zero polynomial has no coefficients).
class IntPoly {
 public:
  IntPoly() = default;
  explicit IntPoly(IntVector coeffs) : c_(std::move(coeffs)) { trim(); }
  IntPoly(std::initializer_list<long long> coeffs) {
    for (long long x : coeffs)
      c_.emplace_back(x);
    trim();
  }

  /// (x - root)
  static IntPoly linear(const Int& root) { return IntPoly(IntVector{-root, 1}); }
  static IntPoly monomial(std::size_t degree, const Int& coeff = 1) {
    IntVector c(degree + 1);
    c[degree] = coeff;
    return IntPoly(std::move(c));
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  const IntVector& coeffs() const { return c_; }
  Int operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  const Int& leading() const {
    if (c_.empty())
      fail("zero polynomial has no leading coefficient");
    return c_.back();
  }

  Int eval(const Int& x) const {
    Int acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }

  IntPoly derivative() const {
    if (c_.size() <= 1)
      return {};
    IntVector d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      d[i - 1] = c_[i] * static_cast<long long>(i);
    return IntPoly(std::move(d));
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    IntVector c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = a[i] + b[i];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    IntVector c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = a[i] - b[i];
    return IntPoly(std::move(c));
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero())
      return {};
    IntVector c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] += a.c_[i] * b.c_[j];
    return IntPoly(std::move(c));
  }
  friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }

  /// Division by a monic polynomial; quotient and remainder are integral.
  std::pair<IntPoly, IntPoly> divmod_monic(const IntPoly& d) const {
    if (!d.is_monic())
      fail("divisor must be monic");
    IntVector r = c_;
    if (degree() < d.degree())
      return {IntPoly{}, *this};
    IntVector q(c_.size() - d.c_.size() + 1);
    for (std::size_t k = q.size(); k-- > 0;) {
      Int coef = r[k + d.c_.size() - 1];
      q[k] = coef;
      if (coef == 0)
        continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j)
        r[k + j] -= coef * d.c_[j];
    }
    return {IntPoly(std::move(q)), IntPoly(std::move(r))};
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0)
      c_.pop_back();
  }
  IntVector c_;
};

/// det(xI - M), monic of degree n.
inline IntPoly char_poly(const IntMatrix& m) {
  std::vector<Int> hi = detail::berkowitz(m.rows(), detail::IntRing{});
  std::reverse(hi.begin(), hi.end());
  return IntPoly(std::move(hi));
}

/// Determinant of the Sylvester matrix of f and g.
inline Int resultant(const IntPoly& f, const IntPoly& g) {
  if (f.is_zero() || g.is_zero())
    fail("resultant of the zero polynomial is undefined");
  const std::size_t m = static_cast<std::size_t>(f.degree());
  const std::size_t n = static_cast<std::size_t>(g.degree());
  const std::size_t size = m + n;
  if (size == 0)
    return 1;
  std::vector<std::vector<Int>> s(size, std::vector<Int>(size));
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t k = 0; k <= m; ++k)
      s[row][row + k] = f[m - k];
  for (std::size_t row = 0; row < m; ++row)
    for (std::size_t k = 0; k <= n; ++k)
      s[n + row][row + k] = g[n - k];
  return detail::bareiss_det(std::move(s));
}

// Polynomials over Q, used for exact gcd computations.
using RationalPoly = std::vector<Rational>;  // constant term first, trimmed

namespace detail {
inline void trim(RationalPoly& p) {
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}
inline RationalPoly rational_mod(RationalPoly a, const RationalPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j)
      a[shift + j] -= f * b[j];
    trim(a);
  }
  return a;
}
}  // namespace detail

/// Monic gcd over Q of two integer polynomials (zero if both are zero).
inline RationalPoly gcd_over_q(const IntPoly& f, const IntPoly& g) {
  RationalPoly a, b;
  for (const auto& c : f.coeffs())
    a.emplace_back(c);
  for (const auto& c : g.coeffs())
    b.emplace_back(c);
  while (!b.empty()) {
    RationalPoly r = detail::rational_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a)
      c /= lead;
  }
  return a;
}

// LATTICES

/// Subgroup of Z^n held in canonical row Hermite normal form: rows are
/// linearly independent, upper echelon, pivots positive, and entries above
/// a pivot lie in [0, pivot).
class Lattice {
 public:
  Lattice() = default;
  Lattice(std::size_t ambient_dim, std::vector<IntVector> hnf_rows)
      : dim_(ambient_dim), basis_(std::move(hnf_rows)) {}

  std::size_t ambient_dim() const { return dim_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<IntVector>& basis() const { return basis_; }
  bool is_zero() const { return basis_.empty(); }
  bool full_rank() const { return basis_.size() == dim_; }

  /// Column of the leading nonzero entry of each basis row.
  std::vector<std::size_t> pivot_columns() const {
    std::vector<std::size_t> cols;
    for (const auto& row : basis_) {
      std::size_t c = 0;
      while (row[c] == 0)
        ++c;
      cols.push_back(c);
    }
    return cols;
  }

  /// Reduce v against the basis; v is in the lattice iff the result is zero.
  /// For a full-rank lattice the result is the canonical coset
  /// representative with v_i in [0, pivot_i).
  IntVector reduce(IntVector v) const {
    if (v.size() != dim_)
      fail("vector length does not match lattice dimension");
    auto cols = pivot_columns();
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      Int q = floor_div(v[cols[i]], basis_[i][cols[i]]);
      if (q != 0)
        for (std::size_t j = cols[i]; j < dim_; ++j)
          v[j] -= q * basis_[i][j];
    }
    return v;
  }

  bool contains(const IntVector& v) const {
    IntVector r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Int& x) { return x == 0; });
  }

  bool contains(const Lattice& other) const {
    return std::all_of(other.basis_.begin(), other.basis_.end(),
                       [this](const IntVector& v) { return contains(v); });
  }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.dim_ == b.dim_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<IntVector> basis_;
};

/// Hermite normal form of the subgroup generated by `generators`.
inline Lattice hnf(std::vector<IntVector> rows, std::size_t ambient_dim) {
  for (const auto& r : rows)
    if (r.size() != ambient_dim)
      fail("generator length " + std::to_string(r.size()) + " does not match ambient dimension " +
           std::to_string(ambient_dim));
  std::size_t piv = 0;
  for (std::size_t col = 0; col < ambient_dim && piv < rows.size(); ++col) {
    // Euclid on column `col` among rows piv..end
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = piv; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (best == rows.size() || abs(rows[i][col]) < abs(rows[best][col])))
          best = i;
      if (best == rows.size())
        break;
      std::swap(rows[piv], rows[best]);
      bool done = true;
      for (std::size_t i = piv + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0)
          continue;
        Int q = floor_div(rows[i][col], rows[piv][col]);
        for (std::size_t j = col; j < ambient_dim; ++j)
          rows[i][j] -= q * rows[piv][j];
        if (rows[i][col] != 0)
          done = false;
      }
      if (done)
        break;
    }
    if (rows[piv][col] == 0)
      continue;
    if (rows[piv][col] < 0)
      for (auto& x : rows[piv])
        x = -x;
    for (std::size_t i = 0; i < piv; ++i) {
      Int q = floor_div(rows[i][col], rows[piv][col]);
      if (q != 0)
        for (std::size_t j = col; j < ambient_dim; ++j)
          rows[i][j] -= q * rows[piv][j];
    }
    ++piv;
  }
  rows.resize(piv);
  return Lattice(ambient_dim, std::move(rows));
}

inline Lattice full_lattice(std::size_t n) {
  std::vector<IntVector> rows(n, IntVector(n));
  for (std::size_t i = 0; i < n; ++i)
    rows[i][i] = 1;
  return Lattice(n, std::move(rows));
}

/// Index in Z^n, or nullopt when the lattice has lower rank (infinite index).
inline std::optional<Int> lattice_index(const Lattice& l) {
  if (!l.full_rank())
    return std::nullopt;
  Int idx = 1;
  for (std::size_t i = 0; i < l.rank(); ++i)
    idx *= l.basis()[i][i];
  return idx;
}

/// Smallest lattice containing `l` that is closed under every matrix and
/// its inverse.
inline Lattice saturate_under(const Lattice& l, const std::vector<IntMatrix>& matrices) {
  std::vector<IntMatrix> actions;
  for (const auto& m : matrices) {
    if (m.dim() != l.ambient_dim())
      fail("matrix dimension does not match lattice dimension");
    if (!m.is_unimodular())
      fail("saturate_under needs unimodular matrices");
    actions.push_back(m);
    actions.push_back(m.inverse());
  }
  Lattice cur = l;
  for (;;) {
    std::vector<IntVector> gens = cur.basis();
    for (const auto& m : actions)
      for (const auto& row : cur.basis())
        gens.push_back(m.apply(row));
    Lattice next = hnf(std::move(gens), l.ambient_dim());
    if (next == cur)
      return cur;
    cur = std::move(next);
  }
}

inline bool is_invariant(const Lattice& l, const IntMatrix& m) {
  for (const auto& row : l.basis())
    if (!l.contains(m.apply(row)))
      return false;
  return true;
}

/// Certified rational upper bound for the spectral norm:
/// sqrt(||M||_1 * ||M||_inf) rounded up to a multiple of 1/1000.
inline Rational op_norm_upper_bound(const IntMatrix& m) {
  Int norm1 = 0, norm_inf = 0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    Int col = 0, row = 0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
      col += abs(m(i, j));
      row += abs(m(j, i));
    }
    norm1 = std::max(norm1, col);
    norm_inf = std::max(norm_inf, row);
  }
  const Int scale = 1000;
  Int scaled = norm1 * norm_inf * scale * scale;
  Int root = boost::multiprecision::sqrt(scaled);
  if (root * root < scaled)
    ++root;
  return Rational(root, scale);
}

}  // namespace polyflat

#endif  // POLYFLAT_EXACT_HPP_
