// Arithmetic over prime fields F_p: splitting of integer polynomials,
// multiplicative orders, lambda(f, p) and sweeps over splitting primes.

#ifndef POLYFLAT_MODP_HPP_
#define POLYFLAT_MODP_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "exact.hpp"

namespace polyflat {

using u64 = std::uint64_t;

inline bool is_prime(u64 n) {
  if (n < 2)
    return false;
  if (n % 2 == 0)
    return n == 2;
  for (u64 d = 3; d * d <= n; d += 2)
    if (n % d == 0)
      return false;
  return true;
}

/// All primes <= limit, ascending.
inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2)
    return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i])
      continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i)
      composite[j] = true;
  }
  return primes;
}

inline u64 mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p);
}

inline u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1)
      r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline u64 invmod(u64 a, u64 p) {
  if (a % p == 0)
    fail("zero has no inverse mod " + std::to_string(p));
  return powmod(a, p - 2, p);
}

inline u64 reduce_mod(const Int& x, u64 p) {
  Int r = x % p;
  if (r < 0)
    r += p;
  return static_cast<u64>(r);
}

inline std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> f;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d)
      continue;
    f.push_back(d);
    while (n % d == 0)
      n /= d;
  }
  if (n > 1)
    f.push_back(n);
  return f;
}

/// Least k >= 1 with a^k = 1 in F_p.
inline u64 mult_order(u64 a, u64 p) {
  if (!is_prime(p))
    fail(std::to_string(p) + " is not prime");
  a %= p;
  if (a == 0)
    fail("multiplicative order of 0 is undefined");
  u64 k = p - 1;
  for (u64 q : prime_factors(p - 1))
    while (k % q == 0 && powmod(a, k / q, p) == 1)
      k /= q;
  return k;
}

// POLYNOMIALS OVER F_p

/// Polynomial over F_p, constant term first, no trailing zeros.
class PolyModP {
 public:
  PolyModP(u64 p, std::vector<u64> coeffs) : p_(p), c_(std::move(coeffs)) {
    for (auto& x : c_)
      x %= p_;
    trim();
  }
  static PolyModP from(const IntPoly& f, u64 p) {
    std::vector<u64> c;
    for (const auto& x : f.coeffs())
      c.push_back(reduce_mod(x, p));
    return PolyModP(p, std::move(c));
  }

  u64 modulus() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<u64>& coeffs() const { return c_; }

  u64 eval(u64 x) const {
    u64 acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
      acc = (mulmod(acc, x, p_) + *it) % p_;
    return acc;
  }

  /// Exact division by (x - r); r must be a root.
  PolyModP divide_linear(u64 r) const {
    std::vector<u64> q(c_.size() > 0 ? c_.size() - 1 : 0);
    u64 carry = 0;
    for (std::size_t k = c_.size(); k-- > 1;) {
      carry = (c_[k] + mulmod(carry, r, p_)) % p_;
      q[k - 1] = carry;
    }
    return PolyModP(p_, std::move(q));
  }

  PolyModP derivative() const {
    std::vector<u64> d;
    for (std::size_t i = 1; i < c_.size(); ++i)
      d.push_back(mulmod(c_[i], i % p_, p_));
    return PolyModP(p_, std::move(d));
  }

  PolyModP mod(const PolyModP& d) const {
    if (d.is_zero())
      fail("polynomial division by zero");
    std::vector<u64> r = c_;
    u64 inv = invmod(d.c_.back(), p_);
    while (r.size() >= d.c_.size() && !r.empty()) {
      u64 f = mulmod(r.back(), inv, p_);
      std::size_t shift = r.size() - d.c_.size();
      for (std::size_t j = 0; j < d.c_.size(); ++j)
        r[shift + j] = (r[shift + j] + p_ - mulmod(f, d.c_[j], p_)) % p_;
      while (!r.empty() && r.back() == 0)
        r.pop_back();
    }
    return PolyModP(p_, std::move(r));
  }

  friend PolyModP gcd(PolyModP a, PolyModP b) {
    while (!b.is_zero()) {
      PolyModP r = a.mod(b);
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  friend PolyModP operator*(const PolyModP& a, const PolyModP& b) {
    if (a.is_zero() || b.is_zero())
      return PolyModP(a.p_, {});
    std::vector<u64> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] = (c[i + j] + mulmod(a.c_[i], b.c_[j], a.p_)) % a.p_;
    return PolyModP(a.p_, std::move(c));
  }
  friend bool operator==(const PolyModP& a, const PolyModP& b) {
    return a.p_ == b.p_ && a.c_ == b.c_;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0)
      c_.pop_back();
  }
  u64 p_;
  std::vector<u64> c_;
};

struct SplitReport {
  u64 p = 0;
  bool splits = false;
  std::vector<u64> roots;  // ascending, repeated by multiplicity
  bool has_zero_root = false;
  bool distinct = false;

  std::vector<u64> distinct_roots() const {
    std::vector<u64> r = roots;
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }
  bool in_pr() const { return splits && !has_zero_root; }
};

/// Roots of a polynomial over F_p by exhaustive evaluation; multiplicities
/// are recovered by repeated division.
inline SplitReport split_modp(const PolyModP& f) {
  const u64 p = f.modulus();
  SplitReport rep;
  rep.p = p;
  if (f.is_zero())
    fail("cannot split the zero polynomial");
  rep.has_zero_root = f.degree() > 0 && f.coeffs()[0] == 0;
  rep.distinct = gcd(f, f.derivative()).degree() == 0;
  PolyModP g = f;
  for (u64 x = 0; x < p && g.degree() > 0; ++x)
    while (g.degree() > 0 && g.eval(x) == 0) {
      g = g.divide_linear(x);
      rep.roots.push_back(x);
    }
  rep.splits = g.degree() == 0;
  return rep;
}

inline SplitReport split_over(const IntPoly& f, u64 p) {
  if (!is_prime(p))
    fail(std::to_string(p) + " is not prime");
  if (!f.is_monic())
    fail("split_over expects a monic polynomial");
  return split_modp(PolyModP::from(f, p));
}

/// lcm of the multiplicative orders of the distinct roots of f over F_p.
inline u64 lambda_of(const IntPoly& f, u64 p) {
  SplitReport rep = split_over(f, p);
  if (!rep.splits)
    fail("polynomial does not split over F_" + std::to_string(p));
  if (rep.has_zero_root)
    fail("polynomial has a zero root over F_" + std::to_string(p));
  u64 l = 1;
  for (u64 r : rep.distinct_roots())
    l = std::lcm(l, mult_order(r, p));
  return l;
}

namespace detail {

// Evaluates pred(p) for every prime p <= p_max on `threads` workers and
// returns the primes where it held, ascending.
template <class Pred>
std::vector<u64> filter_primes(u64 p_max, unsigned threads, const Pred& pred) {
  std::vector<u64> primes = primes_up_to(p_max);
  std::vector<char> keep(primes.size(), 0);
  threads = std::max(1u, threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < primes.size(); i += threads)
        keep[i] = pred(primes[i]) ? 1 : 0;
    });
  for (auto& th : pool)
    th.join();
  std::vector<u64> out;
  for (std::size_t i = 0; i < primes.size(); ++i)
    if (keep[i])
      out.push_back(primes[i]);
  return out;
}

inline void check_pr_input(const IntPoly& f) {
  if (!f.is_monic())
    fail("expected a monic polynomial");
  if (f[0] == 0)
    fail("polynomial has zero constant term, so no prime keeps it free of zero roots");
}

}  // namespace detail

/// Primes p <= p_max over which every polynomial splits with no zero root.
inline std::vector<u64> splitting_primes(const std::vector<IntPoly>& polys, u64 p_max,
                                         unsigned threads = 1) {
  for (const auto& f : polys)
    detail::check_pr_input(f);
  return detail::filter_primes(p_max, threads, [&](u64 p) {
    return std::all_of(polys.begin(), polys.end(),
                       [p](const IntPoly& f) { return split_over(f, p).in_pr(); });
  });
}

/// Fraction of primes <= p_max lying in Pr(f); zero when there are none.
inline Rational splitting_density(const IntPoly& f, u64 p_max, unsigned threads = 1) {
  detail::check_pr_input(f);
  auto total = primes_up_to(p_max).size();
  if (total == 0)
    return 0;
  auto hits = splitting_primes({f}, p_max, threads).size();
  return Rational(Int(hits), Int(total));
}

}  // namespace polyflat

#endif  // POLYFLAT_MODP_HPP_
