// Sweeps over subgroup families: diameters and indices of every member,
// least-squares fits of the almost-flat exponent and violation searches.

#ifndef POLYFLAT_PROFILER_HPP_
#define POLYFLAT_PROFILER_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "constructions.hpp"
#include "core.hpp"
#include "diameter.hpp"

namespace polyflat {

struct FlatnessRecord {
  std::string kind;
  u64 param = 0;
  std::string variant;  // "ord", "1", or empty for Heisenberg families
  Int index = 0;
  std::optional<std::uint64_t> diameter;  // empty when the member was refused
  bool normal = false;
  double runtime_ms = 0;
  std::string note;
};

struct SweepOptions {
  std::uint64_t bfs_cap = default_bfs_cap;
  unsigned threads = 1;
  bool timings = false;
};

namespace detail {

struct SweepJob {
  u64 param;
  Variant variant;
};

inline FlatnessRecord run_member(const FamilySpec& spec, const SweepJob& job,
                                 const SweepOptions& opt) {
  FlatnessRecord rec;
  rec.kind = to_string(spec.kind);
  rec.param = job.param;
  bool semidirect = spec.kind == FamilyKind::zn_by_z || spec.kind == FamilyKind::zn_by_zm;
  if (semidirect)
    rec.variant = to_string(job.variant);
  auto start = std::chrono::steady_clock::now();
  try {
    auto measure = [&](const CosetSpace& space) {
      rec.index = space.coset_count();
      rec.normal = space.is_normal();
      rec.diameter = bfs_profile(space, opt.bfs_cap).diameter;
    };
    switch (spec.kind) {
      case FamilyKind::heis_quotients:
        measure(heisenberg_Kp(static_cast<std::int64_t>(job.param)));
        break;
      case FamilyKind::heis_cosets:
        measure(heisenberg_Hn(static_cast<std::int64_t>(job.param)));
        break;
      case FamilyKind::zn_by_z:
        measure(build_gamma(spec.matrices[0], job.param, job.variant).space);
        break;
      case FamilyKind::zn_by_zm: {
        Gamma g = build_gamma(spec.matrices[0], job.param, job.variant);
        std::vector<IntMatrix> extra(spec.matrices.begin() + 1, spec.matrices.end());
        measure(extend_to_zm(g.lattice_form, extra));
        break;
      }
    }
  } catch (const ResourceRefusal& e) {
    rec.diameter.reset();
    rec.note = std::string("refused: ") + e.what();
  } catch (const ValidationError& e) {
    rec.diameter.reset();
    rec.note = std::string("invalid: ") + e.what();
  }
  if (opt.timings)
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                         .count();
  return rec;
}

}  // namespace detail

/// One record per family member and variant, ascending by parameter.
/// Refusals are recorded per member and the sweep carries on.
inline std::vector<FlatnessRecord> sweep(const FamilySpec& spec, const SweepOptions& opt = {}) {
  spec.validate();
  std::vector<detail::SweepJob> jobs;
  bool semidirect = spec.kind == FamilyKind::zn_by_z || spec.kind == FamilyKind::zn_by_zm;
  for (u64 p : spec.parameters()) {
    if (semidirect)
      for (Variant v : spec.variants)
        jobs.push_back({p, v});
    else
      jobs.push_back({p, Variant::ord});
  }
  std::vector<FlatnessRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
      out[i] = detail::run_member(spec, jobs[i], opt);
  };
  unsigned threads = std::max(1u, opt.threads);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool)
    th.join();
  return out;
}

// FITTING

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  std::size_t records_used = 0;
  double residual = 0;  // root mean square, in log space
  Rational slope_rational() const {
    return Rational(static_cast<long long>(std::llround(slope * 1e6)), 1'000'000);
  }
};

inline double to_double(const Int& x) { return x.convert_to<double>(); }

/// Least squares of log diameter against log index over the last
/// tail_fraction of the usable records (ordered by parameter).
inline ExponentFit fit_exponent(std::vector<FlatnessRecord> records, double tail_fraction = 0.5) {
  if (!(tail_fraction > 0 && tail_fraction <= 1))
    fail("tail_fraction must lie in (0, 1]");
  std::erase_if(records, [](const FlatnessRecord& r) {
    return !r.diameter || *r.diameter < 1 || r.index < 2;
  });
  std::stable_sort(records.begin(), records.end(),
                   [](const FlatnessRecord& a, const FlatnessRecord& b) { return a.param < b.param; });
  if (records.size() < 2)
    fail("need at least two records with positive diameter to fit an exponent");
  auto take = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(records.size())));
  take = std::clamp<std::size_t>(take, 2, records.size());
  std::vector<double> xs, ys;
  for (std::size_t i = records.size() - take; i < records.size(); ++i) {
    xs.push_back(std::log(to_double(records[i].index)));
    ys.push_back(std::log(static_cast<double>(*records[i].diameter)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0)
    fail("all fitted records share one index");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.records_used = xs.size();
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double e = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / static_cast<double>(xs.size()));
  return fit;
}

// VIOLATIONS

struct ViolationReport {
  std::optional<FlatnessRecord> witness;  // first record with diam < c index^alpha
  std::optional<double> min_ratio;        // min diam / index^alpha
  std::optional<u64> min_ratio_param;
};

inline double flatness_ratio(const FlatnessRecord& r, double alpha) {
  return static_cast<double>(*r.diameter) / std::pow(to_double(r.index), alpha);
}

inline ViolationReport violation_search(const std::vector<FlatnessRecord>& records, double alpha,
                                        double c) {
  if (!(alpha > 0 && alpha <= 1))
    fail("alpha must lie in (0, 1]");
  if (!(c > 0))
    fail("c must be positive");
  ViolationReport rep;
  for (const auto& r : records) {
    if (!r.diameter)
      continue;
    double ratio = flatness_ratio(r, alpha);
    if (!rep.min_ratio || ratio < *rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.min_ratio_param = r.param;
    }
    if (!rep.witness && ratio < c)
      rep.witness = r;
  }
  return rep;
}

}  // namespace polyflat

#endif  // POLYFLAT_PROFILER_HPP_
