#pragma once

// Three-valued membership in c and the certificate suites.
//
// Membership of an arbitrary bounded sequence in c cannot be decided from
// finitely many coordinates. classify_c answers InC only when the sequence's
// tag certifies convergence, NotInC only with a re-verifiable oscillation
// witness, and Unknown otherwise.

#include <algorithm>
#include <span>
#include <cmath>
#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "linf/embed.hpp"
#include "linf/error.hpp"
#include "linf/extend.hpp"
#include "linf/seqcore.hpp"
#include "linf/spaces.hpp"

namespace linf {

struct InC {
  double limit = 0.0;
  double tail_variation = 0.0;
  Index stabilization = 1;
};

struct NotInC {
  OscillationWitness witness;
};

struct Unknown {
  Index budget_used = 0;
  std::vector<ClusterEstimate> clusters_seen;
};

using Verdict = std::variant<InC, NotInC, Unknown>;

inline std::string_view verdict_kind(const Verdict& v) {
  switch (v.index()) {
    case 0: return "InC";
    case 1: return "NotInC";
    default: return "Unknown";
  }
}

inline constexpr Index kDefaultClassifyBudget = 20000;
inline constexpr std::size_t kMinClusterMembers = 5;
inline constexpr std::size_t kMaxWitnessMembers = 32;

/// Structural InC when the tag certifies convergence. Otherwise the
/// coordinates 1..budget are bucketed into cells of width gap_floor / 4; the
/// highest and lowest cells holding at least five coordinates form a witness,
/// accepted as NotInC when their actual gap is at least gap_floor.
inline Verdict classify_c(const BoundedSeq& s, Index budget, double gap_floor) {
  if (budget < 2) throw Error(ErrorKind::InvalidArgument, "classification budget must be >= 2");
  if (!(gap_floor > 0.0)) throw Error(ErrorKind::InvalidArgument, "gap floor must be positive");

  if (auto cert = structural_limit(s)) return InC{cert->limit, cert->tail_variation,
                                                  cert->stabilization};

  auto clusters = cluster_estimates(s, {1, budget}, gap_floor / 4.0);
  const ClusterEstimate* high = nullptr;
  const ClusterEstimate* low = nullptr;
  for (const auto& c : clusters) {
    if (c.indices.size() < kMinClusterMembers) continue;
    if (!high || c.value > high->value) high = &c;
    if (!low || c.value < low->value) low = &c;
  }
  if (high && low && high != low) {
    const std::size_t m =
        std::min({high->indices.size(), low->indices.size(), kMaxWitnessMembers});
    OscillationWitness w;
    for (std::size_t i = 0; i < m; ++i) {
      w.plus_indices.push_back(high->indices[i]);
      w.plus_values.push_back(s(high->indices[i]));
      w.minus_indices.push_back(low->indices[i]);
      w.minus_values.push_back(s(low->indices[i]));
    }
    w.finalize_gap();
    w.target_hi = *std::min_element(w.plus_values.begin(), w.plus_values.end());
    w.target_lo = *std::max_element(w.minus_values.begin(), w.minus_values.end());
    if (w.gap >= gap_floor) return NotInC{std::move(w)};
  }
  return Unknown{budget, std::move(clusters)};
}

/// Default gap floor: half the certified bound.
inline Verdict classify_c(const BoundedSeq& s, Index budget = kDefaultClassifyBudget) {
  if (s.bound() == 0.0) return InC{0.0, 0.0, 1};
  return classify_c(s, budget, s.bound() / 2.0);
}

struct IsometryReport {
  std::vector<IsometryEntry> entries;
  double max_relative_defect = 0.0;

  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
  }
};

inline IsometryReport check_isometry(const SeparableSpace& space, std::span<const Element> samples,
                                     Index K) {
  IsometryReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    IsometryEntry e;
    e.x_id = i;
    e.K = K;
    try {
      e.interval = isometry_defect(space, samples[i], K);
      e.pass = e.interval->contract_holds();
      report.max_relative_defect =
          std::max(report.max_relative_defect,
                   (e.interval->upper - e.interval->achieved) / e.interval->upper);
    } catch (const Error& ex) {
      e.error = ex.what();
    }
    report.entries.push_back(std::move(e));
  }
  return report;
}

struct SeparationReport {
  std::vector<SeparationEntry> entries;

  std::size_t budget_exhausted() const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [](const auto& e) { return e.budget_exhausted; }));
  }
  std::size_t errors() const {
    return static_cast<std::size_t>(std::count_if(
        entries.begin(), entries.end(), [](const auto& e) { return !e.error.empty(); }));
  }
  bool all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.pass; });
  }
};

/// One separation witness per (x, d) pair. The zero sequence is always tested
/// first (d_id 0); `d_samples` follow, or D's first basis members when empty.
inline SeparationReport check_separation(const SeparableSpace& space, const SubspaceD& D,
                                         const IndexScheme& scheme,
                                         std::span<const Element> samples,
                                         std::span<const BoundedSeq> d_samples, double eps,
                                         std::size_t count, Index scan_budget = 100000) {
  std::vector<BoundedSeq> ds{BoundedSeq::zero()};
  if (d_samples.empty() && D.mode() == SubspaceMode::FiniteBasis)
    ds.insert(ds.end(), D.basis().begin(), D.basis().end());
  else
    ds.insert(ds.end(), d_samples.begin(), d_samples.end());

  SeparationReport report;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j)
      report.entries.push_back(
          separation_entry(space, scheme, samples[i], i, ds[j], j, eps, count, scan_budget));
  return report;
}

/// Number of net points through `level` (K_L).
inline Index net_size_through_level(const SeparableSpace& space, Index level) {
  Index total = 0;
  for (Index t = 1; t <= level; ++t) total += detail::level_count(space, t);
  return total;
}

/// Independent oracle for finite-dimensional l^p: the maximum of |phi_a(x)|
/// over every nonzero integer vector a in [-level, level]^n, where phi_a is
/// the norming functional of a / |a|_p. Shares no code with the net
/// enumeration.
inline double brute_force_sup(const SeparableSpace& space, const Element& x, Index level) {
  if (space.kind() != SpaceKind::FiniteDimLp)
    throw Error(ErrorKind::KindMismatch, "brute_force_sup needs a finite-dimensional l^p space");
  detail::require_positive_index(level, "level");
  const auto* xv = std::get_if<std::vector<double>>(&x.rep());
  if (!xv || xv->size() != space.dim())
    throw Error(ErrorKind::KindMismatch, "element does not belong to the space");

  const double p = space.exponent();
  const std::size_t n = space.dim();
  const int L = static_cast<int>(level);
  std::vector<int> a(n, -L);
  std::vector<double> u(n);
  double best = 0.0;
  for (;;) {
    bool nonzero = false;
    for (int c : a) nonzero = nonzero || c != 0;
    if (nonzero) {
      double scale = 0.0;
      if (std::isinf(p)) {
        for (int c : a) scale = std::max(scale, std::abs(static_cast<double>(c)));
      } else {
        double m = 0.0;
        for (int c : a) m = std::max(m, std::abs(static_cast<double>(c)));
        double s = 0.0;
        for (int c : a) s += std::pow(std::abs(static_cast<double>(c)) / m, p);
        scale = m * std::pow(s, 1.0 / p);
      }
      for (std::size_t i = 0; i < n; ++i) u[i] = a[i] / scale;

      double value = 0.0;
      if (std::isinf(p)) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
          if (std::abs(u[i]) > std::abs(u[arg])) arg = i;
        value = (u[arg] > 0 ? 1.0 : -1.0) * (*xv)[arg];
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          if (u[i] == 0.0) continue;
          const double sgn = u[i] > 0 ? 1.0 : -1.0;
          value += sgn * std::pow(std::abs(u[i]), p - 1.0) * (*xv)[i];
        }
      }
      best = std::max(best, std::abs(value));
    }
    std::size_t i = n;
    while (i > 0 && a[i - 1] == L) a[--i] = -L;
    if (i == 0) break;
    ++a[i - 1];
  }
  return best;
}

}  // namespace linf
