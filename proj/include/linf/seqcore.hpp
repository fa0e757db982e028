#pragma once

// Lazily evaluated elements of l-infinity.
//
// A BoundedSeq is a pure coordinate oracle n -> x_n (n >= 1) together with a
// certified upper bound on sup |x_n| and a structural tag. The tag records how
// the sequence was built; it is what lets the classifier certify convergence
// without looking at infinitely many coordinates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "linf/error.hpp"

namespace linf {

class BoundedSeq;

namespace tag {

/// Explicit prefix followed by a constant tail.
struct ExplicitList {
  std::vector<double> prefix;
  double tail = 0.0;
};

/// Zero before `from`, `value` from `from` on.
struct EventuallyConstant {
  double value = 0.0;
  Index from = 1;
};

/// x_n = limit + rate / n.
struct ExplicitLimit {
  double limit = 0.0;
  double rate = 0.0;
};

/// x_n = pattern[(n - 1) mod |pattern|].
struct Periodic {
  std::vector<double> pattern;
};

/// Image of a space element under a functional placement (T(x)).
struct FunctionalImage {
  std::string space;
  std::string element;
  std::optional<std::string> scheme;
};

struct LinearCombo {
  std::vector<double> coefficients;
  std::vector<BoundedSeq> children;
};

struct Opaque {
  std::string label;
};

}  // namespace tag

using SeqTag = std::variant<tag::ExplicitList, tag::EventuallyConstant, tag::ExplicitLimit,
                            tag::Periodic, tag::FunctionalImage, tag::LinearCombo, tag::Opaque>;

class BoundedSeq {
 public:
  using Oracle = std::function<double(Index)>;

  /// The oracle must be pure and satisfy |oracle(n)| <= bound for every n >= 1.
  BoundedSeq(Oracle oracle, double bound, SeqTag tag = tag::Opaque{})
      : impl_(std::make_shared<const Impl>(Impl{std::move(oracle), bound, std::move(tag)})) {
    if (!(bound >= 0.0) || !std::isfinite(bound))
      throw Error(ErrorKind::InvalidArgument, "sequence bound must be finite and nonnegative");
  }

  static BoundedSeq eventually_constant(double value, Index from = 1) {
    detail::require_positive_index(from, "eventually-constant start index");
    return BoundedSeq([value, from](Index n) { return n >= from ? value : 0.0; },
                      std::abs(value), tag::EventuallyConstant{value, from});
  }

  static BoundedSeq constant(double value) { return eventually_constant(value, 1); }

  static BoundedSeq zero() { return eventually_constant(0.0, 1); }

  static BoundedSeq periodic(std::vector<double> pattern) {
    if (pattern.empty()) throw Error(ErrorKind::InvalidArgument, "periodic pattern is empty");
    double bound = 0.0;
    for (double v : pattern) bound = std::max(bound, std::abs(v));
    auto shared = std::make_shared<const std::vector<double>>(pattern);
    return BoundedSeq(
        [shared](Index n) { return (*shared)[static_cast<std::size_t>((n - 1) % shared->size())]; },
        bound, tag::Periodic{std::move(pattern)});
  }

  static BoundedSeq explicit_limit(double limit, double rate) {
    return BoundedSeq([limit, rate](Index n) { return limit + rate / static_cast<double>(n); },
                      std::abs(limit) + std::abs(rate), tag::ExplicitLimit{limit, rate});
  }

  static BoundedSeq explicit_list(std::vector<double> prefix, double tail) {
    double bound = std::abs(tail);
    for (double v : prefix) bound = std::max(bound, std::abs(v));
    auto shared = std::make_shared<const std::vector<double>>(prefix);
    return BoundedSeq(
        [shared, tail](Index n) { return n <= shared->size() ? (*shared)[n - 1] : tail; }, bound,
        tag::ExplicitList{std::move(prefix), tail});
  }

  /// Unchecked evaluation; prefer coordinate() at API boundaries.
  double operator()(Index n) const { return impl_->oracle(n); }

  double bound() const noexcept { return impl_->bound; }
  const SeqTag& tag() const noexcept { return impl_->tag; }

  /// Identity of the underlying node (sequences are shared, immutable values).
  bool same_node(const BoundedSeq& other) const noexcept { return impl_ == other.impl_; }

 private:
  struct Impl {
    Oracle oracle;
    double bound;
    SeqTag tag;
  };
  std::shared_ptr<const Impl> impl_;
};

inline double coordinate(const BoundedSeq& s, Index n) {
  detail::require_positive_index(n, "coordinate index");
  return s(n);
}

/// max_{1 <= n <= N} |s_n|
inline double prefix_sup(const BoundedSeq& s, Index N) {
  detail::require_positive_index(N, "prefix length");
  double best = 0.0;
  for (Index n = 1; n <= N; ++n) best = std::max(best, std::abs(s(n)));
  return best;
}

inline BoundedSeq combine(std::span<const double> coeffs, std::span<const BoundedSeq> seqs) {
  if (coeffs.empty() || coeffs.size() != seqs.size())
    throw Error(ErrorKind::LengthMismatch,
                "combine needs equal, nonempty coefficient and sequence lists (got " +
                    std::to_string(coeffs.size()) + " and " + std::to_string(seqs.size()) + ")");
  std::vector<double> c(coeffs.begin(), coeffs.end());
  std::vector<BoundedSeq> children(seqs.begin(), seqs.end());
  double bound = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) bound += std::abs(c[i]) * children[i].bound();
  auto shared = std::make_shared<const std::pair<std::vector<double>, std::vector<BoundedSeq>>>(
      c, children);
  return BoundedSeq(
      [shared](Index n) {
        const auto& [cs, ss] = *shared;
        double acc = 0.0;
        for (std::size_t i = 0; i < cs.size(); ++i) acc += cs[i] * ss[i](n);
        return acc;
      },
      bound, tag::LinearCombo{std::move(c), std::move(children)});
}

inline BoundedSeq combine(std::initializer_list<double> coeffs,
                          std::initializer_list<BoundedSeq> seqs) {
  return combine(std::span<const double>(coeffs.begin(), coeffs.size()),
                 std::span<const BoundedSeq>(seqs.begin(), seqs.size()));
}

/// Inclusive index window [first, last].
struct IndexRange {
  Index first = 1;
  Index last = 0;

  Index size() const noexcept { return last >= first ? last - first + 1 : 0; }
};

struct ClusterEstimate {
  std::vector<Index> indices;
  double value = 0.0;
  double spread = 0.0;
};

/// Buckets s_n over the window into cells of width `cell_width` tiling
/// [-bound, bound] (the last cell closed and clipped at +bound). One estimate
/// per nonempty cell, valued at the clipped cell midpoint; ordered by
/// descending hit count, then ascending value.
inline std::vector<ClusterEstimate> cluster_estimates(const BoundedSeq& s, IndexRange window,
                                                      double cell_width) {
  detail::require_positive_index(window.first, "window start");
  if (window.size() == 0) throw Error(ErrorKind::EmptyWindow, "cluster window is empty");
  if (!(cell_width > 0.0))
    throw Error(ErrorKind::InvalidArgument, "cell width must be positive");

  const double bound = s.bound();
  const double lo = -bound;
  const auto cell_count = static_cast<std::int64_t>(
      std::max(1.0, std::ceil((2.0 * bound) / cell_width)));

  std::map<std::int64_t, std::vector<Index>> cells;
  for (Index n = window.first; n <= window.last; ++n) {
    const double v = s(n);
    auto c = static_cast<std::int64_t>(std::floor((v - lo) / cell_width));
    c = std::clamp<std::int64_t>(c, 0, cell_count - 1);
    cells[c].push_back(n);
  }

  std::vector<ClusterEstimate> out;
  out.reserve(cells.size());
  for (auto& [c, indices] : cells) {
    const double cell_lo = lo + static_cast<double>(c) * cell_width;
    const double cell_hi = std::min(bound, cell_lo + cell_width);
    const double mid = 0.5 * (cell_lo + std::max(cell_lo, cell_hi));
    double spread = 0.0;
    for (Index n : indices) spread = std::max(spread, std::abs(s(n) - mid));
    out.push_back({std::move(indices), mid, spread});
  }
  std::stable_sort(out.begin(), out.end(), [](const ClusterEstimate& a, const ClusterEstimate& b) {
    if (a.indices.size() != b.indices.size()) return a.indices.size() > b.indices.size();
    return a.value < b.value;
  });
  return out;
}

/// Structural convergence data: |s_n - s_m| <= tail_variation for n, m >= stabilization.
struct ConvergenceCertificate {
  double limit = 0.0;
  Index stabilization = 1;
  double tail_variation = 0.0;
};

/// Certifies convergence from the tag alone. Numeric evidence is never used:
/// an untagged sequence that merely looks convergent yields nullopt.
inline std::optional<ConvergenceCertificate> structural_limit(const BoundedSeq& s,
                                                              double tol = kTolerance) {
  if (s.bound() == 0.0) return ConvergenceCertificate{0.0, 1, 0.0};

  return std::visit(
      [&](const auto& t) -> std::optional<ConvergenceCertificate> {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, tag::EventuallyConstant>) {
          return ConvergenceCertificate{t.value, t.from, 0.0};
        } else if constexpr (std::is_same_v<T, tag::ExplicitList>) {
          return ConvergenceCertificate{t.tail, static_cast<Index>(t.prefix.size()) + 1, 0.0};
        } else if constexpr (std::is_same_v<T, tag::Periodic>) {
          const double first = t.pattern.front();
          const bool flat = std::all_of(t.pattern.begin(), t.pattern.end(),
                                        [first](double v) { return v == first; });
          if (!flat) return std::nullopt;
          return ConvergenceCertificate{first, 1, 0.0};
        } else if constexpr (std::is_same_v<T, tag::ExplicitLimit>) {
          // sup_{n,m >= N} |r/n - r/m| < |r| / N
          const double r = std::abs(t.rate);
          if (r == 0.0) return ConvergenceCertificate{t.limit, 1, 0.0};
          const double needed = std::ceil(r / tol);
          if (!(needed < 4.0e18)) return std::nullopt;
          const auto N = std::max<Index>(1, static_cast<Index>(needed));
          return ConvergenceCertificate{t.limit, N, r / static_cast<double>(N)};
        } else if constexpr (std::is_same_v<T, tag::LinearCombo>) {
          std::size_t active = 0;
          for (double c : t.coefficients)
            if (c != 0.0) ++active;
          ConvergenceCertificate acc{0.0, 1, 0.0};
          for (std::size_t i = 0; i < t.children.size(); ++i) {
            const double c = t.coefficients[i];
            if (c == 0.0) continue;
            auto child = structural_limit(t.children[i], tol / (static_cast<double>(active) *
                                                                 std::abs(c)));
            if (!child) return std::nullopt;
            acc.limit += c * child->limit;
            acc.stabilization = std::max(acc.stabilization, child->stabilization);
            acc.tail_variation += std::abs(c) * child->tail_variation;
          }
          return acc;
        } else {
          return std::nullopt;
        }
      },
      s.tag());
}

/// Probes |s_n| <= bound + tol over a window.
inline bool bound_holds(const BoundedSeq& s, IndexRange window, double tol = kTolerance) {
  for (Index n = window.first; n <= window.last; ++n)
    if (std::abs(s(n)) > s.bound() + tol) return false;
  return true;
}

}  // namespace linf
