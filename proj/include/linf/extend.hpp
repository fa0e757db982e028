#pragma once

// Embeddings that avoid D + c for a given subspace D of l-infinity.
//
// Every d in D is bounded, so along a suitable subsequence (n_j) all members
// of D converge. The subsequence is extracted by cell refinement (one box for
// a finite basis; stage by stage with a diagonal for countable families).
// Splitting I = {n_j} into I+ = {n_2j} and I- = {n_{2j-1}} and placing +phi_k
// at the k-th element of I+ and -phi_k at the k-th element of I- gives an
// isometry T whose images oscillate between |x| - L(d) and -|x| - L(d) against
// every d, where L(d) is the limit of d along (n_j).
//
// Only prefixes of (n_j) exist in memory. A scheme records how far it has
// scanned; asking for coordinates past that point raises SchemeExhausted, and
// extend_scheme() continues the scan with the same cell constraints.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "linf/embed.hpp"
#include "linf/error.hpp"
#include "linf/seqcore.hpp"
#include "linf/spaces.hpp"

namespace linf {

enum class SubspaceMode { FiniteBasis, CountableBasis, DenseSequence };

inline std::string_view to_string(SubspaceMode m) {
  switch (m) {
    case SubspaceMode::FiniteBasis: return "FiniteBasis";
    case SubspaceMode::CountableBasis: return "CountableBasis";
    case SubspaceMode::DenseSequence: return "DenseSequence";
  }
  return "";
}

class SubspaceD {
 public:
  /// Member i (1-based) of a countable family.
  using Generator = std::function<BoundedSeq(std::size_t)>;

  static SubspaceD finite_basis(std::vector<BoundedSeq> basis) {
    return SubspaceD(SubspaceMode::FiniteBasis, std::move(basis), {});
  }

  static SubspaceD zero() { return finite_basis({}); }

  static SubspaceD countable(Generator generator) {
    return SubspaceD(SubspaceMode::CountableBasis, {}, std::move(generator));
  }

  static SubspaceD dense_sequence(Generator generator) {
    return SubspaceD(SubspaceMode::DenseSequence, {}, std::move(generator));
  }

  SubspaceMode mode() const noexcept { return mode_; }

  /// Finite-basis only.
  const std::vector<BoundedSeq>& basis() const noexcept { return basis_; }

  BoundedSeq member(std::size_t i) const {
    if (i == 0) throw Error(ErrorKind::IndexZero, "family members are numbered from 1");
    if (mode_ == SubspaceMode::FiniteBasis) {
      if (i > basis_.size())
        throw Error(ErrorKind::InvalidArgument, "basis has only " +
                                                    std::to_string(basis_.size()) + " members");
      return basis_[i - 1];
    }
    return generator_(i);
  }

 private:
  SubspaceD(SubspaceMode mode, std::vector<BoundedSeq> basis, Generator generator)
      : mode_(mode), basis_(std::move(basis)), generator_(std::move(generator)) {
    if (mode_ != SubspaceMode::FiniteBasis && !generator_)
      throw Error(ErrorKind::InvalidArgument, "countable families need a member generator");
  }

  SubspaceMode mode_;
  std::vector<BoundedSeq> basis_;
  Generator generator_;
};

/// Numerical rank of the first `window` coordinates of a finite basis. Full
/// rank is evidence of linear independence; independence in l-infinity itself
/// cannot be decided from finitely many coordinates.
inline std::size_t probe_rank(const SubspaceD& D, Index window = 64) {
  const auto& basis = D.basis();
  if (basis.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(window), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (Index n = 1; n <= window; ++n)
      m(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(i)) = basis[i](n);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(1e-10);
  return static_cast<std::size_t>(qr.rank());
}

/// Membership of one family member's value in an interval [lo, hi) (or [lo, hi]).
struct CellConstraint {
  std::size_t member = 1;
  double lo = 0.0;
  double hi = 0.0;
  bool closed_top = true;

  bool contains(double v) const noexcept {
    return lo <= v && (v < hi || (closed_top && v <= hi));
  }
};

enum class SchemeMode { Trivial, FiniteBasis, CountableBasis, DenseSequence };

inline std::string_view to_string(SchemeMode m) {
  switch (m) {
    case SchemeMode::Trivial: return "Trivial";
    case SchemeMode::FiniteBasis: return "FiniteBasis";
    case SchemeMode::CountableBasis: return "CountableBasis";
    case SchemeMode::DenseSequence: return "DenseSequence";
  }
  return "";
}

/// A materialized prefix n_1 < n_2 < ... of the extracted subsequence.
///
/// I+ = {n_2, n_4, ...} and I- = {n_1, n_3, ...}; eta+(k) = n_{2k} and
/// eta-(k) = n_{2k-1} enumerate them in increasing order. The Trivial scheme
/// is all of N (no materialized prefix), used for D = {0}.
struct IndexScheme {
  SchemeMode mode = SchemeMode::Trivial;
  std::vector<Index> prefix;
  /// Cluster point (finite basis) or per-member limit estimates (families).
  std::vector<double> alpha;
  /// Half-diagonal per refinement level (finite basis) or the requested
  /// per-member tolerances (families).
  std::vector<double> tol_schedule;
  /// Achieved half-width of the final cell, per constrained member.
  std::vector<double> member_delta;
  std::vector<CellConstraint> constraints;
  Index scan_budget_used = 0;

  bool unbounded() const noexcept { return mode == SchemeMode::Trivial; }

  std::size_t length() const noexcept {
    return unbounded() ? std::numeric_limits<std::size_t>::max() : prefix.size();
  }

  /// n_j, 1-based.
  Index at(std::size_t j) const {
    if (j == 0) throw Error(ErrorKind::IndexZero, "scheme positions are numbered from 1");
    if (unbounded()) return j;
    if (j > prefix.size())
      throw SchemeExhausted(prefix.empty() ? scan_budget_used + 1 : prefix.back() + 1);
    return prefix[j - 1];
  }

  Index eta_plus(Index k) const { return at(2 * k); }
  Index eta_minus(Index k) const { return at(2 * k - 1); }

  /// Position j with n_j = n, or nullopt when n is not in I.
  std::optional<std::size_t> position(Index n) const {
    detail::require_positive_index(n, "coordinate index");
    if (unbounded()) return static_cast<std::size_t>(n);
    if (n > scan_budget_used) throw SchemeExhausted(n);
    const auto it = std::lower_bound(prefix.begin(), prefix.end(), n);
    if (it == prefix.end() || *it != n) return std::nullopt;
    return static_cast<std::size_t>(it - prefix.begin()) + 1;
  }

  /// Bound on how far members may drift from alpha along the scheme.
  double delta_final() const {
    switch (mode) {
      case SchemeMode::Trivial: return 0.0;
      case SchemeMode::FiniteBasis: return tol_schedule.empty() ? 0.0 : tol_schedule.back();
      default:
        return member_delta.empty() ? 0.0
                                    : *std::max_element(member_delta.begin(), member_delta.end());
    }
  }
};

/// Thrown when extraction cannot produce a long enough prefix.
class ExtractionBudgetExhausted : public Error {
 public:
  ExtractionBudgetExhausted(std::size_t deepest_stage, std::size_t prefix_length,
                            const std::string& detail)
      : Error(ErrorKind::BudgetExhausted, detail),
        deepest_stage_(deepest_stage),
        prefix_length_(prefix_length) {}

  std::size_t deepest_stage() const noexcept { return deepest_stage_; }
  std::size_t prefix_length() const noexcept { return prefix_length_; }

 private:
  std::size_t deepest_stage_;
  std::size_t prefix_length_;
};

namespace detail {

struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<bool> closed_top;

  static Box around(std::span<const BoundedSeq> members) {
    Box b;
    for (const auto& w : members) {
      b.lo.push_back(-w.bound());
      b.hi.push_back(w.bound());
      b.closed_top.push_back(true);
    }
    return b;
  }

  double half_diagonal() const {
    double s = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) s += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    return 0.5 * std::sqrt(s);
  }

  bool contains(std::span<const double> z) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (!CellConstraint{i, lo[i], hi[i], closed_top[i]}.contains(z[i])) return false;
    return true;
  }
};

/// Bisection refinement: at each level every coordinate interval is halved,
/// the sub-box with the most surviving points is kept, ties going to the
/// lexicographically smallest corner. Values are row-major, one row per candidate.
inline std::vector<std::size_t> refine_box(std::span<const double> values, std::size_t r,
                                           std::vector<std::size_t> rows, Box& box,
                                           std::size_t depth, std::vector<double>* deltas) {
  for (std::size_t level = 0; level < depth && !rows.empty(); ++level) {
    std::vector<double> mid(r);
    for (std::size_t i = 0; i < r; ++i) mid[i] = box.lo[i] + (box.hi[i] - box.lo[i]) / 2.0;

    std::map<std::vector<std::uint8_t>, std::vector<std::size_t>> cells;
    std::vector<std::uint8_t> key(r);
    for (std::size_t row : rows) {
      for (std::size_t i = 0; i < r; ++i) key[i] = values[row * r + i] >= mid[i] ? 1 : 0;
      cells[key].push_back(row);
    }
    // std::map iterates keys lexicographically; corners order the same way.
    auto best = cells.begin();
    for (auto it = cells.begin(); it != cells.end(); ++it)
      if (it->second.size() > best->second.size()) best = it;

    for (std::size_t i = 0; i < r; ++i) {
      if (best->first[i]) {
        box.lo[i] = mid[i];
      } else {
        box.hi[i] = mid[i];
        box.closed_top[i] = false;
      }
    }
    rows = std::move(best->second);
    if (deltas) deltas->push_back(box.half_diagonal());
  }
  return rows;
}

}  // namespace detail

/// Bolzano-Weierstrass extraction for a finite basis w^1..w^r on the vectors
/// z_n = (w^1_n, ..., w^r_n), n = 1..scan_budget. The root box is
/// prod_i [-|w^i|, |w^i|]; each of `depth` levels halves every side. Returns
/// the surviving indices, alpha = final box midpoint and the per-level
/// half-diagonals as tol_schedule.
inline IndexScheme bw_extract(const SubspaceD& D, std::size_t depth, Index scan_budget) {
  if (D.mode() != SubspaceMode::FiniteBasis)
    throw Error(ErrorKind::InvalidArgument, "bw_extract needs a finite basis");
  const auto& basis = D.basis();
  if (basis.empty()) throw Error(ErrorKind::EmptyBasis, "finite basis is empty");
  if (depth == 0) throw Error(ErrorKind::InvalidArgument, "depth must be >= 1");
  const std::size_t r = basis.size();

  detail::Box box = detail::Box::around(basis);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(scan_budget) * r);
  std::vector<std::size_t> rows;
  std::vector<Index> row_index;
  std::vector<double> z(r);
  for (Index n = 1; n <= scan_budget; ++n) {
    for (std::size_t i = 0; i < r; ++i) z[i] = basis[i](n);
    if (!box.contains(z)) continue;  // only if an oracle breaks its certified bound
    rows.push_back(row_index.size());
    row_index.push_back(n);
    values.insert(values.end(), z.begin(), z.end());
  }

  IndexScheme scheme;
  scheme.mode = SchemeMode::FiniteBasis;
  scheme.scan_budget_used = scan_budget;
  const auto survivors = detail::refine_box(values, r, rows, box, depth, &scheme.tol_schedule);
  for (std::size_t row : survivors) scheme.prefix.push_back(row_index[row]);

  for (std::size_t i = 0; i < r; ++i) {
    scheme.alpha.push_back(box.lo[i] + (box.hi[i] - box.lo[i]) / 2.0);
    scheme.member_delta.push_back((box.hi[i] - box.lo[i]) / 2.0);
    scheme.constraints.push_back({i + 1, box.lo[i], box.hi[i], box.closed_top[i]});
  }
  if (scheme.prefix.size() < 2 * depth)
    throw ExtractionBudgetExhausted(
        scheme.tol_schedule.size(), scheme.prefix.size(),
        "extraction kept " + std::to_string(scheme.prefix.size()) + " indices, need " +
            std::to_string(2 * depth));
  return scheme;
}

/// Diagonal extraction for a countable family. Stage i refines member i along
/// the survivors S_{i-1} of the previous stage (S_0 = 1..scan_budget) by
/// bisection of [-|w^i|, |w^i|] until the cell width is <= tol_schedule[i-1].
/// The prefix is n_j = min{s in S_j : s > n_{j-1}} for j <= m, followed by the
/// elements of S_m beyond n_m.
inline IndexScheme diagonal_extract(const SubspaceD& D, std::size_t m,
                                    std::span<const double> tol_schedule, Index scan_budget) {
  if (D.mode() == SubspaceMode::FiniteBasis)
    throw Error(ErrorKind::InvalidArgument, "diagonal_extract needs a countable family");
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  if (tol_schedule.size() < m)
    throw Error(ErrorKind::InvalidArgument, "tolerance schedule shorter than m");
  for (std::size_t i = 0; i < tol_schedule.size(); ++i) {
    if (!(tol_schedule[i] > 0.0))
      throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
    if (i > 0 && !(tol_schedule[i] < tol_schedule[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "tolerance schedule must strictly decrease");
  }

  IndexScheme scheme;
  scheme.mode = D.mode() == SubspaceMode::CountableBasis ? SchemeMode::CountableBasis
                                                         : SchemeMode::DenseSequence;
  scheme.scan_budget_used = scan_budget;
  scheme.tol_schedule.assign(tol_schedule.begin(), tol_schedule.begin() + static_cast<long>(m));

  std::vector<Index> survivors(scan_budget);
  for (Index n = 1; n <= scan_budget; ++n) survivors[n - 1] = n;

  std::vector<Index> diagonal;
  for (std::size_t stage = 1; stage <= m; ++stage) {
    const BoundedSeq w = D.member(stage);
    const std::array<BoundedSeq, 1> one{w};
    detail::Box box = detail::Box::around(one);
    std::size_t depth = 0;
    for (double width = 2.0 * w.bound(); width > tol_schedule[stage - 1]; width /= 2.0) ++depth;

    std::vector<double> values;
    std::vector<std::size_t> rows;
    std::vector<Index> row_index;
    for (Index n : survivors) {
      const double v = w(n);
      if (!box.contains(std::span<const double>(&v, 1))) continue;
      rows.push_back(values.size());
      values.push_back(v);
      row_index.push_back(n);
    }
    const auto kept = detail::refine_box(values, 1, rows, box, depth, nullptr);
    survivors.clear();
    for (std::size_t row : kept) survivors.push_back(row_index[row]);

    const Index floor_index = diagonal.empty() ? 0 : diagonal.back();
    const auto next = std::upper_bound(survivors.begin(), survivors.end(), floor_index);
    if (next == survivors.end())
      throw ExtractionBudgetExhausted(stage - 1, diagonal.size(),
                                      "diagonal stage " + std::to_string(stage) +
                                          " has no surviving index within the scan budget");
    diagonal.push_back(*next);

    scheme.alpha.push_back(box.lo[0] + (box.hi[0] - box.lo[0]) / 2.0);
    scheme.member_delta.push_back((box.hi[0] - box.lo[0]) / 2.0);
    scheme.constraints.push_back({stage, box.lo[0], box.hi[0], box.closed_top[0]});
  }

  scheme.prefix = diagonal;
  for (auto it = std::upper_bound(survivors.begin(), survivors.end(), diagonal.back());
       it != survivors.end(); ++it)
    scheme.prefix.push_back(*it);
  return scheme;
}

/// Continues the scan past scan_budget_used by `extra` indices, appending
/// every n that satisfies all of the scheme's cell constraints.
inline IndexScheme extend_scheme(const SubspaceD& D, const IndexScheme& scheme, Index extra) {
  if (scheme.unbounded()) return scheme;
  IndexScheme out = scheme;
  std::vector<BoundedSeq> members;
  for (const auto& c : scheme.constraints) members.push_back(D.member(c.member));
  const Index end = scheme.scan_budget_used + extra;
  for (Index n = scheme.scan_budget_used + 1; n <= end; ++n) {
    bool inside = true;
    for (std::size_t i = 0; i < members.size() && inside; ++i)
      inside = scheme.constraints[i].contains(members[i](n));
    if (inside) out.prefix.push_back(n);
  }
  out.scan_budget_used = end;
  return out;
}

/// The scheme that realizes D = {0}: I = N, I+ = evens, I- = odds.
inline IndexScheme trivial_scheme() { return IndexScheme{}; }

/// T(x)_n = +phi_k(x) if n = eta+(k), -phi_k(x) if n = eta-(k), 0 off I.
inline BoundedSeq scheme_embed(const SeparableSpace& space, const IndexScheme& scheme,
                               const Element& x) {
  const double bound = norm(space, x);
  auto shared = std::make_shared<const IndexScheme>(scheme);
  auto oracle = [space, shared, x](Index n) {
    const auto j = shared->position(n);
    if (!j) return 0.0;
    const Index k = (*j + 1) / 2;
    const double value = apply_functional(norming_functional(space, k), x);
    return *j % 2 == 0 ? value : -value;
  };
  return BoundedSeq(std::move(oracle), bound,
                    tag::FunctionalImage{space.spec(), x.describe(),
                                         std::string(to_string(scheme.mode))});
}

namespace detail {

/// Sum of |coefficients| through nested linear combinations; 1 for leaves.
inline double combo_weight(const BoundedSeq& d) {
  if (const auto* c = std::get_if<tag::LinearCombo>(&d.tag())) {
    double w = 0.0;
    for (std::size_t i = 0; i < c->children.size(); ++i)
      w += std::abs(c->coefficients[i]) * combo_weight(c->children[i]);
    return w;
  }
  return 1.0;
}

}  // namespace detail

struct LimitEstimate {
  double value = 0.0;
  double err = 0.0;
};

/// L(d) along the scheme: the mean of d(n_j) over the second half of the
/// first `window` positions. err is the largest deviation seen there plus
/// delta_final scaled by d's coefficient weight.
inline LimitEstimate limit_along(const BoundedSeq& d, const IndexScheme& scheme,
                                 std::size_t window) {
  if (window < 2) throw Error(ErrorKind::InvalidArgument, "limit window must be >= 2");
  if (scheme.length() < window)
    throw SchemeExhausted(scheme.prefix.empty() ? scheme.scan_budget_used + 1
                                                : scheme.prefix.back() + 1);
  const std::size_t first = window / 2 + 1;
  double sum = 0.0;
  for (std::size_t j = first; j <= window; ++j) sum += d(scheme.at(j));
  const double mean = sum / static_cast<double>(window - first + 1);
  double dev = 0.0;
  for (std::size_t j = first; j <= window; ++j) dev = std::max(dev, std::abs(d(scheme.at(j)) - mean));
  return {mean, dev + scheme.delta_final() * detail::combo_weight(d)};
}

/// The limit functional d -> L(d) attached to a scheme.
class LimitFunctional {
 public:
  LimitFunctional(IndexScheme scheme, std::size_t window)
      : scheme_(std::move(scheme)), window_(window) {}

  LimitEstimate operator()(const BoundedSeq& d) const { return limit_along(d, scheme_, window_); }

  const IndexScheme& scheme() const noexcept { return scheme_; }
  std::size_t window() const noexcept { return window_; }

 private:
  IndexScheme scheme_;
  std::size_t window_;
};

/// Largest limit window a scheme supports (the whole prefix, or 2 * budget for N).
inline std::size_t default_limit_window(const IndexScheme& scheme, Index scan_budget) {
  if (scheme.unbounded()) return static_cast<std::size_t>(std::max<Index>(2, 2 * scan_budget));
  return scheme.prefix.size();
}

/// Oscillation witness for T(x) - d along the scheme. Net indices k with
/// |x/|x| - u_k| <= eps and d within err of L(d) at both eta+(k) and eta-(k)
/// contribute eta+(k) to the plus list and eta-(k) to the minus list, so
///   plus values  >= |x|(1 - eps) - L - err
///   minus values <= -|x|(1 - eps) - L + err.
inline OscillationWitness separation_witness(const SeparableSpace& space, const IndexScheme& scheme,
                                             const Element& x, const BoundedSeq& d, double eps,
                                             std::size_t count, Index scan_budget) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "count must be >= 1");
  const double nx = norm(space, x);
  require_nonzero(nx);

  const LimitEstimate lim = limit_along(d, scheme, default_limit_window(scheme, scan_budget));
  const BoundedSeq image = scheme_embed(space, scheme, x);
  const std::array<double, 2> coeffs{1.0, -1.0};
  const std::array<BoundedSeq, 2> parts{image, d};
  const BoundedSeq shifted = combine(coeffs, parts);
  const Element v = scaled(x, 1.0 / nx);

  OscillationWitness w;
  w.epsilon = eps;
  w.target_hi = nx * (1.0 - eps) - lim.value - lim.err;
  w.target_lo = -nx * (1.0 - eps) - lim.value + lim.err;

  const Index k_max = std::min<Index>(scan_budget, scheme.length() / 2);
  NetCursor cursor(space);
  for (Index k = 1; k <= k_max && w.size() < count; ++k, cursor.advance()) {
    if (distance(space, v, cursor.point()) > eps) continue;
    const Index plus = scheme.eta_plus(k);
    const Index minus = scheme.eta_minus(k);
    if (std::abs(d(plus) - lim.value) > lim.err || std::abs(d(minus) - lim.value) > lim.err)
      continue;
    w.plus_indices.push_back(plus);
    w.minus_indices.push_back(minus);
    w.plus_values.push_back(shifted(plus));
    w.minus_values.push_back(shifted(minus));
  }
  w.finalize_gap();
  if (w.size() < count) throw WitnessBudgetExhausted(std::move(w), count);
  return w;
}

/// isometry_defect for a scheme-placed embedding: the net prefix is capped at
/// the number of complete (eta-, eta+) pairs the scheme holds.
inline DefectInterval scheme_isometry_defect(const SeparableSpace& space,
                                             const IndexScheme& scheme, const Element& x,
                                             Index K) {
  detail::require_positive_index(K, "net prefix length");
  const double nx = norm(space, x);
  require_nonzero(nx);
  const Index k_eff = std::min<Index>(K, scheme.length() / 2);
  if (k_eff == 0) throw SchemeExhausted(scheme.scan_budget_used + 1);
  const double achieved = prefix_sup(scheme_embed(space, scheme, x), scheme.eta_plus(k_eff));
  const double dK = net_distance(space, scaled(x, 1.0 / nx), k_eff);
  return {nx * (1.0 - dK), achieved, nx};
}

struct ExtensionConfig {
  std::size_t depth = 4;
  Index extraction_budget = 4096;
  std::vector<double> tol_schedule;
  /// Members used by diagonal extraction; 0 means tol_schedule.size().
  std::size_t diagonal_members = 0;
  double epsilon = 0.2;
  std::size_t count = 5;
  Index witness_budget = 100000;
  Index isometry_K = 1000;
};

struct IsometryEntry {
  std::size_t x_id = 0;
  Index K = 0;
  std::optional<DefectInterval> interval;
  bool pass = false;
  std::string error;
};

struct SeparationEntry {
  std::size_t x_id = 0;
  std::size_t d_id = 0;
  LimitEstimate limit;
  double certified_gap = 0.0;
  std::optional<OscillationWitness> witness;
  bool pass = false;
  bool budget_exhausted = false;
  std::string error;
};

/// Z = D + T(E), represented by its generators and certificates.
struct ExtensionRecord {
  IndexScheme scheme;
  std::vector<BoundedSeq> embeddings;
  std::vector<BoundedSeq> d_samples;
  std::vector<IsometryEntry> isometry;
  std::vector<SeparationEntry> separation;

  bool all_pass() const {
    return std::all_of(isometry.begin(), isometry.end(), [](const auto& e) { return e.pass; }) &&
           std::all_of(separation.begin(), separation.end(), [](const auto& e) { return e.pass; });
  }
};

inline IndexScheme extract_for(const SubspaceD& D, const ExtensionConfig& config) {
  if (D.mode() == SubspaceMode::FiniteBasis) {
    if (D.basis().empty()) return trivial_scheme();
    return bw_extract(D, config.depth, config.extraction_budget);
  }
  const std::size_t m =
      config.diagonal_members ? config.diagonal_members : config.tol_schedule.size();
  return diagonal_extract(D, m, config.tol_schedule, config.extraction_budget);
}

inline SeparationEntry separation_entry(const SeparableSpace& space, const IndexScheme& scheme,
                                        const Element& x, std::size_t x_id, const BoundedSeq& d,
                                        std::size_t d_id, double eps, std::size_t count,
                                        Index scan_budget) {
  SeparationEntry e;
  e.x_id = x_id;
  e.d_id = d_id;
  try {
    e.limit = limit_along(d, scheme, default_limit_window(scheme, scan_budget));
    e.certified_gap = 2.0 * norm(space, x) * (1.0 - eps) - 2.0 * e.limit.err;
    auto w = separation_witness(space, scheme, x, d, eps, count, scan_budget);
    const BoundedSeq shifted = combine({1.0, -1.0}, {scheme_embed(space, scheme, x), d});
    e.pass = witness_reverifies(w, shifted) && w.gap >= e.certified_gap - kTolerance;
    e.witness = std::move(w);
  } catch (const WitnessBudgetExhausted& ex) {
    e.budget_exhausted = true;
    e.witness = ex.partial();
    e.error = ex.what();
  } catch (const Error& ex) {
    e.budget_exhausted = ex.kind() == ErrorKind::BudgetExhausted ||
                         ex.kind() == ErrorKind::SchemeExhausted;
    e.error = ex.what();
  }
  return e;
}

/// Runs the extraction suited to D's mode, embeds every sample through the
/// scheme and certifies isometry and separation. Separation is checked against
/// the zero sequence (d_id 0) followed by `d_samples` (d_id 1, 2, ...).
inline ExtensionRecord build_extension(const SeparableSpace& space, const SubspaceD& D,
                                       std::span<const Element> samples,
                                       std::span<const BoundedSeq> d_samples,
                                       const ExtensionConfig& config) {
  ExtensionRecord record;
  record.scheme = extract_for(D, config);
  record.d_samples.push_back(BoundedSeq::zero());
  record.d_samples.insert(record.d_samples.end(), d_samples.begin(), d_samples.end());

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Element& x = samples[i];
    record.embeddings.push_back(scheme_embed(space, record.scheme, x));

    IsometryEntry iso;
    iso.x_id = i;
    iso.K = config.isometry_K;
    try {
      iso.interval = scheme_isometry_defect(space, record.scheme, x, config.isometry_K);
      iso.pass = iso.interval->contract_holds();
    } catch (const Error& ex) {
      iso.error = ex.what();
    }
    record.isometry.push_back(std::move(iso));

    for (std::size_t j = 0; j < record.d_samples.size(); ++j)
      record.separation.push_back(separation_entry(space, record.scheme, x, i,
                                                   record.d_samples[j], j, config.epsilon,
                                                   config.count, config.witness_budget));
  }
  return record;
}

}  // namespace linf
