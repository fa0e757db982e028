#pragma once

// The interleaved isometric embedding T : E -> l-infinity,
//
//   T(x)_{2k-1} = phi_k(x),   T(x)_{2k} = -phi_k(x),
//
// and its finite-truncation certificates. The upper bound |T(x)|_inf <= |x|
// holds exactly at every truncation; the lower bound is certified through the
// net distance d_K(x / |x|), and non-convergence of T(x) through an
// oscillation witness built from net points close to x / |x|.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "linf/error.hpp"
#include "linf/seqcore.hpp"
#include "linf/spaces.hpp"

namespace linf {

struct SignedFunctional {
  Index net_index = 1;
  double sign = 1.0;
};

/// psi_{2k-1} = phi_k, psi_{2k} = -phi_k.
class Embedding {
 public:
  explicit Embedding(SeparableSpace space) : space_(std::move(space)) {}

  const SeparableSpace& space() const noexcept { return space_; }

  static SignedFunctional psi(Index n) {
    detail::require_positive_index(n, "coordinate index");
    return {(n + 1) / 2, n % 2 == 1 ? 1.0 : -1.0};
  }

  BoundedSeq image(const Element& x) const {
    const double bound = norm(space_, x);
    auto oracle = [space = space_, x](Index n) {
      const auto [k, sign] = psi(n);
      const double value = apply_functional(norming_functional(space, k), x);
      return sign > 0 ? value : -value;
    };
    return BoundedSeq(std::move(oracle), bound,
                      tag::FunctionalImage{space_.spec(), x.describe(), std::nullopt});
  }

 private:
  SeparableSpace space_;
};

inline BoundedSeq embed_interleaved(const SeparableSpace& space, const Element& x) {
  return Embedding(space).image(x);
}

struct DefectInterval {
  double lower = 0.0;
  double achieved = 0.0;
  double upper = 0.0;

  bool contract_holds(double tol = kTolerance) const {
    return lower - tol <= achieved && achieved <= upper + tol;
  }
};

inline void require_nonzero(double norm_value) {
  if (norm_value == 0.0) throw Error(ErrorKind::ZeroElement, "element must be nonzero");
}

/// achieved = sup_{n <= 2K} |T(x)_n|, upper = |x|, lower = |x| (1 - d_K(x/|x|)).
inline DefectInterval isometry_defect(const SeparableSpace& space, const Element& x, Index K) {
  detail::require_positive_index(K, "net prefix length");
  const double nx = norm(space, x);
  require_nonzero(nx);
  const double achieved = prefix_sup(embed_interleaved(space, x), 2 * K);
  const double dK = net_distance(space, scaled(x, 1.0 / nx), K);
  return {nx * (1.0 - dK), achieved, nx};
}

/// Two index lists on which a sequence stays above target_hi and below
/// target_lo respectively. Values are copied from the oracle at construction.
struct OscillationWitness {
  std::vector<Index> plus_indices;
  std::vector<Index> minus_indices;
  std::vector<double> plus_values;
  std::vector<double> minus_values;
  double gap = 0.0;
  double epsilon = 0.0;
  double target_hi = 0.0;
  double target_lo = 0.0;

  std::size_t size() const noexcept { return plus_indices.size(); }

  /// target_hi - target_lo: the gap guaranteed by construction.
  double certified_gap() const noexcept { return target_hi - target_lo; }

  void finalize_gap() {
    if (plus_values.empty() || minus_values.empty()) {
      gap = 0.0;
      return;
    }
    gap = *std::min_element(plus_values.begin(), plus_values.end()) -
          *std::max_element(minus_values.begin(), minus_values.end());
  }
};

/// Thrown when a witness search ends with fewer than `count` pairs.
class WitnessBudgetExhausted : public Error {
 public:
  WitnessBudgetExhausted(OscillationWitness partial, std::size_t requested)
      : Error(ErrorKind::BudgetExhausted, "witness search found " +
                                              std::to_string(partial.size()) + " of " +
                                              std::to_string(requested) + " required pairs"),
        partial_(std::move(partial)),
        requested_(requested) {}

  const OscillationWitness& partial() const noexcept { return partial_; }
  std::size_t requested() const noexcept { return requested_; }

 private:
  OscillationWitness partial_;
  std::size_t requested_;
};

/// Re-evaluates every stored coordinate and checks bit-identity, index
/// monotonicity, the stated targets and a positive gap.
inline bool witness_reverifies(const OscillationWitness& w, const BoundedSeq& s) {
  if (w.plus_indices.size() != w.minus_indices.size() || w.plus_indices.empty()) return false;
  if (w.plus_values.size() != w.plus_indices.size() ||
      w.minus_values.size() != w.minus_indices.size())
    return false;
  auto increasing = [](const std::vector<Index>& v) {
    return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
  };
  if (!increasing(w.plus_indices) || !increasing(w.minus_indices)) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double hi = s(w.plus_indices[i]);
    const double lo = s(w.minus_indices[i]);
    if (hi != w.plus_values[i] || lo != w.minus_values[i]) return false;
    if (hi < w.target_hi - kTolerance || lo > w.target_lo + kTolerance) return false;
  }
  OscillationWitness copy = w;
  copy.finalize_gap();
  return copy.gap == w.gap && w.gap > 0.0;
}

/// Scans net indices k = 1..scan_budget and keeps those with |x/|x| - u_k| <= eps;
/// each kept k contributes 2k-1 to the plus list and 2k to the minus list.
inline OscillationWitness oscillation_witness(const SeparableSpace& space, const Element& x,
                                              double eps, std::size_t count, Index scan_budget) {
  if (!(eps > 0.0 && eps < 1.0))
    throw Error(ErrorKind::InvalidArgument, "epsilon must lie in (0, 1)");
  if (count == 0) throw Error(ErrorKind::InvalidArgument, "count must be >= 1");
  const double nx = norm(space, x);
  require_nonzero(nx);
  const Element v = scaled(x, 1.0 / nx);
  const BoundedSeq image = embed_interleaved(space, x);

  OscillationWitness w;
  w.epsilon = eps;
  w.target_hi = nx * (1.0 - eps);
  w.target_lo = -nx * (1.0 - eps);
  NetCursor cursor(space);
  for (Index k = 1; k <= scan_budget && w.size() < count; ++k, cursor.advance()) {
    if (distance(space, v, cursor.point()) > eps) continue;
    w.plus_indices.push_back(2 * k - 1);
    w.minus_indices.push_back(2 * k);
    w.plus_values.push_back(image(2 * k - 1));
    w.minus_values.push_back(image(2 * k));
  }
  w.finalize_gap();
  if (w.size() < count) throw WitnessBudgetExhausted(std::move(w), count);
  return w;
}

}  // namespace linf
