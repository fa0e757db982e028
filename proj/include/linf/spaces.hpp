#pragma once

// Computable separable Banach spaces.
//
// Each space provides an exact norm, a deterministic enumeration (u_k) of unit
// vectors that is dense in the unit sphere, and for every u_k an explicit
// norm-one functional phi_k with phi_k(u_k) = 1 (a duality map in closed form).
//
// Built-in kinds:
//   FiniteDimLp   R^n with the p-norm, 1 <= p <= inf
//   SeqLp         finitely supported sequences in l^p, 1 <= p < inf, support
//                 capped at a fixed index m
//   ContinuousPL  piecewise-linear functions on [0,1] with dyadic breakpoints,
//                 sup norm (a dense subspace of C[0,1])
//   CustomNet     R^n with a p-norm and an explicit cyclic list of unit vectors
//                 paired with their functionals; intended for tests

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "linf/error.hpp"

namespace linf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

using SparseVector = std::map<Index, double>;

struct PiecewiseLinear {
  std::vector<double> breakpoints;
  std::vector<double> values;

  double operator()(double t) const {
    if (t <= breakpoints.front()) return values.front();
    if (t >= breakpoints.back()) return values.back();
    const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    const auto i = static_cast<std::size_t>(it - breakpoints.begin()) - 1;
    const double t0 = breakpoints[i];
    const double t1 = breakpoints[i + 1];
    return values[i] + (t - t0) / (t1 - t0) * (values[i + 1] - values[i]);
  }
};

class Element {
 public:
  using Rep = std::variant<std::vector<double>, SparseVector, PiecewiseLinear>;

  static Element dense(std::vector<double> coords) { return Element(Rep(std::move(coords))); }

  /// Explicit zeros are dropped so the representation stays canonical.
  static Element sparse(const SparseVector& entries) {
    SparseVector clean;
    for (const auto& [i, v] : entries) {
      detail::require_positive_index(i, "sequence support index");
      if (v != 0.0) clean.emplace(i, v);
    }
    return Element(Rep(std::move(clean)));
  }

  static Element piecewise(std::vector<double> breakpoints, std::vector<double> values) {
    if (breakpoints.size() < 2 || breakpoints.size() != values.size())
      throw Error(ErrorKind::InvalidArgument,
                  "piecewise-linear element needs >= 2 breakpoints and one value per breakpoint");
    if (breakpoints.front() != 0.0 || breakpoints.back() != 1.0)
      throw Error(ErrorKind::InvalidArgument, "breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
      if (!(breakpoints[i] > breakpoints[i - 1]))
        throw Error(ErrorKind::InvalidArgument, "breakpoints must strictly increase");
    return Element(Rep(PiecewiseLinear{std::move(breakpoints), std::move(values)}));
  }

  const Rep& rep() const noexcept { return rep_; }

  std::string describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&os](const auto& r) {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, std::vector<double>>) {
            os << '[';
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << ']';
          } else if constexpr (std::is_same_v<T, SparseVector>) {
            os << '{';
            bool first = true;
            for (const auto& [i, v] : r) {
              os << (first ? "" : ",") << i << ':' << v;
              first = false;
            }
            os << '}';
          } else {
            os << "pl(";
            for (std::size_t i = 0; i < r.breakpoints.size(); ++i)
              os << (i ? ";" : "") << r.breakpoints[i] << ':' << r.values[i];
            os << ')';
          }
        },
        rep_);
    return os.str();
  }

 private:
  explicit Element(Rep rep) : rep_(std::move(rep)) {}
  Rep rep_;
};

/// a*x + b*y on matching representations.
inline Element linear_combination(double a, const Element& x, double b, const Element& y) {
  if (x.rep().index() != y.rep().index())
    throw Error(ErrorKind::KindMismatch, "cannot combine elements of different kinds");
  if (const auto* xv = std::get_if<std::vector<double>>(&x.rep())) {
    const auto& yv = std::get<std::vector<double>>(y.rep());
    if (xv->size() != yv.size())
      throw Error(ErrorKind::KindMismatch, "cannot combine vectors of different dimension");
    std::vector<double> out(xv->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * (*xv)[i] + b * yv[i];
    return Element::dense(std::move(out));
  }
  if (const auto* xs = std::get_if<SparseVector>(&x.rep())) {
    SparseVector out;
    for (const auto& [i, v] : *xs) out[i] += a * v;
    for (const auto& [i, v] : std::get<SparseVector>(y.rep())) out[i] += b * v;
    return Element::sparse(out);
  }
  const auto& xp = std::get<PiecewiseLinear>(x.rep());
  const auto& yp = std::get<PiecewiseLinear>(y.rep());
  std::vector<double> bps;
  bps.reserve(xp.breakpoints.size() + yp.breakpoints.size());
  std::set_union(xp.breakpoints.begin(), xp.breakpoints.end(), yp.breakpoints.begin(),
                 yp.breakpoints.end(), std::back_inserter(bps));
  std::vector<double> vals(bps.size());
  for (std::size_t i = 0; i < bps.size(); ++i) vals[i] = a * xp(bps[i]) + b * yp(bps[i]);
  return Element::piecewise(std::move(bps), std::move(vals));
}

inline Element scaled(const Element& x, double c) { return linear_combination(c, x, 0.0, x); }

struct PointMass {
  double location = 0.0;
  double sign = 1.0;
};

class Functional {
 public:
  using Rep = std::variant<std::vector<double>, SparseVector, PointMass>;

  explicit Functional(Rep rep) : rep_(std::move(rep)) {}

  const Rep& rep() const noexcept { return rep_; }

 private:
  Rep rep_;
};

inline double apply_functional(const Functional& phi, const Element& x) {
  if (const auto* w = std::get_if<std::vector<double>>(&phi.rep())) {
    const auto* xv = std::get_if<std::vector<double>>(&x.rep());
    if (!xv || xv->size() != w->size())
      throw Error(ErrorKind::KindMismatch, "dual vector applied to an incompatible element");
    double acc = 0.0;
    for (std::size_t i = 0; i < w->size(); ++i) acc += (*w)[i] * (*xv)[i];
    return acc;
  }
  if (const auto* w = std::get_if<SparseVector>(&phi.rep())) {
    const auto* xs = std::get_if<SparseVector>(&x.rep());
    if (!xs) throw Error(ErrorKind::KindMismatch, "sparse functional applied to a non-sequence");
    double acc = 0.0;
    for (const auto& [i, v] : *w)
      if (auto it = xs->find(i); it != xs->end()) acc += v * it->second;
    return acc;
  }
  const auto& mass = std::get<PointMass>(phi.rep());
  const auto* xp = std::get_if<PiecewiseLinear>(&x.rep());
  if (!xp) throw Error(ErrorKind::KindMismatch, "point mass applied to a non-function");
  return mass.sign * (*xp)(mass.location);
}

enum class SpaceKind { FiniteDimLp, SeqLp, ContinuousPL, CustomNet };

struct CustomNetData {
  std::size_t dim = 0;
  double p = 2.0;
  std::vector<std::vector<double>> points;
  std::vector<std::vector<double>> functionals;
};

namespace detail {

inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double lp_norm(std::span<const double> x, double p) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  if (m == 0.0 || std::isinf(p)) return m;
  if (p == 1.0) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

inline double conjugate_exponent(double p) {
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace detail

class SeparableSpace {
 public:
  static SeparableSpace finite_dim_lp(std::size_t dim, double p) {
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "dim must be >= 1");
    check_exponent(p, true);
    return SeparableSpace(SpaceKind::FiniteDimLp, dim, p, 0, nullptr);
  }

  static SeparableSpace seq_lp(double p, std::size_t support) {
    if (support == 0) throw Error(ErrorKind::InvalidArgument, "support must be >= 1");
    check_exponent(p, false);
    return SeparableSpace(SpaceKind::SeqLp, 0, p, support, nullptr);
  }

  static SeparableSpace continuous_pl() {
    return SeparableSpace(SpaceKind::ContinuousPL, 0, kInfinity, 0, nullptr);
  }

  /// Validates every pair: |u| = 1, phi(u) = 1 and |phi|_q <= 1, all within kTolerance.
  static SeparableSpace custom_net(std::size_t dim, double p, std::vector<std::vector<double>> points,
                                   std::vector<std::vector<double>> functionals) {
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "dim must be >= 1");
    check_exponent(p, true);
    if (points.empty() || points.size() != functionals.size())
      throw Error(ErrorKind::InvalidArgument,
                  "custom net needs a nonempty list of (point, functional) pairs");
    const double q = detail::conjugate_exponent(p);
    for (std::size_t k = 0; k < points.size(); ++k) {
      const auto& u = points[k];
      const auto& w = functionals[k];
      const std::string where = "custom net entry " + std::to_string(k + 1);
      if (u.size() != dim || w.size() != dim)
        throw Error(ErrorKind::InvalidArgument, where + ": wrong dimension");
      if (std::abs(detail::lp_norm(u, p) - 1.0) > kTolerance)
        throw Error(ErrorKind::NotUnitVector, where + ": point is not a unit vector");
      double pairing = 0.0;
      for (std::size_t i = 0; i < dim; ++i) pairing += u[i] * w[i];
      if (std::abs(pairing - 1.0) > kTolerance)
        throw Error(ErrorKind::InvalidArgument, where + ": functional does not norm its point");
      if (detail::lp_norm(w, q) > 1.0 + kTolerance)
        throw Error(ErrorKind::InvalidArgument, where + ": functional has dual norm > 1");
    }
    auto data = std::make_shared<const CustomNetData>(
        CustomNetData{dim, p, std::move(points), std::move(functionals)});
    return SeparableSpace(SpaceKind::CustomNet, dim, p, 0, std::move(data));
  }

  SpaceKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return dim_; }
  double exponent() const noexcept { return p_; }
  std::size_t support() const noexcept { return support_; }
  const CustomNetData* custom() const noexcept { return custom_.get(); }

  /// Spec string in the CLI syntax (custom nets are described inline).
  std::string spec() const {
    switch (kind_) {
      case SpaceKind::FiniteDimLp:
        return "fdlp:dim=" + std::to_string(dim_) + ",p=" + detail::format_double(p_);
      case SpaceKind::SeqLp:
        return "seqlp:p=" + detail::format_double(p_) + ",support=" + std::to_string(support_);
      case SpaceKind::ContinuousPL:
        return "c01";
      case SpaceKind::CustomNet:
        return "custom:dim=" + std::to_string(dim_) + ",p=" + detail::format_double(p_) +
               ",size=" + std::to_string(custom_->points.size());
    }
    return {};
  }

 private:
  SeparableSpace(SpaceKind kind, std::size_t dim, double p, std::size_t support,
                 std::shared_ptr<const CustomNetData> custom)
      : kind_(kind), dim_(dim), p_(p), support_(support), custom_(std::move(custom)) {}

  static void check_exponent(double p, bool allow_inf) {
    if (std::isnan(p) || p < 1.0 || (!allow_inf && std::isinf(p)))
      throw Error(ErrorKind::InvalidArgument,
                  std::string("p must lie in [1, ") + (allow_inf ? "inf]" : "inf)"));
  }

  SpaceKind kind_;
  std::size_t dim_;
  double p_;
  std::size_t support_;
  std::shared_ptr<const CustomNetData> custom_;
};

namespace detail {

inline void check_member(const SeparableSpace& space, const Element& x) {
  switch (space.kind()) {
    case SpaceKind::FiniteDimLp:
    case SpaceKind::CustomNet: {
      const auto* v = std::get_if<std::vector<double>>(&x.rep());
      if (!v || v->size() != space.dim())
        throw Error(ErrorKind::KindMismatch,
                    "element is not a vector of dimension " + std::to_string(space.dim()));
      return;
    }
    case SpaceKind::SeqLp: {
      const auto* s = std::get_if<SparseVector>(&x.rep());
      if (!s) throw Error(ErrorKind::KindMismatch, "element is not a finitely supported sequence");
      if (!s->empty() && s->rbegin()->first > space.support())
        throw Error(ErrorKind::KindMismatch,
                    "sequence support exceeds the cap " + std::to_string(space.support()));
      return;
    }
    case SpaceKind::ContinuousPL:
      if (!std::holds_alternative<PiecewiseLinear>(x.rep()))
        throw Error(ErrorKind::KindMismatch, "element is not a piecewise-linear function");
      return;
  }
}

}  // namespace detail

inline double norm(const SeparableSpace& space, const Element& x) {
  detail::check_member(space, x);
  if (const auto* v = std::get_if<std::vector<double>>(&x.rep()))
    return detail::lp_norm(*v, space.exponent());
  if (const auto* s = std::get_if<SparseVector>(&x.rep())) {
    std::vector<double> vals;
    vals.reserve(s->size());
    for (const auto& [i, v] : *s) vals.push_back(v);
    return detail::lp_norm(vals, space.exponent());
  }
  // A PL function attains its sup norm at a breakpoint.
  const auto& f = std::get<PiecewiseLinear>(x.rep());
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

inline double distance(const SeparableSpace& space, const Element& a, const Element& b) {
  return norm(space, linear_combination(1.0, a, -1.0, b));
}

/// Explicit norm-one functional attaining 1 at the unit vector u.
///   1 < p < inf : phi_i = sign(u_i) |u_i|^(p-1)
///   p = 1       : phi_i = sign(u_i)
///   p = inf     : signed coordinate functional at the first index of max |u_i|
///   C[0,1]      : signed point mass at the leftmost breakpoint of max |u|
inline Functional duality_map(const SeparableSpace& space, const Element& u) {
  detail::check_member(space, u);
  const double p = space.exponent();
  auto dual_coeff = [p](double v) {
    if (p == 1.0) return detail::sign(v);
    if (v == 0.0) return 0.0;
    if (p == 2.0) return v;
    return detail::sign(v) * std::pow(std::abs(v), p - 1.0);
  };

  if (const auto* v = std::get_if<std::vector<double>>(&u.rep())) {
    std::vector<double> w(v->size(), 0.0);
    if (std::isinf(p)) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < v->size(); ++i)
        if (std::abs((*v)[i]) > std::abs((*v)[best])) best = i;
      w[best] = detail::sign((*v)[best]);
    } else {
      for (std::size_t i = 0; i < v->size(); ++i) w[i] = dual_coeff((*v)[i]);
    }
    return Functional(std::move(w));
  }
  if (const auto* s = std::get_if<SparseVector>(&u.rep())) {
    SparseVector w;
    for (const auto& [i, val] : *s) w.emplace(i, dual_coeff(val));
    return Functional(std::move(w));
  }
  const auto& f = std::get<PiecewiseLinear>(u.rep());
  std::size_t best = 0;
  for (std::size_t i = 1; i < f.values.size(); ++i)
    if (std::abs(f.values[i]) > std::abs(f.values[best])) best = i;
  return Functional(PointMass{f.breakpoints[best], detail::sign(f.values[best])});
}

namespace detail {

inline Index saturating_pow(Index base, std::size_t exp) {
  Index out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<Index>::max() / base) return std::numeric_limits<Index>::max();
    out *= base;
  }
  return out;
}

/// Dyadic depth of the PL grid at level t: floor(log4 t).
inline std::size_t pl_depth(Index t) {
  std::size_t s = 0;
  while ((Index{4} << (2 * s)) <= t) ++s;
  return s;
}

/// Number of free integer coordinates of a grid vector at level t.
inline std::size_t grid_digits(const SeparableSpace& space, Index t) {
  switch (space.kind()) {
    case SpaceKind::FiniteDimLp: return space.dim();
    case SpaceKind::SeqLp: return static_cast<std::size_t>(std::min<Index>(t, space.support()));
    case SpaceKind::ContinuousPL: return (std::size_t{1} << pl_depth(t)) + 1;
    case SpaceKind::CustomNet: break;
  }
  return 0;
}

/// Nonzero integer vectors in [-t, t]^digits.
inline Index level_count(const SeparableSpace& space, Index t) {
  const Index full = saturating_pow(2 * t + 1, grid_digits(space, t));
  return full == std::numeric_limits<Index>::max() ? full : full - 1;
}

/// Normalized unit element for an integer grid vector at level t.
inline Element grid_element(const SeparableSpace& space, Index t, std::span<const int> digits) {
  switch (space.kind()) {
    case SpaceKind::FiniteDimLp: {
      std::vector<double> v(digits.begin(), digits.end());
      const double n = lp_norm(v, space.exponent());
      for (double& c : v) c /= n;
      return Element::dense(std::move(v));
    }
    case SpaceKind::SeqLp: {
      std::vector<double> v(digits.begin(), digits.end());
      const double n = lp_norm(v, space.exponent());
      SparseVector s;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) s.emplace(i + 1, v[i] / n);
      return Element::sparse(s);
    }
    case SpaceKind::ContinuousPL: {
      const std::size_t depth = pl_depth(t);
      const double h = std::ldexp(1.0, -static_cast<int>(depth));
      std::vector<double> bps(digits.size());
      std::vector<double> vals(digits.begin(), digits.end());
      double m = 0.0;
      for (double v : vals) m = std::max(m, std::abs(v));
      for (std::size_t j = 0; j < bps.size(); ++j) {
        bps[j] = static_cast<double>(j) * h;
        vals[j] /= m;
      }
      bps.back() = 1.0;
      return Element::piecewise(std::move(bps), std::move(vals));
    }
    case SpaceKind::CustomNet: break;
  }
  throw Error(ErrorKind::InvalidArgument, "custom nets have no grid");
}

}  // namespace detail

/// Sequential walk over the net u_1, u_2, ... in enumeration order.
///
/// Grid kinds: level t = 1, 2, ... lists every nonzero integer vector in
/// [-t, t]^D in lexicographic order (first coordinate most significant), each
/// normalized to the unit sphere. D is the dimension (FiniteDimLp), min(t, m)
/// leading sequence slots (SeqLp) or the 2^s + 1 dyadic breakpoints j / 2^s
/// with s = floor(log4 t) (ContinuousPL). Directions repeat across levels.
/// Custom nets cycle through their explicit list.
class NetCursor {
 public:
  explicit NetCursor(SeparableSpace space) : space_(std::move(space)) {
    if (space_.kind() != SpaceKind::CustomNet) {
      digits_.assign(detail::grid_digits(space_, 1), -1);
    }
    refresh();
  }

  Index index() const noexcept { return k_; }
  const Element& point() const noexcept { return point_; }
  Index level() const noexcept { return level_; }

  Functional functional() const {
    if (const auto* net = space_.custom())
      return Functional(net->functionals[static_cast<std::size_t>((k_ - 1) % net->points.size())]);
    return duality_map(space_, point_);
  }

  void advance() {
    ++k_;
    if (space_.kind() == SpaceKind::CustomNet) {
      refresh();
      return;
    }
    do {
      step_digits();
    } while (std::all_of(digits_.begin(), digits_.end(), [](int d) { return d == 0; }));
    refresh();
  }

 private:
  void step_digits() {
    const int t = static_cast<int>(level_);
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (digits_[i] < t) {
        ++digits_[i];
        return;
      }
      digits_[i] = -t;
    }
    ++level_;
    digits_.assign(detail::grid_digits(space_, level_), -static_cast<int>(level_));
  }

  void refresh() {
    if (const auto* net = space_.custom()) {
      point_ = Element::dense(net->points[static_cast<std::size_t>((k_ - 1) % net->points.size())]);
      return;
    }
    point_ = detail::grid_element(space_, level_, digits_);
  }

  SeparableSpace space_;
  Index k_ = 1;
  Index level_ = 1;
  std::vector<int> digits_;
  Element point_ = Element::dense({});
};

/// u_k by direct decoding (random access; agrees with NetCursor).
inline Element net_point(const SeparableSpace& space, Index k) {
  detail::require_positive_index(k, "net index");
  if (const auto* net = space.custom())
    return Element::dense(net->points[static_cast<std::size_t>((k - 1) % net->points.size())]);
  Index t = 1;
  Index rest = k;
  for (Index c = detail::level_count(space, t); rest > c; c = detail::level_count(space, t)) {
    rest -= c;
    ++t;
  }
  const std::size_t n_digits = detail::grid_digits(space, t);
  const Index base = 2 * t + 1;
  const Index full = detail::saturating_pow(base, n_digits);
  Index offset = rest - 1;
  if (full != std::numeric_limits<Index>::max() && offset >= (full - 1) / 2) ++offset;
  std::vector<int> digits(n_digits, 0);
  for (std::size_t i = n_digits; i-- > 0;) {
    digits[i] = static_cast<int>(offset % base) - static_cast<int>(t);
    offset /= base;
  }
  // Leading digits past the magnitude of `offset` decode to -t.
  return detail::grid_element(space, t, digits);
}

inline Functional norming_functional(const SeparableSpace& space, Index k) {
  detail::require_positive_index(k, "net index");
  if (const auto* net = space.custom())
    return Functional(net->functionals[static_cast<std::size_t>((k - 1) % net->points.size())]);
  return duality_map(space, net_point(space, k));
}

inline void require_unit(const SeparableSpace& space, const Element& v) {
  if (std::abs(norm(space, v) - 1.0) > kTolerance)
    throw Error(ErrorKind::NotUnitVector, "expected a unit vector");
}

/// d_K(v) = min_{k <= K} |v - u_k|
inline double net_distance(const SeparableSpace& space, const Element& v, Index K) {
  detail::require_positive_index(K, "net prefix length");
  require_unit(space, v);
  double best = kInfinity;
  NetCursor cursor(space);
  for (Index k = 1; k <= K; ++k, cursor.advance()) {
    best = std::min(best, distance(space, v, cursor.point()));
    if (best == 0.0) break;
  }
  return best;
}

/// Random nonzero element for property tests and CLI sampling. ContinuousPL
/// samples are drawn on the breakpoints {0, 1/2, 1}; SeqLp samples use a random
/// nonempty subset of the allowed support.
template <class URBG>
Element sample_element(const SeparableSpace& space, URBG& rng) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(0.25, 4.0);
  for (;;) {
    const double c = scale(rng);
    switch (space.kind()) {
      case SpaceKind::FiniteDimLp:
      case SpaceKind::CustomNet: {
        std::vector<double> v(space.dim());
        for (double& x : v) x = c * coord(rng);
        Element e = Element::dense(std::move(v));
        if (norm(space, e) > 0.0) return e;
        break;
      }
      case SpaceKind::SeqLp: {
        std::bernoulli_distribution keep(0.7);
        SparseVector s;
        for (Index i = 1; i <= space.support(); ++i)
          if (keep(rng)) s[i] = c * coord(rng);
        Element e = Element::sparse(s);
        if (norm(space, e) > 0.0) return e;
        break;
      }
      case SpaceKind::ContinuousPL: {
        std::vector<double> vals(3);
        for (double& x : vals) x = c * coord(rng);
        Element e = Element::piecewise({0.0, 0.5, 1.0}, std::move(vals));
        if (norm(space, e) > 0.0) return e;
        break;
      }
    }
  }
}

}  // namespace linf
