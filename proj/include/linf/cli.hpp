#pragma once

// Run configurations, spec-string parsers and the command runners behind the
// linfcert tool. Everything here is deterministic given (config, seed); the
// only varying report field is "timestamp".

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "linf/embed.hpp"
#include "linf/error.hpp"
#include "linf/extend.hpp"
#include "linf/io.hpp"
#include "linf/seqcore.hpp"
#include "linf/spaces.hpp"
#include "linf/verify.hpp"

#ifndef LINF_VERSION
#define LINF_VERSION "0.0.0"
#endif

namespace linf::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitFailed = 3;

[[noreturn]] inline void config_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ConfigError, field + ": " + what);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

inline double parse_double(std::string_view text, const std::string& field) {
  text = trim(text);
  if (text == "inf" || text == "+inf") return kInfinity;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    config_error(field, "expected a number, got '" + std::string(text) + "'");
  return v;
}

inline std::uint64_t parse_uint(std::string_view text, const std::string& field) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    config_error(field, "expected a nonnegative integer, got '" + std::string(text) + "'");
  return v;
}

/// "k1=v1,k2=v2" into a map; unknown keys are rejected.
inline std::map<std::string, std::string> parse_keys(std::string_view body, const std::string& field,
                                                     const std::set<std::string>& allowed) {
  std::map<std::string, std::string> out;
  if (trim(body).empty()) return out;
  for (auto part : split(body, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) config_error(field, "expected key=value, got '" +
                                                              std::string(part) + "'");
    std::string key(trim(part.substr(0, eq)));
    if (!allowed.count(key)) config_error(field + "." + key, "unknown key");
    out[key] = std::string(trim(part.substr(eq + 1)));
  }
  return out;
}

inline std::string require_key(const std::map<std::string, std::string>& keys,
                               const std::string& key, const std::string& field) {
  const auto it = keys.find(key);
  if (it == keys.end()) config_error(field + "." + key, "missing");
  return it->second;
}

inline double parse_exponent(const std::string& text, const std::string& field, bool allow_inf) {
  const double p = parse_double(text, field);
  if (std::isnan(p) || p < 1.0) config_error(field, "must be >= 1 (got " + text + ")");
  if (!allow_inf && std::isinf(p)) config_error(field, "must be finite");
  return p;
}

}  // namespace detail

/// Reads a custom net: {"dim": n, "p": p, "net": [{"point": [...], "functional": [...]}, ...]}.
inline SeparableSpace load_custom_net(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IOError, "cannot open custom net file '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error("space.custom", std::string("invalid JSON: ") + e.what());
  }
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    const double p = j.contains("p") ? detail::parse_exponent(j["p"].is_string()
                                                                  ? j["p"].get<std::string>()
                                                                  : j["p"].dump(),
                                                              "space.custom.p", true)
                                     : 2.0;
    std::vector<std::vector<double>> points, functionals;
    for (const auto& entry : j.at("net")) {
      points.push_back(entry.at("point").get<std::vector<double>>());
      functionals.push_back(entry.at("functional").get<std::vector<double>>());
    }
    return SeparableSpace::custom_net(dim, p, std::move(points), std::move(functionals));
  } catch (const json::exception& e) {
    config_error("space.custom", std::string("malformed net: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error("space.custom", e.what());
  }
}

/// fdlp:dim=<n>,p=<p|inf> | seqlp:p=<p>,support=<m> | c01 | custom:<file>
inline SeparableSpace parse_space(const std::string& spec,
                                  const std::filesystem::path& base_dir = {}) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "fdlp") {
    const auto keys = detail::parse_keys(body, "space", {"dim", "p"});
    const auto dim = detail::parse_uint(detail::require_key(keys, "dim", "space"), "space.dim");
    if (dim == 0) config_error("space.dim", "must be >= 1 (got 0)");
    const double p =
        detail::parse_exponent(detail::require_key(keys, "p", "space"), "space.p", true);
    return SeparableSpace::finite_dim_lp(static_cast<std::size_t>(dim), p);
  }
  if (kind == "seqlp") {
    const auto keys = detail::parse_keys(body, "space", {"p", "support"});
    const double p =
        detail::parse_exponent(detail::require_key(keys, "p", "space"), "space.p", false);
    const auto support =
        detail::parse_uint(detail::require_key(keys, "support", "space"), "space.support");
    if (support == 0) config_error("space.support", "must be >= 1 (got 0)");
    return SeparableSpace::seq_lp(p, static_cast<std::size_t>(support));
  }
  if (kind == "c01") {
    if (!detail::trim(body).empty()) config_error("space", "c01 takes no parameters");
    return SeparableSpace::continuous_pl();
  }
  if (kind == "custom") {
    if (body.empty()) config_error("space.custom", "missing file name");
    std::filesystem::path file(body);
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    return load_custom_net(file);
  }
  config_error("space", "unknown space kind '" + kind + "'");
}

/// Resolves sequence ids; named sequences may refer to each other through combo terms.
class SequenceTable {
 public:
  SequenceTable() = default;

  void define(const std::string& id, std::string spec) { specs_[id] = std::move(spec); }

  /// Family members are addressable as w1, w2, ...
  void set_family(std::function<BoundedSeq(std::size_t)> member) { family_ = std::move(member); }

  bool has(const std::string& id) const {
    return specs_.count(id) || (family_ && family_index(id).has_value());
  }

  BoundedSeq get(const std::string& id) const {
    if (auto it = cache_.find(id); it != cache_.end()) return it->second;
    if (auto spec = specs_.find(id); spec != specs_.end()) {
      if (resolving_.count(id)) config_error("sequences." + id, "cyclic definition");
      resolving_.insert(id);
      BoundedSeq s = parse(spec->second, "sequences." + id);
      resolving_.erase(id);
      cache_.emplace(id, s);
      return s;
    }
    if (family_) {
      if (auto i = family_index(id)) return family_(*i);
    }
    config_error("sequence id '" + id + "'", "undefined");
  }

  /// An id defined in the table, or an inline spec:
  /// periodic:v1,...  evconst:v@n  limit:v,rate=r  list:v1,...;tail=t  combo:c1*id1+...
  BoundedSeq resolve(const std::string& text, const std::string& field) const {
    const std::string t(detail::trim(text));
    if (has(t)) return get(t);
    return parse(t, field);
  }

  BoundedSeq parse(const std::string& spec, const std::string& field) const {
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
      config_error(field, "expected kind:body or a defined id, got '" + spec + "'");
    const std::string kind(detail::trim(std::string_view(spec).substr(0, colon)));
    const std::string_view body = std::string_view(spec).substr(colon + 1);

    if (kind == "periodic") {
      std::vector<double> pattern;
      for (auto v : detail::split(body, ',')) pattern.push_back(detail::parse_double(v, field));
      return BoundedSeq::periodic(std::move(pattern));
    }
    if (kind == "evconst") {
      const auto at = body.find('@');
      const double v = detail::parse_double(body.substr(0, at), field);
      const Index from =
          at == std::string_view::npos ? 1 : detail::parse_uint(body.substr(at + 1), field + " (@n)");
      if (from == 0) config_error(field, "start index must be >= 1");
      return BoundedSeq::eventually_constant(v, from);
    }
    if (kind == "limit") {
      const auto parts = detail::split(body, ',');
      if (parts.size() != 2 || parts[1].substr(0, 5) != "rate=")
        config_error(field, "expected limit:<v>,rate=<r>");
      return BoundedSeq::explicit_limit(detail::parse_double(parts[0], field),
                                        detail::parse_double(parts[1].substr(5), field + " (rate)"));
    }
    if (kind == "list") {
      const auto semi = body.find(';');
      if (semi == std::string_view::npos || detail::trim(body.substr(semi + 1)).substr(0, 5) != "tail=")
        config_error(field, "expected list:<v1,...>;tail=<t>");
      std::vector<double> prefix;
      if (!detail::trim(body.substr(0, semi)).empty())
        for (auto v : detail::split(body.substr(0, semi), ','))
          prefix.push_back(detail::parse_double(v, field));
      const double tail =
          detail::parse_double(detail::trim(body.substr(semi + 1)).substr(5), field + " (tail)");
      return BoundedSeq::explicit_list(std::move(prefix), tail);
    }
    if (kind == "combo") {
      std::vector<double> coeffs;
      std::vector<BoundedSeq> children;
      for (auto term : detail::split(body, '+')) {
        const auto star = term.find('*');
        if (star == std::string_view::npos)
          config_error(field, "combo term '" + std::string(term) + "' must be <c>*<id>");
        coeffs.push_back(detail::parse_double(term.substr(0, star), field));
        const std::string id(detail::trim(term.substr(star + 1)));
        if (!has(id)) config_error(field, "combo refers to undefined id '" + id + "'");
        children.push_back(get(id));
      }
      return combine(coeffs, children);
    }
    config_error(field, "unknown sequence kind '" + kind + "'");
  }

 private:
  static std::optional<std::size_t> family_index(const std::string& id) {
    if (id.size() < 2 || id[0] != 'w') return std::nullopt;
    std::size_t i = 0;
    const auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), i);
    if (ec != std::errc() || ptr != id.data() + id.size() || i == 0) return std::nullopt;
    return i;
  }

  std::map<std::string, std::string> specs_;
  std::function<BoundedSeq(std::size_t)> family_;
  mutable std::map<std::string, BoundedSeq> cache_;
  mutable std::set<std::string> resolving_;
};

/// Sample elements: coordinate arrays for fdlp/custom, {"index": value} objects
/// or arrays (indices 1..n) for seqlp, {"breakpoints", "values"} for c01.
inline Element parse_element(const SeparableSpace& space, const json& j, const std::string& field) {
  try {
    switch (space.kind()) {
      case SpaceKind::FiniteDimLp:
      case SpaceKind::CustomNet: {
        auto v = j.get<std::vector<double>>();
        if (v.size() != space.dim())
          config_error(field, "expected " + std::to_string(space.dim()) + " coordinates, got " +
                                  std::to_string(v.size()));
        return Element::dense(std::move(v));
      }
      case SpaceKind::SeqLp: {
        SparseVector s;
        if (j.is_array()) {
          const auto v = j.get<std::vector<double>>();
          for (std::size_t i = 0; i < v.size(); ++i) s[i + 1] = v[i];
        } else {
          for (const auto& [k, v] : j.items())
            s[detail::parse_uint(k, field + " index")] = v.get<double>();
        }
        for (const auto& [i, v] : s)
          if (i == 0 || i > space.support())
            config_error(field, "index " + std::to_string(i) + " outside 1.." +
                                    std::to_string(space.support()));
        return Element::sparse(s);
      }
      case SpaceKind::ContinuousPL: {
        if (j.is_array()) {
          auto values = j.get<std::vector<double>>();
          if (values.size() < 2) config_error(field, "need at least two values");
          std::vector<double> bps(values.size());
          for (std::size_t i = 0; i < bps.size(); ++i)
            bps[i] = static_cast<double>(i) / static_cast<double>(bps.size() - 1);
          return Element::piecewise(std::move(bps), std::move(values));
        }
        return Element::piecewise(j.at("breakpoints").get<std::vector<double>>(),
                                  j.at("values").get<std::vector<double>>());
      }
    }
  } catch (const json::exception& e) {
    config_error(field, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(field, e.what());
  }
  config_error(field, "unsupported space");
}

struct SubspaceConfig {
  std::string mode = "zero";
  std::vector<std::string> members;
  std::string family_base;
  std::string family_scale = "1";
  ExtensionConfig extension;
  std::vector<std::string> d_samples;
  std::size_t random_d_samples = 0;
};

struct RunConfig {
  std::string name = "run";
  std::string space = "fdlp:dim=2,p=2";
  json samples = json::array();
  std::size_t random_samples = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.2;
  std::size_t count = 5;
  Index K = 1000;
  Index witness_budget = 100000;
  Index classify_budget = kDefaultClassifyBudget;
  std::map<std::string, std::string> sequences;
  SubspaceConfig subspace;
  std::vector<std::string> classify;
  std::filesystem::path base_dir;
  json echo = json::object();
};

namespace detail {

template <class T>
T get_field(const json& j, const std::string& key, const std::string& field, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(field + key, "has the wrong type");
  }
}

inline void check_known(const json& j, const std::string& field,
                        const std::set<std::string>& known) {
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) config_error(field + k, "unknown field");
}

}  // namespace detail

inline RunConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) config_error("config", "must be a JSON object");
  detail::check_known(j, "",
                      {"name", "space", "samples", "random_samples", "seed", "epsilon", "count",
                       "K", "witness_budget", "classify_budget", "sequences", "subspace",
                       "classify"});
  RunConfig c;
  c.echo = j;
  c.base_dir = base_dir;
  c.name = detail::get_field<std::string>(j, "name", "", c.name);
  c.space = detail::get_field<std::string>(j, "space", "", c.space);
  if (j.contains("samples")) {
    if (!j["samples"].is_array()) config_error("samples", "must be an array");
    c.samples = j["samples"];
  }
  c.random_samples = detail::get_field<std::size_t>(j, "random_samples", "", 0);
  c.seed = detail::get_field<std::uint64_t>(j, "seed", "", 0);
  c.epsilon = detail::get_field<double>(j, "epsilon", "", c.epsilon);
  if (!(c.epsilon > 0.0 && c.epsilon < 1.0)) config_error("epsilon", "must lie in (0, 1)");
  c.count = detail::get_field<std::size_t>(j, "count", "", c.count);
  if (c.count == 0) config_error("count", "must be >= 1");
  c.K = detail::get_field<Index>(j, "K", "", c.K);
  if (c.K == 0) config_error("K", "must be >= 1");
  c.witness_budget = detail::get_field<Index>(j, "witness_budget", "", c.witness_budget);
  c.classify_budget = detail::get_field<Index>(j, "classify_budget", "", c.classify_budget);
  if (c.classify_budget < 2) config_error("classify_budget", "must be >= 2");
  c.sequences = detail::get_field<std::map<std::string, std::string>>(j, "sequences", "", {});
  c.classify = detail::get_field<std::vector<std::string>>(j, "classify", "", {});

  if (j.contains("subspace")) {
    const json& s = j["subspace"];
    if (!s.is_object()) config_error("subspace", "must be an object");
    detail::check_known(s, "subspace.",
                        {"mode", "members", "family", "depth", "extraction_budget",
                         "tol_schedule", "diagonal_members", "d_samples", "random_d_samples"});
    auto& sc = c.subspace;
    sc.mode = detail::get_field<std::string>(s, "mode", "subspace.", "zero");
    if (sc.mode != "zero" && sc.mode != "finite" && sc.mode != "countable" && sc.mode != "dense")
      config_error("subspace.mode", "must be zero, finite, countable or dense (got '" + sc.mode +
                                        "')");
    sc.members = detail::get_field<std::vector<std::string>>(s, "members", "subspace.", {});
    if (s.contains("family")) {
      const json& f = s["family"];
      sc.family_base = detail::get_field<std::string>(f, "base", "subspace.family.", "");
      sc.family_scale = detail::get_field<std::string>(f, "scale", "subspace.family.", "1");
      if (sc.family_scale != "1" && sc.family_scale != "1/i" && sc.family_scale != "1+1/i")
        config_error("subspace.family.scale", "must be 1, 1/i or 1+1/i");
    }
    auto& e = sc.extension;
    e.depth = detail::get_field<std::size_t>(s, "depth", "subspace.", e.depth);
    if (e.depth == 0) config_error("subspace.depth", "must be >= 1");
    e.extraction_budget =
        detail::get_field<Index>(s, "extraction_budget", "subspace.", e.extraction_budget);
    e.tol_schedule = detail::get_field<std::vector<double>>(s, "tol_schedule", "subspace.", {});
    e.diagonal_members = detail::get_field<std::size_t>(s, "diagonal_members", "subspace.", 0);
    sc.d_samples = detail::get_field<std::vector<std::string>>(s, "d_samples", "subspace.", {});
    sc.random_d_samples = detail::get_field<std::size_t>(s, "random_d_samples", "subspace.", 0);

    if (sc.mode == "finite" && sc.members.empty())
      config_error("subspace.members", "finite mode needs at least one member");
    if ((sc.mode == "countable" || sc.mode == "dense")) {
      if (sc.family_base.empty()) config_error("subspace.family.base", "missing");
      if (e.tol_schedule.empty()) config_error("subspace.tol_schedule", "missing");
    }
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::IOError, "cannot open config '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    config_error("config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j, file.parent_path());
}

/// Everything a runner needs, built from a RunConfig.
struct Prepared {
  SeparableSpace space = SeparableSpace::continuous_pl();
  std::vector<Element> samples;
  SequenceTable table;
  std::optional<SubspaceD> D;
  std::vector<BoundedSeq> d_samples;
  std::vector<std::string> d_labels;
};

inline Prepared prepare(const RunConfig& c) {
  Prepared p;
  p.space = parse_space(c.space, c.base_dir);
  for (std::size_t i = 0; i < c.samples.size(); ++i)
    p.samples.push_back(parse_element(p.space, c.samples[i], "samples[" + std::to_string(i) + "]"));
  std::mt19937_64 rng(c.seed);
  for (std::size_t i = 0; i < c.random_samples; ++i) p.samples.push_back(sample_element(p.space, rng));
  for (std::size_t i = 0; i < p.samples.size(); ++i)
    if (norm(p.space, p.samples[i]) == 0.0)
      config_error("samples[" + std::to_string(i) + "]", "must be nonzero");

  for (const auto& [id, spec] : c.sequences) p.table.define(id, spec);

  const auto& sc = c.subspace;
  std::vector<BoundedSeq> generators;
  if (sc.mode == "finite") {
    std::vector<BoundedSeq> basis;
    for (std::size_t i = 0; i < sc.members.size(); ++i)
      basis.push_back(p.table.resolve(sc.members[i], "subspace.members[" + std::to_string(i) + "]"));
    p.D = SubspaceD::finite_basis(basis);
    generators = basis;
    p.table.set_family([basis](std::size_t i) {
      if (i > basis.size()) config_error("w" + std::to_string(i), "basis has fewer members");
      return basis[i - 1];
    });
  } else if (sc.mode == "countable" || sc.mode == "dense") {
    const BoundedSeq base = p.table.resolve(sc.family_base, "subspace.family.base");
    const std::string scale = sc.family_scale;
    auto member = [base, scale](std::size_t i) {
      const double inv = 1.0 / static_cast<double>(i);
      const double c = scale == "1/i" ? inv : scale == "1+1/i" ? 1.0 + inv : 1.0;
      return combine({c}, {base});
    };
    p.D = sc.mode == "countable" ? SubspaceD::countable(member) : SubspaceD::dense_sequence(member);
    p.table.set_family(member);
    const std::size_t m = sc.extension.diagonal_members ? sc.extension.diagonal_members
                                                        : sc.extension.tol_schedule.size();
    for (std::size_t i = 1; i <= m; ++i) generators.push_back(member(i));
  } else {
    p.D = SubspaceD::zero();
  }

  for (std::size_t i = 0; i < sc.d_samples.size(); ++i) {
    p.d_samples.push_back(
        p.table.resolve(sc.d_samples[i], "subspace.d_samples[" + std::to_string(i) + "]"));
    p.d_labels.push_back(sc.d_samples[i]);
  }
  if (sc.random_d_samples > 0) {
    if (generators.empty())
      config_error("subspace.random_d_samples", "needs a nonzero subspace");
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    for (std::size_t i = 0; i < sc.random_d_samples; ++i) {
      std::vector<double> cs(generators.size());
      std::string label = "combo:";
      for (std::size_t g = 0; g < cs.size(); ++g) {
        cs[g] = coef(rng);
        label += (g ? "+" : "") + linf::detail::format_double(cs[g]) + "*w" + std::to_string(g + 1);
      }
      p.d_samples.push_back(combine(cs, generators));
      p.d_labels.push_back(label);
    }
  }
  return p;
}

struct RunOptions {
  std::string command = "suite";
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<Index> budget;
  std::optional<std::string> space;
  std::vector<std::string> sequences;
};

struct Tally {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t budget = 0;
  std::size_t unknown = 0;

  int exit_code() const {
    if (budget > 0 || unknown > 0) return kExitBudget;
    if (failed > 0) return kExitFailed;
    return kExitOk;
  }
};

struct RunResult {
  json report;
  int exit_code = kExitOk;
  std::vector<std::string> summary;
};

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json versions() {
  return {{"linfcert", LINF_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                        "." + std::to_string(EIGEN_MINOR_VERSION)}};
}

namespace detail {

inline std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline json embed_section(const Prepared& p, const RunConfig& c, Tally& tally,
                          std::vector<std::string>& summary) {
  json per_sample = json::array();
  json witnesses = json::array();
  std::size_t iso_pass = 0, wit_pass = 0;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const Element& x = p.samples[i];
    const double nx = norm(p.space, x);
    const auto d = isometry_defect(p.space, x, c.K);
    const bool ok = d.contract_holds();
    per_sample.push_back({{"x_id", i},
                          {"element", x.describe()},
                          {"norm", nx},
                          {"K", c.K},
                          {"lower", d.lower},
                          {"achieved", d.achieved},
                          {"upper", d.upper},
                          {"pass", ok}});
    ok ? ++tally.passed : ++tally.failed;
    iso_pass += ok;

    json w{{"x_id", i}, {"d_id", 0}, {"certified_gap", 2.0 * nx * (1.0 - c.epsilon)}};
    try {
      const auto wit = oscillation_witness(p.space, x, c.epsilon, c.count, c.witness_budget);
      const bool pass = witness_reverifies(wit, embed_interleaved(p.space, x)) &&
                        wit.gap >= 2.0 * nx * (1.0 - c.epsilon) - kTolerance;
      w["gap"] = wit.gap;
      w["plus_indices"] = wit.plus_indices;
      w["minus_indices"] = wit.minus_indices;
      w["pass"] = pass;
      w["budget_exhausted"] = false;
      pass ? ++tally.passed : ++tally.failed;
      wit_pass += pass;
      min_gap = std::min(min_gap, wit.gap);
    } catch (const WitnessBudgetExhausted& e) {
      w["gap"] = e.partial().gap;
      w["plus_indices"] = e.partial().plus_indices;
      w["minus_indices"] = e.partial().minus_indices;
      w["pass"] = false;
      w["budget_exhausted"] = true;
      w["error"] = e.what();
      ++tally.budget;
    }
    witnesses.push_back(std::move(w));
  }
  summary.push_back("isometry    " + std::to_string(iso_pass) + "/" +
                    std::to_string(p.samples.size()) + " pass  (K = " + std::to_string(c.K) + ")");
  summary.push_back("witnesses   " + std::to_string(wit_pass) + "/" +
                    std::to_string(p.samples.size()) + " pass" +
                    (p.samples.empty() || !std::isfinite(min_gap) ? ""
                                                                  : "  min gap " + fmt(min_gap)));
  return {{"per_sample", per_sample}, {"witnesses", witnesses}};
}

inline json extend_section(const Prepared& p, const RunConfig& c, Tally& tally,
                           std::vector<std::string>& summary) {
  ExtensionConfig config = c.subspace.extension;
  config.epsilon = c.epsilon;
  config.count = c.count;
  config.witness_budget = c.witness_budget;
  config.isometry_K = c.K;
  const auto record = build_extension(p.space, *p.D, p.samples, p.d_samples, config);

  json per_sample = json::array();
  std::size_t iso_pass = 0;
  for (const auto& e : record.isometry) {
    per_sample.push_back(e);
    if (e.pass) {
      ++tally.passed;
      ++iso_pass;
    } else if (e.error.find("SchemeExhausted") != std::string::npos) {
      ++tally.budget;
    } else {
      ++tally.failed;
    }
  }
  json witnesses = json::array();
  std::size_t sep_pass = 0;
  for (const auto& e : record.separation) {
    witnesses.push_back(e);
    if (e.pass) {
      ++tally.passed;
      ++sep_pass;
    } else if (e.budget_exhausted) {
      ++tally.budget;
    } else {
      ++tally.failed;
    }
  }
  json d_labels = json::array({"zero"});
  for (const auto& l : p.d_labels) d_labels.push_back(l);

  summary.push_back("scheme      " + std::string(to_string(record.scheme.mode)) +
                    (record.scheme.unbounded()
                         ? std::string("  (all indices)")
                         : "  prefix " + std::to_string(record.scheme.prefix.size()) +
                               " of " + std::to_string(record.scheme.scan_budget_used) +
                               "  delta " + fmt(record.scheme.delta_final())));
  summary.push_back("isometry    " + std::to_string(iso_pass) + "/" +
                    std::to_string(record.isometry.size()) + " pass");
  summary.push_back("separation  " + std::to_string(sep_pass) + "/" +
                    std::to_string(record.separation.size()) + " pass");
  return {{"scheme", record.scheme},
          {"d_samples", d_labels},
          {"per_sample", per_sample},
          {"witnesses", witnesses}};
}

inline json verdict_entry(const std::string& id, const std::string& spec, const Verdict& v) {
  return {{"seq_id", id}, {"spec", spec}, {"kind", verdict_kind(v)}, {"detail", verdict_detail(v)}};
}

inline void verdict_summary(const json& verdicts, std::vector<std::string>& summary) {
  std::map<std::string, std::size_t> counts;
  for (const auto& v : verdicts) ++counts[v["kind"].get<std::string>()];
  summary.push_back("verdicts    " + std::to_string(counts["InC"]) + " InC, " +
                    std::to_string(counts["NotInC"]) + " NotInC, " +
                    std::to_string(counts["Unknown"]) + " Unknown");
}

/// Images of nonzero samples must never be InC; Unknown means the budget was too small.
inline json image_verdicts(const Prepared& p, const RunConfig& c, Tally& tally) {
  json out = json::array();
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    const auto image = embed_interleaved(p.space, p.samples[i]);
    const auto v = classify_c(image, c.classify_budget);
    auto entry = verdict_entry("T(x" + std::to_string(i) + ")", p.samples[i].describe(), v);
    if (std::holds_alternative<NotInC>(v)) {
      const bool ok = witness_reverifies(std::get<NotInC>(v).witness, image);
      entry["pass"] = ok;
      ok ? ++tally.passed : ++tally.failed;
    } else if (std::holds_alternative<Unknown>(v)) {
      entry["pass"] = false;
      ++tally.unknown;
    } else {
      entry["pass"] = false;
      ++tally.failed;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

inline json listed_verdicts(const Prepared& p, const std::vector<std::string>& specs, Index budget,
                            Tally& tally) {
  json out = json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const BoundedSeq s = p.table.resolve(specs[i], "classify[" + std::to_string(i) + "]");
    const auto v = classify_c(s, budget);
    auto entry = verdict_entry("s" + std::to_string(i), specs[i], v);
    bool ok = true;
    if (std::holds_alternative<NotInC>(v)) ok = witness_reverifies(std::get<NotInC>(v).witness, s);
    if (std::holds_alternative<Unknown>(v)) {
      ++tally.unknown;
      ok = false;
    } else {
      ok ? ++tally.passed : ++tally.failed;
    }
    entry["pass"] = ok;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace detail

/// Runs one subcommand. Validation problems surface as Error(ConfigError | IOError);
/// certificate outcomes are reflected in the exit code.
inline RunResult run(const RunOptions& opt) {
  if (opt.command != "embed" && opt.command != "extend" && opt.command != "classify" &&
      opt.command != "suite")
    config_error("command", "unknown subcommand '" + opt.command + "'");

  RunConfig c;
  if (opt.config) {
    c = load_config(*opt.config);
  } else if (opt.command != "classify") {
    config_error("--config", "required for " + opt.command);
  }
  if (opt.seed) c.seed = *opt.seed;
  if (opt.space) c.space = *opt.space;
  if (opt.budget) {
    if (*opt.budget < 2) config_error("--budget", "must be >= 2");
    c.witness_budget = *opt.budget;
    c.classify_budget = *opt.budget;
  }
  std::vector<std::string> to_classify = c.classify;
  to_classify.insert(to_classify.end(), opt.sequences.begin(), opt.sequences.end());
  if (opt.command == "classify" && to_classify.empty())
    config_error("--seq", "classify needs at least one sequence");
  if (opt.command == "extend" && c.subspace.mode == "zero" && !opt.config)
    config_error("subspace", "extend needs a subspace");

  const Prepared p = prepare(c);

  RunResult r;
  Tally tally;
  json& report = r.report;
  report["command"] = opt.command;
  report["name"] = c.name;
  report["config_echo"] = c.echo;
  report["seed"] = c.seed;
  report["space"] = p.space.spec();
  report["versions"] = versions();
  report["timestamp"] = utc_timestamp();
  r.summary.push_back("linfcert " + opt.command + "  " + c.name + "  space " + p.space.spec() +
                      "  seed " + std::to_string(c.seed));

  if (opt.command == "embed" || opt.command == "suite") {
    const json e = detail::embed_section(p, c, tally, r.summary);
    report["per_sample"] = e["per_sample"];
    report["witnesses"] = e["witnesses"];
  }
  if (opt.command == "extend" || (opt.command == "suite" && c.subspace.mode != "zero")) {
    json ext = detail::extend_section(p, c, tally, r.summary);
    if (opt.command == "extend") {
      report["scheme"] = ext["scheme"];
      report["d_samples"] = ext["d_samples"];
      report["per_sample"] = ext["per_sample"];
      report["witnesses"] = ext["witnesses"];
    } else {
      report["extension"] = std::move(ext);
    }
  }
  json verdicts = json::array();
  if (opt.command == "suite") verdicts = detail::image_verdicts(p, c, tally);
  if (opt.command == "classify" || opt.command == "suite")
    for (auto& v : detail::listed_verdicts(p, to_classify, c.classify_budget, tally))
      verdicts.push_back(std::move(v));
  if (opt.command == "classify" || opt.command == "suite") {
    report["verdicts"] = verdicts;
    detail::verdict_summary(verdicts, r.summary);
  }

  r.exit_code = tally.exit_code();
  report["summary"] = {{"passed", tally.passed},
                       {"failed", tally.failed},
                       {"budget_exhausted", tally.budget},
                       {"unknown", tally.unknown}};
  report["exit_code"] = r.exit_code;
  r.summary.push_back("result      " + std::to_string(tally.passed) + " pass, " +
                      std::to_string(tally.failed) + " fail, " + std::to_string(tally.budget) +
                      " budget, " + std::to_string(tally.unknown) + " unknown  -> exit " +
                      std::to_string(r.exit_code));
  return r;
}

/// The report without its timestamp, for determinism comparisons.
inline json without_timestamp(json report) {
  report.erase("timestamp");
  return report;
}

}  // namespace linf::cli
