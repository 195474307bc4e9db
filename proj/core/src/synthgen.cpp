#include "egonet/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <yaml-cpp/yaml.h>

#include "egonet/feature_table.hpp"
#include "egonet/indices.hpp"
#include "egonet/parallel.hpp"
#include "text.hpp"

namespace egonet {

namespace {

constexpr std::size_t kMaxDegree = 200'000;
constexpr std::size_t kMaxTriangles = 2'000'000;
constexpr int kRoleRetries = 32;
constexpr int kRateSamples = 50'000;

using Local = EgoNetwork::Local;

// ---- configuration -------------------------------------------------------

void check_keys(const YAML::Node& node, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

YAML::Node require(const YAML::Node& node, const std::string& key, const std::string& where) {
  YAML::Node v = node[key];
  if (!v) throw ConfigError(where + ": missing key '" + key + "'");
  return v;
}

double read_real(const YAML::Node& node, const std::string& key, const std::string& where) {
  try {
    return require(node, key, where).as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(where + "." + key + ": expected a number");
  }
}

MeanMedian read_mean_median(const YAML::Node& node, const std::string& key, const std::string& where) {
  const YAML::Node v = require(node, key, where);
  const std::string path = where + "." + key;
  check_keys(v, {"mean", "median"}, path);
  return {read_real(v, "mean", path), read_real(v, "median", path)};
}

TypeConfig read_type(const YAML::Node& node, const std::string& where) {
  check_keys(node, {"targets", "model"}, where);
  TypeConfig tc;
  const std::string tw = where + ".targets";
  const YAML::Node t = require(node, "targets", where);
  check_keys(t, {"users", "k_eq_1", "k", "s_eq_1", "s", "spk_eq_1", "spk", "sp_eq_1", "sp_eq_inv_k", "wsp_eq_1",
                 "wsp_eq_inv_s", "c_eq_0", "c", "m_eq_0", "m_eq_1", "cyp_eq_0", "cyp"},
             tw);
  const double users = read_real(t, "users", tw);
  if (users < 1 || users != std::floor(users)) throw ConfigError(tw + ".users: expected a positive integer");
  TypeTargets& x = tc.targets;
  x.users = static_cast<std::size_t>(users);
  x.k_eq_1 = read_real(t, "k_eq_1", tw);
  x.k = read_mean_median(t, "k", tw);
  x.s_eq_1 = read_real(t, "s_eq_1", tw);
  x.s = read_mean_median(t, "s", tw);
  x.spk_eq_1 = read_real(t, "spk_eq_1", tw);
  x.spk = read_mean_median(t, "spk", tw);
  x.sp_eq_1 = read_real(t, "sp_eq_1", tw);
  x.sp_eq_inv_k = read_real(t, "sp_eq_inv_k", tw);
  x.wsp_eq_1 = read_real(t, "wsp_eq_1", tw);
  x.wsp_eq_inv_s = read_real(t, "wsp_eq_inv_s", tw);
  x.c_eq_0 = read_real(t, "c_eq_0", tw);
  x.c = read_mean_median(t, "c", tw);
  x.m_eq_0 = read_real(t, "m_eq_0", tw);
  x.m_eq_1 = read_real(t, "m_eq_1", tw);
  x.cyp_eq_0 = read_real(t, "cyp_eq_0", tw);
  x.cyp = read_mean_median(t, "cyp", tw);

  const std::string mw = where + ".model";
  const YAML::Node m = require(node, "model", where);
  check_keys(m, {"k1_role", "mixed_sell", "reciprocal_prob", "triangle_locality"}, mw);
  const auto role = require(m, "k1_role", mw).as<std::string>();
  if (role == "buyer") {
    tc.model.k1_role = K1Role::buyer;
  } else if (role == "seller") {
    tc.model.k1_role = K1Role::seller;
  } else {
    throw ConfigError(mw + ".k1_role: expected 'buyer' or 'seller', got '" + role + "'");
  }
  const YAML::Node mix = require(m, "mixed_sell", mw);
  check_keys(mix, {"alpha", "beta"}, mw + ".mixed_sell");
  tc.model.mixed_sell_alpha = read_real(mix, "alpha", mw + ".mixed_sell");
  tc.model.mixed_sell_beta = read_real(mix, "beta", mw + ".mixed_sell");
  tc.model.reciprocal_prob = read_real(m, "reciprocal_prob", mw);
  tc.model.triangle_locality = read_real(m, "triangle_locality", mw);
  return tc;
}

void check_share(double v, const std::string& name) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(name + " must lie in [0, 1]");
}

void check_mean_median(const MeanMedian& mm, double floor, const std::string& name) {
  if (!(mm.median > floor)) throw ConfigError(name + ".median must exceed " + detail::format_real(floor));
  if (!(mm.mean >= mm.median)) throw ConfigError(name + ": a log-normal needs mean >= median");
}

// ---- sampling helpers ----------------------------------------------------

double draw_lognormal(Rng& rng, const MeanMedian& mm) {
  const double sigma = std::sqrt(2.0 * std::log(mm.mean / mm.median));
  if (sigma == 0.0) return mm.median;
  std::lognormal_distribution<double> d(std::log(mm.median), sigma);
  return d(rng);
}

bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::bernoulli_distribution(p)(rng);
}

double draw_beta(Rng& rng, double a, double b) {
  const double x = std::gamma_distribution<double>(a, 1.0)(rng);
  const double y = std::gamma_distribution<double>(b, 1.0)(rng);
  return x + y > 0.0 ? x / (x + y) : 0.5;
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// s/k drawn from 1 + log-normal excess.
double draw_spk(Rng& rng, const MeanMedian& spk) {
  return 1.0 + draw_lognormal(rng, {spk.mean - 1.0, spk.median - 1.0});
}

std::size_t draw_degree(Rng& rng, const TypeTargets& t) {
  if (coin(rng, t.k_eq_1)) return 1;
  const double draw = std::round(draw_lognormal(rng, t.k));
  return static_cast<std::size_t>(std::clamp(draw, 2.0, static_cast<double>(kMaxDegree)));
}

// Triangle count for a user with clustering drawn from the C | C > 0 target,
// at least one and at most `allowed`.
std::size_t draw_triangles(Rng& rng, const TypeTargets& t, std::uint64_t pairs, std::uint64_t allowed) {
  const double c = std::min(1.0, draw_lognormal(rng, t.c));
  const double cap = static_cast<double>(std::min<std::uint64_t>(allowed, kMaxTriangles));
  return static_cast<std::size_t>(std::clamp(std::round(c * static_cast<double>(pairs)), 1.0, cap));
}

enum Direction : std::uint8_t { kIn = 1, kOut = 2, kBoth = 3 };

// Rank used to orient non-cyclic triangles from buy side to sell side.
int rank_of(std::uint8_t d) { return d == kIn ? 0 : d == kBoth ? 1 : 2; }

std::uint64_t pair_key(Local a, Local b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct Roles {
  std::vector<std::uint8_t> dir;  // per local index, entry 0 unused
  bool exclusive = false;
  bool single_sale = false;
};

Roles draw_roles(Rng& rng, const TypeConfig& cfg, std::size_t k, bool allow_reciprocal) {
  Roles r;
  r.dir.assign(k + 1, 0);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const TypeTargets& t = cfg.targets;
  if (u < t.sp_eq_1) {
    r.exclusive = true;
    std::fill(r.dir.begin() + 1, r.dir.end(), kOut);
    return r;
  }
  if (u < t.sp_eq_1 + t.sp_eq_inv_k) {
    r.single_sale = true;
    std::fill(r.dir.begin() + 1, r.dir.end(), kIn);
    r.dir[uniform_index(rng, 1, k)] = kOut;
    return r;
  }
  const double p_sell = draw_beta(rng, cfg.model.mixed_sell_alpha, cfg.model.mixed_sell_beta);
  const double rho = allow_reciprocal ? cfg.model.reciprocal_prob : 0.0;
  const auto kk = static_cast<std::int64_t>(k);
  for (int attempt = 0; attempt < kRoleRetries; ++attempt) {
    std::int64_t k_in = 0, k_out = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      if (coin(rng, rho)) {
        r.dir[i] = kBoth;
      } else {
        r.dir[i] = coin(rng, p_sell) ? kOut : kIn;
      }
      k_in += (r.dir[i] & kIn) != 0;
      k_out += (r.dir[i] & kOut) != 0;
    }
    // Mixed users are neither exclusive buyers/sellers nor single-sale users.
    if (k_in > 0 && k_out > 0 && k_out * kk != k_in + k_out) return r;
  }
  // Deterministic fallback: one extra seller side on top of a single sale.
  std::fill(r.dir.begin() + 1, r.dir.end(), kIn);
  r.dir[1] = allow_reciprocal ? kBoth : kOut;
  r.dir[2] = kOut;
  if (!allow_reciprocal && k == 2) r.dir[1] = kIn;
  return r;
}

// Chooses `count` extra transactions among the edges in `slots`.
void spread_extras(Rng& rng, std::vector<Weight*>& slots, std::uint64_t count) {
  if (slots.empty()) return;
  for (std::uint64_t i = 0; i < count; ++i) *slots[uniform_index(rng, 0, slots.size() - 1)] += 1;
}

struct TriangleWiring {
  std::vector<std::pair<Local, Local>> pairs;
  std::unordered_set<std::uint64_t> used;
};

// Adds up to `count` undirected neighbor pairs accepted by `ok`, favoring
// endpoints already wired with probability `locality`.
template <typename Ok>
void add_sparse_pairs(Rng& rng, TriangleWiring& w, std::size_t k, std::size_t count, double locality, Ok ok,
                      std::size_t max_attempts) {
  std::vector<Local> endpoints;
  for (const auto& [a, b] : w.pairs) {
    endpoints.push_back(a);
    endpoints.push_back(b);
  }
  std::size_t added = 0;
  for (std::size_t attempt = 0; added < count && attempt < max_attempts; ++attempt) {
    Local a = !endpoints.empty() && coin(rng, locality) ? endpoints[uniform_index(rng, 0, endpoints.size() - 1)]
                                                        : static_cast<Local>(uniform_index(rng, 1, k));
    Local b = static_cast<Local>(uniform_index(rng, 1, k));
    if (coin(rng, 0.5)) std::swap(a, b);
    if (a == b || !ok(a, b) || !w.used.insert(pair_key(a, b)).second) continue;
    w.pairs.emplace_back(a, b);
    endpoints.push_back(a);
    endpoints.push_back(b);
    ++added;
  }
}

template <typename Ok>
void add_dense_pairs(Rng& rng, TriangleWiring& w, std::size_t k, std::size_t count, Ok ok) {
  std::vector<std::pair<Local, Local>> pool;
  for (Local a = 1; a <= k; ++a) {
    for (Local b = a + 1; b <= k; ++b) {
      if (ok(a, b) && !w.used.contains(pair_key(a, b))) pool.emplace_back(a, b);
    }
  }
  count = std::min(count, pool.size());
  for (std::size_t i = 0; i < count; ++i) {
    std::swap(pool[i], pool[uniform_index(rng, i, pool.size() - 1)]);
    w.used.insert(pair_key(pool[i].first, pool[i].second));
    w.pairs.push_back(pool[i]);
  }
}

std::size_t type_count(const SynthConfig& c) {
  std::size_t n = 0;
  for (const auto& [type, tc] : c.types) n += tc.targets.users;
  return n;
}

}  // namespace

// ---- configuration -------------------------------------------------------

void validate(const SynthConfig& config) {
  if (config.types.empty()) throw ConfigError("config defines no user types");
  for (const auto& [type, tc] : config.types) {
    const std::string n(to_string(type));
    const TypeTargets& t = tc.targets;
    const TypeModel& m = tc.model;
    if (t.users < 1) throw ConfigError(n + ": users must be >= 1");
    for (const auto& [v, name] : {std::pair{t.k_eq_1, "k_eq_1"}, {t.s_eq_1, "s_eq_1"}, {t.spk_eq_1, "spk_eq_1"},
                                  {t.sp_eq_1, "sp_eq_1"}, {t.sp_eq_inv_k, "sp_eq_inv_k"}, {t.wsp_eq_1, "wsp_eq_1"},
                                  {t.wsp_eq_inv_s, "wsp_eq_inv_s"}, {t.c_eq_0, "c_eq_0"}, {t.m_eq_0, "m_eq_0"},
                                  {t.m_eq_1, "m_eq_1"}, {t.cyp_eq_0, "cyp_eq_0"},
                                  {m.reciprocal_prob, "reciprocal_prob"}, {m.triangle_locality, "triangle_locality"}}) {
      check_share(v, n + "." + name);
    }
    if (t.sp_eq_1 + t.sp_eq_inv_k > 1.0) throw ConfigError(n + ": sp_eq_1 + sp_eq_inv_k exceeds 1");
    check_mean_median(t.k, 1.0, n + ".k");
    check_mean_median(t.s, 1.0, n + ".s");
    check_mean_median(t.spk, 1.0, n + ".spk");
    check_mean_median(t.c, 0.0, n + ".c");
    check_mean_median(t.cyp, 0.0, n + ".cyp");
    if (t.c.median > 1.0 || t.cyp.median > 1.0) throw ConfigError(n + ": C and CYP medians must not exceed 1");
    if (!(m.mixed_sell_alpha > 0.0 && m.mixed_sell_beta > 0.0)) {
      throw ConfigError(n + ".mixed_sell: alpha and beta must be positive");
    }
    if (type == UserType::normal) {
      if (std::abs(t.s_eq_1 - t.k_eq_1) > 1e-9) {
        throw ConfigError(n + ": single-partner normal users trade once, so s_eq_1 must equal k_eq_1");
      }
    } else {
      if (t.s_eq_1 != 0.0) throw ConfigError(n + ": fraud users have s >= 2, so s_eq_1 must be 0");
      if (t.k_eq_1 >= 1.0) {
        throw ConfigError(n + ": infeasible targets, k_eq_1 = 1 leaves no multi-partner fraud users");
      }
    }
  }
}

SynthConfig parse_synth_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  if (!root || !root.IsMap()) throw ConfigError("config must be a mapping with a 'types' section");
  check_keys(root, {"types"}, "config");
  const YAML::Node types = require(root, "types", "config");
  if (!types.IsMap()) throw ConfigError("config.types: expected a mapping");
  SynthConfig cfg;
  for (const auto& kv : types) {
    const auto name = kv.first.as<std::string>();
    const auto type = parse_user_type(name);
    if (!type) throw ConfigError("config.types: unknown user type '" + name + "'");
    cfg.types[*type] = read_type(kv.second, "types." + name);
  }
  validate(cfg);
  return cfg;
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_synth_config(ss.str());
}

std::uint64_t config_hash(const SynthConfig& config) {
  std::ostringstream s;
  auto mm = [&](const MeanMedian& v) { s << detail::format_real(v.mean) << '/' << detail::format_real(v.median) << ';'; };
  for (const auto& [type, tc] : config.types) {
    const TypeTargets& t = tc.targets;
    const TypeModel& m = tc.model;
    s << to_string(type) << ':' << t.users << ';';
    for (double v : {t.k_eq_1, t.s_eq_1, t.spk_eq_1, t.sp_eq_1, t.sp_eq_inv_k, t.wsp_eq_1, t.wsp_eq_inv_s, t.c_eq_0,
                     t.m_eq_0, t.m_eq_1, t.cyp_eq_0, m.mixed_sell_alpha, m.mixed_sell_beta, m.reciprocal_prob,
                     m.triangle_locality}) {
      s << detail::format_real(v) << ';';
    }
    mm(t.k);
    mm(t.s);
    mm(t.spk);
    mm(t.c);
    mm(t.cyp);
    s << (m.k1_role == K1Role::buyer ? "buyer" : "seller") << '|';
  }
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s.str()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---- generation ----------------------------------------------------------

EgoNetwork EgoSample::to_egonet(NodeId first_id) const {
  std::vector<NodeId> members(focal_out.size());
  std::iota(members.begin(), members.end(), first_id);
  return EgoNetwork::assemble(std::move(members), focal_out, focal_in, neighbor_edges);
}

UserSampler::UserSampler(const TypeConfig& config, UserType type) : config_(config), type_(type) {
  // Mean of min(1, v * Tr) over multi-partner users with triangles, by a
  // fixed-seed simulation of the same degree, triangle and rate draws.
  const TypeTargets& t = config.targets;
  Rng rng = make_rng(0x5eed, {static_cast<std::uint64_t>(type)});
  double sum = 0.0;
  std::size_t n = 0;
  for (int i = 0; i < kRateSamples; ++i) {
    const std::size_t k = draw_degree(rng, t);
    if (k < 2 || coin(rng, t.c_eq_0)) continue;
    const std::uint64_t pairs = static_cast<std::uint64_t>(k) * (k - 1) / 2;
    const std::size_t tr = draw_triangles(rng, t, pairs, pairs);
    const double v = std::min(1.0, draw_lognormal(rng, t.cyp));
    sum += std::min(1.0, v * static_cast<double>(tr));
    ++n;
  }
  const double reach = n == 0 ? 0.0 : sum / static_cast<double>(n);
  const double non_exclusive = 1.0 - t.sp_eq_1;
  const double wanted = 1.0 - t.cyp_eq_0;
  cycler_rate_ = reach > 0.0 && non_exclusive > 0.0 ? std::clamp(wanted / (non_exclusive * reach), 0.0, 1.0) : 0.0;
}

EgoSample UserSampler::operator()(std::uint64_t seed, std::size_t index) const {
  const UserType type = type_;
  const TypeConfig& config = config_;
  Rng rng = make_rng(seed, {static_cast<std::uint64_t>(type), static_cast<std::uint64_t>(index)});
  const TypeTargets& t = config.targets;
  const bool fraud = type != UserType::normal;

  const std::size_t k = draw_degree(rng, t);
  EgoSample out;
  out.focal_out.assign(k + 1, 0);
  out.focal_in.assign(k + 1, 0);

  if (k == 1) {
    Weight w = 1;
    if (fraud) w = std::max<Weight>(2, static_cast<Weight>(std::llround(draw_spk(rng, t.spk))));
    (config.model.k1_role == K1Role::seller ? out.focal_out : out.focal_in)[1] = w;
    return out;
  }

  // Users with s/k = 1 trade once with each partner, which rules out
  // reciprocal partners.
  const bool unit_spk = coin(rng, t.spk_eq_1);
  const Roles roles = draw_roles(rng, config, k, !unit_spk);
  std::uint64_t edges = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    if (roles.dir[i] & kOut) out.focal_out[i] = 1, ++edges;
    if (roles.dir[i] & kIn) out.focal_in[i] = 1, ++edges;
  }

  if (!unit_spk) {
    const double target = std::round(static_cast<double>(k) * draw_spk(rng, t.spk));
    const double capped = std::min(target, 1e9);
    const std::uint64_t s = std::max<std::uint64_t>({edges, k + 1, static_cast<std::uint64_t>(capped)});
    std::vector<Weight*> slots;
    for (std::size_t i = 1; i <= k; ++i) {
      // A normal single-sale user sells exactly once.
      if (out.focal_out[i] && !(roles.single_sale && !fraud)) slots.push_back(&out.focal_out[i]);
      if (out.focal_in[i]) slots.push_back(&out.focal_in[i]);
    }
    spread_extras(rng, slots, s - edges);
  }
  if (fraud) {
    Weight s_out = 0;
    std::size_t last_out = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      s_out += out.focal_out[i];
      if (out.focal_out[i]) last_out = i;
    }
    if (s_out == 1) out.focal_out[last_out] += 1;
  }

  // Neighbor-neighbor wiring.
  if (coin(rng, t.c_eq_0)) return out;
  std::size_t reciprocal = 0;
  for (std::size_t i = 1; i <= k; ++i) reciprocal += roles.dir[i] == kBoth;
  const std::uint64_t pairs = static_cast<std::uint64_t>(k) * (k - 1) / 2;
  const std::uint64_t allowed = pairs - static_cast<std::uint64_t>(reciprocal) * (reciprocal - 1) / 2;
  if (allowed == 0) return out;
  const std::size_t tr = draw_triangles(rng, t, pairs, allowed);
  const auto& dir = roles.dir;
  auto allowed_pair = [&](Local a, Local b) { return !(dir[a] == kBoth && dir[b] == kBoth); };
  // A cyclic triangle f -> b -> a -> f needs a selling to f and f selling to b.
  auto cycle_pair = [&](Local a, Local b) {
    return (dir[a] & kIn) && (dir[b] & kOut) && allowed_pair(a, b);
  };

  TriangleWiring wiring;
  std::size_t n_cycles = 0;
  // Exclusive sellers have no in-neighbors and cannot close a cycle. Other
  // users cycle with a chance that grows with the triangles available, so a
  // realized CYP stays near its drawn rate.
  const double v = std::min(1.0, draw_lognormal(rng, t.cyp));
  const double vt = v * static_cast<double>(tr);
  if (!roles.exclusive && coin(rng, cycler_rate_ * std::min(1.0, vt))) {
    const auto want = static_cast<std::size_t>(std::clamp<double>(std::round(vt), 1.0, static_cast<double>(tr)));
    // Ordered (a, b) cycle pairs, drawn from the in side and the out side.
    std::vector<Local> in_side, out_side;
    for (Local i = 1; i <= k; ++i) {
      if (dir[i] & kIn) in_side.push_back(i);
      if (dir[i] & kOut) out_side.push_back(i);
    }
    const std::size_t max_attempts = 20 * want + 100;
    for (std::size_t attempt = 0; n_cycles < want && attempt < max_attempts; ++attempt) {
      const Local a = in_side[uniform_index(rng, 0, in_side.size() - 1)];
      const Local b = out_side[uniform_index(rng, 0, out_side.size() - 1)];
      if (a == b || !cycle_pair(a, b) || !wiring.used.insert(pair_key(a, b)).second) continue;
      wiring.pairs.emplace_back(a, b);
      ++n_cycles;
    }
  }
  const std::size_t remaining = tr - std::min(tr, n_cycles);
  const std::uint64_t free_pairs = allowed - wiring.pairs.size();
  if (2 * static_cast<std::uint64_t>(remaining) > free_pairs) {
    add_dense_pairs(rng, wiring, k, remaining, allowed_pair);
  } else {
    add_sparse_pairs(rng, wiring, k, remaining, config.model.triangle_locality, allowed_pair,
                     std::numeric_limits<std::size_t>::max());
  }

  out.neighbor_edges.reserve(wiring.pairs.size());
  for (std::size_t i = 0; i < wiring.pairs.size(); ++i) {
    auto [a, b] = wiring.pairs[i];
    if (i < n_cycles) {
      out.neighbor_edges.push_back({b, a, 1});
      continue;
    }
    const int ra = rank_of(dir[a]);
    const int rb = rank_of(dir[b]);
    if (ra > rb || (ra == rb && coin(rng, 0.5))) std::swap(a, b);
    out.neighbor_edges.push_back({a, b, 1});
  }
  return out;
}

LabeledDataset generate(const SynthConfig& config, std::uint64_t seed, int workers) {
  validate(config);
  struct Job {
    UserType type;
    std::size_t index;
  };
  std::vector<Job> jobs;
  jobs.reserve(type_count(config));
  for (const auto& [type, tc] : config.types) {
    for (std::size_t i = 0; i < tc.targets.users; ++i) jobs.push_back({type, i});
  }
  std::vector<EgoSample> samples(jobs.size());
  std::map<UserType, UserSampler> samplers;
  for (const auto& [type, tc] : config.types) samplers.emplace(type, UserSampler(tc, type));
  parallel_for(jobs.size(), workers, [&](std::size_t j) {
    samples[j] = samplers.at(jobs[j].type)(seed, jobs[j].index);
  });

  LabeledDataset data;
  data.seed = seed;
  data.config_hash = config_hash(config);
  std::vector<EdgeRecord> records;
  NodeId next = jobs.size();
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const NodeId focal = j;
    data.labels.emplace(focal, jobs[j].type);
    const EgoSample& s = samples[j];
    const NodeId base = next - 1;  // local index i maps to base + i
    for (std::size_t i = 1; i <= s.k(); ++i) {
      if (s.focal_out[i]) records.push_back({focal, base + i, static_cast<std::int64_t>(s.focal_out[i])});
      if (s.focal_in[i]) records.push_back({base + i, focal, static_cast<std::int64_t>(s.focal_in[i])});
    }
    for (const auto& e : s.neighbor_edges) {
      records.push_back({base + e.from, base + e.to, static_cast<std::int64_t>(e.weight)});
    }
    next += s.k();
    samples[j] = {};
  }
  data.graph = load_graph(records);
  return data;
}

void write_dataset(const std::filesystem::path& dir, const LabeledDataset& data) {
  std::filesystem::create_directories(dir);
  std::ofstream edges(dir / "edges.csv");
  if (!edges) throw std::runtime_error("cannot write " + (dir / "edges.csv").string());
  write_edge_list(edges, data.graph);
  std::ofstream labels(dir / "labels.csv");
  if (!labels) throw std::runtime_error("cannot write " + (dir / "labels.csv").string());
  write_labels(labels, data.labels);
  if (!edges || !labels) throw std::runtime_error("write failed under " + dir.string());
}

// ---- calibration ---------------------------------------------------------

double CalibrationRow::deviation() const {
  return relative ? (observed - target) / target : 100.0 * (observed - target);
}

bool CalibrationRow::within() const { return std::abs(deviation()) <= tolerance; }

bool CalibrationReport::all_tracked_within() const {
  return std::all_of(rows.begin(), rows.end(), [](const CalibrationRow& r) { return !r.tracked || r.within(); });
}

CalibrationReport compare_to_targets(const SynthConfig& config, const std::vector<TypeStats>& stats) {
  CalibrationReport report;
  report.stats = stats;
  for (const TypeStats& st : stats) {
    const auto it = config.types.find(st.type);
    if (it == config.types.end()) {
      report.warnings.push_back("no targets for user type " + std::string(to_string(st.type)));
      continue;
    }
    const TypeTargets& t = it->second.targets;
    auto share = [&](const char* name, double target, bool tracked) {
      const FractionStat& f = st.fraction(name);
      const double observed = f.base == 0 ? 0.0 : static_cast<double>(f.count) / static_cast<double>(f.base);
      report.rows.push_back({st.type, name, target, observed, false, kShareTolerancePp, tracked});
    };
    auto med = [&](const char* name, double target, bool tracked) {
      report.rows.push_back({st.type, name, target, st.summary(name).median, true, kMedianTolerance, tracked});
    };
    share("k=1", t.k_eq_1, true);
    share("s=1", t.s_eq_1, true);
    share("s/k=1", t.spk_eq_1, true);
    share("SP=1", t.sp_eq_1, true);
    share("SP=1/k", t.sp_eq_inv_k, true);
    share("WSP=1", t.wsp_eq_1, true);
    share("WSP=1/s", t.wsp_eq_inv_s, true);
    share("C=0", t.c_eq_0, true);
    share("m=0", t.m_eq_0, false);
    share("m=1", t.m_eq_1, false);
    share("CYP=0", t.cyp_eq_0, true);
    med("k|k>=2", t.k.median, true);
    med("s|s>=2", t.s.median, true);
    med("s/k|s/k>1", t.spk.median, true);
    med("C|C>0", t.c.median, false);
    med("CYP|CYP>0", t.cyp.median, false);
  }
  return report;
}

CalibrationReport validate(const LabeledDataset& data, const SynthConfig& config, int workers) {
  if (data.labels.empty() || data.graph.node_count() == 0) throw StatsError("dataset is empty");
  const auto nodes = compute_node_indices(data.graph, data.labels, workers);
  CalibrationReport report = compare_to_targets(config, descriptive_stats(nodes));
  if (config_hash(config) != data.config_hash) {
    report.warnings.insert(report.warnings.begin(), "config hash mismatch: dataset was generated from a different config");
  }
  return report;
}

CalibrationReport calibrate(const SynthConfig& config, std::uint64_t seed, int workers) {
  validate(config);
  std::vector<TypeStats> stats;
  for (const auto& [type, tc] : config.types) {
    const UserSampler sampler(tc, type);
    std::vector<LocalIndices> users(tc.targets.users);
    parallel_for(users.size(), workers, [&](std::size_t i) { users[i] = compute_indices(sampler(seed, i).to_egonet(0)); });
    stats.push_back(summarize(type, users));
  }
  return compare_to_targets(config, stats);
}

void write_calibration(std::ostream& out, const CalibrationReport& report) {
  for (const std::string& w : report.warnings) out << "warning: " << w << '\n';
  char line[200];
  std::snprintf(line, sizeof line, "%-10s %-12s %12s %12s %10s  %s\n", "user_type", "statistic", "target",
                "observed", "deviation", "status");
  out << line;
  for (const CalibrationRow& r : report.rows) {
    const char* status = !r.tracked ? "info" : r.within() ? "ok" : "OUT";
    char dev[32];
    std::snprintf(dev, sizeof dev, r.relative ? "%+.1f%%" : "%+.1fpp", r.relative ? 100.0 * r.deviation() : r.deviation());
    std::snprintf(line, sizeof line, "%-10s %-12s %12.4g %12.4g %10s  %s\n", std::string(to_string(r.type)).c_str(),
                  r.statistic.c_str(), r.target, r.observed, dev, status);
    out << line;
  }
}

}  // namespace egonet
