#include "egonet/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>

#include "egonet/parallel.hpp"
#include "egonet/random.hpp"

namespace egonet {

// ---------------------------------------------------------------------------
// SampleSet

void SampleSet::add(std::span<const double> x, bool positive) {
  if (x.size() != n_features_) {
    throw ForestError("sample has " + std::to_string(x.size()) + " features, expected " +
                      std::to_string(n_features_));
  }
  values_.insert(values_.end(), x.begin(), x.end());
  labels_.push_back(positive ? 1 : 0);
}

std::size_t SampleSet::positives() const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), std::uint8_t{1}));
}

SampleSet SampleSet::subset(std::span<const std::size_t> rows) const {
  SampleSet out(n_features_);
  out.values_.reserve(rows.size() * n_features_);
  out.labels_.reserve(rows.size());
  for (std::size_t r : rows) out.add(row(r), positive(r));
  return out;
}

// ---------------------------------------------------------------------------
// Trees

double DecisionTree::predict(std::span<const double> x, int depth_limit) const {
  std::int32_t i = 0;
  int depth = 0;
  while (!nodes_[i].is_leaf() && depth != depth_limit) {
    const TreeNode& n = nodes_[i];
    i = x[n.feature] <= n.threshold ? n.left : n.right;
    ++depth;
  }
  return nodes_[i].positive_fraction;
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  int best = 0;
  std::vector<std::pair<std::int32_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    if (!nodes_[i].is_leaf()) {
      stack.push_back({nodes_[i].left, d + 1});
      stack.push_back({nodes_[i].right, d + 1});
    }
  }
  return best;
}

DecisionTree DecisionTree::pruned(int depth) const {
  std::vector<TreeNode> out;
  out.reserve(nodes_.size());
  auto copy = [&](auto&& self, std::int32_t i, int d) -> std::int32_t {
    const auto at = static_cast<std::int32_t>(out.size());
    TreeNode n = nodes_[i];
    out.push_back(n);
    if (n.is_leaf() || d == depth) {
      out[at].feature = -1;
      out[at].threshold = 0.0;
      out[at].left = out[at].right = -1;
      return at;
    }
    const std::int32_t l = self(self, n.left, d + 1);
    const std::int32_t r = self(self, n.right, d + 1);
    out[at].left = l;
    out[at].right = r;
    return at;
  };
  if (!nodes_.empty()) copy(copy, 0, 0);
  return DecisionTree(std::move(out));
}

namespace {

// Each feature column replaced by the rank of its value among the distinct
// training values, so node-level sorting works on small integers.
struct RankedColumns {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::uint32_t> rank;           // n x d, row-major
  std::vector<std::vector<double>> distinct;  // per feature, ascending
};

RankedColumns rank_columns(const SampleSet& s) {
  RankedColumns rc;
  rc.n = s.size();
  rc.d = s.n_features();
  rc.rank.resize(rc.n * rc.d);
  rc.distinct.resize(rc.d);
  for (std::size_t f = 0; f < rc.d; ++f) {
    auto& vals = rc.distinct[f];
    vals.reserve(rc.n);
    for (std::size_t i = 0; i < rc.n; ++i) vals.push_back(s.value(i, f));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t i = 0; i < rc.n; ++i) {
      rc.rank[i * rc.d + f] =
          static_cast<std::uint32_t>(std::lower_bound(vals.begin(), vals.end(), s.value(i, f)) - vals.begin());
    }
  }
  return rc;
}

double midpoint(double lo, double hi) {
  double t = lo + (hi - lo) / 2.0;
  if (!(t < hi)) t = lo;  // adjacent doubles: keep lo on the left
  return t;
}

class TreeBuilder {
 public:
  TreeBuilder(const SampleSet& samples, const RankedColumns& ranks, const ForestConfig& config)
      : samples_(samples), ranks_(ranks), config_(config) {}

  DecisionTree build(std::size_t tree_index) {
    idx_ = bootstrap_indices(samples_.size(), config_.seed, tree_index);
    nodes_.clear();
    grow(0, idx_.size(), 0, derive_seed(config_.seed, {tree_index, 0xA}));
    return DecisionTree(std::move(nodes_));
  }

 private:
  struct Split {
    double score = std::numeric_limits<double>::infinity();
    std::int32_t feature = -1;
    std::uint32_t left_rank = 0;
    std::uint32_t right_rank = 0;
  };

  std::int32_t grow(std::size_t begin, std::size_t end, int depth, std::uint64_t seed) {
    const std::size_t n = end - begin;
    std::size_t pos = 0;
    for (std::size_t i = begin; i < end; ++i) pos += samples_.positive(idx_[i]);

    const auto at = static_cast<std::int32_t>(nodes_.size());
    TreeNode leaf;
    leaf.positive_fraction = static_cast<double>(pos) / static_cast<double>(n);
    leaf.samples = static_cast<std::uint32_t>(n);
    nodes_.push_back(leaf);

    const auto min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);
    if (depth >= config_.max_depth || pos == 0 || pos == n || n < 2 * min_leaf) return at;

    const Split best = find_split(begin, end, seed);
    if (best.feature < 0) return at;

    const auto f = static_cast<std::size_t>(best.feature);
    const std::size_t d = ranks_.d;
    auto mid_it = std::partition(idx_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 idx_.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](std::size_t s) { return ranks_.rank[s * d + f] <= best.left_rank; });
    const auto mid = static_cast<std::size_t>(mid_it - idx_.begin());

    const std::int32_t l = grow(begin, mid, depth + 1, derive_seed(seed, {0}));
    const std::int32_t r = grow(mid, end, depth + 1, derive_seed(seed, {1}));
    TreeNode& node = nodes_[static_cast<std::size_t>(at)];
    node.feature = best.feature;
    node.threshold = midpoint(ranks_.distinct[f][best.left_rank], ranks_.distinct[f][best.right_rank]);
    node.left = l;
    node.right = r;
    return at;
  }

  // Visits features in random order until max_features non-constant ones
  // have been scored. Ties go to the lower feature index, then the lower
  // threshold.
  Split find_split(std::size_t begin, std::size_t end, std::uint64_t seed) {
    const std::size_t n = end - begin;
    const std::size_t d = ranks_.d;
    const auto min_leaf = static_cast<std::size_t>(config_.min_samples_leaf);
    Rng rng(seed);

    order_.resize(d);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    Split best;
    int visited = 0;
    for (std::size_t j = 0; j < d && visited < config_.max_features; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, d - 1);
      std::swap(order_[j], order_[pick(rng)]);
      const std::size_t f = order_[j];

      keys_.clear();
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t s = idx_[i];
        keys_.push_back((static_cast<std::uint64_t>(ranks_.rank[s * d + f]) << 1) | samples_.positive(s));
      }
      std::sort(keys_.begin(), keys_.end());
      if ((keys_.front() >> 1) == (keys_.back() >> 1)) continue;  // constant in this node
      ++visited;

      const double total_pos = static_cast<double>(std::count_if(keys_.begin(), keys_.end(),
                                                                 [](std::uint64_t k) { return (k & 1) != 0; }));
      double left_pos = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_pos += static_cast<double>(keys_[i] & 1);
        const auto r = static_cast<std::uint32_t>(keys_[i] >> 1);
        const auto rn = static_cast<std::uint32_t>(keys_[i + 1] >> 1);
        if (r == rn) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = n - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        const double dl = static_cast<double>(nl);
        const double dr = static_cast<double>(nr);
        const double right_pos = total_pos - left_pos;
        // n * weighted Gini, halved: sum over children of pos * neg / size.
        const double score = left_pos * (dl - left_pos) / dl + right_pos * (dr - right_pos) / dr;
        const auto fi = static_cast<std::int32_t>(f);
        if (score < best.score || (score == best.score && fi < best.feature)) {
          best = {score, fi, r, rn};
        }
      }
    }
    return best;
  }

  const SampleSet& samples_;
  const RankedColumns& ranks_;
  const ForestConfig& config_;
  std::vector<std::size_t> idx_;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> order_;
  std::vector<std::uint64_t> keys_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Forest

ForestModel::ForestModel(std::vector<DecisionTree> trees, ForestConfig config, std::size_t n_features,
                         std::string feature_subset)
    : trees_(std::move(trees)), config_(config), n_features_(n_features), feature_subset_(std::move(feature_subset)) {}

double ForestModel::predict_proba(std::span<const double> x, int depth_limit) const {
  if (x.size() != n_features_) {
    throw ForestError("dimension mismatch: model expects " + std::to_string(n_features_) + " features, got " +
                      std::to_string(x.size()));
  }
  if (trees_.empty()) throw ForestError("empty forest");
  double sum = 0.0;
  for (const DecisionTree& t : trees_) sum += t.predict(x, depth_limit);
  return sum / static_cast<double>(trees_.size());
}

ForestModel ForestModel::pruned(int depth) const {
  std::vector<DecisionTree> trees;
  trees.reserve(trees_.size());
  for (const DecisionTree& t : trees_) trees.push_back(t.pruned(depth));
  ForestConfig cfg = config_;
  cfg.max_depth = depth;
  return ForestModel(std::move(trees), cfg, n_features_, feature_subset_);
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t seed, std::size_t tree_index) {
  Rng rng = make_rng(seed, {tree_index, 0xB});
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = pick(rng);
  return idx;
}

void validate(const ForestConfig& config, std::size_t n_features) {
  if (config.n_trees < 1) throw ForestError("n_trees must be >= 1");
  if (config.max_depth < 1) throw ForestError("max_depth must be >= 1");
  if (config.min_samples_leaf < 1) throw ForestError("min_samples_leaf must be >= 1");
  if (config.max_features < 1 || static_cast<std::size_t>(config.max_features) > n_features) {
    throw ForestError("max_features must be in [1, " + std::to_string(n_features) + "], got " +
                      std::to_string(config.max_features));
  }
}

ForestModel fit(const SampleSet& samples, const ForestConfig& config, int workers, std::string feature_subset) {
  if (samples.size() == 0) throw ForestError("empty training set");
  validate(config, samples.n_features());
  const std::size_t pos = samples.positives();
  if (pos == 0 || pos == samples.size()) throw ForestError("training set has a single class");

  const RankedColumns ranks = rank_columns(samples);
  std::vector<DecisionTree> trees(static_cast<std::size_t>(config.n_trees));
  parallel_for(trees.size(), workers, [&](std::size_t t) {
    TreeBuilder builder(samples, ranks, config);
    trees[t] = builder.build(t);
  });
  return ForestModel(std::move(trees), config, samples.n_features(), std::move(feature_subset));
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr std::uint8_t kMagic[4] = {'E', 'G', 'R', 'F'};
constexpr std::uint32_t kFormatVersion = 1;

class Writer {
 public:
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(std::span<const std::uint8_t> b) { out.insert(out.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> out;

 private:
  void put(std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::span<const std::uint8_t> bytes(std::size_t n) {
    need(n);
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == in_.size(); }

 private:
  void need(std::size_t n) const {
    if (in_.size() - pos_ < n) throw ForestError("model payload truncated");
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(in_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize(const ForestModel& model) {
  Writer w;
  w.bytes(kMagic);
  w.u32(kFormatVersion);
  const ForestConfig& c = model.config();
  w.i32(c.n_trees);
  w.i32(c.max_depth);
  w.i32(c.max_features);
  w.i32(c.min_samples_leaf);
  w.u64(c.seed);
  w.u64(model.n_features());
  const std::string& tag = model.feature_subset();
  w.u32(static_cast<std::uint32_t>(tag.size()));
  w.bytes({reinterpret_cast<const std::uint8_t*>(tag.data()), tag.size()});
  w.u32(static_cast<std::uint32_t>(model.trees().size()));
  for (const DecisionTree& t : model.trees()) {
    w.u32(static_cast<std::uint32_t>(t.nodes().size()));
    for (const TreeNode& n : t.nodes()) {
      w.i32(n.feature);
      w.f64(n.threshold);
      w.i32(n.left);
      w.i32(n.right);
      w.f64(n.positive_fraction);
      w.u32(n.samples);
    }
  }
  return std::move(w.out);
}

ForestModel deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw ForestError("empty model payload");
  Reader r(bytes);
  const auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) throw ForestError("not a model file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kFormatVersion) {
    throw ForestError("unsupported model format version " + std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  ForestConfig c;
  c.n_trees = r.i32();
  c.max_depth = r.i32();
  c.max_features = r.i32();
  c.min_samples_leaf = r.i32();
  c.seed = r.u64();
  const std::uint64_t n_features = r.u64();
  if (n_features == 0 || n_features > (1u << 20)) throw ForestError("corrupt model: feature count");
  const auto tag_bytes = r.bytes(r.u32());
  std::string tag(tag_bytes.begin(), tag_bytes.end());
  const std::uint32_t n_trees = r.u32();
  if (n_trees == 0 || static_cast<std::int64_t>(n_trees) != c.n_trees) throw ForestError("corrupt model: tree count");

  std::vector<DecisionTree> trees;
  trees.reserve(n_trees);
  for (std::uint32_t t = 0; t < n_trees; ++t) {
    const std::uint32_t count = r.u32();
    if (count == 0) throw ForestError("corrupt model: empty tree");
    std::vector<TreeNode> nodes(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      TreeNode& n = nodes[i];
      n.feature = r.i32();
      n.threshold = r.f64();
      n.left = r.i32();
      n.right = r.i32();
      n.positive_fraction = r.f64();
      n.samples = r.u32();
      const bool fraction_ok = n.positive_fraction >= 0.0 && n.positive_fraction <= 1.0;
      bool ok = fraction_ok;
      if (!n.is_leaf()) {
        ok = ok && static_cast<std::uint64_t>(n.feature) < n_features && n.left > static_cast<std::int32_t>(i) &&
             n.right > static_cast<std::int32_t>(i) && n.left < static_cast<std::int32_t>(count) &&
             n.right < static_cast<std::int32_t>(count);
      } else {
        ok = ok && n.feature == -1;
      }
      if (!ok) throw ForestError("corrupt model: tree " + std::to_string(t) + " node " + std::to_string(i));
    }
    trees.emplace_back(std::move(nodes));
  }
  if (!r.done()) throw ForestError("corrupt model: trailing bytes");
  return ForestModel(std::move(trees), c, n_features, std::move(tag));
}

void save_model(const std::string& path, const ForestModel& model) {
  const auto bytes = serialize(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

ForestModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace egonet
