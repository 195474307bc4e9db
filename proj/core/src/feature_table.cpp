#include "egonet/feature_table.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "egonet/parallel.hpp"
#include "text.hpp"

namespace egonet {

namespace {

constexpr std::string_view kUnlabeled = "unlabeled";

std::string_view type_name(const std::optional<UserType>& t) { return t ? to_string(*t) : kUnlabeled; }

}  // namespace

std::vector<IndexedNode> compute_node_indices(const TransactionGraph& g, const LabelMap& labels, int workers) {
  std::vector<IndexedNode> out;
  if (labels.empty()) {
    out.reserve(g.node_count());
    for (NodeId id : g.nodes()) out.push_back({id, std::nullopt, {}});
  } else {
    out.reserve(labels.size());
    for (const auto& [id, type] : labels) {
      if (!g.contains(id)) throw GraphError("label references node " + std::to_string(id) + " absent from the graph");
      out.push_back({id, type, {}});
    }
  }
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i].indices = compute_indices(extract_egonet(g, out[i].node));
  });
  return out;
}

std::vector<FeatureRow> encode_rows(std::span<const IndexedNode> nodes) {
  std::vector<FeatureRow> rows;
  rows.reserve(nodes.size());
  for (const IndexedNode& n : nodes) rows.push_back({n.node, n.type, encode_features(n.indices)});
  return rows;
}

void write_feature_table(std::ostream& out, std::span<const FeatureRow> rows) {
  out << "node_id,user_type";
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << ",f" << i;
  out << '\n';
  for (const FeatureRow& r : rows) {
    out << r.node << ',' << type_name(r.type);
    for (double v : r.features.slots) out << ',' << detail::format_real(v);
    out << '\n';
  }
}

void write_feature_table_file(const std::filesystem::path& path, std::span<const FeatureRow> rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_feature_table(out, rows);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<FeatureRow> read_feature_table(std::istream& in) {
  std::vector<FeatureRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    const auto fields = detail::split_csv(view);
    const bool header_candidate = first;
    first = false;
    auto id = detail::parse_int<NodeId>(fields.front());
    if (!id && header_candidate) continue;
    if (fields.size() != 2 + kFeatureCount) {
      throw ParseError(lineno, "expected " + std::to_string(2 + kFeatureCount) + " fields, got " +
                                   std::to_string(fields.size()));
    }
    if (!id) throw ParseError(lineno, "malformed node id '" + std::string(fields[0]) + "'");
    FeatureRow r;
    r.node = *id;
    if (fields[1] != kUnlabeled) {
      r.type = parse_user_type(fields[1]);
      if (!r.type) throw ParseError(lineno, "unknown user type '" + std::string(fields[1]) + "'");
    }
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
      auto v = detail::parse_double(fields[2 + i]);
      if (!v) throw ParseError(lineno, "malformed value in column f" + std::to_string(i));
      r.features.slots[i] = *v;
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<FeatureRow> read_feature_table_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_feature_table(in);
}

}  // namespace egonet
