#include "egonet/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "text.hpp"

namespace egonet {

namespace {

constexpr std::string_view kUserTypeNames[] = {"normal", "fictive", "underwear", "medicine", "weapon"};

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view to_string(UserType t) { return kUserTypeNames[static_cast<int>(t)]; }

std::optional<UserType> parse_user_type(std::string_view s) {
  for (UserType t : kAllUserTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::vector<EdgeRecord> read_edge_records(std::istream& in, NodeAliases* aliases) {
  std::vector<EdgeRecord> records;
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
    if (header_candidate) {
      const std::string_view probe = aliases ? fields.back() : fields.front();
      if (!detail::parse_int<std::int64_t>(probe)) continue;
    }
    if (fields.size() != 3) {
      throw ParseError(lineno, "expected 3 fields (seller_id,buyer_id,weight), got " +
                                   std::to_string(fields.size()));
    }
    EdgeRecord r;
    if (aliases) {
      if (fields[0].empty() || fields[1].empty()) throw ParseError(lineno, "empty node id");
      r.seller = aliases->intern(fields[0]);
      r.buyer = aliases->intern(fields[1]);
    } else {
      auto s = detail::parse_int<NodeId>(fields[0]);
      auto b = detail::parse_int<NodeId>(fields[1]);
      if (!s) throw ParseError(lineno, "malformed seller id '" + std::string(fields[0]) + "'");
      if (!b) throw ParseError(lineno, "malformed buyer id '" + std::string(fields[1]) + "'");
      r.seller = *s;
      r.buyer = *b;
    }
    auto w = detail::parse_int<std::int64_t>(fields[2]);
    if (!w) throw ParseError(lineno, "malformed weight '" + std::string(fields[2]) + "'");
    if (*w < 1) throw ParseError(lineno, "weight must be >= 1, got " + std::to_string(*w));
    if (r.seller == r.buyer) throw ParseError(lineno, "self-loop on node " + std::string(fields[0]));
    r.weight = *w;
    records.push_back(r);
  }
  return records;
}

TransactionGraph read_graph(std::istream& in) {
  const auto records = read_edge_records(in);
  return load_graph(records);
}

TransactionGraph read_graph_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_graph(in);
}

void write_edge_list(std::ostream& out, std::span<const EdgeRecord> edges) {
  out << "seller_id,buyer_id,weight\n";
  for (const EdgeRecord& e : edges) out << e.seller << ',' << e.buyer << ',' << e.weight << '\n';
}

void write_edge_list(std::ostream& out, const TransactionGraph& g) {
  const auto edges = g.edges();
  write_edge_list(out, edges);
}

LabelMap read_labels(std::istream& in) {
  LabelMap labels;
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
    if (fields.size() != 2) {
      throw ParseError(lineno, "expected 2 fields (node_id,user_type), got " + std::to_string(fields.size()));
    }
    if (!id) throw ParseError(lineno, "malformed node id '" + std::string(fields[0]) + "'");
    auto type = parse_user_type(fields[1]);
    if (!type) throw ParseError(lineno, "unknown user type '" + std::string(fields[1]) + "'");
    if (!labels.emplace(*id, *type).second) {
      throw ParseError(lineno, "duplicate label for node " + std::to_string(*id));
    }
  }
  return labels;
}

LabelMap read_labels_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_labels(in);
}

void write_labels(std::ostream& out, const LabelMap& labels) {
  out << "node_id,user_type\n";
  for (const auto& [id, type] : labels) out << id << ',' << to_string(type) << '\n';
}

}  // namespace egonet
