#pragma once

// Text formats for edge lists and user labels.
//
//   edges:  seller_id,buyer_id,weight      (optional header line)
//   labels: node_id,user_type              (optional header line)
//
// A first line whose leading field is not an integer is treated as a header.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "egonet/graph.hpp"

namespace egonet {

/// Parse failure carrying the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

enum class UserType { normal, fictive, underwear, medicine, weapon };

inline constexpr UserType kAllUserTypes[] = {UserType::normal, UserType::fictive, UserType::underwear,
                                             UserType::medicine, UserType::weapon};
inline constexpr UserType kFraudTypes[] = {UserType::fictive, UserType::underwear, UserType::medicine,
                                           UserType::weapon};

std::string_view to_string(UserType t);
std::optional<UserType> parse_user_type(std::string_view s);

using LabelMap = std::map<NodeId, UserType>;

/// Reads edge records. Validates self-loops and weights with line numbers.
/// When `aliases` is given, node fields are arbitrary strings interned there;
/// the header is then recognized by a non-numeric weight field.
std::vector<EdgeRecord> read_edge_records(std::istream& in, NodeAliases* aliases = nullptr);

TransactionGraph read_graph(std::istream& in);
TransactionGraph read_graph_file(const std::filesystem::path& path);

/// Writes `seller_id,buyer_id,weight` lines sorted by (seller, buyer), with header.
void write_edge_list(std::ostream& out, std::span<const EdgeRecord> edges);
void write_edge_list(std::ostream& out, const TransactionGraph& g);

LabelMap read_labels(std::istream& in);
LabelMap read_labels_file(const std::filesystem::path& path);
void write_labels(std::ostream& out, const LabelMap& labels);

}  // namespace egonet
