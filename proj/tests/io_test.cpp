#include <gtest/gtest.h>

#include <sstream>

#include "egonet/io.hpp"

namespace egonet {
namespace {

std::size_t error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_edge_records(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(EdgeList, HeaderIsOptional) {
  std::istringstream with("seller_id,buyer_id,weight\n1,2,3\n");
  std::istringstream without("1,2,3\n");
  EXPECT_EQ(read_edge_records(with), read_edge_records(without));
  std::istringstream again("1,2,3\n");
  EXPECT_EQ(read_edge_records(again), (std::vector<EdgeRecord>{{1, 2, 3}}));
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("seller_id,buyer_id,weight\n1,2,1\n3,3,1\n"), 3u);
  EXPECT_EQ(error_line("1,2,0\n"), 1u);
  EXPECT_EQ(error_line("1,2,1\n\n4,5,-2\n"), 3u);
  EXPECT_EQ(error_line("1,2\n"), 1u);
  EXPECT_EQ(error_line("1,2,1\nx,2,1\n"), 2u);
  EXPECT_EQ(error_line("1,2,1\n1,2,abc\n"), 2u);
}

TEST(EdgeList, WriteThenReadRoundTrips) {
  const std::vector<EdgeRecord> recs = {{5, 1, 2}, {1, 5, 1}, {1, 9, 7}};
  const auto g = load_graph(recs);
  std::ostringstream out;
  write_edge_list(out, g);
  EXPECT_EQ(out.str(), "seller_id,buyer_id,weight\n1,5,1\n1,9,7\n5,1,2\n");
  std::istringstream in(out.str());
  EXPECT_EQ(read_graph(in).edges(), g.edges());
}

TEST(EdgeList, StringIdsThroughAliases) {
  NodeAliases aliases;
  std::istringstream in("seller,buyer,weight\nann,bo,2\nbo,ann,1\n");
  const auto recs = read_edge_records(in, &aliases);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(aliases.name(recs[0].seller), "ann");
  EXPECT_EQ(recs[1].buyer, recs[0].seller);
}

TEST(Labels, ReadAndWrite) {
  std::istringstream in("node_id,user_type\n3,weapon\n1,normal\n");
  const LabelMap labels = read_labels(in);
  EXPECT_EQ(labels.at(3), UserType::weapon);
  std::ostringstream out;
  write_labels(out, labels);
  EXPECT_EQ(out.str(), "node_id,user_type\n1,normal\n3,weapon\n");
}

TEST(Labels, RejectsUnknownTypeAndDuplicates) {
  std::istringstream bad_type("1,scam\n");
  EXPECT_THROW(read_labels(bad_type), ParseError);
  std::istringstream dup("1,normal\n1,fictive\n");
  EXPECT_THROW(read_labels(dup), ParseError);
}

TEST(UserTypes, NamesRoundTrip) {
  for (UserType t : kAllUserTypes) EXPECT_EQ(parse_user_type(to_string(t)), t);
  EXPECT_FALSE(parse_user_type("Normal").has_value());
}

}  // namespace
}  // namespace egonet
