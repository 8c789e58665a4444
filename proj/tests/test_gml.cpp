#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "wanroute/error.hpp"
#include "wanroute/gml.hpp"

using namespace wanroute;

TEST(Gml, ParsesNodesEdgesAndLabels) {
  const auto t = parse_gml(R"(
    Creator "test"
    graph [
      directed 0
      Network "Tiny"
      node [ id 7 label "Paris" Latitude 48.85 ]
      node [ id 3 label "Lyon" ]
      node [ id 9 ]
      edge [ source 7 target 3 LinkLabel "10G" ]
      edge [ source 3 target 9 ]
    ]
  )");
  EXPECT_EQ(t.name(), "Tiny");
  ASSERT_EQ(t.node_count(), 3u);
  EXPECT_EQ(t.label(0), "Paris");
  EXPECT_EQ(t.label(1), "Lyon");
  EXPECT_EQ(t.label(2), "9");
  EXPECT_EQ(t.link_count(), 2u);
  EXPECT_TRUE(t.find_edge(0, 1));
  EXPECT_TRUE(t.find_edge(2, 1));
}

TEST(Gml, ExplicitNameWins) {
  const auto t = parse_gml("graph [ label \"x\" node [ id 0 ] ]", "given");
  EXPECT_EQ(t.name(), "given");
}

TEST(Gml, CountsMultiEdgesAndSelfLoops) {
  const auto t = parse_gml(R"(graph [
    node [ id 0 ] node [ id 1 ]
    edge [ source 0 target 1 ] edge [ source 1 target 0 ] edge [ source 1 target 1 ]
  ])");
  EXPECT_EQ(t.link_count(), 1u);
  EXPECT_EQ(t.build_stats().duplicate_links, 1u);
  EXPECT_EQ(t.build_stats().self_loops, 1u);
}

TEST(Gml, SkipsCommentsAndNestedUnknownKeys) {
  const auto t = parse_gml(R"(# header
    graph [
      meta [ a 1 b [ c "d" ] ]
      node [ id 0 graphics [ x 1.5 y -2e3 ] ]
      node [ id 1 ]
      edge [ source 0 target 1 ]
    ])");
  EXPECT_EQ(t.node_count(), 2u);
}

TEST(Gml, UnbalancedBracketReportsOffset) {
  const std::string text = "graph [ node [ id 0 ]";
  try {
    parse_gml(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), text.size());
  }
}

TEST(Gml, StrayClosingBracket) {
  const std::string text = "graph [ ] ]";
  try {
    parse_gml(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 10u);
  }
}

TEST(Gml, EdgeToUnknownNode) {
  const std::string text = "graph [ node [ id 0 ] edge [ source 0 target 5 ] ]";
  try {
    parse_gml(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown node 5"), std::string::npos);
    EXPECT_EQ(text.substr(e.offset(), 1), "[");
  }
}

TEST(Gml, DuplicateIdAndMissingFields) {
  EXPECT_THROW(parse_gml("graph [ node [ id 0 ] node [ id 0 ] ]"), ParseError);
  EXPECT_THROW(parse_gml("graph [ node [ label \"x\" ] ]"), ParseError);
  EXPECT_THROW(parse_gml("graph [ node [ id 0 ] edge [ source 0 ] ]"), ParseError);
  EXPECT_THROW(parse_gml("nothing [ ]"), ParseError);
  EXPECT_THROW(parse_gml("graph [ label \"open ]"), ParseError);
}

TEST(Gml, DisconnectedFile) {
  std::ifstream in(std::string(WANROUTE_TEST_DATA) + "/disconnected.gml");
  ASSERT_TRUE(in);
  const auto t = parse_gml(in);
  EXPECT_EQ(t.name(), "Split");
  EXPECT_EQ(t.node_count(), 4u);
  EXPECT_EQ(connected_components(t).size(), 2u);
}

TEST(EdgeList, ParsesDeclaredNodes) {
  const auto t = parse_edge_list("# c\nnodes 4\n0 1\n\n1 2 # tail\n", "el");
  EXPECT_EQ(t.node_count(), 4u);
  EXPECT_EQ(t.link_count(), 2u);
  EXPECT_EQ(t.name(), "el");
}

TEST(EdgeList, InfersNodeCount) {
  const auto t = parse_edge_list("0 1\n1 5\n");
  EXPECT_EQ(t.node_count(), 6u);
}

TEST(EdgeList, Errors) {
  EXPECT_THROW(parse_edge_list("0 x\n"), ParseError);
  EXPECT_THROW(parse_edge_list("nodes 2\n0 3\n"), ParseError);
  try {
    parse_edge_list("0 1\nbad\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(LoadTopology, FilePaths) {
  const auto ring = load_topology(std::string(WANROUTE_TEST_DATA) + "/triangle.txt");
  EXPECT_EQ(ring.link_count(), 3u);
  const auto split = load_topology(std::string(WANROUTE_TEST_DATA) + "/disconnected.gml");
  EXPECT_EQ(split.node_count(), 4u);
}
