#include <gtest/gtest.h>

#include <nss3m/catalog.hpp>
#include <nss3m/textio.hpp>

using namespace nss3m;

namespace {
std::string error_of(const std::string& text) {
  try {
    parse_diagram_string(text);
  } catch (const DiagramError& e) {
    return e.what();
  }
  return "";
}
}  // namespace

TEST(ParseScalar, Forms) {
  EXPECT_EQ(*parse_scalar("0.5"), Scalar(0.5, 0));
  EXPECT_EQ(*parse_scalar("0.3+0.2i"), Scalar(0.3, 0.2));
  EXPECT_EQ(*parse_scalar("-1-2i"), Scalar(-1, -2));
  EXPECT_EQ(*parse_scalar("2i"), Scalar(0, 2));
  EXPECT_FALSE(parse_scalar(""));
  EXPECT_FALSE(parse_scalar("x"));
  EXPECT_FALSE(parse_scalar("0.3+0.2"));
  EXPECT_FALSE(parse_scalar("1i2"));
}

TEST(Parse, UnknotWithCut) {
  auto f = parse_diagram_string(
      "# plain unknot\n"
      "root 2\n"
      "strands 0\n"
      "slice cup 0 typ 0.5 0 + @K\n"
      "slice cap 0\n"
      "cut 1 0\n");
  EXPECT_EQ(f.diagram.root, 2);
  ASSERT_TRUE(f.cut);
  Engine eng(RootData(2));
  EXPECT_LT(std::abs(eng.modified_eval(f.diagram, *f.cut) + std::sqrt(2.0)), 1e-12);
}

TEST(Parse, SurgeryLines) {
  auto f = parse_diagram_string(
      "strands 0\n"
      "slice cup 0 typ 0.5 0 + @L1\n"
      "slice cap 0\n"
      "surgery L1 0.25 0.1\n");
  ASSERT_EQ(f.surgery.size(), 1u);
  EXPECT_EQ(f.surgery[0], "L1");
  EXPECT_EQ(f.triple().omega[0], Scalar(0.25, 0.1));
  EXPECT_EQ(f.triple({0.75}).omega[0], Scalar(0.75, 0));
  EXPECT_THROW(f.triple({0.75, 0.1}), DiagramError);
}

TEST(Parse, OpenDiagramWithCoupon) {
  auto f = parse_diagram_string(
      "root 3\n"
      "strands 1\n"
      "bottom eps 1 + @A\n"
      "top eps 1 +\n"
      "slice coupon 0 g in 1 eps 1 + out 1 eps 1 + map 2 0.5\n");
  Engine eng(RootData(3));
  auto r = eng.evaluate(f.diagram);
  ASSERT_TRUE(r.scalar);
  EXPECT_LT(std::abs(*r.scalar - Scalar(2, 0.5)), 1e-14);
}

TEST(Parse, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_of("root 2\nstrands 0\nslice wiggle 0\n"), "line 3: unknown event 'wiggle'");
  EXPECT_NE(error_of("root 2\nroot 3\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("root 1\n").find("line 1"), std::string::npos);
  EXPECT_NE(error_of("strands 0\nslice cup 0 typ x 0 +\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of("strands 0\nbogus\n").find("line 2"), std::string::npos);
  // parses, then fails validation
  EXPECT_FALSE(validate(parse_diagram_string("strands 0\nslice cup 0 typ 0.5 0 +\n").diagram).empty());
}

TEST(Parse, ErrorTypeIsParseError) {
  try {
    parse_diagram_string("root 2\nslice cup 0 typ 0.5\n");
    FAIL() << "no exception";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Print, RoundTripCatalog) {
  Engine eng(RootData(2));
  for (const auto& e : link_catalog()) {
    SlicedDiagram d = catalog_link(e.name, Scalar(0.3, 0.05));
    auto back = parse_diagram_string(print_diagram(d, {}, {}, ArcRef{1, 0}));
    EXPECT_EQ(print_diagram(back.diagram), print_diagram(d)) << e.name;
    EXPECT_EQ(eng.modified_eval(back.diagram, *back.cut), eng.modified_eval(d, {1, 0})) << e.name;
  }
}

TEST(Print, RoundTripTriple) {
  for (const auto& m : manifold_catalog())
    for (const auto& p : m.presentations) {
      SurgeryTriple s = p.build(m.samples()[0], 2);
      auto back = parse_diagram_string(print_triple(s)).triple();
      EXPECT_EQ(back.surgery, s.surgery) << m.name;
      EXPECT_EQ(back.omega, s.omega) << m.name;
      EXPECT_EQ(print_triple(back), print_triple(s)) << m.name;
    }
}
