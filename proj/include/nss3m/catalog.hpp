// Built-in links and surgery presentations used by the CLI and the test suites.
#pragma once

#include <functional>

#include "r2bridge.hpp"

namespace nss3m {

struct LinkEntry {
  std::string name;
  std::size_t components;
  std::function<SlicedDiagram(const std::vector<Color>&)> build;
};

inline const std::vector<LinkEntry>& link_catalog() {
  static const std::vector<LinkEntry> c{
      {"unknot", 1, [](const std::vector<Color>& x) { return unknot(x[0]); }},
      {"hopf+", 2, [](const std::vector<Color>& x) { return hopf(x[0], x[1], +1); }},
      {"hopf-", 2, [](const std::vector<Color>& x) { return hopf(x[0], x[1], -1); }},
      {"trefoil", 1, [](const std::vector<Color>& x) { return braid_closure({1, 1, 1}, {x[0], x[0]}, std::nullopt, {"K"}); }},
      {"figure-eight", 1,
       [](const std::vector<Color>& x) { return braid_closure({1, -2, 1, -2}, {x[0], x[0], x[0]}, std::nullopt, {"K"}); }},
      {"chain2", 2, [](const std::vector<Color>& x) { return chain_link({0, 0}, {x[0], x[1]}); }},
      {"chain3", 3, [](const std::vector<Color>& x) { return chain_link({0, 0, 0}, {x[0], x[1], x[2]}); }},
  };
  return c;
}

inline const LinkEntry& find_link(const std::string& name) {
  for (const auto& e : link_catalog())
    if (e.name == name) return e;
  throw Error("unknown catalog link '" + name + "'");
}

/// Catalog link with every component colored alpha.
inline SlicedDiagram catalog_link(const std::string& name, Scalar alpha = 0.5) {
  const auto& e = find_link(name);
  return e.build(std::vector<Color>(e.components, Color::typical(alpha)));
}

struct Presentation {
  std::string name;
  bool empty_graph = true;
  // builds the triple from a sample (degrees of the first presentation, or the color of u_V on S^3)
  std::function<SurgeryTriple(const std::vector<Scalar>&, int r)> build;
};

struct ManifoldEntry {
  std::string name;
  std::vector<Presentation> presentations;
  std::function<std::vector<std::vector<Scalar>>()> samples;
};

namespace detail {
inline SurgeryTriple chain_triple(const std::vector<int>& fr, std::vector<Scalar> omega) {
  SurgeryTriple s;
  s.diagram = chain_link(fr, std::vector<Color>(fr.size(), Color::typical(0.5)));
  for (std::size_t i = 0; i < fr.size(); ++i) s.surgery.push_back("L" + std::to_string(i + 1));
  s.omega = std::move(omega);
  return s;
}

inline std::vector<std::vector<Scalar>> lens_samples(long p, long q) {
  auto om = lens_presentation(p, q).omegas;
  auto lifted = om.front();
  lifted[0] += 2.0;  // same class, different lift
  om.push_back(lifted);
  return om;
}

/// u_V with a framed positive meridian and the compensating twist on u_V.
/// The meridian degree solves the cocycle condition.
inline SurgeryTriple s3_blowup(Scalar v, int framing, int r) {
  SurgeryTriple s = s3_with_unknot(Color::typical(v));
  s.diagram = meridian_insert(s.diagram, ArcRef{1, 0}, Color::typical(0.5), framing, framing, "M");
  const Scalar deg = v + double(r - 1);
  s.surgery = {"M"};
  s.omega = {framing > 0 ? -deg : deg};
  return s;
}
}  // namespace detail

inline const std::vector<ManifoldEntry>& manifold_catalog() {
  static const std::vector<ManifoldEntry> c{
      {"S3",
       {{"u_V", false, [](const std::vector<Scalar>& x, int) { return s3_with_unknot(Color::typical(x[0])); }},
        {"u_V+blowup(+1)", false, [](const std::vector<Scalar>& x, int r) { return detail::s3_blowup(x[0], +1, r); }},
        {"u_V+blowup(-1)", false, [](const std::vector<Scalar>& x, int r) { return detail::s3_blowup(x[0], -1, r); }}},
       [] { return std::vector<std::vector<Scalar>>{{0.37}, {Scalar(0.25, 0.1)}, {1.3}}; }},
      {"S1xS2",
       {{"unknot(0)", true,
         [](const std::vector<Scalar>& x, int) {
           SurgeryTriple s;
           s.diagram = unknot(Color::typical(0.5), 0, "L1");
           s.surgery = {"L1"};
           s.omega = {x[0]};
           return s;
         }},
        {"hopf(1,1)", true, [](const std::vector<Scalar>& x, int) { return detail::chain_triple({1, 1}, {-x[0], x[0]}); }}},
       [] {
         return std::vector<std::vector<Scalar>>{{0.5}, {2.0 / 3.0}, {Scalar(0.3, 0.2)}, {1.4}, {Scalar(0.77, -0.1)}};
       }},
      {"L(5,1)",
       {{"chain[5]", true, [](const std::vector<Scalar>& x, int) { return detail::chain_triple({5}, {x[0]}); }},
        {"chain[6,1]", true, [](const std::vector<Scalar>& x, int) { return detail::chain_triple({6, 1}, {x[0], -x[0]}); }}},
       [] { return detail::lens_samples(5, 1); }},
      {"L(5,2)",
       {{"chain[3,2]", true, [](const std::vector<Scalar>& x, int) { return detail::chain_triple({3, 2}, {x[0], x[1]}); }},
        {"chain[3,3,1]", true,
         [](const std::vector<Scalar>& x, int) { return detail::chain_triple({3, 3, 1}, {x[0], x[1], -x[1]}); }}},
       [] { return detail::lens_samples(5, 2); }},
      {"L(7,1)",
       {{"chain[7]", true, [](const std::vector<Scalar>& x, int) { return detail::chain_triple({7}, {x[0]}); }}},
       [] { return detail::lens_samples(7, 1); }},
      {"L(7,2)",
       {{"chain[4,2]", true, [](const std::vector<Scalar>& x, int) { return detail::chain_triple({4, 2}, {x[0], x[1]}); }}},
       [] { return detail::lens_samples(7, 2); }},
  };
  return c;
}

inline const ManifoldEntry& find_manifold(const std::string& name) {
  for (const auto& e : manifold_catalog())
    if (e.name == name) return e;
  throw Error("unknown catalog manifold '" + name + "'");
}

}  // namespace nss3m
