#include "support.hpp"

#include <gtest/gtest.h>

using namespace herisson;
using namespace herisson::testing;

TEST(SignChanges, Examples) {
  EXPECT_EQ(sign_changes({+1, -1, +1, -1}), 4);
  EXPECT_EQ(sign_changes({+1, 0, -1, 0}), 2);
  EXPECT_EQ(sign_changes({0, 0, 0}), 0);
  EXPECT_EQ(sign_changes({}), 0);
  EXPECT_EQ(sign_changes({-1}), 0);
}

TEST(SignChanges, AlwaysEven) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> label(-1, 1), length(0, 12);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<int> v(length(rng));
    for (int& x : v) x = label(rng);
    EXPECT_EQ(sign_changes(v) % 2, 0);
  }
}

TEST(CauchyVerdict, AllZeroOnCube) {
  const auto dual = dual_complex(cube().fan());
  EdgeLabeling labels{std::vector<int>(dual.edge_count(), 0)};
  EXPECT_EQ(cauchy_verdict(dual, labels).kind, CauchyVerdict::Kind::AllZero);
}

TEST(CauchyVerdict, AllPlusOnTetrahedron) {
  const auto dual = dual_complex(regular_tetrahedron(1.0).fan());
  EdgeLabeling labels{std::vector<int>(dual.edge_count(), 1)};
  const auto v = cauchy_verdict(dual, labels);
  EXPECT_EQ(v.kind, CauchyVerdict::Kind::Witness);
  EXPECT_EQ(v.index, 0);
  bool nonzero = false;
  for (int e : dual.incident_edges[v.vertex]) nonzero = nonzero || labels.labels[e] != 0;
  EXPECT_TRUE(nonzero);
}

TEST(CauchyVerdict, RandomOctahedralLabelings) {
  const auto dual = dual_complex(cube().fan());
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> label(-1, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    EdgeLabeling labels{std::vector<int>(dual.edge_count())};
    for (int& x : labels.labels) x = label(rng);
    const auto v = cauchy_verdict(dual, labels);
    EXPECT_NE(v.kind, CauchyVerdict::Kind::ViolatesLemma);
    if (v.kind == CauchyVerdict::Kind::Witness) EXPECT_LE(v.index, 2);
  }
}

TEST(CauchyVerdict, NegationPreservesIndices) {
  const auto dual = dual_complex(random_convex(10, 1).fan());
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> label(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    EdgeLabeling labels{std::vector<int>(dual.edge_count())};
    for (int& x : labels.labels) x = label(rng);
    EXPECT_EQ(node_indices(dual, labels), node_indices(dual, labels.negated()));
  }
}

TEST(CauchyVerdict, WrongLabelCount) {
  const auto dual = dual_complex(cube().fan());
  EXPECT_THROW(cauchy_verdict(dual, EdgeLabeling{{1, 0}}), Error);
}

TEST(TranslateInside, Examples) {
  EXPECT_TRUE(can_translate_inside(rectangle(1, 1), rectangle(2, 2)));
  const Polygon2 tri{{0, 0}, {2, 0}, {0.5, 1.5}};
  EXPECT_FALSE(can_translate_inside(tri, translated(tri, {3, -1})));
  EXPECT_FALSE(can_translate_inside(rectangle(1, 3), rectangle(2, 2)));
  EXPECT_FALSE(grid_fits_inside(rectangle(1, 3), rectangle(2, 2), 0.0));
}

TEST(TranslateInside, FarAwayStillFits) {
  EXPECT_TRUE(can_translate_inside(rectangle(1, 1, {100, -50}), rectangle(2, 2)));
}

TEST(TranslateInside, AgreesWithGridSearch) {
  std::mt19937_64 rng(4);
  int positive = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const Polygon2 p = random_convex_polygon(rng, 3 + trial % 5);
    Polygon2 q = random_convex_polygon(rng, 3 + (trial / 5) % 5);
    for (Vec2& v : q) v *= 1.4;
    const bool lp = can_translate_inside(p, q);
    if (grid_fits_inside(p, q, 1e-3, 80)) {
      EXPECT_TRUE(lp) << "trial " << trial;
      ++positive;
    }
    // A grid point lies within one cell of any feasible translation.
    if (lp) EXPECT_TRUE(grid_fits_inside(p, q, -0.11, 80)) << "trial " << trial;
  }
  EXPECT_GT(positive, 10);
}

TEST(LabelParallelFaces, CongruentTriangles) {
  const Polygon2 tri{{0, 0}, {2, 0}, {0.5, 1.5}};
  const auto lab = label_parallel_faces(tri, translated(tri, {5, 1}));
  EXPECT_TRUE(lab.all_zero());
  EXPECT_EQ(lab.index_first, 0);
  EXPECT_EQ(lab.index_second, 0);
}

TEST(LabelParallelFaces, SwappedRectangles) {
  const auto lab = label_parallel_faces(rectangle(3, 1), rectangle(1, 3));
  EXPECT_EQ(lab.edge_labels_first, (std::vector<int>{+1, -1, +1, -1}));
  EXPECT_EQ(lab.edge_labels_second, (std::vector<int>{-1, +1, -1, +1}));
  EXPECT_EQ(lab.vertex_labels_first, (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(lab.index_first, 4);
  EXPECT_EQ(lab.index_second, 4);
}

TEST(LabelParallelFaces, NotComparableWhenInside) {
  try {
    label_parallel_faces(rectangle(1, 1), rectangle(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotComparable);
  }
  EXPECT_THROW(label_parallel_faces(rectangle(2, 2), rectangle(1, 1)), Error);
}

TEST(LabelParallelFaces, SameFanPairsHaveIndexAtLeastFour) {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto [p, q] = random_same_fan_pair(rng);
    if (can_translate_inside(p, q) || can_translate_inside(q, p)) continue;
    const auto lab = label_parallel_faces(p, q);
    for (int v : lab.vertex_labels_first) EXPECT_EQ(v, 0);
    if (!lab.all_zero()) {
      EXPECT_GE(lab.index_first, 4);
      EXPECT_GE(lab.index_second, 4);
    }
    ++checked;
  }
  EXPECT_GT(checked, 200);
}

TEST(LabelParallelFaces, ZeroLabelsExactlyForTranslates) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const auto [p, q] = random_same_fan_pair(rng);
    const Vec2 c = random_vec(rng, 4.0).head<2>();
    const auto lab = label_parallel_faces(p, translated(p, c));
    EXPECT_TRUE(lab.all_zero());
    if (can_translate_inside(p, q) || can_translate_inside(q, p)) continue;
    const auto other = label_parallel_faces(p, q);
    double worst = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) worst = std::max(worst, (q[k] - p[k] - (q[0] - p[0])).norm());
    EXPECT_EQ(other.all_zero(), worst <= 1e-9);
  }
}

TEST(LabelParallelFaces, GeneralPairsNeverIndexTwo) {
  // Different normal fans exercise the vertex rules as well.
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const Polygon2 p = random_convex_polygon(rng, 3 + trial % 5);
    const Polygon2 q = random_convex_polygon(rng, 3 + (trial / 5) % 5);
    if (can_translate_inside(p, q) || can_translate_inside(q, p)) continue;
    const auto lab = label_parallel_faces(p, q);
    EXPECT_GE(lab.index_first, 4);
    EXPECT_GE(lab.index_second, 4);
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

TEST(FaceFrame, RightHandedAndDeterministic) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 n = random_vec(rng).normalized();
    const auto [a, b] = face_frame(n);
    EXPECT_NEAR(a.dot(n), 0.0, 1e-14);
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    EXPECT_LT((a.cross(b) - n).norm(), 1e-14);
    EXPECT_GT(a.x(), 0.0);
  }
  const auto [a, b] = face_frame(Vec3::UnitX());
  EXPECT_LT((a - Vec3::UnitY()).norm(), 1e-15);
}

TEST(Congruence, TranslationRecovered) {
  const Vec3 c(1, 2, 3);
  for (const auto& f : builder_fixtures()) {
    const auto v = congruent_and_parallel(f.H, translate(f.H, c));
    ASSERT_EQ(v.kind, CongruenceVerdict::Kind::Congruent) << f.name;
    EXPECT_LT((v.translation - c).norm(), 1e-9) << f.name;
    EXPECT_TRUE(v.labels.all_zero());
    EXPECT_EQ(v.cauchy.kind, CauchyVerdict::Kind::AllZero);
  }
}

TEST(Congruence, RandomTranslations) {
  std::mt19937_64 rng(9);
  for (const auto& f : builder_fixtures()) {
    for (int trial = 0; trial < 5; ++trial) {
      const Vec3 c = random_vec(rng, 10.0);
      const auto v = congruent_and_parallel(f.H, translate(f.H, c));
      ASSERT_EQ(v.kind, CongruenceVerdict::Kind::Congruent) << f.name;
      EXPECT_LT((v.translation - c).norm(), 1e-9 * std::max(1.0, c.norm())) << f.name;
    }
  }
}

TEST(Congruence, PermutedCellsStillCompare) {
  const Herisson H = regular_tetrahedron(1.0);
  Fan fan = H.fan();
  std::reverse(fan.cells.begin(), fan.cells.end());
  std::rotate(fan.cells[0].begin(), fan.cells[0].begin() + 1, fan.cells[0].end());
  const Herisson shuffled = reconstruct(fan, H.h);
  const auto v = congruent_and_parallel(H, translate(shuffled, Vec3(0.5, 0, 0)));
  EXPECT_EQ(v.kind, CongruenceVerdict::Kind::Congruent);
  EXPECT_LT((v.translation - Vec3(0.5, 0, 0)).norm(), 1e-12);
}

TEST(Congruence, ScaledCubeIsHypothesisFailure) {
  const Herisson small = cube();
  const Herisson large = reconstruct(small.fan(), SupportVector{2, 2, 2, 2, 2, 2});
  const auto v = congruent_and_parallel(small, large);
  EXPECT_EQ(v.kind, CongruenceVerdict::Kind::HypothesisFailure);
  EXPECT_TRUE(v.first_inside_second);
  const auto w = congruent_and_parallel(large, small);
  EXPECT_EQ(w.kind, CongruenceVerdict::Kind::HypothesisFailure);
  EXPECT_FALSE(w.first_inside_second);
}

TEST(Congruence, BoxesAlwaysHaveAFittingFace) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> side(0.5, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Herisson a = box(side(rng), side(rng), side(rng));
    const Herisson b = box(side(rng), side(rng), side(rng));
    EXPECT_EQ(congruent_and_parallel(a, b).kind, CongruenceVerdict::Kind::HypothesisFailure);
  }
}

TEST(Congruence, DifferentMembersOfAClassHaveAFittingFace) {
  // Same class, not congruent: some face must fit inside its partner.
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const Herisson base = random_convex(9, seed);
    const Herisson a = random_in_class(base, rng, 0.1);
    const Herisson b = random_in_class(base, rng, 0.1);
    const auto v = congruent_and_parallel(a, b);
    EXPECT_EQ(v.kind, CongruenceVerdict::Kind::HypothesisFailure) << "seed " << seed;
    EXPECT_NE(v.cauchy.kind, CauchyVerdict::Kind::ViolatesLemma);
  }
  const Herisson B = reflected_truncated_tetrahedron(0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = congruent_and_parallel(random_in_class(B, rng, 0.1), random_in_class(B, rng, 0.1));
    EXPECT_EQ(v.kind, CongruenceVerdict::Kind::HypothesisFailure);
  }
}

TEST(Congruence, DistinctWhenContainmentIsNotCheckable) {
  // The tiling caps are reflex, so only edge labels can separate two members.
  const Herisson T = space_filling_prism();
  std::mt19937_64 rng(13);
  const Herisson U = random_in_class(T, rng, 0.05);
  const auto v = congruent_and_parallel(T, U);
  EXPECT_NE(v.kind, CongruenceVerdict::Kind::Congruent);
  if (v.kind == CongruenceVerdict::Kind::Distinct) EXPECT_GE(v.index, 2);
}

TEST(Congruence, SwapNegatesLabels) {
  std::mt19937_64 rng(12);
  const Herisson base = random_convex(10, 6);
  const Herisson a = random_in_class(base, rng, 0.1);
  const Herisson b = random_in_class(base, rng, 0.1);
  const auto ab = congruent_and_parallel(a, b);
  const auto ba = congruent_and_parallel(b, a);
  EXPECT_EQ(ab.labels.negated().labels, ba.labels.labels);
  const auto dual = dual_complex(base.fan());
  EXPECT_EQ(node_indices(dual, ab.labels), node_indices(dual, ba.labels));
}

TEST(Congruence, NotSameClassNamesCondition) {
  auto code_and_message = [](const Herisson& a, const Herisson& b) -> std::string {
    try {
      congruent_and_parallel(a, b);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NotSameClass);
      return e.what();
    }
    return "";
  };
  EXPECT_NE(code_and_message(cube(), regular_tetrahedron(1.0)).find("(i)"), std::string::npos);

  const Herisson T = regular_tetrahedron(1.0);
  Fan other_partition = T.fan();
  std::swap(other_partition.cells[0], other_partition.cells[1]);
  for (auto& c : other_partition.cells) std::reverse(c.begin(), c.end());
  Herisson fake = T;
  fake.topology = std::make_shared<const FanTopology>(other_partition);
  EXPECT_NE(code_and_message(T, fake).find("(ii)"), std::string::npos);

  Herisson flipped = T;
  flipped.signs[0] = -1;
  EXPECT_NE(code_and_message(T, flipped).find("(iii)"), std::string::npos);
}
