#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dpz/fibration.hpp"
#include "dpz/sampling.hpp"

using namespace dpz;

namespace {

FibrationData star_data(int m0, std::vector<int> alphas, std::vector<std::pair<int, int>> betas,
                        std::vector<int> gammas) {
  FibrationData d;
  d.condition = Condition::Star;
  d.m0 = m0;
  d.alphas = std::move(alphas);
  d.betas = std::move(betas);
  d.gammas = std::move(gammas);
  return d;
}

FibrationData starstar_data(int m0, int m_inf, std::vector<int> alphas,
                            std::vector<std::pair<int, int>> betas, std::vector<int> gammas) {
  FibrationData d = star_data(m0, std::move(alphas), std::move(betas), std::move(gammas));
  d.condition = Condition::StarStar;
  d.m_inf = m_inf;
  return d;
}

FiberGraph graph_of_fiber(const SurfaceModel& model, int fiber_index) {
  FiberGraph g;
  const auto& comps = model.fibers[fiber_index];
  std::vector<std::string> labels = comps;
  labels.push_back("D0");
  g.section = static_cast<int>(labels.size()) - 1;
  for (const auto& l : labels) g.self_int.push_back(model.config.curve(l).self_int);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t j = i + 1; j < labels.size(); ++j)
      if (model.config.gram(model.config.id_of(labels[i]), model.config.id_of(labels[j])) > 0)
        g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
  return g;
}

}  // namespace

TEST_CASE("fibration data validation") {
  CHECK_NOTHROW(validate_fibration(star_data(2, {}, {{1, 1}, {1, 1}, {1, 1}}, {})));
  CHECK_NOTHROW(validate_fibration(starstar_data(2, 2, {3, 3}, {}, {})));
  CHECK_THROWS_AS(validate_fibration(star_data(2, {1}, {{1, 1}}, {2})),
                  validation_error);  // weights sum to 5, identity needs 6
  CHECK_THROWS_AS(validate_fibration(star_data(1, {}, {{1, 1}}, {})), validation_error);
  CHECK_THROWS_AS(validate_fibration(star_data(2, {}, {{1, 2}}, {})), validation_error);
  CHECK_THROWS_AS(validate_fibration(star_data(2, {0, 2}, {{2, 2}}, {})), validation_error);
  CHECK_THROWS_AS(validate_fibration(starstar_data(2, 2, {}, {}, {1})), validation_error);
  FibrationData stray = star_data(2, {}, {{1, 1}, {1, 1}, {1, 1}}, {});
  stray.m_inf = 2;
  CHECK_THROWS_AS(validate_fibration(stray), validation_error);
  FibrationData missing = starstar_data(2, 2, {3, 3}, {}, {});
  missing.m_inf.reset();
  CHECK_THROWS_AS(validate_fibration(missing), validation_error);
}

TEST_CASE("curve configuration invariants") {
  std::mt19937_64 rng(43);
  for (CaseTag tag : sampling::kAllCases) {
    for (int trial = 0; trial < 5; ++trial) {
      SurfaceModel model = build_curve_config(sampling::random_fibration(tag, rng));
      const ExtendedDivisor anti_k = ExtendedDivisor::anti_canonical();
      for (std::size_t i = 0; i < model.fibers.size(); ++i) {
        const auto& phi = model.fiber_classes[i];
        CHECK(pairing(model.config, phi, phi) == 0);
        CHECK(pairing(model.config, phi, anti_k) == 2);
        CHECK(pairing(model.config, phi, ExtendedDivisor::of_curve("D0")) == 1);
        for (const auto& comp : model.fibers[i])
          CHECK(pairing(model.config, phi, ExtendedDivisor::of_curve(comp)) == 0);
        // The named class and the general fiber are numerically equal.
        ExtendedDivisor diff = phi;
        diff.add(ExtendedDivisor::of_curve("F"), Rational(-1));
        for (const auto& curve : model.config.curves())
          CHECK(pairing(model.config, diff, ExtendedDivisor::of_curve(curve.label)) == 0);
      }
      for (const auto& curve : model.config.curves())
        CHECK(curve.k_degree == -2 - curve.self_int);
    }
  }
}

TEST_CASE("fiber class multiplicities per shape") {
  // II fiber of weight 4: multiplicities (1,1,2,2,2).
  SurfaceModel d5 = build_curve_config(star_data(2, {1, 1}, {}, {4}));
  const auto& phi = d5.fiber_classes[2];
  CHECK(phi.coeff("D3_0") == 1);
  CHECK(phi.coeff("D3_1") == 1);
  CHECK(phi.coeff("D3_2") == 2);
  CHECK(phi.coeff("D3_3") == 2);
  CHECK(phi.coeff("E3") == 2);

  // II fiber of weight 2: class D_0 + D_1 + 2E.
  SurfaceModel a3a1 = build_curve_config(starstar_data(2, 2, {1, 1, 1, 1}, {}, {2}));
  const auto& phi2 = a3a1.fiber_classes[4];
  CHECK(phi2.coeff("D5_0") == 1);
  CHECK(phi2.coeff("D5_1") == 1);
  CHECK(phi2.coeff("E5") == 2);

  // I1 fiber with two (-1)-curves: 0 = (-1) + (-1) + 2.
  const auto& phi3 = d5.fiber_classes[0];
  CHECK(phi3.coeff("E1p") == 1);
  CHECK(phi3.coeff("E1") == 1);
  CHECK(pairing(d5.config, phi3, phi3) == 0);
}

TEST_CASE("section-degree divisors of the branch constructors") {
  // One-section shape with a single II fiber of weight 4: the auxiliary
  // divisor 2D0 + 2 m0 F - sum 2 lambda D_{i,lambda} + E_r - sum mu D_{r+1,mu}
  // has square -1 and anticanonical degree 1.
  SurfaceModel model = build_curve_config(star_data(2, {1, 1}, {}, {4}));
  ExtendedDivisor delta;
  delta.add("D0", rat(2));
  delta.add("F", rat(4));
  delta.add("E1", rat(-2));
  delta.add("E2", rat(-2));
  delta.add("E2", rat(1));  // + E_r
  delta.add("D3_1", rat(-1));
  delta.add("D3_2", rat(-2));
  delta.add("D3_3", rat(-3));
  delta.add("E3", rat(-4));
  CHECK(pairing(model.config, delta, delta) == -1);
  CHECK(pairing(model.config, delta, ExtendedDivisor::anti_canonical()) == 1);

  // The branch section class itself is a disjoint (-1)-section.
  ExtendedDivisor gamma = model.branch_section_class();
  CHECK(pairing(model.config, gamma, gamma) == -1);
  CHECK(pairing(model.config, gamma, ExtendedDivisor::anti_canonical()) == 1);
  CHECK(pairing(model.config, gamma, ExtendedDivisor::of_curve("D0")) == 0);
  CHECK(pairing(model.config, gamma, ExtendedDivisor::of_curve("F")) == 1);
}

TEST_CASE("two-section auxiliary divisor with a weight-2 II fiber") {
  SurfaceModel model = build_curve_config(starstar_data(2, 2, {1, 1, 1, 1}, {}, {2}));
  // pivot position 2, partial weight 1: the correction sum is empty.
  ExtendedDivisor delta;
  delta.add("D0", rat(1));
  delta.add("F", rat(2));
  delta.add("E1", rat(-1));
  delta.add("E2", rat(-1));
  delta.add("D5_1", rat(-1));
  delta.add("E5", rat(-1));
  CHECK(pairing(model.config, delta, delta) == -1);
  CHECK(pairing(model.config, delta, ExtendedDivisor::anti_canonical()) == 1);
}

TEST_CASE("single-I2 auxiliary divisors") {
  for (int beta : {4, 5}) {
    SurfaceModel model =
        build_curve_config(starstar_data(2, beta - 2, {1}, {{beta, 1}}, {}));
    ExtendedDivisor heavy;  // (beta-1) D0 + 2(beta-1) F - sum 2 mu D_{2,mu} - (beta-3) E2p
    heavy.add("D0", rat(beta - 1));
    heavy.add("F", rat(2 * (beta - 1)));
    for (int mu = 1; mu < beta; ++mu) heavy.add("D2_" + std::to_string(mu), rat(-2 * mu));
    heavy.add("E2", rat(-2 * beta));
    heavy.add("E2p", rat(-(beta - 3)));
    CHECK(pairing(model.config, heavy, heavy) == beta * beta - 2 * beta - 7);
    CHECK(pairing(model.config, heavy, ExtendedDivisor::anti_canonical()) == beta - 1);

    ExtendedDivisor light;  // (beta-1) D0 + 2(beta-1) F - (beta-1) E1 - sum mu D - (beta-2) E2p
    light.add("D0", rat(beta - 1));
    light.add("F", rat(2 * (beta - 1)));
    light.add("E1", rat(-(beta - 1)));
    for (int mu = 1; mu < beta; ++mu) light.add("D2_" + std::to_string(mu), rat(-mu));
    light.add("E2", rat(-beta));
    light.add("E2p", rat(-(beta - 2)));
    CHECK(pairing(model.config, light, light) == beta - 3);
    CHECK(pairing(model.config, light, ExtendedDivisor::anti_canonical()) == beta - 1);
    CHECK(riemann_roch_lower_bound(model.config, light) == beta - 2);
  }
}

TEST_CASE("one-section dimension bounds, full and half divisor") {
  SurfaceModel model = build_curve_config(star_data(2, {}, {{1, 1}, {1, 1}, {1, 1}}, {}));
  // One I2 class counted negatively, the other two through their far tips.
  ExtendedDivisor delta;
  delta.add("D0", rat(2));
  delta.add("F", rat(4));
  delta.add("E1", rat(-2));
  delta.add("E2p", rat(-2));
  delta.add("E3p", rat(-2));
  CHECK(riemann_roch_lower_bound(model.config, delta) == -1);  // 3 m0 + 2 - 3(alpha+beta) - gamma

  ExtendedDivisor half = delta.scaled(rat(1, 2));
  for (const auto& [label, value] : half.coeffs) {
    (void)label;
    CHECK(denominator(value) == 1);
  }
  CHECK(riemann_roch_lower_bound(model.config, half) == 0);  // m0 + 1 - alpha - beta
}

TEST_CASE("singular fiber graph classification") {
  // Chain with (-1)-ends, section on an end.
  FiberGraph i1{{-2, -1, -2, -2, -1}, {{0, 1}, {1, 2}, {2, 3}, {3, 4}}, 0};
  CHECK(classify_fiber_graph(i1) == FiberKind::I1);

  // (-2)-root carrying two chains with (-1)-tips, section on the root.
  FiberGraph i2{{-2, -2, -1, -2, -1}, {{0, 1}, {1, 2}, {1, 3}, {3, 4}}, 0};
  CHECK(classify_fiber_graph(i2) == FiberKind::I2);

  // Two (-2)-leaves on the start of a chain ending in a (-1).
  FiberGraph ii{{-2, -2, -2, -2, -1}, {{0, 1}, {1, 3}, {2, 3}, {3, 4}}, 0};
  CHECK(classify_fiber_graph(ii) == FiberKind::II);

  // Graphs generated from models classify as their own shape.
  std::mt19937_64 rng(47);
  std::vector<FiberGraph> valid;
  for (CaseTag tag : sampling::kAllCases) {
    SurfaceModel model = build_curve_config(sampling::random_fibration(tag, rng));
    for (std::size_t i = 0; i < model.fibers.size(); ++i) {
      FiberGraph g = graph_of_fiber(model, static_cast<int>(i));
      CHECK(classify_fiber_graph(g) == model.fiber_kind(static_cast<int>(i)));
      valid.push_back(g);
    }
  }

  // Perturbed graphs never classify.
  int rejected = 0;
  for (int trial = 0; rejected < 50; ++trial) {
    FiberGraph g = valid[trial % valid.size()];
    switch (trial % 4) {
      case 0: {
        int v = static_cast<int>(rng() % g.self_int.size());
        if (v == g.section) continue;  // the section weight is unconstrained
        g.self_int[v] = -3;
        break;
      }
      case 1: {
        int a = static_cast<int>(rng() % g.self_int.size());
        int b = static_cast<int>(rng() % g.self_int.size());
        if (a == b) continue;
        bool present = false;
        for (auto [x, y] : g.edges)
          if ((x == a && y == b) || (x == b && y == a)) present = true;
        if (present) continue;
        g.edges.emplace_back(a, b);
        break;
      }
      case 2:
        if (g.edges.size() < 2) continue;
        g.edges.erase(g.edges.begin() + static_cast<long>(rng() % g.edges.size()));
        break;
      default: g.self_int[g.section] = -1, g.self_int[(g.section + 1) % g.self_int.size()] = 0; break;
    }
    CHECK_THROWS_AS(classify_fiber_graph(g), input_error);
    ++rejected;
  }
}

TEST_CASE("rewrite rules per case") {
  SECTION("one-section basis") {
    FibrationData d4 = star_data(2, {}, {{1, 1}, {1, 1}, {1, 1}}, {});
    RewriteRules rules = pushforward_rewrite(CaseTag::DE, d4);
    CHECK(rules.basis == std::vector<std::string>{"F", "E1", "E2", "E3"});
    auto tip = rules.expand({{"E1p", rat(1)}});
    CHECK(tip == SDivisor{{"E1", rat(-1)}, {"F", rat(1)}});
  }
  SECTION("branch-section expansion") {
    FibrationData d5 = star_data(2, {1, 1}, {}, {4});
    RewriteRules rules = pushforward_rewrite(CaseTag::D5, d5);
    auto gamma = rules.expand({{"Gamma", rat(1)}});
    CHECK(gamma == SDivisor{{"E1", rat(-1)}, {"E2", rat(-1)}, {"F", rat(3, 2)}});
    auto tip = rules.expand({{"E3", rat(2)}});
    CHECK(tip == SDivisor{{"F", rat(1)}});
  }
  SECTION("marked fiber expansion") {
    FibrationData a2 = starstar_data(2, 2, {3, 3}, {}, {});
    RewriteRules rules = pushforward_rewrite(CaseTag::A2, a2);
    auto f0 = rules.expand({{"F0", rat(1)}});
    CHECK(f0 == SDivisor{{"E1", rat(1)}, {"E2", rat(1)}});
  }
  SECTION("expansion is idempotent") {
    FibrationData a5 = starstar_data(2, 2, {1, 1, 1}, {}, {3});
    RewriteRules rules = pushforward_rewrite(CaseTag::A5P, a5);
    SDivisor mixed{{"E1p", rat(2)}, {"E4", rat(-1)}, {"F", rat(1, 3)}};
    auto once = rules.expand(mixed);
    CHECK(rules.expand(once) == once);
  }
  SECTION("case/data mismatch") {
    FibrationData d4 = star_data(2, {}, {{1, 1}, {1, 1}, {1, 1}}, {});
    CHECK_THROWS_AS(pushforward_rewrite(CaseTag::A2, d4), input_error);
    FibrationData heavy = starstar_data(3, 2, {1, 1, 1, 1}, {{2, 1}}, {});
    CHECK_THROWS_AS(pushforward_rewrite(CaseTag::AN, heavy), unsupported_error);
  }
}

TEST_CASE("rewrite relations are numerically consistent") {
  std::mt19937_64 rng(53);
  for (CaseTag tag : sampling::kAllCases) {
    for (int trial = 0; trial < 5; ++trial) {
      FibrationData data = sampling::random_fibration(tag, rng);
      SurfaceModel model = build_curve_config(data);
      RewriteRules rules = pushforward_rewrite(tag, data);
      CHECK(sampling::rewrite_round_trip_ok(model, rules, rng, 20));
    }
  }
}

TEST_CASE("pullback basics") {
  SurfaceModel model = build_curve_config(star_data(2, {1, 1}, {}, {4}));
  CHECK(model.pullback({}).is_zero());
  CHECK_THROWS_AS(model.pullback({{"E9", rat(1)}}), input_error);
  CHECK_THROWS_AS(model.pullback({{"D0", rat(1)}}), input_error);

  ExtendedDivisor fe = model.pullback({{"E1", rat(1)}});
  for (const auto& label : model.contracted)
    CHECK(pairing(model.config, fe, ExtendedDivisor::of_curve(label)) == 0);

  // A (-1)-tip beside a single isolated double point picks up half of it.
  SurfaceModel deep = build_curve_config(star_data(2, {2}, {}, {4}));
  ExtendedDivisor tip = deep.pullback({{"E1", rat(1)}});
  CHECK(tip.coeff("D1_1") == rat(1, 2));
  CHECK(pairing(deep.config, tip, tip) == rat(-1, 2));
}

TEST_CASE("templates per singularity type") {
  struct Row {
    const char* type;
    std::vector<int> partition;
    CaseTag expected;
  };
  const Row rows[] = {
      {"D4", {}, CaseTag::DE},
      {"D4+A1", {}, CaseTag::DE},
      {"D4+2A1", {}, CaseTag::DE},
      {"D6", {}, CaseTag::DE},
      {"E6", {1}, CaseTag::DE},
      {"D5", {1, 1}, CaseTag::D5},
      {"D5+A1", {2}, CaseTag::D5},
      {"(A5)'", {1, 1, 1}, CaseTag::A5P},
      {"(A5+A1)'", {2, 1}, CaseTag::A5P},
      {"(A3+A1)'", {1, 1, 1, 1}, CaseTag::A3A1P},
      {"(A3+2A1)'", {2, 1, 1}, CaseTag::A3A1P},
      {"A3", {1, 1, 1, 1}, CaseTag::AN},
      {"A4", {1, 1, 1}, CaseTag::AN},
      {"A4+A1", {2, 1}, CaseTag::AN},
      {"(A5)''", {1, 1}, CaseTag::AN},
      {"(A5+A1)''", {2}, CaseTag::AN},
      {"A6", {1}, CaseTag::AN},
      {"A2", {1, 1, 1, 1, 1, 1}, CaseTag::A2},
      {"A2+A1", {2, 1, 1, 1, 1}, CaseTag::A2},
      {"3A2", {3, 3}, CaseTag::A2},
  };
  for (const auto& row : rows) {
    INFO(row.type);
    auto [data, tag] = template_from_dynkin(parse_dynkin(row.type), row.partition);
    CHECK(tag == row.expected);
    CHECK_NOTHROW(validate_fibration(data));
    CHECK_NOTHROW(build_curve_config(data));
    if (tag != CaseTag::DE) CHECK(select_case(data) == tag);
  }

  CHECK(template_from_dynkin(parse_dynkin("D4"), {}).first.beta_prime_total() == 3);
  auto [a5p_data, a5p_tag] = template_from_dynkin(parse_dynkin("(A5)'"), {1, 1, 1});
  CHECK(a5p_data.gammas == std::vector<int>{3});
  (void)a5p_tag;

  // Naming just the driving singularity is allowed; the partition then adds
  // chain singularities implicitly.
  CHECK(template_from_dynkin(parse_dynkin("A2"), {3, 3}).second == CaseTag::A2);
  CHECK(template_from_dynkin(parse_dynkin("A4"), {3}).second == CaseTag::AN);
  CHECK(template_from_dynkin(parse_dynkin("D5"), {2}).second == CaseTag::D5);

  CHECK_THROWS_AS(template_from_dynkin(parse_dynkin("3A1"), {}), unsupported_error);
  CHECK_THROWS_AS(template_from_dynkin(parse_dynkin("A6+A1"), {2}), rho_one_error);
  CHECK_THROWS_AS(template_from_dynkin(parse_dynkin("D4"), {1}), validation_error);
  CHECK_THROWS_AS(template_from_dynkin(parse_dynkin("A4+A1"), {1, 1, 1}), validation_error);
}

TEST_CASE("case selection from raw fibration data") {
  CHECK(select_case(star_data(3, {}, {{1, 1}}, {5})) == CaseTag::DE);
  CHECK(select_case(star_data(2, {}, {{1, 1}}, {2, 2})) == CaseTag::DE);
  CHECK(select_case(star_data(2, {1, 1}, {}, {4})) == CaseTag::D5);
  CHECK(select_case(starstar_data(2, 2, {1, 1, 1}, {}, {3})) == CaseTag::A5P);
  CHECK(select_case(starstar_data(2, 2, {2, 1, 1}, {}, {2})) == CaseTag::A3A1P);
  CHECK(select_case(starstar_data(2, 2, {1, 1, 1, 1}, {{1, 1}}, {})) == CaseTag::AN);
  CHECK(select_case(starstar_data(2, 2, {3, 3}, {}, {})) == CaseTag::A2);
  // Valid one-section data whose II weight is too small for any route.
  CHECK_THROWS_AS(select_case(star_data(2, {1, 1, 1, 1}, {}, {2})), unsupported_error);
  // Two I2 fibers with short tips match no two-section route either.
  CHECK_THROWS_AS(select_case(starstar_data(2, 2, {1}, {{1, 1}, {2, 1}}, {})),
                  unsupported_error);
}

TEST_CASE("fiber class formulas on resolution configurations") {
  SECTION("D5 resolution") {
    CurveConfig config(2);
    for (int j = 1; j <= 5; ++j) config.add_curve("D" + std::to_string(j), -2, true);
    config.add_curve("E1", -1, false);
    config.set_meeting("D5", "D4");
    config.set_meeting("D4", "D3");
    config.set_meeting("D3", "D1");
    config.set_meeting("D3", "D2");
    config.set_meeting("E1", "D1");
    ExtendedDivisor fiber;
    fiber.add("D2", rat(1));
    fiber.add("E1", rat(2));
    fiber.add("D1", rat(2));
    fiber.add("D3", rat(2));
    fiber.add("D4", rat(1));
    CHECK(fiber_class_check(config, fiber, "D5"));
    CHECK_FALSE(fiber_class_check(config, ExtendedDivisor::of_curve("D2"), "D5"));
  }
  SECTION("chain resolutions") {
    for (int n : {4, 5, 6}) {
      CurveConfig config(2);
      for (int j = 1; j <= n; ++j) config.add_curve("D" + std::to_string(j), -2, true);
      for (int j = 1; j < n; ++j)
        config.set_meeting("D" + std::to_string(j), "D" + std::to_string(j + 1));
      config.add_curve("E2", -1, false);
      config.add_curve("En1", -1, false);
      config.set_meeting("E2", "D2");
      config.set_meeting("En1", "D" + std::to_string(n - 1));
      ExtendedDivisor fiber;
      fiber.add("E2", rat(1));
      for (int j = 2; j <= n - 1; ++j) fiber.add("D" + std::to_string(j), rat(1));
      fiber.add("En1", rat(1));
      CHECK(fiber_class_check(config, fiber, "D1"));
      CHECK(fiber_class_check(config, fiber, "D" + std::to_string(n)));
    }
  }
}
