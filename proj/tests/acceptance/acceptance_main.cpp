// Acceptance suite: every finite numeric claim the library is built around,
// checked end to end with exact arithmetic. One line per criterion.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "dpz/cylinder.hpp"
#include "dpz/json_io.hpp"
#include "dpz/lattice.hpp"
#include "dpz/sampling.hpp"

using namespace dpz;

namespace {

struct Harness {
  int failures = 0;
  int index = 0;

  void run(const std::string& name, const std::function<void()>& body) {
    ++index;
    std::string message;
    bool ok = true;
    auto started = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const std::exception& err) {
      ok = false;
      message = err.what();
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - started)
                       .count();
    std::cout << "criterion " << index << " (" << name << "): " << (ok ? "PASS" : "FAIL")
              << "  [" << elapsed << " ms]";
    if (!ok) std::cout << "  [" << message << "]";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

const std::vector<std::vector<Rational>> kSelfIntTable = {
    {rat(-1, 2)},
    {rat(-2, 3), rat(-2, 3)},
    {rat(-3, 4), rat(-1), rat(-3, 4)},
    {rat(-4, 5), rat(-6, 5), rat(-6, 5), rat(-4, 5)},
    {rat(-5, 6), rat(-4, 3), rat(-3, 2), rat(-4, 3), rat(-5, 6)},
    {rat(-6, 7), rat(-10, 7), rat(-12, 7), rat(-12, 7), rat(-10, 7), rat(-6, 7)},
    {rat(-7, 8), rat(-3, 2), rat(-15, 8), rat(-2), rat(-15, 8), rat(-3, 2), rat(-7, 8)},
};

void chain_correction_table() {
  for (int n = 1; n <= 7; ++n) {
    CurveConfig config = an_chain_config(n);
    std::vector<std::string> labels;
    for (int j = 1; j <= n; ++j) labels.push_back("D" + std::to_string(j));
    for (int ell = 1; ell <= n; ++ell) {
      auto closed = bl_divisor(n, ell);
      require(closed.self_int == kSelfIntTable[n - 1][ell - 1],
              "table mismatch at n=" + std::to_string(n) + " ell=" + std::to_string(ell));
      auto solved = solve_prescribed_pairing(config, labels, {{labels[ell - 1], rat(-1)}});
      ExtendedDivisor direct;
      for (int j = 1; j <= n; ++j) direct.add(labels[j - 1], closed.coefficients[j - 1]);
      require(direct.coeffs == solved.coeffs, "closed form disagrees with the solve");
      require(pairing(config, direct, direct) == closed.self_int,
              "self-intersection disagrees with the pairing");
    }
  }
}

void weighted_chain_bound() {
  for (int len = 3; len <= 6; ++len) {
    std::vector<long long> w(len, 1);
    for (;;) {
      bool middles_ok = true;
      for (int j = 1; j + 1 < len; ++j) middles_ok = middles_ok && w[j] >= 2;
      if (middles_ok) {
        Rational sq = an_weighted_self_intersection(w);
        require(sq <= rat(-4), "weighted square above -4");
        bool canonical = w.front() == 1 && w.back() == 1;
        for (int j = 1; j + 1 < len; ++j) canonical = canonical && w[j] == 2;
        require((sq == rat(-4)) == canonical, "equality characterization failed");
      }
      int pos = len - 1;
      while (pos >= 0 && w[pos] == 4) w[pos--] = 1;
      if (pos < 0) break;
      ++w[pos];
    }
  }
}

void lattice_counts() {
  Dp2Lattice lattice;
  require(lattice.minus_one_classes().size() == 56, "expected 56 exceptional classes");
  require(lattice.roots().size() == 126, "expected 126 roots");
}

void special_curve_trichotomy() {
  Dp2Lattice lattice;
  std::mt19937_64 rng(20240002);
  int sampled = 0;
  for (int n = 3; n <= 6; ++n) {
    for (int trial = 0; trial < 60; ++trial) {
      auto chain = lattice.random_chain(n, rng);
      std::vector<LatticeClass> extras;
      if (n == 3)
        for (const auto& root : lattice.roots()) {
          bool orthogonal = true;
          for (const auto& r : chain) orthogonal = orthogonal && dot(root, r) == 0;
          if (orthogonal) extras.push_back(root);
        }
      SpecialCurvePattern pattern = special_curve_search(lattice, chain, extras);
      ++sampled;
      switch (pattern.kind) {
        case PatternKind::A: {
          const auto& e1 = pattern.witnesses.at(0);
          const auto& e2 = pattern.witnesses.at(1);
          require(dot(e1, e2) == 0, "two-witness pattern: witnesses must be orthogonal");
          LatticeClass sum = e1 + e2;
          for (int j = 0; j < n; ++j) {
            int expected = (j == 1 ? 1 : 0) + (j == n - 2 ? 1 : 0);
            require(dot(sum, chain[j]) == expected, "two-witness pairing identity failed");
          }
          int hits1 = 0, hits2 = 0;
          for (int j = 0; j < n; ++j) {
            hits1 += dot(e1, chain[j]);
            hits2 += dot(e2, chain[j]);
          }
          require(hits1 == 1 && hits2 == 1, "each witness meets the chain once");
          break;
        }
        case PatternKind::B: {
          require(n == 5, "one-witness central pattern outside length 5");
          const auto& e = pattern.witnesses.at(0);
          for (int j = 0; j < 5; ++j)
            require(dot(e, chain[j]) == (j == 2 ? 1 : 0), "central pairing failed");
          LatticeClass residue = e.scaled(2) + canonical_class();
          int mults[5] = {1, 2, 3, 2, 1};
          for (int j = 0; j < 5; ++j) residue = residue + chain[j].scaled(mults[j]);
          require(residue == LatticeClass{}, "half-anticanonical identity failed");
          break;
        }
        case PatternKind::C: {
          require(n == 3, "isolated-root pattern outside length 3");
          require(pattern.isolated_root.has_value(), "missing isolated root");
          require(is_kind_c_witness(pattern.witnesses.at(0), chain, *pattern.isolated_root),
                  "isolated-root witness conditions failed");
          break;
        }
      }
    }
  }
  require(sampled >= 200, "not enough sampled embeddings");
}

void fibration_templates() {
  const std::vector<std::pair<std::string, std::vector<int>>> templates = {
      {"D4", {}},        {"D4+A1", {}},        {"D4+2A1", {}},
      {"D6", {}},        {"E6", {1}},          {"D5", {1, 1}},
      {"(A5)'", {1, 1, 1}}, {"(A3+A1)'", {1, 1, 1, 1}}, {"A4", {1, 1, 1}},
      {"A2", {1, 1, 1, 1, 1, 1}},
  };
  for (const auto& [name, partition] : templates) {
    auto [data, tag] = template_from_dynkin(parse_dynkin(name), partition);
    validate_fibration(data);
    build_curve_config(data);
    (void)tag;
  }

  {  // D5 resolution and its fibration class
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
    require(fiber_class_check(config, fiber, "D5"), "D5 fiber class failed");
  }
  {  // straight A5 with a central tip
    CurveConfig config(2);
    for (int j = 1; j <= 5; ++j) config.add_curve("D" + std::to_string(j), -2, true);
    for (int j = 1; j < 5; ++j)
      config.set_meeting("D" + std::to_string(j), "D" + std::to_string(j + 1));
    config.add_curve("E3", -1, false);
    config.set_meeting("E3", "D3");
    ExtendedDivisor fiber;
    fiber.add("D2", rat(1));
    fiber.add("D3", rat(2));
    fiber.add("E3", rat(2));
    fiber.add("D4", rat(1));
    require(fiber_class_check(config, fiber, "D1"), "central-tip fiber class failed");
    require(fiber_class_check(config, fiber, "D5"), "central-tip fiber class failed");
  }
  {  // A3 + A1 with the tip meeting both
    CurveConfig config(2);
    for (int j = 1; j <= 4; ++j) config.add_curve("D" + std::to_string(j), -2, true);
    config.set_meeting("D1", "D2");
    config.set_meeting("D2", "D3");
    config.add_curve("E2", -1, false);
    config.set_meeting("E2", "D2");
    config.set_meeting("E2", "D4");
    ExtendedDivisor fiber;
    fiber.add("D2", rat(1));
    fiber.add("E2", rat(2));
    fiber.add("D4", rat(1));
    require(fiber_class_check(config, fiber, "D1"), "two-point fiber class failed");
    require(fiber_class_check(config, fiber, "D3"), "two-point fiber class failed");
  }
  for (int n : {3, 4, 5, 6}) {  // chain surfaces
    CurveConfig config(2);
    for (int j = 1; j <= n; ++j) config.add_curve("D" + std::to_string(j), -2, true);
    for (int j = 1; j < n; ++j)
      config.set_meeting("D" + std::to_string(j), "D" + std::to_string(j + 1));
    ExtendedDivisor fiber;
    if (n == 3) {
      config.add_curve("E2", -1, false);
      config.add_curve("E2b", -1, false);
      config.set_meeting("E2", "D2");
      config.set_meeting("E2b", "D2");
      fiber.add("E2", rat(1));
      fiber.add("D2", rat(1));
      fiber.add("E2b", rat(1));
    } else {
      config.add_curve("E2", -1, false);
      config.add_curve("En1", -1, false);
      config.set_meeting("E2", "D2");
      config.set_meeting("En1", "D" + std::to_string(n - 1));
      fiber.add("E2", rat(1));
      for (int j = 2; j <= n - 1; ++j) fiber.add("D" + std::to_string(j), rat(1));
      fiber.add("En1", rat(1));
    }
    require(fiber_class_check(config, fiber, "D1"), "chain fiber class failed");
  }
  {  // two crossing sections: the anticanonical residue is the fiber class
    CurveConfig config(2);
    config.add_curve("D1", -2, true);
    config.add_curve("D2", -2, true);
    config.set_meeting("D1", "D2");
    ExtendedDivisor delta = ExtendedDivisor::anti_canonical();
    delta.add("D1", rat(-1));
    delta.add("D2", rat(-1));
    require(pairing(config, delta, delta) == 0, "residue square");
    require(pairing(config, delta, ExtendedDivisor::anti_canonical()) == 2, "residue degree");
    require(pairing(config, delta, ExtendedDivisor::of_curve("D1")) == 1, "residue vs section");
  }
}

void auxiliary_divisor_numbers() {
  {  // one-section, single II fiber of weight 4
    SurfaceModel model = build_curve_config(
        template_from_dynkin(parse_dynkin("D5"), {1, 1}).first);
    ExtendedDivisor delta;
    delta.add("D0", rat(2));
    delta.add("F", rat(4));
    delta.add("E1", rat(-2));
    delta.add("E2", rat(-1));
    delta.add("D3_1", rat(-1));
    delta.add("D3_2", rat(-2));
    delta.add("D3_3", rat(-3));
    delta.add("E3", rat(-4));
    require(pairing(model.config, delta, delta) == -1, "first auxiliary square");
    require(pairing(model.config, delta, ExtendedDivisor::anti_canonical()) == 1,
            "first auxiliary degree");
  }
  {  // two-section, single II fiber of weight 2
    SurfaceModel model = build_curve_config(
        template_from_dynkin(parse_dynkin("(A3+A1)'"), {1, 1, 1, 1}).first);
    ExtendedDivisor delta;
    delta.add("D0", rat(1));
    delta.add("F", rat(2));
    delta.add("E1", rat(-1));
    delta.add("E2", rat(-1));
    delta.add("D5_1", rat(-1));
    delta.add("E5", rat(-1));
    require(pairing(model.config, delta, delta) == -1, "second auxiliary square");
    require(pairing(model.config, delta, ExtendedDivisor::anti_canonical()) == 1,
            "second auxiliary degree");
  }
  for (int beta : {4, 5}) {  // single I2 fiber, both auxiliary divisors
    FibrationData data;
    data.condition = Condition::StarStar;
    data.m0 = 2;
    data.m_inf = beta - 2;
    data.alphas = {1};
    data.betas = {{beta, 1}};
    SurfaceModel model = build_curve_config(data);
    ExtendedDivisor heavy;
    heavy.add("D0", rat(beta - 1));
    heavy.add("F", rat(2 * (beta - 1)));
    for (int mu = 1; mu < beta; ++mu) heavy.add("D2_" + std::to_string(mu), rat(-2 * mu));
    heavy.add("E2", rat(-2 * beta));
    heavy.add("E2p", rat(-(beta - 3)));
    require(pairing(model.config, heavy, heavy) == beta * beta - 2 * beta - 7,
            "heavy auxiliary square");
    require(pairing(model.config, heavy, ExtendedDivisor::anti_canonical()) == beta - 1,
            "heavy auxiliary degree");

    ExtendedDivisor light;
    light.add("D0", rat(beta - 1));
    light.add("F", rat(2 * (beta - 1)));
    light.add("E1", rat(-(beta - 1)));
    for (int mu = 1; mu < beta; ++mu) light.add("D2_" + std::to_string(mu), rat(-mu));
    light.add("E2", rat(-beta));
    light.add("E2p", rat(-(beta - 2)));
    require(pairing(model.config, light, light) == beta - 3, "light auxiliary square");
    require(pairing(model.config, light, ExtendedDivisor::anti_canonical()) == beta - 1,
            "light auxiliary degree");
  }
}

void constructor_soundness() {
  std::mt19937_64 rng(20240003);
  for (CaseTag tag : sampling::kAllCases) {
    for (int trial = 0; trial < 1000; ++trial) {
      FibrationData data = sampling::random_fibration(tag, rng);
      SurfaceModel model = build_curve_config(data);
      RewriteRules rules = pushforward_rewrite(tag, data);
      AmpleInput input = sampling::random_valid_input(tag, model, rng);
      CylinderCertificate cert = construct_certificate(tag, model, rules, input);
      VerifyReport report = verify_certificate(tag, model, rules, input, cert);
      if (!report.ok) {
        std::ostringstream what;
        what << to_string(tag) << " trial " << trial << ":";
        for (const auto& check : report.checks)
          if (!check.pass) what << " " << check.name;
        throw std::runtime_error(what.str());
      }
    }
  }
}

void worked_examples() {
  {  // one-section example
    auto [data, tag] = template_from_dynkin(parse_dynkin("D4"), {});
    SurfaceModel model = build_curve_config(data);
    RewriteRules rules = pushforward_rewrite(tag, data);
    AmpleInput h{{{"a", rat(3)}, {"c1", rat(-1)}, {"c2", rat(1)}, {"c3", rat(1)}}};
    CylinderCertificate cert = construct_certificate(tag, model, rules, h);
    SDivisor expected{{"E1p", rat(3, 2)}, {"E1", rat(1, 2)}, {"E2", rat(3, 2)},
                      {"E2p", rat(1, 2)}, {"E3", rat(3, 2)}, {"E3p", rat(1, 2)},
                      {"F", rat(1, 2)}};
    require(cert.divisor == expected, "one-section divisor mismatch");
    require(cert.kind == "Cyl_3", "one-section kind mismatch");
    SDivisor h_basis{{"F", rat(3)}, {"E1", rat(-1)}, {"E2", rat(1)}, {"E3", rat(1)}};
    require(rules.expand(cert.divisor) == h_basis, "one-section expansion mismatch");
  }
  {  // two-section example through the marked fiber
    auto [data, tag] = template_from_dynkin(parse_dynkin("3A2"), {3, 3});
    SurfaceModel model = build_curve_config(data);
    RewriteRules rules = pushforward_rewrite(tag, data);
    AmpleInput h{{{"a1", rat(3)}, {"a2", rat(6)}}};
    CylinderCertificate cert = construct_certificate(tag, model, rules, h);
    require(cert.epsilon == rat(1, 2), "marked-fiber epsilon mismatch");
    SDivisor expected{{"F0", rat(3, 2)}, {"E1", rat(3, 2)}, {"E2", rat(9, 2)}};
    require(cert.divisor == expected, "marked-fiber divisor mismatch");
    require(cert.kind == "CylStar", "marked-fiber kind mismatch");
    require(rules.expand(cert.divisor) == SDivisor{{"E1", rat(3)}, {"E2", rat(6)}},
            "marked-fiber expansion mismatch");
  }
}

void anticanonical_predicate() {
  struct Row {
    int degree;
    const char* type;
    bool expected;
  };
  const Row rows[] = {
      {4, "smooth", true}, {4, "A1", true},    {5, "A4", true},    {9, "smooth", true},
      {3, "smooth", false}, {3, "A1", true},   {3, "A2", true},
      {2, "smooth", false}, {2, "A1", false},  {2, "3A1", false},  {2, "7A1", false},
      {2, "A2", true},      {2, "A2+A1", true}, {2, "A3", true},   {2, "D4", true},
      {1, "A1", false},     {1, "A2", false},  {1, "A3", false},   {1, "D4", false},
      {1, "2A3", false},    {1, "D4+4A1", false}, {1, "A4", true}, {1, "D5", true},
      {1, "E8", true},
  };
  for (const auto& row : rows)
    require(has_anticanonical_cylinder(row.degree, parse_dynkin(row.type)) == row.expected,
            std::string("predicate mismatch at degree ") + std::to_string(row.degree) + " type " +
                row.type);
}

}  // namespace

int main() {
  Harness harness;
  harness.run("chain-correction table, closed form vs solve", chain_correction_table);
  harness.run("weighted-chain bound and equality case", weighted_chain_bound);
  harness.run("lattice class counts 56 / 126", lattice_counts);
  harness.run("special-curve trichotomy on sampled chains", special_curve_trichotomy);
  harness.run("degree-2 templates and fiber classes", fibration_templates);
  harness.run("auxiliary-divisor intersection numbers", auxiliary_divisor_numbers);
  harness.run("constructor soundness, 1000 instances per case", constructor_soundness);
  harness.run("worked certificate examples", worked_examples);
  harness.run("anticanonical cylinder predicate table", anticanonical_predicate);
  if (harness.failures == 0) {
    std::cout << "acceptance: all criteria passed\n";
    return 0;
  }
  std::cout << "acceptance: " << harness.failures << " criterion(s) failed\n";
  return 1;
}
