#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dpz/dynkin_type.hpp"
#include "dpz/errors.hpp"
#include "dpz/intersection.hpp"

namespace dpz {

// ---------------------------------------------------------------------------
// Fibration data: a rational surface with a P1-fibration on its minimal
// resolution, described by the section weight(s) and the combinatorics of
// its singular fibers. Three singular fiber shapes occur when every fiber
// component is a (-1)- or (-2)-curve:
//   I1: a chain with (-1)-ends, the section meeting one end;
//   I2: two chains with (-1)-tips hanging off a common (-2)-component that
//       meets the section;
//   II: a chain with one (-1)-end whose far (-2)-end carries a second (-2)
//       leaf, the section meeting the far end.
// ---------------------------------------------------------------------------

enum class Condition { Star, StarStar };
enum class FiberKind { I1, I2, II };

struct FibrationData {
  Condition condition = Condition::Star;
  int m0 = 2;                    // minus the self-intersection of the section D0
  std::optional<int> m_inf;      // second section weight; present iff StarStar
  std::vector<int> alphas;       // I1 fibers: number of components minus one
  std::vector<std::pair<int, int>> betas;  // I2 fibers: chain lengths (beta >= beta')
  std::vector<int> gammas;       // II fibers: number of components minus one

  int r() const { return static_cast<int>(alphas.size()); }
  int s() const { return static_cast<int>(betas.size()); }
  int t() const { return static_cast<int>(gammas.size()); }
  int fiber_count() const { return r() + s() + t(); }

  int alpha_total() const {
    int a = 0;
    for (int x : alphas) a += x;
    return a;
  }
  int beta_total() const {
    int b = 0;
    for (auto& [x, y] : betas) b += x;
    return b;
  }
  int beta_prime_total() const {
    int b = 0;
    for (auto& [x, y] : betas) b += y;
    return b;
  }
  int gamma_total() const {
    int g = 0;
    for (int x : gammas) g += x;
    return g;
  }

  int anticanonical_square() const {
    return condition == Condition::Star ? 4 - m0 : 6 - m0 - m_inf.value();
  }
};

/// Structural validation: weight bounds and the degree identity
/// 8 - (alpha + beta + beta' + gamma) = (-K)^2.
inline FibrationData validate_fibration(const FibrationData& data) {
  if (data.m0 < 2) throw validation_error("not a valid section weight: m0 must be >= 2");
  if (data.condition == Condition::StarStar) {
    if (!data.m_inf) throw validation_error("two-section data needs m_inf");
    if (*data.m_inf < 2)
      throw validation_error("not a valid section weight: m_inf must be >= 2");
  } else if (data.m_inf) {
    throw validation_error("one-section data must not carry m_inf");
  }
  for (int a : data.alphas)
    if (a < 1) throw validation_error("I1 fiber weight must be >= 1");
  for (auto& [b, bp] : data.betas) {
    if (bp < 1) throw validation_error("I2 fiber weights must be >= 1");
    if (b < bp) throw validation_error("I2 fiber weights must satisfy beta >= beta'");
  }
  for (int g : data.gammas)
    if (g < 2) throw validation_error("II fiber weight must be >= 2");
  int lhs = 8 - (data.alpha_total() + data.beta_total() + data.beta_prime_total() +
                 data.gamma_total());
  if (lhs != data.anticanonical_square())
    throw validation_error("degree mismatch: fiber weights contradict the section weights");
  return data;
}

// ---------------------------------------------------------------------------
// Singular fiber graph classification
// ---------------------------------------------------------------------------

struct FiberGraph {
  std::vector<int> self_int;                // per vertex
  std::vector<std::pair<int, int>> edges;   // simple edges
  int section = 0;                          // index of the marked section vertex
};

inline FiberKind classify_fiber_graph(const FiberGraph& graph) {
  const int n = static_cast<int>(graph.self_int.size());
  auto fail = [] { throw input_error("graph does not match any singular-fiber shape"); };
  if (graph.section < 0 || graph.section >= n || n < 2) fail();

  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : graph.edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) fail();
    if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) fail();
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::vector<int> fiber;
  for (int v = 0; v < n; ++v)
    if (v != graph.section) {
      if (graph.self_int[v] != -1 && graph.self_int[v] != -2) fail();
      fiber.push_back(v);
    }

  // Exactly one fiber component meets the section.
  std::vector<int> attach;
  for (int v : adj[graph.section]) attach.push_back(v);
  if (attach.size() != 1) fail();
  const int s0 = attach[0];

  // Fiber part must be connected.
  std::vector<int> stack{s0}, seen(n, 0);
  seen[s0] = 1;
  int reached = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++reached;
    for (int w : adj[v]) {
      if (w == graph.section || seen[w]) continue;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  if (reached != static_cast<int>(fiber.size())) fail();

  auto fiber_degree = [&](int v) {
    int d = 0;
    for (int w : adj[v])
      if (w != graph.section) ++d;
    return d;
  };
  int deg3 = 0, deg_over = 0, minus_ones = 0;
  std::vector<int> endpoints;
  for (int v : fiber) {
    int d = fiber_degree(v);
    if (d == 3) ++deg3;
    if (d > 3) ++deg_over;
    if (d <= 1) endpoints.push_back(v);
    if (graph.self_int[v] == -1) ++minus_ones;
  }
  if (deg_over > 0 || deg3 > 1) fail();

  if (deg3 == 0) {
    // A path. Ends of (-1,-1): I1 if the section sits at an end, I2 inside.
    if (fiber.size() == 1) fail();
    if (endpoints.size() != 2) fail();
    bool ends_minus_one = graph.self_int[endpoints[0]] == -1 &&
                          graph.self_int[endpoints[1]] == -1;
    bool s0_is_end = (s0 == endpoints[0] || s0 == endpoints[1]);
    if (ends_minus_one && minus_ones == 2) {
      if (s0_is_end) return FiberKind::I1;
      if (graph.self_int[s0] == -2) return FiberKind::I2;
      fail();
    }
    // Minimal II shape: (-2) -- (-1) -- (-2) with the section at an end.
    if (fiber.size() == 3 && minus_ones == 1 && s0_is_end &&
        graph.self_int[endpoints[0]] == -2 && graph.self_int[endpoints[1]] == -2) {
      int middle = -1;
      for (int v : fiber)
        if (fiber_degree(v) == 2) middle = v;
      if (middle >= 0 && graph.self_int[middle] == -1) return FiberKind::II;
    }
    fail();
  }

  // One branch vertex: the II shape. The branch vertex is a (-2) carrying
  // two (-2) leaves (one of them meeting the section) and one chain of
  // (-2)s that ends in the unique (-1).
  int w = -1;
  for (int v : fiber)
    if (fiber_degree(v) == 3) w = v;
  if (graph.self_int[w] != -2 || minus_ones != 1) fail();
  int leaf_count = 0;
  bool section_leaf = false, tail_ok = false;
  for (int b : adj[w]) {
    if (b == graph.section) fail();
    if (fiber_degree(b) == 1 && graph.self_int[b] == -2) {
      ++leaf_count;
      if (std::find(adj[b].begin(), adj[b].end(), graph.section) != adj[b].end())
        section_leaf = true;
      continue;
    }
    // Walk the remaining branch: all (-2) until the final (-1).
    int prev = w, cur = b;
    bool ok = true;
    while (true) {
      if (graph.self_int[cur] == -1) {
        ok = ok && fiber_degree(cur) == 1;
        break;
      }
      if (graph.self_int[cur] != -2 || fiber_degree(cur) != 2) {
        ok = false;
        break;
      }
      int next = -1;
      for (int x : adj[cur])
        if (x != prev && x != graph.section) next = x;
      if (next < 0) {
        ok = false;
        break;
      }
      prev = cur;
      cur = next;
    }
    if (ok) tail_ok = true;
  }
  if (leaf_count == 2 && section_leaf && tail_ok) return FiberKind::II;
  fail();
  return FiberKind::II;  // unreachable
}

// ---------------------------------------------------------------------------
// Surface model: the curve configuration of the resolution, assembled from
// the fibration data. Labels: section "D0" (and "Dinf"), general fiber "F"
// (plus "F0" when there is no singular fiber shape to absorb the section
// crossing), fiber components "D<i>_<k>" with the (-1)-tips named "E<i>"
// and "E<i>p".
// ---------------------------------------------------------------------------

struct SurfaceModel {
  FibrationData data;
  CurveConfig config;
  std::vector<std::vector<std::string>> fibers;  // component labels, position order
  std::vector<ExtendedDivisor> fiber_classes;    // with multiplicities
  std::vector<std::string> contracted;

  SurfaceModel(FibrationData d, CurveConfig c) : data(std::move(d)), config(std::move(c)) {}

  bool two_sections() const { return data.condition == Condition::StarStar; }

  FiberKind fiber_kind(int fiber_index) const {  // 0-based
    if (fiber_index < data.r()) return FiberKind::I1;
    if (fiber_index < data.r() + data.s()) return FiberKind::I2;
    return FiberKind::II;
  }

  /// Class of a direct-image divisor class, written on the resolution.
  ExtendedDivisor class_on_resolution(const std::string& s_class) const {
    if (s_class == "Gamma") return branch_section_class();
    if (!config.has(s_class) || config.curve(s_class).contracted)
      throw input_error("unknown direct-image class: " + s_class);
    return ExtendedDivisor::of_curve(s_class);
  }

  /// Total transform: adds the unique correction supported on the contracted
  /// curves that makes the result orthogonal to every contracted curve.
  ExtendedDivisor total_transform(const ExtendedDivisor& divisor) const {
    std::vector<Rational> rhs(contracted.size());
    for (std::size_t k = 0; k < contracted.size(); ++k)
      rhs[k] = -pairing(config, divisor, ExtendedDivisor::of_curve(contracted[k]));
    auto solution = solve_linear_system(contracted_gram_, rhs);
    if (!solution) throw std::logic_error("contracted Gram matrix cannot be singular");
    ExtendedDivisor out = divisor;
    for (std::size_t k = 0; k < contracted.size(); ++k) out.add(contracted[k], (*solution)[k]);
    return out;
  }

  ExtendedDivisor pullback(const std::map<std::string, Rational>& divisor_on_s) const {
    ExtendedDivisor combined;
    for (const auto& [label, coeff] : divisor_on_s)
      combined.add(class_on_resolution(label), coeff);
    return total_transform(combined);
  }

  /// Intersection number of a divisor on the singular surface with the
  /// direct image of a named class, via the projection formula.
  Rational s_pairing(const ExtendedDivisor& pulled_back, const std::string& s_class) const {
    return pairing(config, pulled_back, class_on_resolution(s_class));
  }

  /// The (-1)-section class used by the D5-shaped constructor: a section
  /// disjoint from D0 that crosses each I1 fiber in its far tip.
  ExtendedDivisor branch_section_class() const {
    if (data.condition != Condition::Star || data.s() != 0 || data.t() != 1 ||
        data.gammas[0] != 4)
      throw input_error("branch section class requires the one-section shape with a single II fiber of weight 4");
    ExtendedDivisor gamma = ExtendedDivisor::of_curve("D0");
    gamma.add("F", data.m0);
    for (int i = 0; i < data.r(); ++i)
      for (int lambda = 1; lambda <= data.alphas[i]; ++lambda)
        gamma.add(fibers[i][lambda], Rational(-lambda));
    for (int mu = 1; mu <= 4; ++mu) gamma.add(fibers[data.r()][mu], Rational(-1));
    // The class is used as a (-1)-section; its irreducibility is an input
    // assumption, the numbers are checked here.
    if (pairing(config, gamma, gamma) != -1 ||
        pairing(config, gamma, ExtendedDivisor::anti_canonical()) != 1 ||
        pairing(config, gamma, ExtendedDivisor::of_curve("F")) != 1)
      throw std::logic_error("branch section class fails its intersection checks");
    return gamma;
  }

  /// All direct-image class labels modeled on the singular surface.
  std::vector<std::string> s_class_labels() const {
    std::vector<std::string> labels{"F"};
    if (config.has("F0")) labels.push_back("F0");
    for (const auto& c : config.curves())
      if (!c.contracted && c.label != "F" && c.label != "F0" && c.label != "D0" &&
          c.label != "Dinf")
        labels.push_back(c.label);
    return labels;
  }

  void finalize() {
    for (const auto& c : config.curves())
      if (c.contracted) contracted.push_back(c.label);
    contracted_gram_ = gram_of(config, contracted);
    if (!is_negative_definite(contracted_gram_))
      throw validation_error("contracted curves do not form a negative definite configuration");
    check_fiber_classes();
  }

 private:
  std::vector<std::vector<Rational>> contracted_gram_;

  void check_fiber_classes() const {
    const ExtendedDivisor anti_k = ExtendedDivisor::anti_canonical();
    for (std::size_t i = 0; i < fiber_classes.size(); ++i) {
      const auto& phi = fiber_classes[i];
      if (pairing(config, phi, phi) != 0)
        throw std::logic_error("fiber class must have square zero");
      if (pairing(config, phi, anti_k) != 2)
        throw std::logic_error("fiber class must have anticanonical degree two");
      if (pairing(config, phi, ExtendedDivisor::of_curve("D0")) != 1)
        throw std::logic_error("fiber class must meet the section once");
      if (two_sections() &&
          pairing(config, phi, ExtendedDivisor::of_curve("Dinf")) != 1)
        throw std::logic_error("fiber class must meet the second section once");
      for (const auto& label : fibers[i])
        if (pairing(config, phi, ExtendedDivisor::of_curve(label)) != 0)
          throw std::logic_error("fiber class must be orthogonal to its components");
    }
  }
};

/// Assembles the curve configuration of the resolution from validated
/// fibration data, following the standard dual graphs. Fiber class
/// multiplicities are fixed per shape (I1/I2: all one; II: one on the two
/// leaves, two elsewhere) and then verified against the orthogonality
/// invariants rather than trusted.
inline SurfaceModel build_curve_config(const FibrationData& raw) {
  FibrationData data = validate_fibration(raw);
  const bool twosec = data.condition == Condition::StarStar;
  CurveConfig config(data.anticanonical_square());

  config.add_curve("D0", -data.m0, true);
  if (twosec) config.add_curve("Dinf", -*data.m_inf, true);
  config.add_curve("F", 0, false);
  config.set_meeting("F", "D0");
  if (twosec) config.set_meeting("F", "Dinf");

  const bool needs_marked_fiber = twosec && data.s() == 0 && data.t() == 0;
  if (needs_marked_fiber) {
    // The two sections meet; the fiber through their crossing gets a name.
    config.set_meeting("D0", "Dinf");
    config.add_curve("F0", 0, false);
    config.set_meeting("F0", "D0");
    config.set_meeting("F0", "Dinf");
  }

  SurfaceModel model(data, config);
  auto& cfg = model.config;

  auto comp_label = [](int fiber, int pos, int minus_one_tag) {
    if (minus_one_tag == 1) return "E" + std::to_string(fiber);
    if (minus_one_tag == 2) return "E" + std::to_string(fiber) + "p";
    return "D" + std::to_string(fiber) + "_" + std::to_string(pos);
  };

  int fiber_index = 0;
  for (int i = 0; i < data.r(); ++i, ++fiber_index) {
    const int a = data.alphas[i];
    const int id = fiber_index + 1;
    std::vector<std::string> comps(a + 1);
    for (int pos = 0; pos <= a; ++pos) {
      int tag = (pos == a) ? 1 : (pos == 0 ? 2 : 0);
      comps[pos] = comp_label(id, pos, tag);
      cfg.add_curve(comps[pos], (pos == 0 || pos == a) ? -1 : -2, pos != 0 && pos != a);
    }
    for (int pos = 0; pos < a; ++pos) cfg.set_meeting(comps[pos], comps[pos + 1]);
    cfg.set_meeting("D0", comps[0]);
    if (twosec) cfg.set_meeting("Dinf", comps[a]);
    ExtendedDivisor phi;
    for (const auto& c : comps) phi.add(c, Rational(1));
    model.fibers.push_back(std::move(comps));
    model.fiber_classes.push_back(std::move(phi));
  }

  for (int j = 0; j < data.s(); ++j, ++fiber_index) {
    const auto [b, bp] = data.betas[j];
    const int id = fiber_index + 1;
    std::vector<std::string> comps(b + bp + 1);
    for (int pos = 0; pos <= b + bp; ++pos) {
      int tag = (pos == b) ? 1 : (pos == b + bp ? 2 : 0);
      comps[pos] = comp_label(id, pos, tag);
      cfg.add_curve(comps[pos], (pos == b || pos == b + bp) ? -1 : -2,
                    pos != b && pos != b + bp);
    }
    for (int pos = 1; pos < b; ++pos) cfg.set_meeting(comps[pos], comps[pos + 1]);
    for (int pos = b + 1; pos < b + bp; ++pos) cfg.set_meeting(comps[pos], comps[pos + 1]);
    cfg.set_meeting(comps[0], comps[1]);
    cfg.set_meeting(comps[0], comps[b + 1]);
    cfg.set_meeting("D0", comps[0]);
    if (twosec) cfg.set_meeting("Dinf", comps[b == 1 ? 0 : b - 1]);
    ExtendedDivisor phi;
    for (const auto& c : comps) phi.add(c, Rational(1));
    model.fibers.push_back(std::move(comps));
    model.fiber_classes.push_back(std::move(phi));
  }

  for (int k = 0; k < data.t(); ++k, ++fiber_index) {
    const int g = data.gammas[k];
    const int id = fiber_index + 1;
    std::vector<std::string> comps(g + 1);
    for (int pos = 0; pos <= g; ++pos) {
      int tag = (pos == g) ? 1 : 0;
      comps[pos] = comp_label(id, pos, tag);
      cfg.add_curve(comps[pos], pos == g ? -1 : -2, pos != g);
    }
    cfg.set_meeting(comps[0], comps[2]);
    cfg.set_meeting(comps[1], comps[2]);
    for (int pos = 2; pos < g; ++pos) cfg.set_meeting(comps[pos], comps[pos + 1]);
    cfg.set_meeting("D0", comps[0]);
    if (twosec) cfg.set_meeting("Dinf", comps[g >= 3 ? 1 : 0]);
    ExtendedDivisor phi;
    phi.add(comps[0], Rational(1));
    phi.add(comps[1], Rational(1));
    for (int pos = 2; pos <= g; ++pos) phi.add(comps[pos], Rational(2));
    model.fibers.push_back(std::move(comps));
    model.fiber_classes.push_back(std::move(phi));
  }

  model.finalize();
  return model;
}

/// True iff the formula is numerically a fiber class for the marked section:
/// square zero, anticanonical degree two, meets the section once, and is
/// orthogonal to every curve in its own support.
inline bool fiber_class_check(const CurveConfig& config, const ExtendedDivisor& formula,
                              const std::string& section) {
  for (const auto& [label, coeff] : formula.coeffs) {
    (void)coeff;
    config.id_of(label);
  }
  if (pairing(config, formula, formula) != 0) return false;
  if (pairing(config, formula, ExtendedDivisor::anti_canonical()) != 2) return false;
  if (pairing(config, formula, ExtendedDivisor::of_curve(section)) != 1) return false;
  for (const auto& [label, coeff] : formula.coeffs) {
    (void)coeff;
    if (pairing(config, formula, ExtendedDivisor::of_curve(label)) != 0) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Direct-image rewrite rules: every modeled class on the singular surface
// expands uniquely over a free basis of its rational class group. The basis
// depends on the constructor case.
// ---------------------------------------------------------------------------

enum class CaseTag { DE, D5, A5P, A3A1P, AN, A2 };

inline std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::DE: return "DE";
    case CaseTag::D5: return "D5";
    case CaseTag::A5P: return "A5P";
    case CaseTag::A3A1P: return "A3A1P";
    case CaseTag::AN: return "AN";
    case CaseTag::A2: return "A2";
  }
  return "?";
}

inline CaseTag case_tag_from_string(const std::string& s) {
  if (s == "DE") return CaseTag::DE;
  if (s == "D5") return CaseTag::D5;
  if (s == "A5P") return CaseTag::A5P;
  if (s == "A3A1P") return CaseTag::A3A1P;
  if (s == "AN") return CaseTag::AN;
  if (s == "A2") return CaseTag::A2;
  throw input_error("unknown case tag: " + s);
}

using SDivisor = std::map<std::string, Rational>;

struct RewriteRules {
  CaseTag tag = CaseTag::DE;
  std::vector<std::string> basis;
  std::map<std::string, SDivisor> relations;  // non-basis class -> basis combination

  bool in_basis(const std::string& label) const {
    return std::find(basis.begin(), basis.end(), label) != basis.end();
  }

  /// Expands a divisor into basis coordinates. Rewriting is idempotent by
  /// construction: relation right-hand sides only mention basis labels.
  SDivisor expand(const SDivisor& divisor) const {
    SDivisor out;
    auto accumulate = [&](const std::string& label, const Rational& c) {
      Rational& slot = out[label];
      slot += c;
      if (slot == 0) out.erase(label);
    };
    for (const auto& [label, coeff] : divisor) {
      if (coeff == 0) continue;
      if (in_basis(label)) {
        accumulate(label, coeff);
        continue;
      }
      auto it = relations.find(label);
      if (it == relations.end()) throw input_error("class has no rewrite rule: " + label);
      for (const auto& [b, c] : it->second) accumulate(b, coeff * c);
    }
    return out;
  }
};

inline RewriteRules pushforward_rewrite(CaseTag tag, const FibrationData& raw) {
  FibrationData data = validate_fibration(raw);
  const int r = data.r(), s = data.s(), t = data.t();
  auto mismatch = [&](const char* why) {
    throw input_error(std::string("case/data mismatch: ") + why);
  };
  auto elabel = [](int i) { return "E" + std::to_string(i); };
  auto eplabel = [](int i) { return "E" + std::to_string(i) + "p"; };

  RewriteRules rules;
  rules.tag = tag;

  auto basis_combo_alpha = [&](const Rational& scale) {
    SDivisor combo;
    for (int i = 1; i <= r; ++i) combo[elabel(i)] = scale * data.alphas[i - 1];
    return combo;
  };

  switch (tag) {
    case CaseTag::DE: {
      if (data.condition != Condition::Star) mismatch("DE needs the one-section shape");
      rules.basis.push_back("F");
      for (int i = 1; i <= r + s; ++i) rules.basis.push_back(elabel(i));
      for (int i = 1; i <= r + s; ++i)
        rules.relations[eplabel(i)] = SDivisor{{"F", Rational(1)}, {elabel(i), Rational(-1)}};
      for (int k = 1; k <= t; ++k)
        rules.relations[elabel(r + s + k)] = SDivisor{{"F", Rational(1, 2)}};
      return rules;
    }
    case CaseTag::D5: {
      if (data.condition != Condition::Star || s != 0 || t != 1 || data.gammas[0] != 4)
        mismatch("D5 needs the one-section shape with a single II fiber of weight 4");
      rules.basis.push_back("F");
      for (int i = 1; i <= r; ++i) rules.basis.push_back(elabel(i));
      for (int i = 1; i <= r; ++i)
        rules.relations[eplabel(i)] = SDivisor{{"F", Rational(1)}, {elabel(i), Rational(-1)}};
      rules.relations[elabel(r + 1)] = SDivisor{{"F", Rational(1, 2)}};
      // The branch section: -(sum alpha_i E_i) + (2 alpha - 1) E_{r+1}.
      SDivisor gamma;
      for (int i = 1; i <= r; ++i) gamma[elabel(i)] = Rational(-data.alphas[i - 1]);
      gamma["F"] = Rational(2 * data.alpha_total() - 1, 2);
      rules.relations["Gamma"] = gamma;
      return rules;
    }
    case CaseTag::A5P: {
      if (data.condition != Condition::StarStar || s != 0 || t != 1 || data.gammas[0] != 3)
        mismatch("A5P needs the two-section shape with a single II fiber of weight 3");
      for (int i = 1; i <= r; ++i) rules.basis.push_back(elabel(i));
      Rational inv(2, 2 * data.m0 - 1);
      rules.relations["F"] = basis_combo_alpha(inv);
      rules.relations[elabel(r + 1)] = basis_combo_alpha(inv / 2);
      for (int i = 1; i <= r; ++i) {
        SDivisor rel = basis_combo_alpha(inv);
        rel[elabel(i)] -= 1;
        rules.relations[eplabel(i)] = rel;
      }
      return rules;
    }
    case CaseTag::A3A1P: {
      if (data.condition != Condition::StarStar || s != 0 || t != 1 || data.gammas[0] != 2)
        mismatch("A3A1P needs the two-section shape with a single II fiber of weight 2");
      for (int i = 1; i <= r; ++i) rules.basis.push_back(elabel(i));
      Rational inv(1, data.m0);
      rules.relations["F"] = basis_combo_alpha(inv);
      rules.relations[elabel(r + 1)] = basis_combo_alpha(inv / 2);
      for (int i = 1; i <= r; ++i) {
        SDivisor rel = basis_combo_alpha(inv);
        rel[elabel(i)] -= 1;
        rules.relations[eplabel(i)] = rel;
      }
      return rules;
    }
    case CaseTag::AN: {
      if (data.condition != Condition::StarStar || s != 1 || t != 0 ||
          data.betas[0].second != 1)
        mismatch("AN needs the two-section shape with a single I2 fiber of tip weight 1");
      const int beta = data.betas[0].first;
      if (beta >= 2 && data.m0 != 2)
        throw unsupported_error("single-I2 shape with beta >= 2 requires m0 = 2");
      for (int i = 1; i <= r + 1; ++i) rules.basis.push_back(elabel(i));
      SDivisor f_combo;
      if (beta == 1) {
        f_combo = basis_combo_alpha(Rational(1, data.m0));
      } else {
        f_combo = basis_combo_alpha(Rational(1, 2));
        f_combo[elabel(r + 1)] += Rational(beta - 1, 2);
      }
      rules.relations["F"] = f_combo;
      for (int i = 1; i <= r + 1; ++i) {
        SDivisor rel = f_combo;
        Rational& slot = rel[elabel(i)];
        slot -= 1;
        if (slot == 0) rel.erase(elabel(i));
        rules.relations[eplabel(i)] = rel;
      }
      // Only the I2 fiber carries a second tip besides the I1 fibers.
      for (int i = 1; i <= r; ++i)
        if (!rules.relations.count(eplabel(i))) mismatch("missing tip relation");
      return rules;
    }
    case CaseTag::A2: {
      if (data.condition != Condition::StarStar || s != 0 || t != 0)
        mismatch("A2 needs the two-section shape with only I1 fibers");
      for (int i = 1; i <= r; ++i) rules.basis.push_back(elabel(i));
      SDivisor f_combo = basis_combo_alpha(Rational(1, data.m0 + 1));
      rules.relations["F"] = f_combo;
      rules.relations["F0"] = f_combo;
      for (int i = 1; i <= r; ++i) {
        SDivisor rel = f_combo;
        Rational& slot = rel[elabel(i)];
        slot -= 1;
        if (slot == 0) rel.erase(elabel(i));
        rules.relations[eplabel(i)] = rel;
      }
      return rules;
    }
  }
  throw std::logic_error("unhandled case tag");
}

// ---------------------------------------------------------------------------
// Case selection and Dynkin-type templates (degree-2 Du Val surfaces, where
// both section weights equal 2).
// ---------------------------------------------------------------------------

/// The wide applicability test for the DE constructor: the half-fiber route
/// needs gamma = 0 and beta' >= 3; the full route needs the dimension bound
/// 3 beta' + 2 gamma >= 10.
inline bool de_case_applicable(const FibrationData& data) {
  if (data.condition != Condition::Star) return false;
  int bp = data.beta_prime_total(), g = data.gamma_total();
  if (g == 0) return bp >= 3;
  return 3 * bp + 2 * g >= 10;
}

inline CaseTag select_case(const FibrationData& raw) {
  FibrationData data = validate_fibration(raw);
  if (de_case_applicable(data)) return CaseTag::DE;
  const int s = data.s(), t = data.t();
  if (data.condition == Condition::Star) {
    if (s == 0 && t == 1 && data.gammas[0] == 4) return CaseTag::D5;
    throw unsupported_error("no constructive route for this one-section fibration shape");
  }
  if (s == 0 && t == 1 && data.gammas[0] == 3) return CaseTag::A5P;
  if (s == 0 && t == 1 && data.gammas[0] == 2) return CaseTag::A3A1P;
  if (s == 1 && t == 0 && data.betas[0].second == 1) return CaseTag::AN;
  if (s == 0 && t == 0) return CaseTag::A2;
  throw unsupported_error("no constructive route for this two-section fibration shape");
}

namespace detail {

inline std::vector<DynkinSummand> partition_extras(const std::vector<int>& partition) {
  std::vector<DynkinSummand> extras;
  for (int a : partition) {
    if (a < 1) throw input_error("alpha partition entries must be >= 1");
    if (a > 1) extras.push_back({'A', a - 1});
  }
  std::sort(extras.begin(), extras.end());
  return extras;
}

inline void check_template_partition(const DynkinType& type,
                                     const std::vector<DynkinSummand>& core,
                                     const std::vector<int>& partition, int forced_alpha) {
  int total = 0;
  for (int a : partition) total += a;
  if (total != forced_alpha)
    throw validation_error("alpha partition must sum to " + std::to_string(forced_alpha));
  // The named type may be just the driving singularity (extra chain
  // singularities then come from the partition), or the full type, in which
  // case the partition has to reproduce it exactly.
  std::vector<DynkinSummand> sorted_core = core;
  std::sort(sorted_core.begin(), sorted_core.end());
  if (type.summands == sorted_core) return;
  std::vector<DynkinSummand> expected = core;
  for (const auto& s : partition_extras(partition)) expected.push_back(s);
  std::sort(expected.begin(), expected.end());
  if (type.summands != expected)
    throw validation_error("alpha partition does not reproduce the singularity type");
}

}  // namespace detail

/// Degree-2 fibration templates per singularity type. The partition
/// distributes the I1 fiber weights; its entries above 1 account for the
/// A-type summands beyond the template core.
inline std::pair<FibrationData, CaseTag> template_from_dynkin(const DynkinType& type,
                                                              const std::vector<int>& partition) {
  validate_dynkin(type);
  if (!has_anticanonical_cylinder(2, type))
    throw unsupported_error("no construction: anticanonical cylinder obstruction");
  if (type.total_rank() >= 7)
    throw rho_one_error(
        "Picard rank one: every ample class is a positive multiple of -K; rescale an "
        "anticanonical cylinder divisor instead of running a constructor");

  auto star = [&](std::vector<int> alphas, std::vector<std::pair<int, int>> betas,
                  std::vector<int> gammas) {
    FibrationData d;
    d.condition = Condition::Star;
    d.m0 = 2;
    d.alphas = std::move(alphas);
    d.betas = std::move(betas);
    d.gammas = std::move(gammas);
    return d;
  };
  auto starstar = [&](std::vector<int> alphas, std::vector<std::pair<int, int>> betas,
                      std::vector<int> gammas) {
    FibrationData d = star(std::move(alphas), std::move(betas), std::move(gammas));
    d.condition = Condition::StarStar;
    d.m_inf = 2;
    return d;
  };

  const auto& summands = type.summands;
  auto has = [&](char fam, int rank) {
    return std::any_of(summands.begin(), summands.end(), [&](const DynkinSummand& s) {
      return s.family == fam && s.rank == rank;
    });
  };

  if (has('E', 6)) {
    detail::check_template_partition(type, {{'E', 6}}, partition, 1);
    return {validate_fibration(star(partition, {}, {5})), CaseTag::DE};
  }
  if (has('D', 6)) {
    detail::check_template_partition(type, {{'D', 6}}, partition, 0);
    return {validate_fibration(star({}, {{1, 1}}, {4})), CaseTag::DE};
  }
  if (has('D', 5)) {
    detail::check_template_partition(type, {{'D', 5}}, partition, 2);
    return {validate_fibration(star(partition, {}, {4})), CaseTag::D5};
  }
  if (has('D', 4)) {
    int extra_a1 = 0;
    for (const auto& s : summands)
      if (s.family == 'A' && s.rank == 1) ++extra_a1;
    std::vector<DynkinSummand> core{{'D', 4}};
    for (int i = 0; i < extra_a1; ++i) core.push_back({'A', 1});
    detail::check_template_partition(type, core, partition, 0);
    switch (extra_a1) {
      case 0: return {validate_fibration(star({}, {{1, 1}, {1, 1}, {1, 1}}, {})), CaseTag::DE};
      case 1: return {validate_fibration(star({}, {{1, 1}, {1, 1}}, {2})), CaseTag::DE};
      case 2: return {validate_fibration(star({}, {{1, 1}}, {2, 2})), CaseTag::DE};
      default:
        throw unsupported_error("unrecognized D4 family at degree 2");
    }
  }
  for (const auto& s : summands)
    if (s.family != 'A') throw unsupported_error("unsupported singularity type at degree 2");

  const int max_a = summands.front().rank;  // summands sorted by rank desc
  if (type.prime == PrimeMark::Single) {
    if (max_a == 5) {
      detail::check_template_partition(type, {{'A', 5}}, partition, 3);
      return {validate_fibration(starstar(partition, {}, {3})), CaseTag::A5P};
    }
    if (max_a == 3) {
      detail::check_template_partition(type, {{'A', 3}, {'A', 1}}, partition, 4);
      return {validate_fibration(starstar(partition, {}, {2})), CaseTag::A3A1P};
    }
    throw input_error("prime mark does not match the singularity type");
  }
  if (max_a >= 3 && max_a <= 6) {
    detail::check_template_partition(type, {{'A', max_a}}, partition, 7 - max_a);
    return {validate_fibration(starstar(partition, {{max_a - 2, 1}}, {})), CaseTag::AN};
  }
  if (max_a == 2) {
    detail::check_template_partition(type, {{'A', 2}}, partition, 6);
    return {validate_fibration(starstar(partition, {}, {})), CaseTag::A2};
  }
  throw unsupported_error("unsupported singularity type at degree 2");
}

inline CaseTag select_case(const DynkinType& type) {
  validate_dynkin(type);
  if (!has_anticanonical_cylinder(2, type))
    throw unsupported_error("no construction: anticanonical cylinder obstruction");
  if (type.total_rank() >= 7)
    throw rho_one_error(
        "Picard rank one: every ample class is a positive multiple of -K; rescale an "
        "anticanonical cylinder divisor instead of running a constructor");
  bool has_d5 = false, has_de = false;
  int max_a = 0;
  for (const auto& s : type.summands) {
    if (s.family == 'D' && s.rank == 5) has_d5 = true;
    else if (s.family != 'A') has_de = true;
    else max_a = std::max(max_a, s.rank);
  }
  if (has_d5) return CaseTag::D5;
  if (has_de) return CaseTag::DE;
  if (type.prime == PrimeMark::Single) return max_a == 5 ? CaseTag::A5P : CaseTag::A3A1P;
  if (max_a >= 3) return CaseTag::AN;
  if (max_a == 2) return CaseTag::A2;
  throw unsupported_error("unsupported surface");
}

}  // namespace dpz
