#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dpz/errors.hpp"
#include "dpz/fibration.hpp"

namespace dpz {

// ---------------------------------------------------------------------------
// Polar cylinder certificates.
//
// Given an ample class H on the singular surface, each constructor produces
// an effective divisor D with D ~ H (exactly, over the rewrite basis) whose
// complement is a cylinder. The removed-curve set on the resolution always
// consists of the contracted curves plus the strict transforms of the
// support of D; its shape decides the cylinder kind:
//   Cyl_k    A^1 x (A^1 minus k points): section + general fiber + k full
//            singular fibers removed;
//   CylStar  A^1 x (A^1 minus origin): two horizontal curves + one full
//            fiber + per remaining singular fiber all but one (-1)-tip.
// ---------------------------------------------------------------------------

struct AmpleInput {
  std::map<std::string, Rational> coeffs;
};

struct InequalityCheck {
  std::string id;
  Rational value;
  bool pass = false;
};

struct CylinderCertificate {
  CaseTag case_tag = CaseTag::DE;
  Rational epsilon;  // 0 when the case does not use one
  SDivisor divisor;
  std::set<std::string> removed_curves;
  std::string kind;
  std::vector<std::string> report;
  std::vector<int> slope_order;      // 1-based fiber indices in sorted-slope order
  std::vector<int> negatives_first;  // DE: I2 fiber numbers, negative coefficients first
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool ok = true;

  void add(const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back({name, pass, detail});
    ok = ok && pass;
  }
};

namespace detail {

struct CaseCoefficients {
  Rational a;               // F coefficient (DE, D5)
  std::vector<Rational> e;  // coefficients on the I1 classes, model order
  std::vector<Rational> c;  // DE: coefficients on the I2 classes, model order
  Rational tip;             // AN: coefficient on the I2 tip class
};

inline std::string elabel(int i) { return "E" + std::to_string(i); }
inline std::string eplabel(int i) { return "E" + std::to_string(i) + "p"; }

inline CaseCoefficients extract_coefficients(CaseTag tag, const FibrationData& data,
                                             const AmpleInput& input) {
  std::set<std::string> allowed;
  const int r = data.r();
  switch (tag) {
    case CaseTag::DE:
      allowed.insert("a");
      for (int i = 1; i <= r; ++i) allowed.insert("b" + std::to_string(i));
      for (int j = 1; j <= data.s(); ++j) allowed.insert("c" + std::to_string(j));
      break;
    case CaseTag::D5:
      allowed.insert("a");
      for (int i = 1; i <= r; ++i) allowed.insert("b" + std::to_string(i));
      break;
    case CaseTag::AN:
      allowed.insert("b");
      [[fallthrough]];
    case CaseTag::A5P:
    case CaseTag::A3A1P:
    case CaseTag::A2:
      for (int i = 1; i <= r; ++i) allowed.insert("a" + std::to_string(i));
      break;
  }
  for (const auto& [label, value] : input.coeffs) {
    (void)value;
    if (!allowed.count(label)) throw input_error("ample coefficient label not in the case basis: " + label);
  }
  auto get = [&](const std::string& label) {
    auto it = input.coeffs.find(label);
    return it == input.coeffs.end() ? Rational(0) : it->second;
  };
  CaseCoefficients out;
  if (tag == CaseTag::DE || tag == CaseTag::D5) {
    out.a = get("a");
    for (int i = 1; i <= r; ++i) out.e.push_back(get("b" + std::to_string(i)));
    if (tag == CaseTag::DE)
      for (int j = 1; j <= data.s(); ++j) out.c.push_back(get("c" + std::to_string(j)));
  } else {
    for (int i = 1; i <= r; ++i) out.e.push_back(get("a" + std::to_string(i)));
    if (tag == CaseTag::AN) out.tip = get("b");
  }
  return out;
}

/// H as a divisor in direct-image classes, ready for the rewrite rules.
inline SDivisor ample_to_sdivisor(CaseTag tag, const FibrationData& data,
                                  const CaseCoefficients& coeffs) {
  SDivisor h;
  auto put = [&](const std::string& label, const Rational& v) {
    if (v != 0) h[label] = v;
  };
  const int r = data.r();
  if (tag == CaseTag::DE || tag == CaseTag::D5) put("F", coeffs.a);
  for (int i = 0; i < r; ++i) put(elabel(i + 1), coeffs.e[i]);
  if (tag == CaseTag::DE)
    for (int j = 0; j < data.s(); ++j) put(elabel(r + j + 1), coeffs.c[j]);
  if (tag == CaseTag::AN) put(elabel(r + 1), coeffs.tip);
  return h;
}

struct SlopeView {
  std::vector<int> order;       // 0-based original fiber indices
  std::vector<Rational> coeff;  // sorted
  std::vector<int> alpha;       // sorted
  std::vector<Rational> slope;  // coeff/alpha, ascending
};

inline SlopeView sort_by_slope(const std::vector<Rational>& coeffs,
                               const std::vector<int>& alphas) {
  SlopeView view;
  view.order.resize(coeffs.size());
  std::iota(view.order.begin(), view.order.end(), 0);
  std::stable_sort(view.order.begin(), view.order.end(), [&](int x, int y) {
    return coeffs[x] * alphas[y] < coeffs[y] * alphas[x];
  });
  for (int idx : view.order) {
    view.coeff.push_back(coeffs[idx]);
    view.alpha.push_back(alphas[idx]);
    view.slope.push_back(coeffs[idx] / alphas[idx]);
  }
  return view;
}

/// First 1-based position where the cumulative alpha reaches `threshold`.
inline int pivot_position(const SlopeView& view, int threshold) {
  int cumulative = 0;
  for (std::size_t i = 0; i < view.alpha.size(); ++i) {
    cumulative += view.alpha[i];
    if (cumulative >= threshold) return static_cast<int>(i) + 1;
  }
  throw input_error("fiber weights cannot reach the section weight");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Ampleness-derived assertions
// ---------------------------------------------------------------------------

/// H paired with every modeled curve class on the singular surface; all
/// values must be positive for H to be ample.
inline std::vector<InequalityCheck> ampleness_positivity_report(const SurfaceModel& model,
                                                                const SDivisor& h,
                                                                bool include_branch_section) {
  std::vector<InequalityCheck> out;
  ExtendedDivisor pulled = model.pullback(h);
  auto labels = model.s_class_labels();
  if (include_branch_section) labels.push_back("Gamma");
  for (const auto& label : labels) {
    Rational value = model.s_pairing(pulled, label);
    out.push_back({"positivity:" + label, value, value > 0});
  }
  return out;
}

/// Every inequality that ampleness of H forces for the given case, evaluated
/// on the slope-sorted data. All must pass before construction.
inline std::vector<InequalityCheck> check_inequalities(CaseTag tag, const SurfaceModel& model,
                                                       const AmpleInput& input) {
  const FibrationData& data = model.data;
  auto coeffs = detail::extract_coefficients(tag, data, input);
  std::vector<InequalityCheck> out;
  auto push = [&](const std::string& id, const Rational& value) {
    out.push_back({id, value, value > 0});
  };

  switch (tag) {
    case CaseTag::DE: {
      Rational d = coeffs.a;
      for (const auto& b : coeffs.e) d += b;
      for (const auto& c : coeffs.c)
        if (c < 0) d += c;
      push("de.support_degree", d);
      return out;
    }
    case CaseTag::D5: {
      auto view = detail::sort_by_slope(coeffs.e, data.alphas);
      Rational value = 2 * coeffs.a;
      for (const auto& b : coeffs.e) value += 2 * b;
      value -= view.slope.back();
      push("d5.section_degree", value);
      return out;
    }
    case CaseTag::A5P: {
      auto view = detail::sort_by_slope(coeffs.e, data.alphas);
      int pivot = detail::pivot_position(view, data.m0);
      Rational s = view.slope[pivot - 1];
      Rational sum = 0;
      int cum = 0;
      for (int i = 1; i < pivot; ++i) {
        sum += view.coeff[i - 1];
        cum += view.alpha[i - 1];
        push("a5p.partial_sum[" + std::to_string(i) + "]",
             2 * sum + Rational(2 * (data.m0 - cum) - 1) * s);
      }
      push("a5p.pivot_slope", s);
      return out;
    }
    case CaseTag::A3A1P:
    case CaseTag::A2: {
      const bool a2 = (tag == CaseTag::A2);
      const int threshold = a2 ? data.m0 + 1 : data.m0;
      const std::string prefix = a2 ? "a2" : "a3a1p";
      auto view = detail::sort_by_slope(coeffs.e, data.alphas);
      int pivot = detail::pivot_position(view, threshold);
      Rational s = view.slope[pivot - 1];
      Rational sum = 0;
      int cum = 0;
      for (int i = 1; i < pivot; ++i) {
        sum += view.coeff[i - 1];
        cum += view.alpha[i - 1];
        push(prefix + ".partial_sum[" + std::to_string(i) + "]",
             sum + Rational(threshold - cum) * s);
      }
      push(prefix + ".pivot_slope", s);
      return out;
    }
    case CaseTag::AN: {
      auto view = detail::sort_by_slope(coeffs.e, data.alphas);
      const int beta = data.betas[0].first;
      if (beta == 1) {
        int pivot = detail::pivot_position(view, data.m0);
        Rational s = view.slope[pivot - 1];
        Rational sum = 0;
        int cum = 0;
        for (int i = 1; i < pivot; ++i) {
          sum += view.coeff[i - 1];
          cum += view.alpha[i - 1];
          Rational base = sum + Rational(data.m0 - cum) * s;
          push("an.partial_sum[" + std::to_string(i) + "]", base);
          push("an.partial_sum_tip[" + std::to_string(i) + "]", base + coeffs.tip);
        }
        push("an.pivot_slope", s);
        push("an.pivot_slope_tip", Rational(data.m0) * s + coeffs.tip);
        return out;
      }
      if (!view.alpha.empty()) {
        if (view.alpha[0] > 1) push("an.first_coeff_positive", view.coeff[0]);
        if (data.alpha_total() > 1 && view.alpha[0] == 1)
          push("an.first_two_slopes", view.coeff[0] + view.slope[1]);
        push("an.tip_balance", Rational(beta - 1) * view.slope[0] + coeffs.tip);
      }
      if (beta >= 3) push("an.tip_coeff_positive", coeffs.tip);
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

namespace detail {

struct BuildResult {
  SDivisor divisor;                       // expressed in original fiber labels
  std::optional<Rational> window;         // strict upper bound for epsilon
  std::string kind;
};

inline void add_term(SDivisor& d, const std::string& label, const Rational& v) {
  if (v == 0) return;
  Rational& slot = d[label];
  slot += v;
  if (slot == 0) d.erase(label);
}

inline Rational window_min(std::optional<Rational>& window, const Rational& bound) {
  if (!window || bound < *window) window = bound;
  return bound;
}

}  // namespace detail

/// Builds the certificate for the given case. `eps_override` forces a value
/// of epsilon without self-verification, which deliberately produces an
/// invalid certificate when the value sits outside the open window; it
/// exists so the verifier's boundary behavior can be exercised.
CylinderCertificate construct_certificate(CaseTag tag, const SurfaceModel& model,
                                          const RewriteRules& rules, const AmpleInput& input,
                                          std::optional<Rational> eps_override = std::nullopt);

inline VerifyReport verify_certificate(CaseTag tag, const SurfaceModel& model,
                                       const RewriteRules& rules, const AmpleInput& input,
                                       const CylinderCertificate& cert);

namespace detail {

inline BuildResult build_divisor(CaseTag tag, const SurfaceModel& model,
                                 const CaseCoefficients& coeffs, const SlopeView& view,
                                 const Rational* eps_in, CylinderCertificate& cert) {
  const FibrationData& data = model.data;
  const int r = data.r();
  BuildResult result;

  // Every branch first accumulates the strict epsilon bounds, then evaluates
  // the divisor at epsilon = (chosen or window/2). Bounds come from the
  // dimension-count inequalities and from strict positivity of every
  // support coefficient.
  auto orig = [&](int sorted_pos) { return view.order[sorted_pos] + 1; };  // 1-based fiber id

  switch (tag) {
    case CaseTag::DE: {
      Rational d = coeffs.a;
      for (const auto& b : coeffs.e) d += b;
      std::vector<int> negative, rest;
      for (int j = 0; j < data.s(); ++j) {
        if (coeffs.c[j] < 0) {
          d += coeffs.c[j];
          negative.push_back(j);
        } else {
          rest.push_back(j);
        }
      }
      if (!(d > 0)) throw ampleness_error("de.support_degree", "ampleness assertion failed");
      cert.negatives_first = negative;
      for (int j : rest) cert.negatives_first.push_back(j);
      for (int& j : cert.negatives_first) j += 1;

      Rational q = d / (data.fiber_count() + 1);
      for (int i = 0; i < r; ++i) add_term(result.divisor, eplabel(i + 1), -coeffs.e[i]);
      for (int j : negative) add_term(result.divisor, eplabel(r + j + 1), -coeffs.c[j]);
      for (int j : rest) add_term(result.divisor, elabel(r + j + 1), coeffs.c[j]);
      add_term(result.divisor, "F", q);
      for (int k = 1; k <= r + data.s(); ++k) {
        add_term(result.divisor, elabel(k), q);
        add_term(result.divisor, eplabel(k), q);
      }
      for (int l = 1; l <= data.t(); ++l)
        add_term(result.divisor, elabel(r + data.s() + l), 2 * q);
      result.kind = "Cyl_" + std::to_string(data.fiber_count());
      return result;
    }

    case CaseTag::D5: {
      Rational top = view.slope.back();
      const int m0 = data.m0;
      Rational section_degree = 2 * coeffs.a;
      for (const auto& b : coeffs.e) section_degree += 2 * b;
      section_degree -= top;
      if (!(section_degree > 0))
        throw ampleness_error("d5.section_degree", "ampleness assertion failed");

      result.kind = "CylStar";
      if (view.slope.front() == top) {
        window_min(result.window, section_degree / (2 * m0 - 1));
        Rational eps = eps_in ? *eps_in : *result.window / 2;
        cert.epsilon = eps;
        add_term(result.divisor, "Gamma", -top + eps);
        for (int i = 0; i < r; ++i)
          add_term(result.divisor, elabel(i + 1), Rational(data.alphas[i]) * eps);
        add_term(result.divisor, elabel(r + 1),
                 section_degree - Rational(2 * m0 - 1) * eps);
        return result;
      }
      int below = 0;
      while (view.slope[below] < top) ++below;  // count of slopes strictly under the max
      int alpha_below = 0;
      Rational coeff_below = 0;
      for (int i = 0; i < below; ++i) {
        alpha_below += view.alpha[i];
        coeff_below += view.coeff[i];
      }
      Rational d_below = 2 * coeffs.a + 2 * coeff_below +
                         Rational(2 * (data.alpha_total() - alpha_below)) * top - top;
      Rational denom(2 * m0 - 1 - 2 * alpha_below);
      window_min(result.window, d_below / denom);
      window_min(result.window, top - view.slope[below - 1]);
      Rational eps = eps_in ? *eps_in : *result.window / 2;
      cert.epsilon = eps;
      add_term(result.divisor, "Gamma", -top + eps);
      for (int i = 0; i < below; ++i)
        add_term(result.divisor, eplabel(orig(i)),
                 Rational(view.alpha[i]) * (top - view.slope[i] - eps));
      for (int i = below; i < r; ++i)
        add_term(result.divisor, elabel(orig(i)), Rational(view.alpha[i]) * eps);
      add_term(result.divisor, elabel(r + 1), d_below - denom * eps);
      return result;
    }

    case CaseTag::A5P:
    case CaseTag::A3A1P:
    case CaseTag::A2: {
      // Shared skeleton: the three cases differ in the pivot threshold and
      // in the class that absorbs the leftover degree.
      const int m0 = data.m0;
      const int threshold = (tag == CaseTag::A2) ? m0 + 1 : m0;
      const int pivot = pivot_position(view, threshold);
      const Rational s = view.slope[pivot - 1];
      result.kind = "CylStar";

      const std::string sink = (tag == CaseTag::A2) ? std::string("F0") : elabel(r + 1);
      // Multiplier applied to the sink coefficient per branch.
      auto sink_scale = [&]() -> Rational {
        if (tag == CaseTag::A5P) return Rational(2 * m0 - 1);
        if (tag == CaseTag::A3A1P) return Rational(2 * m0);
        return Rational(m0 + 1);
      };

      if (view.slope.front() == s) {
        window_min(result.window, s);
        Rational eps = eps_in ? *eps_in : *result.window / 2;
        cert.epsilon = eps;
        for (int i = 0; i < r; ++i)
          add_term(result.divisor, elabel(orig(i)),
                   Rational(view.alpha[i]) * (view.slope[i] - s + eps));
        add_term(result.divisor, sink, sink_scale() * (s - eps));
        return result;
      }
      int below = 0;
      while (view.slope[below] < s) ++below;
      int alpha_below = 0;
      Rational coeff_below = 0;
      for (int i = 0; i < below; ++i) {
        alpha_below += view.alpha[i];
        coeff_below += view.coeff[i];
      }
      const Rational remaining(threshold - alpha_below);
      window_min(result.window, s - view.slope.front());
      window_min(result.window, s - view.slope[below - 1]);
      if (tag == CaseTag::A5P) {
        Rational denom(2 * m0 - 1 - 2 * alpha_below);
        window_min(result.window, (coeff_below + denom * s) / denom);
        window_min(result.window, (2 * coeff_below + denom * s) / denom);
      } else {
        window_min(result.window, (coeff_below + remaining * s) / remaining);
      }
      Rational eps = eps_in ? *eps_in : *result.window / 2;
      cert.epsilon = eps;
      for (int i = 0; i < below; ++i)
        add_term(result.divisor, eplabel(orig(i)),
                 Rational(view.alpha[i]) * (s - view.slope[i] - eps));
      for (int i = below; i < r; ++i)
        add_term(result.divisor, elabel(orig(i)),
                 Rational(view.alpha[i]) * (view.slope[i] - s + eps));
      if (tag == CaseTag::A5P) {
        Rational denom(2 * m0 - 1 - 2 * alpha_below);
        add_term(result.divisor, sink, 2 * coeff_below + denom * (s - eps));
      } else if (tag == CaseTag::A3A1P) {
        add_term(result.divisor, sink, 2 * (coeff_below + remaining * (s - eps)));
      } else {
        add_term(result.divisor, sink, coeff_below + remaining * (s - eps));
      }
      return result;
    }

    case CaseTag::AN: {
      const int m0 = data.m0;
      const int beta = data.betas[0].first;
      const Rational b = coeffs.tip;
      result.kind = "CylStar";

      if (beta == 1) {
        const int pivot = pivot_position(view, m0);
        const Rational s = view.slope[pivot - 1];
        if (view.slope.front() == s) {
          window_min(result.window, s);
          window_min(result.window, s + b / m0);
          Rational eps = eps_in ? *eps_in : *result.window / 2;
          cert.epsilon = eps;
          for (int i = 0; i < r; ++i)
            add_term(result.divisor, elabel(orig(i)),
                     Rational(view.alpha[i]) * (view.slope[i] - s + eps));
          add_term(result.divisor, elabel(r + 1), b + Rational(m0) * (s - eps));
          add_term(result.divisor, eplabel(r + 1), Rational(m0) * (s - eps));
          return result;
        }
        int below = 0;
        while (view.slope[below] < s) ++below;
        int alpha_below = 0;
        Rational coeff_below = 0;
        for (int i = 0; i < below; ++i) {
          alpha_below += view.alpha[i];
          coeff_below += view.coeff[i];
        }
        const Rational remaining(m0 - alpha_below);
        window_min(result.window, s - view.slope.front());
        window_min(result.window, s - view.slope[below - 1]);
        window_min(result.window, (coeff_below + b + remaining * s) / remaining);
        window_min(result.window, (coeff_below + remaining * s) / remaining);
        Rational eps = eps_in ? *eps_in : *result.window / 2;
        cert.epsilon = eps;
        for (int i = 0; i < below; ++i)
          add_term(result.divisor, eplabel(orig(i)),
                   Rational(view.alpha[i]) * (s - view.slope[i] - eps));
        for (int i = below; i < r; ++i)
          add_term(result.divisor, elabel(orig(i)),
                   Rational(view.alpha[i]) * (view.slope[i] - s + eps));
        add_term(result.divisor, elabel(r + 1), coeff_below + b + remaining * (s - eps));
        add_term(result.divisor, eplabel(r + 1), coeff_below + remaining * (s - eps));
        return result;
      }

      if (m0 != 2)
        throw unsupported_error("single-I2 constructor with beta >= 2 requires m0 = 2");
      const bool first_positive = view.coeff.empty() || view.coeff[0] > 0;
      if (first_positive) {
        if (view.coeff.empty()) {
          // No I1 fibers at all: the whole degree sits on the I2 tip, and
          // the section weights force beta >= 5 here.
          window_min(result.window, b / (beta - 3));
          Rational eps = eps_in ? *eps_in : *result.window / 2;
          cert.epsilon = eps;
          add_term(result.divisor, elabel(r + 1), b - Rational(beta - 3) * eps);
          add_term(result.divisor, eplabel(r + 1), 2 * eps);
          return result;
        }
        const Rational slope0 = view.slope[0];
        if (beta == 2) {
          window_min(result.window, slope0 + b);
          window_min(result.window, slope0);
          Rational eps = eps_in ? *eps_in : *result.window / 2;
          cert.epsilon = eps;
          for (int i = 0; i < r; ++i)
            add_term(result.divisor, elabel(orig(i)),
                     Rational(view.alpha[i]) * (view.slope[i] - slope0 + eps));
          add_term(result.divisor, elabel(r + 1), slope0 + b - eps);
          add_term(result.divisor, eplabel(r + 1), 2 * (slope0 - eps));
          return result;
        }
        window_min(result.window, slope0);
        if (beta > 3) window_min(result.window, b / (beta - 3));
        Rational eps = eps_in ? *eps_in : *result.window / 2;
        cert.epsilon = eps;
        for (int i = 0; i < r; ++i)
          add_term(result.divisor, elabel(orig(i)),
                   Rational(view.alpha[i]) * (view.slope[i] - eps));
        add_term(result.divisor, elabel(r + 1), b - Rational(beta - 3) * eps);
        add_term(result.divisor, eplabel(r + 1), 2 * eps);
        return result;
      }

      // Leading coefficient <= 0 forces alpha_1 = 1 when the positivity
      // assertions hold.
      if (view.alpha.empty() || view.alpha[0] != 1)
        throw ampleness_error("an.first_coeff_positive", "ampleness assertion failed");
      const Rational a1 = view.coeff[0];
      if (data.alpha_total() == 1) {
        window_min(result.window, (Rational(beta - 1) * a1 + b) / (beta - 2));
        Rational eps = eps_in ? *eps_in : *result.window / 2;
        cert.epsilon = eps;
        add_term(result.divisor, eplabel(orig(0)), -2 * a1 + eps);
        add_term(result.divisor, elabel(r + 1),
                 Rational(beta - 1) * a1 + b - Rational(beta - 2) * eps);
        add_term(result.divisor, eplabel(r + 1), eps);
        return result;
      }
      window_min(result.window, a1 + view.slope[1]);
      if (beta >= 3)
        window_min(result.window, (Rational(beta - 1) * a1 + b) / (beta - 2));
      Rational eps = eps_in ? *eps_in : *result.window / 2;
      cert.epsilon = eps;
      add_term(result.divisor, eplabel(orig(0)), -2 * a1 + eps);
      for (int i = 1; i < r; ++i)
        add_term(result.divisor, elabel(orig(i)),
                 Rational(view.alpha[i]) * (a1 + view.slope[i] - eps));
      add_term(result.divisor, elabel(r + 1),
               Rational(beta - 1) * a1 + b - Rational(beta - 2) * eps);
      add_term(result.divisor, eplabel(r + 1), eps);
      return result;
    }
  }
  throw std::logic_error("unhandled case tag");
}

/// Window recomputation used by the verifier: runs the branch logic without
/// keeping the divisor.
inline std::optional<Rational> epsilon_window(CaseTag tag, const SurfaceModel& model,
                                              const AmpleInput& input) {
  auto coeffs = extract_coefficients(tag, model.data, input);
  auto view = sort_by_slope(coeffs.e, model.data.alphas);
  CylinderCertificate scratch;
  BuildResult r = build_divisor(tag, model, coeffs, view, nullptr, scratch);
  return r.window;
}

}  // namespace detail

inline CylinderCertificate construct_certificate(CaseTag tag, const SurfaceModel& model,
                                                 const RewriteRules& rules,
                                                 const AmpleInput& input,
                                                 std::optional<Rational> eps_override) {
  auto coeffs = detail::extract_coefficients(tag, model.data, input);
  SDivisor h = detail::ample_to_sdivisor(tag, model.data, coeffs);

  CylinderCertificate cert;
  cert.case_tag = tag;

  for (const auto& check : ampleness_positivity_report(model, h, tag == CaseTag::D5)) {
    if (!check.pass)
      throw ampleness_error(check.id, "ampleness assertion failed: " + check.id + " = " +
                                          to_string(check.value));
    cert.report.push_back(check.id);
  }
  for (const auto& check : check_inequalities(tag, model, input)) {
    if (!check.pass)
      throw ampleness_error(check.id, "ampleness assertion failed: " + check.id + " = " +
                                          to_string(check.value));
    cert.report.push_back(check.id);
  }

  auto view = detail::sort_by_slope(coeffs.e, model.data.alphas);
  for (int idx : view.order) cert.slope_order.push_back(idx + 1);

  const Rational forced = eps_override.value_or(Rational(0));
  detail::BuildResult built = detail::build_divisor(tag, model, coeffs, view,
                                                    eps_override ? &forced : nullptr, cert);
  cert.divisor = built.divisor;
  cert.kind = built.kind;

  cert.removed_curves.insert(model.contracted.begin(), model.contracted.end());
  for (const auto& [label, coeff] : cert.divisor)
    if (coeff > 0) cert.removed_curves.insert(label);

  if (!eps_override) {
    VerifyReport report = verify_certificate(tag, model, rules, input, cert);
    if (!report.ok) {
      std::string what = "constructed certificate failed self-verification:";
      for (const auto& c : report.checks)
        if (!c.pass) what += " " + c.name;
      throw std::logic_error(what);
    }
    for (const auto& c : report.checks) cert.report.push_back(c.name);
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Verification: four independent checks.
//  (i)   rewrite-identity: D and H expand to the same basis coordinates;
//  (ii)  support-positive: every stored coefficient is positive;
//  (iii) removed-set: the removed curves are exactly the contracted curves
//        plus the strict transforms of Supp(D), and their shape matches the
//        claimed cylinder kind;
//  (iv)  epsilon-window: epsilon sits strictly inside its admissible window
//        (identically zero for the case that does not use one).
// ---------------------------------------------------------------------------

inline VerifyReport verify_certificate(CaseTag tag, const SurfaceModel& model,
                                       const RewriteRules& rules, const AmpleInput& input,
                                       const CylinderCertificate& cert) {
  VerifyReport report;
  const FibrationData& data = model.data;
  auto coeffs = detail::extract_coefficients(tag, data, input);
  SDivisor h = detail::ample_to_sdivisor(tag, data, coeffs);

  // (i)
  {
    bool pass = false;
    std::string detail_text;
    try {
      pass = rules.expand(cert.divisor) == rules.expand(h);
      if (!pass) detail_text = "divisor and ample class expand differently";
    } catch (const input_error& err) {
      detail_text = err.what();
    }
    report.add("rewrite-identity", pass, detail_text);
  }

  // (ii)
  {
    bool pass = true;
    std::string offender;
    for (const auto& [label, value] : cert.divisor)
      if (!(value > 0)) {
        pass = false;
        offender = label;
        break;
      }
    report.add("support-positive", pass,
               pass ? "" : "nonpositive coefficient on " + offender);
  }

  // (iii)
  {
    std::set<std::string> expected(model.contracted.begin(), model.contracted.end());
    for (const auto& [label, value] : cert.divisor)
      if (value > 0) expected.insert(label);
    bool pass = expected == cert.removed_curves;
    std::string detail_text = pass ? "" : "removed set differs from contracted + Supp(D)";

    if (pass) {
      // Shape of the removed set per cylinder kind.
      const bool star_kind = cert.kind.rfind("Cyl_", 0) == 0;
      auto removed = [&](const std::string& label) { return cert.removed_curves.count(label) != 0; };
      int full_fibers = 0;
      bool partial_ok = true;
      for (const auto& fiber : model.fibers) {
        int missing = 0;
        std::string missing_label;
        for (const auto& compo : fiber)
          if (!removed(compo)) {
            ++missing;
            missing_label = compo;
          }
        if (missing == 0) ++full_fibers;
        else if (missing == 1) {
          if (model.config.curve(missing_label).self_int != -1) partial_ok = false;
        } else partial_ok = false;
      }
      if (star_kind) {
        pass = cert.kind == "Cyl_" + std::to_string(data.fiber_count()) &&
               removed("D0") && removed("F") && full_fibers == data.fiber_count() &&
               !removed("Gamma") && !cert.removed_curves.count("F0");
        if (!pass) detail_text = "removed set does not match the punctured-line pattern";
      } else if (cert.kind == "CylStar") {
        int horizontal = (removed("D0") ? 1 : 0) + (removed("Dinf") ? 1 : 0) +
                         (removed("Gamma") ? 1 : 0);
        int closing = full_fibers + (removed("F") ? 1 : 0) +
                      (cert.removed_curves.count("F0") ? 1 : 0);
        pass = horizontal == 2 && removed("D0") && closing == 1 && partial_ok;
        if (!pass) detail_text = "removed set does not match the punctured-plane pattern";
      } else {
        pass = false;
        detail_text = "unknown cylinder kind: " + cert.kind;
      }
    }
    report.add("removed-set", pass, detail_text);
  }

  // (iv)
  {
    bool pass = false;
    std::string detail_text;
    if (tag == CaseTag::DE) {
      pass = cert.epsilon == 0;
      if (!pass) detail_text = "this case does not use epsilon";
    } else {
      try {
        auto window = detail::epsilon_window(tag, model, input);
        if (!window) {
          detail_text = "no admissible window";
        } else {
          pass = cert.epsilon > 0 && cert.epsilon < *window;
          if (!pass)
            detail_text = "epsilon " + to_string(cert.epsilon) + " outside (0, " +
                          to_string(*window) + ")";
        }
      } catch (const std::exception& err) {
        detail_text = err.what();
      }
    }
    report.add("epsilon-window", pass, detail_text);
  }
  return report;
}

}  // namespace dpz
