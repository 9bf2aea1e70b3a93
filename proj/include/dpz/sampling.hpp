#pragma once

#include <random>
#include <string>
#include <vector>

#include "dpz/cylinder.hpp"
#include "dpz/fibration.hpp"

namespace dpz {

// Deterministic random instances for the property suites: fibration data per
// constructor case and pseudo-ample inputs that pass every positivity and
// inequality assertion the constructors enforce. The constructions only use
// those assertions, so certificates built from such inputs must verify.

namespace sampling {

inline int pick(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational random_rational(std::mt19937_64& rng, int lo, int hi) {
  return Rational(pick(rng, lo, hi), pick(rng, 1, 4));
}

inline std::vector<int> random_partition(std::mt19937_64& rng, int total) {
  std::vector<int> parts;
  while (total > 0) {
    int part = pick(rng, 1, total);
    parts.push_back(part);
    total -= part;
  }
  return parts;
}

inline FibrationData random_fibration(CaseTag tag, std::mt19937_64& rng) {
  FibrationData d;
  auto fill_alphas = [&](int total) {
    d.alphas = total > 0 ? random_partition(rng, total) : std::vector<int>{};
  };
  switch (tag) {
    case CaseTag::DE: {
      d.condition = Condition::Star;
      for (;;) {
        d.m0 = pick(rng, 2, 5);
        d.betas.clear();
        d.gammas.clear();
        switch (pick(rng, 0, 3)) {
          case 0:  // single heavy II fiber
            d.gammas = {pick(rng, 5, 6)};
            break;
          case 1:  // II fiber plus I2 fibers with beta' >= 2
            d.gammas = {pick(rng, 2, 3)};
            d.betas = {{pick(rng, 2, 3), 2}};
            break;
          case 2:  // two II fibers
            d.gammas = {2, pick(rng, 3, 4)};
            break;
          default:  // no II fibers, beta' >= 3
            d.betas = {{pick(rng, 1, 2), 1}, {pick(rng, 2, 3), 2}};
            break;
        }
        int budget = 4 + d.m0 - d.beta_total() - d.beta_prime_total() - d.gamma_total();
        if (budget < 0) continue;
        fill_alphas(budget);
        if (de_case_applicable(d)) break;
      }
      return validate_fibration(d);
    }
    case CaseTag::D5:
      d.condition = Condition::Star;
      d.m0 = pick(rng, 2, 5);
      d.gammas = {4};
      fill_alphas(d.m0);
      return validate_fibration(d);
    case CaseTag::A5P:
      d.condition = Condition::StarStar;
      d.m0 = pick(rng, 2, 4);
      d.m_inf = pick(rng, 2, 4);
      d.gammas = {3};
      fill_alphas(d.m0 + *d.m_inf - 1);
      return validate_fibration(d);
    case CaseTag::A3A1P:
      d.condition = Condition::StarStar;
      d.m0 = pick(rng, 2, 4);
      d.m_inf = pick(rng, 2, 4);
      d.gammas = {2};
      fill_alphas(d.m0 + *d.m_inf);
      return validate_fibration(d);
    case CaseTag::AN: {
      d.condition = Condition::StarStar;
      int beta = pick(rng, 1, 5);
      if (beta == 1) {
        d.m0 = pick(rng, 2, 4);
        d.m_inf = pick(rng, 2, 4);
        d.betas = {{1, 1}};
        fill_alphas(d.m0 + *d.m_inf);
      } else {
        d.m0 = 2;
        d.m_inf = pick(rng, std::max(2, beta - 3), 5);
        d.betas = {{beta, 1}};
        fill_alphas(3 + *d.m_inf - beta);
      }
      return validate_fibration(d);
    }
    case CaseTag::A2:
      d.condition = Condition::StarStar;
      d.m0 = pick(rng, 2, 4);
      d.m_inf = pick(rng, 2, 4);
      fill_alphas(d.m0 + *d.m_inf + 2);
      return validate_fibration(d);
  }
  throw std::logic_error("unhandled case tag");
}

/// Pseudo-ample input: rejection sampling until every assertion that the
/// constructor enforces holds. Mixes equal-slope and generic proposals so
/// both construction branches get exercised.
inline AmpleInput random_valid_input(CaseTag tag, const SurfaceModel& model,
                                     std::mt19937_64& rng, int max_tries = 4000) {
  const FibrationData& data = model.data;
  const int r = data.r();
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    AmpleInput input;
    const int style = pick(rng, 0, 3);  // 0: equal slopes
    auto slope_coeff = [&](int alpha) {
      if (style == 0) return Rational(alpha) * random_rational(rng, 1, 4);
      return Rational(alpha) * random_rational(rng, style == 1 ? 1 : -1, 5);
    };
    switch (tag) {
      case CaseTag::DE: {
        Rational spread = 0;
        for (int i = 1; i <= r; ++i) {
          Rational b = -random_rational(rng, 1, 5);
          input.coeffs["b" + std::to_string(i)] = b;
          spread += -b;
        }
        for (int j = 1; j <= data.s(); ++j) {
          Rational c = random_rational(rng, -3, 5);
          input.coeffs["c" + std::to_string(j)] = c;
          if (c < 0) spread += -c;
        }
        input.coeffs["a"] = spread + random_rational(rng, 1, 6);
        break;
      }
      case CaseTag::D5: {
        Rational spread = 0;
        Rational q = random_rational(rng, 1, 4);
        for (int i = 1; i <= r; ++i) {
          Rational b = style == 0 ? -Rational(data.alphas[i - 1]) * q
                                  : -random_rational(rng, 1, 5);
          input.coeffs["b" + std::to_string(i)] = b;
          spread += -b;
        }
        input.coeffs["a"] = spread + random_rational(rng, 1, 6);
        break;
      }
      case CaseTag::A5P:
      case CaseTag::A3A1P:
      case CaseTag::A2: {
        Rational q = random_rational(rng, 1, 4);
        for (int i = 1; i <= r; ++i)
          input.coeffs["a" + std::to_string(i)] =
              style == 0 ? Rational(data.alphas[i - 1]) * q : slope_coeff(data.alphas[i - 1]);
        break;
      }
      case CaseTag::AN: {
        Rational q = random_rational(rng, 1, 4);
        for (int i = 1; i <= r; ++i)
          input.coeffs["a" + std::to_string(i)] =
              style == 0 ? Rational(data.alphas[i - 1]) * q : slope_coeff(data.alphas[i - 1]);
        input.coeffs["b"] = random_rational(rng, style == 2 ? -2 : 1, 6);
        break;
      }
    }
    try {
      bool ok = true;
      for (const auto& check :
           ampleness_positivity_report(model, detail::ample_to_sdivisor(tag, data,
                                            detail::extract_coefficients(tag, data, input)),
                                       tag == CaseTag::D5))
        ok = ok && check.pass;
      if (ok)
        for (const auto& check : check_inequalities(tag, model, input)) ok = ok && check.pass;
      if (ok) return input;
    } catch (const input_error&) {
      // malformed proposal; try again
    }
  }
  throw std::logic_error("could not sample a valid ample input");
}

/// Numerical consistency of the rewrite relations: intersection numbers of
/// direct-image classes computed directly (via total transforms) agree with
/// the numbers computed after expanding both classes over the basis.
inline bool rewrite_round_trip_ok(const SurfaceModel& model, const RewriteRules& rules,
                                  std::mt19937_64& rng, int samples = 20) {
  std::vector<std::string> labels = model.s_class_labels();
  if (rules.tag == CaseTag::D5) labels.push_back("Gamma");

  auto transform = [&](const std::string& label) {
    return model.total_transform(model.class_on_resolution(label));
  };
  std::map<std::string, ExtendedDivisor> cache;
  for (const auto& l : labels) cache[l] = transform(l);

  for (int k = 0; k < samples; ++k) {
    const std::string& x = labels[pick(rng, 0, static_cast<int>(labels.size()) - 1)];
    const std::string& y = labels[pick(rng, 0, static_cast<int>(labels.size()) - 1)];
    Rational direct = pairing(model.config, cache[x], cache[y]);
    Rational via_basis = 0;
    for (const auto& [bx, cx] : rules.expand({{x, Rational(1)}}))
      for (const auto& [by, cy] : rules.expand({{y, Rational(1)}}))
        via_basis += cx * cy * pairing(model.config, cache[bx], cache[by]);
    if (direct != via_basis) return false;
  }
  return true;
}

constexpr CaseTag kAllCases[] = {CaseTag::DE,    CaseTag::D5, CaseTag::A5P,
                                 CaseTag::A3A1P, CaseTag::AN, CaseTag::A2};

}  // namespace sampling
}  // namespace dpz
