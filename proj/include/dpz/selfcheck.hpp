#pragma once

#include <random>
#include <string>
#include <vector>

#include "dpz/lattice.hpp"
#include "dpz/sampling.hpp"

namespace dpz {

struct SelfCheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// The randomized invariant suite behind the `selfcheck` subcommand.
/// Deterministic for a fixed seed.
inline std::vector<SelfCheckResult> run_selfcheck(std::uint64_t seed, int per_case = 50) {
  std::vector<SelfCheckResult> results;
  auto record = [&](const std::string& name, bool pass, const std::string& detail = "") {
    results.push_back({name, pass, detail});
  };
  std::mt19937_64 rng(seed);

  {
    Dp2Lattice lattice;
    bool counts = lattice.minus_one_classes().size() == 56 && lattice.roots().size() == 126;
    record("lattice-class-counts", counts,
           counts ? "56 and 126"
                  : std::to_string(lattice.minus_one_classes().size()) + " and " +
                        std::to_string(lattice.roots().size()));

    bool closed = true;
    for (int k = 0; k < 20 && closed; ++k) {
      const auto& roots = lattice.roots();
      const auto& units = lattice.minus_one_classes();
      const LatticeClass& mirror = roots[sampling::pick(rng, 0, 125)];
      const LatticeClass& u = units[sampling::pick(rng, 0, 55)];
      const LatticeClass& r = roots[sampling::pick(rng, 0, 125)];
      LatticeClass ru = reflect(u, mirror), rr = reflect(r, mirror);
      closed = std::binary_search(units.begin(), units.end(), ru) && lattice.is_root(rr);
    }
    record("weyl-reflection-closure", closed);
  }

  {
    bool ok = true;
    std::string detail;
    for (int n = 1; n <= 12 && ok; ++n) {
      CurveConfig chain = an_chain_config(n);
      std::vector<std::string> support;
      for (int j = 1; j <= n; ++j) support.push_back("D" + std::to_string(j));
      for (int ell = 1; ell <= n && ok; ++ell) {
        auto closed_form = bl_divisor(n, ell);
        auto solved = solve_prescribed_pairing(chain, support,
                                               {{support[ell - 1], Rational(-1)}});
        ExtendedDivisor direct;
        for (int j = 1; j <= n; ++j) direct.add(support[j - 1], closed_form.coefficients[j - 1]);
        ok = solved.coeffs == direct.coeffs &&
             pairing(chain, direct, direct) == closed_form.self_int;
        if (!ok) detail = "n=" + std::to_string(n) + " ell=" + std::to_string(ell);
      }
    }
    record("chain-correction-closed-form", ok, detail);
  }

  {
    bool ok = true;
    for (int k = 0; k < 100 && ok; ++k) {
      int n = sampling::pick(rng, 1, 10);
      std::vector<long long> weights;
      for (int j = 0; j < n; ++j) weights.push_back(sampling::pick(rng, 1, 6));
      CurveConfig chain = an_chain_config(n);
      ExtendedDivisor d;
      for (int j = 1; j <= n; ++j) d.add("D" + std::to_string(j), Rational(weights[j - 1]));
      ok = pairing(chain, d, d) == an_weighted_self_intersection(weights);
    }
    record("weighted-chain-formula", ok);
  }

  for (CaseTag tag : sampling::kAllCases) {
    bool round_trip = true;
    bool sound = true;
    std::string detail;
    for (int k = 0; k < per_case && sound && round_trip; ++k) {
      FibrationData data = sampling::random_fibration(tag, rng);
      SurfaceModel model = build_curve_config(data);
      RewriteRules rules = pushforward_rewrite(tag, data);
      if (!sampling::rewrite_round_trip_ok(model, rules, rng, 10)) {
        round_trip = false;
        break;
      }
      AmpleInput input = sampling::random_valid_input(tag, model, rng);
      try {
        CylinderCertificate cert = construct_certificate(tag, model, rules, input);
        VerifyReport report = verify_certificate(tag, model, rules, input, cert);
        if (!report.ok) {
          sound = false;
          for (const auto& c : report.checks)
            if (!c.pass) detail += c.name + " ";
        }
      } catch (const std::exception& err) {
        sound = false;
        detail = err.what();
      }
    }
    record("rewrite-round-trip:" + to_string(tag), round_trip);
    record("constructor-soundness:" + to_string(tag), sound, detail);
  }

  return results;
}

}  // namespace dpz
