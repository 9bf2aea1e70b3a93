// Command-line front end: validates surface descriptions, constructs and
// verifies polar cylinder certificates, and exposes the lattice search
// utilities. All file formats are JSON with rationals as "p/q" strings.
//
// Exit codes: 0 success, 1 verification failure, 2 validation failure,
// 3 parse error, 4 ampleness assertion failure, 5 unsupported surface.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpz/json_io.hpp"
#include "dpz/selfcheck.hpp"

namespace {

using namespace dpz;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitParse = 3;
constexpr int kExitAmpleness = 4;
constexpr int kExitUnsupported = 5;

json parse_inline_or_file(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '[' || arg.front() == '{')) return json::parse(arg);
  return load_json_file(arg);
}

int cmd_validate(const std::string& surface_path) {
  SurfaceSpec spec = surface_spec_from_json(load_json_file(surface_path));
  ResolvedSurface resolved = resolve_surface(spec);
  json out;
  out["fibration"] = fibration_to_json(resolved.data);
  out["anticanonical_square"] = resolved.data.anticanonical_square();
  out["case"] = resolved.case_tag ? json(to_string(*resolved.case_tag)) : json(nullptr);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

struct LoadedProblem {
  ResolvedSurface resolved;
  SurfaceModel model;
  RewriteRules rules;
  AmpleInput ample;
  CaseTag tag;
};

LoadedProblem load_problem(const std::string& surface_path, const std::string& ample_path) {
  SurfaceSpec spec = surface_spec_from_json(load_json_file(surface_path));
  ResolvedSurface resolved = resolve_surface(spec);
  if (!resolved.case_tag) {
    if (spec.fibration) select_case(resolved.data);  // throws the precise reason
    throw unsupported_error("unsupported surface");
  }
  CaseTag tag = *resolved.case_tag;
  return LoadedProblem{resolved, build_curve_config(resolved.data),
                       pushforward_rewrite(tag, resolved.data),
                       ample_from_json(load_json_file(ample_path)), tag};
}

int cmd_construct(const std::string& surface_path, const std::string& ample_path,
                  const std::string& out_path) {
  LoadedProblem problem = load_problem(surface_path, ample_path);
  CylinderCertificate cert =
      construct_certificate(problem.tag, problem.model, problem.rules, problem.ample);
  std::string text = certificate_to_json(cert).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    std::cout << "wrote certificate (" << cert.kind << ", case " << to_string(problem.tag)
              << ") to " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_verify(const std::string& surface_path, const std::string& ample_path,
               const std::string& cert_path) {
  LoadedProblem problem = load_problem(surface_path, ample_path);
  CylinderCertificate cert = certificate_from_json(load_json_file(cert_path));
  if (cert.case_tag != problem.tag) {
    json out;
    out["ok"] = false;
    out["error"] = "certificate case does not match the surface";
    std::cout << out.dump(2) << "\n";
    return kExitVerifyFailed;
  }
  VerifyReport report =
      verify_certificate(problem.tag, problem.model, problem.rules, problem.ample, cert);
  json checks = json::array();
  for (const auto& check : report.checks) {
    json c;
    c["name"] = check.name;
    c["pass"] = check.pass;
    if (!check.detail.empty()) c["detail"] = check.detail;
    checks.push_back(c);
  }
  json out;
  out["ok"] = report.ok;
  out["checks"] = checks;
  std::cout << out.dump(2) << "\n";
  return report.ok ? kExitOk : kExitVerifyFailed;
}

int cmd_table1(bool as_json) {
  if (as_json) {
    json rows = json::array();
    for (int n = 1; n <= 7; ++n) {
      json row = json::array();
      for (int ell = 1; ell <= n; ++ell) row.push_back(to_string(bl_divisor(n, ell).self_int));
      rows.push_back(row);
    }
    std::cout << json{{"self_intersections", rows}}.dump(2) << "\n";
    return kExitOk;
  }
  for (int n = 1; n <= 7; ++n) {
    std::cout << "n=" << n << ":";
    for (int ell = 1; ell <= n; ++ell) std::cout << " " << to_string(bl_divisor(n, ell).self_int);
    std::cout << "\n";
  }
  return kExitOk;
}

int cmd_enumerate(const std::string& kind) {
  Dp2Lattice lattice;
  ClassKind k;
  if (kind == "minus-one")
    k = ClassKind::MinusOne;
  else if (kind == "root")
    k = ClassKind::Root;
  else
    throw input_error("kind must be \"minus-one\" or \"root\"");
  const auto& classes = lattice.classes(k);
  json arr = json::array();
  for (const auto& c : classes) arr.push_back(lattice_class_to_json(c));
  json out;
  out["kind"] = kind;
  out["count"] = classes.size();
  out["classes"] = arr;
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_search_special(const std::string& chain_arg, const std::string& extras_arg) {
  Dp2Lattice lattice;
  std::vector<LatticeClass> chain, extras;
  for (const auto& entry : parse_inline_or_file(chain_arg))
    chain.push_back(lattice_class_from_json(entry));
  if (!extras_arg.empty())
    for (const auto& entry : parse_inline_or_file(extras_arg))
      extras.push_back(lattice_class_from_json(entry));
  SpecialCurvePattern pattern = special_curve_search(lattice, chain, extras);
  json witnesses = json::array();
  for (const auto& w : pattern.witnesses) witnesses.push_back(lattice_class_to_json(w));
  json out;
  out["kind"] = pattern.kind == PatternKind::A   ? "A"
                : pattern.kind == PatternKind::B ? "B"
                                                 : "C";
  out["witnesses"] = witnesses;
  if (pattern.isolated_root) out["isolated_root"] = lattice_class_to_json(*pattern.isolated_root);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_selfcheck(std::uint64_t seed, int per_case, bool as_json) {
  auto results = run_selfcheck(seed, per_case);
  bool all = true;
  if (as_json) {
    json arr = json::array();
    for (const auto& r : results) {
      json entry;
      entry["name"] = r.name;
      entry["pass"] = r.pass;
      if (!r.detail.empty()) entry["detail"] = r.detail;
      arr.push_back(entry);
      all = all && r.pass;
    }
    std::cout << json{{"seed", seed}, {"results", arr}, {"ok", all}}.dump(2) << "\n";
  } else {
    for (const auto& r : results) {
      std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name;
      if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
      std::cout << "\n";
      all = all && r.pass;
    }
    std::cout << (all ? "selfcheck passed" : "selfcheck FAILED") << " (seed " << seed << ")\n";
  }
  return all ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar cylinder certificates on Du Val del Pezzo surfaces of degree two"};
  app.require_subcommand(1);

  std::string surface_path, ample_path, out_path, cert_path, kind, chain_arg, extras_arg;
  bool as_json = false;
  std::uint64_t seed = 20240001;
  int per_case = 50;

  auto* validate = app.add_subcommand("validate", "validate a surface description");
  validate->add_option("-i,--surface", surface_path, "surface JSON file")->required();

  auto* construct = app.add_subcommand("construct", "construct a polar cylinder certificate");
  construct->add_option("-i,--surface", surface_path, "surface JSON file")->required();
  construct->add_option("-H,--ample", ample_path, "ample class JSON file")->required();
  construct->add_option("-o,--out", out_path, "output certificate path (default: stdout)");

  auto* verify = app.add_subcommand("verify", "verify a certificate against a surface and ample class");
  verify->add_option("-i,--surface", surface_path, "surface JSON file")->required();
  verify->add_option("-H,--ample", ample_path, "ample class JSON file")->required();
  verify->add_option("-c,--cert", cert_path, "certificate JSON file")->required();

  auto* table1 = app.add_subcommand("table1", "chain-correction self-intersection table, n = 1..7");
  table1->add_flag("--json", as_json, "machine-readable output");

  auto* enumerate = app.add_subcommand("enumerate", "enumerate lattice classes");
  enumerate->add_option("kind", kind, "minus-one or root")->required();

  auto* search = app.add_subcommand("search-special", "search special (-1)-class patterns on a root chain");
  search->add_option("--chain", chain_arg, "JSON array of 8-vectors (inline or file)")->required();
  search->add_option("--extras", extras_arg, "candidate isolated roots (inline or file)");

  auto* selfcheck = app.add_subcommand("selfcheck", "run the randomized invariant suite");
  selfcheck->add_option("--seed", seed, "random seed (env DPZ_SEED overrides)");
  selfcheck->add_option("--per-case", per_case, "instances per constructor case");
  selfcheck->add_flag("--json", as_json, "machine-readable output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(surface_path);
    if (construct->parsed()) return cmd_construct(surface_path, ample_path, out_path);
    if (verify->parsed()) return cmd_verify(surface_path, ample_path, cert_path);
    if (table1->parsed()) return cmd_table1(as_json);
    if (enumerate->parsed()) return cmd_enumerate(kind);
    if (search->parsed()) return cmd_search_special(chain_arg, extras_arg);
    if (selfcheck->parsed()) {
      if (const char* env = std::getenv("DPZ_SEED")) seed = std::strtoull(env, nullptr, 10);
      return cmd_selfcheck(seed, per_case, as_json);
    }
  } catch (const dpz::json::exception& err) {
    std::cerr << "parse error: " << err.what() << "\n";
    return kExitParse;
  } catch (const dpz::ampleness_error& err) {
    std::cerr << "ampleness assertion failed: " << err.check_id << ": " << err.what() << "\n";
    return kExitAmpleness;
  } catch (const dpz::rho_one_error& err) {
    std::cerr << "unsupported: " << err.what() << "\n";
    return kExitUnsupported;
  } catch (const dpz::unsupported_error& err) {
    std::cerr << "unsupported: " << err.what() << "\n";
    return kExitUnsupported;
  } catch (const dpz::input_error& err) {
    std::cerr << "invalid input: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
