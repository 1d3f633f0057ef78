#include "ach/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace ach;

namespace {

std::string out_path(const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  const char* dir = std::getenv("ACH_OUTPUT_DIR");
  return (dir ? std::string(dir) + "/" : std::string()) + fallback;
}

std::string with_lambda_suffix(const std::string& path, const std::string& lam, bool multi) {
  if (!multi) return path;
  auto dot = path.rfind('.');
  std::string tag = "_lambda" + lam;
  for (auto& c : tag)
    if (c == '/' || c == '\\') c = '_';
  if (dot == std::string::npos) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

int run_solve(const std::string& bgspec, int order, const std::vector<std::string>& lambdas,
              const std::string& mode_s, double tol, const std::string& output, bool csv, bool verify_steps,
              bool check_variations) {
  Mode mode = mode_s == "float" ? Mode::Float : Mode::Exact;
  Background bg = io::parse_background(bgspec, mode, 1e-10);
  bool multi = lambdas.size() > 1;
  int exit_code = 0;
  for (const auto& ls : lambdas) {
    SolveConfig cfg;
    cfg.order = order;
    cfg.tolerance = tol;
    cfg.verify_steps = verify_steps;
    cfg.check_variation_matrix = check_variations;
    cfg.lambda = mode == Mode::Exact ? Scalar::exact(parse_rational(ls))
                                     : Scalar::flt({std::stod(ls), 0.0});
    SolveResult res = solve(bg, cfg);
    std::string path = with_lambda_suffix(out_path(output, "solve.json"), ls, multi);
    io::write_file(path, io::solve_result_to_json(res));
    if (csv) io::write_file(path + ".csv", io::residuals_to_csv(res));
    std::cout << "solve lambda=" << ls << " order=" << order
              << " einstein_max=" << res.einstein_max << " weyl_below6_max=" << res.weyl_below6_max
              << " step_residual_max=" << res.step_residual_max << " -> " << path << "\n";
    if (mode == Mode::Float && res.step_residual_max > tol) {
      std::cerr << "verification residual " << res.step_residual_max << " above tolerance " << tol
                << "; raise the grid resolution, shrink the chart perturbation, or lower the order\n";
      exit_code = 2;
    }
  }
  return exit_code;
}

int run_gjms(const std::string& from, int k, const std::string& fspec, const std::string& output,
             int selfadjoint_basis, double tol) {
  Background bg;
  SolveResult res = io::solve_result_from_json(io::read_file(from), &bg);
  FieldValue f = io::parse_test_function(fspec, bg);
  GjmsOutput out = gjms_apply(bg, res, k, f);
  double defect = -1.0;
  if (selfadjoint_basis > 0) {
    std::vector<FieldValue> basis;
    for (int i = 0; i < selfadjoint_basis; ++i) {
      int kx = i % 2, ky = (i / 2) % 2, kt = (i / 4) % 2;
      basis.push_back(io::parse_test_function(
          "fourier:" + std::to_string(kx) + "," + std::to_string(ky) + "," + std::to_string(kt), bg));
    }
    auto m = gjms_matrix(bg, res, k, basis);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = 0; j < m.size(); ++j) {
        num = std::max(num, std::abs(m[i][j] - std::conj(m[j][i])));
        den = std::max(den, std::abs(m[i][j]));
      }
    defect = num / std::max(den, 1e-300);
  }
  std::string path = out_path(output, "gjms.json");
  io::write_file(path, io::gjms_output_to_json(k, res.lambda, out, defect));
  std::cout << "gjms k=" << k << " -> " << path << "\n";
  if (defect >= 0 && defect > tol) {
    std::cerr << "self-adjointness defect above tolerance\n";
    return 2;
  }
  return 0;
}

int run_verify(const std::string& from, double tol, const std::string& output) {
  Background bg;
  SolveResult res = io::solve_result_from_json(io::read_file(from), &bg);
  VerifyReport rep = verify(bg, res);
  std::ostringstream os;
  os << "{\n \"einstein_max\": " << rep.einstein_max << ",\n \"weyl_below6_max\": " << rep.weyl_below6_max
     << ",\n \"weyl_total_max\": " << rep.weyl_total_max << ",\n \"evenness_max\": " << rep.evenness_max
     << ",\n \"eta_defect\": " << rep.eta_defect << ",\n \"pass\": " << (rep.pass(tol) ? "true" : "false")
     << "\n}\n";
  if (!output.empty()) io::write_file(output, os.str());
  std::cout << os.str();
  return rep.pass(tol) ? 0 : 2;
}

int run_indicial(long kmax, const std::string& probe_from, const std::string& output) {
  DetCheckReport rep = det_product_check(kmax);
  GrowthProbe probe;
  bool has_probe = false;
  if (!probe_from.empty()) {
    Background bg;
    SolveResult res = io::solve_result_from_json(io::read_file(probe_from), &bg);
    probe = growth_probe(res);
    has_probe = true;
  }
  std::string path = out_path(output, "indicial.json");
  io::write_file(path, io::indicial_report_to_json(rep, has_probe ? &probe : nullptr));
  std::cout << "indicial kmax=" << kmax << " all_equal=" << rep.all_equal
            << " all_nonzero=" << rep.all_nonzero << " -> " << path << "\n";
  return rep.all_equal && rep.all_nonzero ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Formal-series solver for self-dual Einstein ACH metrics and CR GJMS operators"};
  app.require_subcommand(1);

  std::string bgspec, output, mode = "exact", from, fspec = "const:1,0", probe_from;
  std::vector<std::string> lambdas{"0"};
  int order = 10, k = 1, selfadjoint = 0;
  long kmax = 200;
  double tol = 1e-8;
  bool csv = false, no_verify = false, check_var = false;

  auto* solve_cmd = app.add_subcommand("solve", "construct the Einstein metric jet");
  solve_cmd->add_option("--background", bgspec, "built-in name or spec file")->required();
  solve_cmd->add_option("--order", order, "truncation order (>= 9)");
  solve_cmd->add_option("--lambda", lambdas, "one or more lambda values");
  solve_cmd->add_option("--mode", mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  solve_cmd->add_option("--tolerance", tol, "float verification tolerance");
  solve_cmd->add_option("--output", output, "output JSON path");
  solve_cmd->add_flag("--csv", csv, "also write the residual table as CSV");
  solve_cmd->add_flag("--no-verify-steps", no_verify, "skip per-step verification");
  solve_cmd->add_flag("--check-variations", check_var, "probe the step matrices against finite perturbations");

  auto* gjms_cmd = app.add_subcommand("gjms", "apply a CR GJMS operator on a solved metric");
  gjms_cmd->add_option("--from", from, "solve result JSON")->required();
  gjms_cmd->add_option("--k", k, "operator level (P_{2k})")->required();
  gjms_cmd->add_option("--f", fspec, "test function spec");
  gjms_cmd->add_option("--selfadjoint-basis", selfadjoint, "Fourier basis size for the pairing check");
  gjms_cmd->add_option("--tolerance", tol, "self-adjointness tolerance");
  gjms_cmd->add_option("--output", output, "output JSON path");

  auto* verify_cmd = app.add_subcommand("verify", "re-verify a solve result");
  verify_cmd->add_option("--from", from, "solve result JSON")->required();
  verify_cmd->add_option("--tolerance", tol, "pass/fail tolerance");
  verify_cmd->add_option("--output", output, "report path");

  auto* ind_cmd = app.add_subcommand("indicial", "indicial pencil checks and growth probe");
  ind_cmd->add_option("--kmax", kmax, "check determinants for k = 0..kmax");
  ind_cmd->add_option("--probe", probe_from, "solve result JSON for the growth probe");
  ind_cmd->add_option("--output", output, "output JSON path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed())
      return run_solve(bgspec, order, lambdas, mode, tol, output, csv, !no_verify, check_var);
    if (gjms_cmd->parsed()) return run_gjms(from, k, fspec, output, selfadjoint, tol);
    if (verify_cmd->parsed()) return run_verify(from, tol, output);
    if (ind_cmd->parsed()) return run_indicial(kmax, probe_from, output);
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const EngineError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
