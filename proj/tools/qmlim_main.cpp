// SPDX-License-Identifier: Apache-2.0
//
// qmlim — load measuring-process models, run verification checks, evaluate
// noise lower bounds, generate conserving ensembles, and construct optimal
// probe states. Exit codes: 0 all checks pass, 1 a check failed, 2 bad input.
#include <CLI11.hpp>

#include "qmlim/io.hpp"
#include "qmlim/models.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace qmlim;

struct GlobalOpts {
  std::optional<double> tol;     // overrides the validation tolerance
  std::uint64_t seed = 0;
  std::string output = "text";   // stdout format
  std::string report_path;       // JSON report file, always JSON
};

// Render to stdout per --output and, if requested, write the JSON report.
// Returns the process exit code.
int emit(Report& r, const GlobalOpts& g) {
  r.finalize();
  const std::string ts = utc_timestamp_now();
  std::cout << (g.output == "json" ? render_report_json(r, ts)
                                   : render_report_text(r, ts));
  if (!g.report_path.empty()) {
    std::ofstream out(g.report_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write report to '" << g.report_path << "'\n";
      return 2;
    }
    out << render_report_json(r, ts);
  }
  return r.passed() ? 0 : 1;
}

bool expect(const std::optional<bool>& e) { return e.value_or(true); }

bool expect_at(const std::vector<bool>& e, std::size_t i) {
  return i < e.size() ? e[i] : true;
}

int cmd_validate(const std::string& path, const GlobalOpts& g) {
  LoadedModel lm = load_model(path, g.tol);
  const NamedModel& m = lm.model;
  const MeasuringProcess& p = m.process;
  const Tolerances& tol = lm.tol;

  Report r;
  r.command = "validate " + path;
  r.model = m.name;
  r.model_checksum = lm.checksum;
  r.seed = g.seed;
  r.tolerance = tol.validation;

  r.checks.push_back(make_check("precise", noise_basis_sup(p, m.observable),
                                tol.validation, expect(m.expected.precise)));
  r.checks.push_back(make_check("nondisturbing",
                                disturbance_basis_sup(p, m.observable),
                                tol.validation, expect(m.expected.nondisturbing)));

  AyResult ay = detect_araki_yanase(p, m.observable, tol);
  const double ay_value =
      ay.ok() ? std::max({ay.decomposition->reconstruction_residual,
                          ay.decomposition->orthogonality_residual,
                          ay.decomposition->meter_residual})
              : ay.failure->witness_norm;
  r.checks.push_back(make_check("araki_yanase", ay_value, 1e-9,
                                expect(m.expected.araki_yanase)));

  RepeatabilityReport rep = check_repeatability(p, m.observable, tol, g.seed);
  r.checks.push_back(make_check("repeatable", rep.max_deviation, tol.validation,
                                expect(m.expected.repeatable)));

  for (std::size_t i = 0; i < m.conserved.size(); ++i) {
    const ConservedPair& c = m.conserved[i];
    r.checks.push_back(make_check("conserved." + std::to_string(i),
                                  conservation_residual(p, c), tol.validation,
                                  expect_at(m.expected.conserved, i)));
    r.checks.push_back(make_check("yanase." + std::to_string(i),
                                  check_yanase(p, c.l2), tol.validation,
                                  expect_at(m.expected.yanase, i)));
  }
  return emit(r, g);
}

int cmd_bound(const std::string& path, int psi_index, const GlobalOpts& g) {
  LoadedModel lm = load_model(path, g.tol);
  const NamedModel& m = lm.model;
  const MeasuringProcess& p = m.process;
  const Tolerances& tol = lm.tol;

  std::vector<std::size_t> pairs;
  for (std::size_t i = 0; i < m.conserved.size(); ++i)
    if (m.conserved[i].kind == LawKind::multiplicative) pairs.push_back(i);
  if (pairs.empty())
    throw ParseError("model '" + m.name +
                     "' has no multiplicative conserved pair; nothing to bound");

  std::vector<Vector> psis = m.psi_list;
  if (psis.empty())
    for (Eigen::Index i = 0; i < p.dim_h(); ++i) {
      Vector e = Vector::Zero(p.dim_h());
      e(i) = 1.0;
      psis.push_back(e);
    }
  std::vector<std::size_t> selected;
  if (psi_index >= 0) {
    if (static_cast<std::size_t>(psi_index) >= psis.size())
      throw ParseError("--psi " + std::to_string(psi_index) + " out of range (" +
                       std::to_string(psis.size()) + " states)");
    selected.push_back(static_cast<std::size_t>(psi_index));
  } else {
    for (std::size_t i = 0; i < psis.size(); ++i) selected.push_back(i);
  }

  Report r;
  r.command = "bound " + path;
  r.model = m.name;
  r.model_checksum = lm.checksum;
  r.seed = g.seed;
  r.tolerance = tol.validation;

  for (std::size_t pi : pairs) {
    const ConservedPair& c = m.conserved[pi];
    const double yres = check_yanase(p, c.l2);
    const bool yanase_holds = yres <= tol.validation;
    for (std::size_t si : selected) {
      const Vector& psi = psis[si];
      BoundRowOut row;
      row.pair = static_cast<int>(pi);
      row.psi = static_cast<int>(si);
      const double eps = rms_noise(p, m.observable, psi);
      row.eps_sq = eps * eps;
      try {
        row.rhs_general = bound_general(p, m.observable, c.l1, c.l2, psi);
        auto rc = ratio_and_cv(c.l2, p.xi(), tol);
        row.ratio_R = rc.first;
        row.cv = rc.second;
        if (yanase_holds)
          row.rhs_yanase = bound_yanase(m.observable, c.l1, c.l2, psi, p.xi(), tol);
      } catch (const KernelState&) {
        row.kernel = true;  // flagged, not fatal: the RHS is undefined here
        r.bound_rows.push_back(row);
        continue;
      }
      double rhs = std::max(row.rhs_general, row.rhs_yanase.value_or(0.0));
      r.checks.push_back(make_check(
          "bound." + std::to_string(pi) + "." + std::to_string(si),
          std::max(0.0, rhs - row.eps_sq), 1e-8));
      r.bound_rows.push_back(row);
    }
  }
  return emit(r, g);
}

int cmd_ensemble(const std::string& dims, int count, bool yanase,
                 const GlobalOpts& g) {
  Eigen::Index dh = 0, dk = 0;
  {
    auto sep = dims.find('x');
    try {
      if (sep == std::string::npos) throw std::invalid_argument(dims);
      dh = std::stol(dims.substr(0, sep));
      dk = std::stol(dims.substr(sep + 1));
    } catch (const std::exception&) {
      throw ParseError("--dims must look like 2x2, got '" + dims + "'");
    }
  }
  std::vector<NamedModel> models = random_model_ensemble(dh, dk, count, g.seed, yanase);

  int bound_violations = 0, hr_violations = 0, theorem_violations = 0;
  double identity_max = 0.0, conservation_max = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const NamedModel& m = models[i];
    WayReport w = verify_way_consistency(m.process, m.observable, m.conserved.front(),
                                         g.seed + static_cast<std::uint64_t>(i));
    conservation_max = std::max(conservation_max, w.conservation_residual);
    if (w.identity_residual) identity_max = std::max(identity_max, *w.identity_residual);
    for (const std::string& v : w.violations) {
      if (v.find("bound violated") != std::string::npos)
        ++bound_violations;
      else if (v.find("Heisenberg-Robertson") != std::string::npos)
        ++hr_violations;
      else
        ++theorem_violations;
    }
  }

  std::ostringstream name;
  name << "ensemble-" << dh << "x" << dk << "-count" << count << "-yanase"
       << (yanase ? 1 : 0);

  Report r;
  r.command = "ensemble --dims " + dims + " --count " + std::to_string(count) +
              (yanase ? " --yanase" : "");
  r.model = name.str();
  r.model_checksum = fnv1a64_hex(name.str());
  r.seed = g.seed;
  r.tolerance = g.tol.value_or(Tolerances{}.validation);

  r.checks.push_back(make_check("bound_violations", bound_violations, 0.0));
  r.checks.push_back(make_check("hr_violations", hr_violations, 0.0));
  r.checks.push_back(make_check("theorem_violations", theorem_violations, 0.0));
  r.checks.push_back(make_check("identity_max_residual", identity_max, 1e-9));
  r.checks.push_back(make_check("max_conservation_residual", conservation_max, 1e-9));
  return emit(r, g);
}

int cmd_optimize(const std::string& path, const std::string& l2_spec,
                 const GlobalOpts& g) {
  Matrix l2;
  Tolerances tol;
  if (g.tol) tol.validation = *g.tol;

  Report r;
  r.seed = g.seed;
  if (!l2_spec.empty()) {
    if (l2_spec.rfind("diag:", 0) != 0)
      throw ParseError("--l2-spec must look like diag:1,2, got '" + l2_spec + "'");
    std::vector<double> diag;
    std::stringstream ss(l2_spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        diag.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError("--l2-spec entry '" + item + "' is not a number");
      }
    }
    if (diag.size() < 2) throw ParseError("--l2-spec needs at least two entries");
    l2 = Matrix::Zero(static_cast<Eigen::Index>(diag.size()),
                      static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i)
      l2(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i];
    r.model = l2_spec;
    r.model_checksum = fnv1a64_hex(l2_spec);
    r.command = "optimize --l2-spec " + l2_spec;
  } else {
    LoadedModel lm = load_model(path, g.tol);
    tol = lm.tol;
    const ConservedPair* mult = nullptr;
    for (const ConservedPair& c : lm.model.conserved)
      if (c.kind == LawKind::multiplicative) {
        mult = &c;
        break;
      }
    if (!mult)
      throw ParseError("model '" + lm.model.name +
                       "' has no multiplicative conserved pair; nothing to optimize");
    l2 = mult->l2;
    r.model = lm.model.name;
    r.model_checksum = lm.checksum;
    r.command = "optimize " + path;
  }
  r.tolerance = tol.validation;

  ProbeOptimum opt = optimal_probe_state(l2, tol);
  auto rc = ratio_and_cv(l2, opt.state, tol);

  OptimumOut out;
  out.l_min = opt.l_min;
  out.l_max = opt.l_max;
  out.p_min = opt.p_min;
  out.p_max = opt.p_max;
  out.r_min = opt.r_min;
  for (Eigen::Index i = 0; i < opt.state.size(); ++i) out.state.push_back(opt.state(i));
  out.ratio_at_state = rc.first;
  out.cv_at_state = rc.second;

  r.checks.push_back(make_check("state_ratio_agreement",
                                std::abs(rc.first - opt.r_min), 1e-9));

  SpectralDecomposition sd = spectral_decompose(operator_modulus(l2, tol), tol);
  if (sd.size() <= 3) {
    out.grid_min = grid_min_ratio(sd.eigenvalues, 1e-3);
    r.checks.push_back(make_check("r_min_grid_agreement",
                                  std::abs(*out.grid_min - opt.r_min), 1e-4));
  }
  r.optimum = out;
  return emit(r, g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum measurement conservation-law verifier"};
  app.require_subcommand(1);

  GlobalOpts g;
  double tol_value = 0.0;
  auto* tol_opt = app.add_option("--tol", tol_value,
                                 "validation tolerance override (default 1e-8)");
  app.add_option("--seed", g.seed, "RNG seed (default 0)");
  app.add_option("--output", g.output, "stdout format: text (default) or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--report", g.report_path, "also write a JSON report to this path");

  std::string model_path, dims = "2x2", l2_spec;
  int psi_index = -1, count = 100;
  bool all_psi = false, yanase = false;

  auto* validate = app.add_subcommand("validate", "run all checks on a model file");
  validate->add_option("model", model_path, "model JSON file")->required();

  auto* bound = app.add_subcommand("bound", "evaluate noise lower bounds");
  bound->add_option("model", model_path, "model JSON file")->required();
  auto* psi_opt = bound->add_option("--psi", psi_index, "object-state index");
  bound->add_flag("--all", all_psi, "all object states (default)")->excludes(psi_opt);

  auto* ensemble = app.add_subcommand("ensemble", "random conserving-model suite");
  ensemble->add_option("--dims", dims, "object x probe dimensions, e.g. 2x2");
  ensemble->add_option("--count", count, "number of models")
      ->check(CLI::NonNegativeNumber);
  ensemble->add_flag("--yanase", yanase, "invertible L2 and a Yanase-compatible meter");

  auto* optimize = app.add_subcommand("optimize", "optimal probe state for |L2|");
  auto* opt_model = optimize->add_option("model", model_path, "model JSON file");
  optimize->add_option("--l2-spec", l2_spec, "inline spectrum, e.g. diag:1,2")
      ->excludes(opt_model);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0; any parse problem is input error
  }
  if (*tol_opt) {
    if (!(tol_value > 0.0)) {
      std::cerr << "error: --tol must be positive\n";
      return 2;
    }
    g.tol = tol_value;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(model_path, g);
    if (app.got_subcommand(bound)) return cmd_bound(model_path, all_psi ? -1 : psi_index, g);
    if (app.got_subcommand(ensemble)) return cmd_ensemble(dims, count, yanase, g);
    if (app.got_subcommand(optimize)) {
      if (model_path.empty() && l2_spec.empty()) {
        std::cerr << "error: optimize needs a model file or --l2-spec\n";
        return 2;
      }
      return cmd_optimize(model_path, l2_spec, g);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
