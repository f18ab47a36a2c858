#include "crzero/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace crzero {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

double sample_mean(const std::vector<double>& v) {
  KahanSum acc;
  for (double x : v) acc.add(x);
  return acc.value() / double(v.size());
}

double sample_stderr(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  KahanSum acc;
  for (double x : v) acc.add((x - mean) * (x - mean));
  return std::sqrt(acc.value() / (double(v.size()) - 1.0) / double(v.size()));
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "mode") cfg.mode = value;
  else if (key == "weights") cfg.weights = parse_int_list(value);
  else if (key == "m_grid") cfg.m_grid = parse_int_list(value);
  else if (key == "k_grid") cfg.k_grid = parse_int_list(value);
  else if (key == "trials") cfg.trials = std::stoi(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "f") cfg.f_name = value;
  else if (key == "phi") cfg.phi_name = value;
  else if (key == "evaluator") cfg.evaluator = value;
  else if (key == "c_target") cfg.c_target = std::stod(value);
  else if (key == "c0_factor") cfg.c0_factor = std::stod(value);
  else if (key == "grid_level") cfg.grid_level = std::stoi(value);
  else if (key == "ns") cfg.ns = std::stoi(value);
  else if (key == "neta") cfg.neta = std::stoi(value);
  else if (key == "nphi") cfg.nphi = std::stoi(value);
  else if (key == "gap_tol") cfg.gap_tol = std::stod(value);
  else if (key == "variance") cfg.variance = (value == "1" || value == "true");
  else if (key == "out") cfg.out = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("bad config line: " + line);
    apply_config_entry(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return base;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["mode"] = cfg.mode;
  j["weights"] = cfg.weights;
  j["m_grid"] = cfg.m_grid;
  j["k_grid"] = cfg.k_grid;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["f"] = cfg.f_name;
  j["phi"] = cfg.phi_name;
  j["evaluator"] = cfg.evaluator;
  j["c_target"] = cfg.c_target;
  j["c0_factor"] = cfg.c0_factor;
  j["grid_level"] = cfg.grid_level;
  j["ns"] = cfg.ns;
  j["neta"] = cfg.neta;
  j["nphi"] = cfg.nphi;
  j["gap_tol"] = cfg.gap_tol;
  j["variance"] = cfg.variance;
  j["out"] = cfg.out;
  return j.dump(2);
}

std::function<cplx(const Eigen::VectorXcd&)> named_test_function(const std::string& name) {
  if (name == "one") return [](const Eigen::VectorXcd&) { return cplx(1.0, 0.0); };
  if (name == "re12")
    return [](const Eigen::VectorXcd& z) {
      return cplx((z[0] * std::conj(z[1])).real(), 0.0);
    };
  if (name == "rez1")
    return [](const Eigen::VectorXcd& z) { return cplx(z[0].real(), 0.0); };
  if (name == "balance")
    return [](const Eigen::VectorXcd& z) {
      return cplx(std::norm(z[0]) - std::norm(z[1]), 0.0);
    };
  throw std::invalid_argument("unknown test function: " + name);
}

void ExperimentRecord::write_outputs() const {
  if (cfg.out.empty()) return;
  fs::create_directories(cfg.out);
  fs::create_directories(cfg.out + "/plotdata");
  {
    std::ofstream out(cfg.out + "/config.json");
    out << config_to_json(cfg) << "\n";
  }
  {
    std::ofstream out(cfg.out + "/results.csv");
    out.precision(17);
    out << "point_index,trial,value,err_estimate\n";
    for (std::size_t i = 0; i < points.size(); ++i)
      for (std::size_t t = 0; t < trial_values[i].size(); ++t)
        out << points[i].index << "," << t << "," << trial_values[i][t] << ","
            << (t < trial_errs[i].size() ? trial_errs[i][t] : 0.0) << "\n";
  }
  {
    json j;
    j["theorem"] = theorem;
    j["params"] = json::parse(config_to_json(cfg));
    j["per_point"] = json::array();
    for (const auto& p : points) {
      json q;
      q["index"] = p.index;
      q["mean"] = p.mean;
      q["stderr"] = p.stderr_;
      q["reference"] = p.reference;
      q["rel_gap"] = p.rel_gap;
      q["expected"] = p.expected;
      q["fixed_path"] = p.fixed_path;
      j["per_point"].push_back(q);
    }
    j["pass"] = pass;
    if (!beta_b.empty()) j["beta_b"] = beta_b;
    if (!variance.k_values.empty()) {
      j["variance"] = {{"k", variance.k_values},
                       {"R_hat", variance.R_hat},
                       {"stderr", variance.stderr_},
                       {"slope", variance.slope}};
    }
    std::ofstream out(cfg.out + "/summary.json");
    out << j.dump(2) << "\n";
  }
  {
    std::ofstream out(cfg.out + "/plotdata/gap_vs_index.csv");
    out.precision(17);
    out << "index,mean,stderr,reference,rel_gap,expected,fixed_path\n";
    for (const auto& p : points)
      out << p.index << "," << p.mean << "," << p.stderr_ << "," << p.reference
          << "," << p.rel_gap << "," << p.expected << "," << p.fixed_path << "\n";
  }
  if (!variance.k_values.empty()) {
    std::ofstream out(cfg.out + "/plotdata/variance_vs_k.csv");
    out.precision(17);
    out << "k,R_hat,stderr\n";
    for (std::size_t i = 0; i < variance.k_values.size(); ++i)
      out << variance.k_values[i] << "," << variance.R_hat[i] << ","
          << variance.stderr_[i] << "\n";
  }
  if (!certificate_json.empty()) {
    std::ofstream out(cfg.out + "/certificate.json");
    out << certificate_json << "\n";
  }
}

ExperimentRecord run_equidist_cr(const ExperimentConfig& cfg) {
  auto action = WeightedAction::make(cfg.weights);
  if (action.n != 1) throw std::invalid_argument("CR experiments need n = 1");
  auto strat = stratify(action);
  ExperimentRecord rec;
  rec.cfg = cfg;
  rec.theorem = "normalized-zero-current-limit";
  TestFormPackage pkg;
  pkg.f = named_test_function(cfg.f_name);
  QuadratureGrid grid = build_sphere_grid(1, cfg.grid_level);

  std::vector<int> k_list{1};
  if (strat.periods.size() > 1) {
    std::vector<int> probe;
    for (int m : cfg.m_grid) probe.push_back(int(strat.alpha * m));
    auto pts = make_eval_points(action, 201);
    auto cert = find_combining_multiples(action, strat, probe, cfg.c_target, pts);
    if (!cert.found) throw std::runtime_error("no combining multiples found");
    k_list = cert.k_list;
    rec.certificate_json = certificate_to_json(cert, cfg.c_target);
  }
  double levi = levi_pairing_integral(action, grid, pkg.f).real();
  auto f_abs = [&](const Eigen::VectorXcd& z) { return cplx(std::abs(pkg.f(z)), 0); };
  double levi_abs = levi_pairing_integral(action, grid, f_abs).real();
  double lim_c = limit_constant(1, strat.alpha, k_list);
  double reference = lim_c * levi;
  // gap scale guards against references near zero (odd test functions)
  double scale = std::max(std::abs(reference), lim_c * levi_abs);

  for (std::size_t mi = 0; mi < cfg.m_grid.size(); ++mi) {
    int m = cfg.m_grid[mi];
    auto bases = assemble_Am(action, strat, m, k_list);
    bool use_roots;
    if (cfg.evaluator == "roots") use_roots = true;
    else if (cfg.evaluator == "weak") use_roots = false;
    else use_roots = bases.size() == 1;
    ConeField fine, coarse;
    if (!use_roots) {
      ConeFieldSpec spec{cfg.ns, cfg.neta, cfg.nphi, 5e-4};
      ConeFieldSpec half{std::max(8, cfg.ns * 2 / 3), std::max(8, cfg.neta * 2 / 3),
                         std::max(12, cfg.nphi * 2 / 3), 5e-4};
      fine = build_cone_field(action, pkg, m, spec);
      coarse = build_cone_field(action, pkg, m, half);
    }
    std::vector<double> vals(cfg.trials), errs(cfg.trials);
    for (int t = 0; t < cfg.trials; ++t) {
      SeededStream stream{cfg.seed, std::uint64_t(m), std::uint64_t(t)};
      CRSection u = sample_section(bases, stream);
      PairingResult pr = use_roots
                             ? pair_roots(ExtendedSection{action, u}, pkg)
                             : pair_weak(u, fine, coarse);
      vals[t] = pr.value.real() / m;
      errs[t] = pr.err_estimate / m;
    }
    PointSummary p;
    p.index = m;
    p.mean = sample_mean(vals);
    p.stderr_ = sample_stderr(vals, p.mean);
    p.reference = reference;
    p.rel_gap = std::abs(p.mean - reference) / scale;
    p.expected = expected_pairing(action, strat, k_list, m, pkg, grid).real();
    p.fixed_path = vals[0];
    rec.points.push_back(p);
    rec.trial_values.push_back(std::move(vals));
    rec.trial_errs.push_back(std::move(errs));
  }
  rec.pass = !rec.points.empty() && rec.points.back().rel_gap <= cfg.gap_tol;
  rec.write_outputs();
  return rec;
}

ExperimentRecord run_equidist_boundary(const ExperimentConfig& cfg) {
  ExperimentRecord rec;
  rec.cfg = cfg;
  rec.theorem = "boundary-shell-pairing-limit";
  BallModel model;
  auto phi = named_test_function(cfg.phi_name);
  int kmax = *std::max_element(cfg.k_grid.begin(), cfg.k_grid.end());
  BergmanBasis basis = bergman_basis(2, 10 * kmax + 60);
  double c0_target = cfg.c0_factor * boundary_kernel_level(model.N);
  QuadratureGrid grid = build_sphere_grid(1, cfg.grid_level);
  double reference = boundary_limit(model, phi, grid);
  auto phi_abs = [&](const Eigen::VectorXcd& z) { return cplx(std::abs(phi(z)), 0); };
  double ref_abs = std::abs(boundary_limit(model, phi_abs, grid));
  double scale = std::max(std::abs(reference), ref_abs);

  std::vector<std::vector<double>> corrections;
  bool all_certified = true;
  for (std::size_t ki = 0; ki < cfg.k_grid.size(); ++ki) {
    int k = cfg.k_grid[ki];
    BetaCertificate cert = find_beta_k(model, basis, k, c0_target);
    if (!cert.found) {
      all_certified = false;
      rec.beta_b.push_back(-1);
      continue;
    }
    rec.beta_b.push_back(cert.b_k);
    BoundaryFieldSpec spec{cfg.ns, cfg.neta, cfg.nphi, 1e-4};
    BoundaryFieldSpec half{std::max(8, cfg.ns * 2 / 3), std::max(8, cfg.neta * 2 / 3),
                           std::max(12, cfg.nphi * 2 / 3), 1e-4};
    BoundaryField fine = build_boundary_field(k, phi, spec);
    BoundaryField coarse = build_boundary_field(k, phi, half);
    std::vector<double> logP;
    if (cfg.variance) logP = logP_on_field(basis, cert.b_k, fine);
    std::vector<double> vals(cfg.trials), errs(cfg.trials), corr(cfg.trials, 0.0);
    for (int t = 0; t < cfg.trials; ++t) {
      SeededStream stream{cfg.seed, std::uint64_t(k), std::uint64_t(t)};
      BallSection u = sample_ball_section(basis, cert.b_k, stream);
      BoundaryPairing bp = boundary_pair(u, fine, coarse);
      vals[t] = bp.value;
      errs[t] = bp.err_estimate;
      if (cfg.variance) corr[t] = log_kernel_correction(u, fine, logP);
    }
    PointSummary p;
    p.index = k;
    p.mean = sample_mean(vals);
    p.stderr_ = sample_stderr(vals, p.mean);
    p.reference = reference;
    p.rel_gap = std::abs(p.mean - reference) / scale;
    p.fixed_path = vals[0];
    rec.points.push_back(p);
    rec.trial_values.push_back(std::move(vals));
    rec.trial_errs.push_back(std::move(errs));
    if (cfg.variance) {
      rec.variance.k_values.push_back(k);
      std::vector<double> c2(corr.size());
      for (std::size_t i = 0; i < corr.size(); ++i) c2[i] = corr[i] * corr[i];
      double m2 = sample_mean(c2);
      rec.variance.R_hat.push_back(m2);
      rec.variance.stderr_.push_back(sample_stderr(c2, m2));
      corrections.push_back(std::move(corr));
    }
  }
  if (cfg.variance && rec.variance.k_values.size() >= 2) {
    // least squares slope of log R_hat against log k
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int nn = int(rec.variance.k_values.size());
    for (int i = 0; i < nn; ++i) {
      double x = std::log(double(rec.variance.k_values[i]));
      double y = std::log(std::max(rec.variance.R_hat[i], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rec.variance.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  }
  rec.pass = all_certified && !rec.points.empty() &&
             rec.points.back().rel_gap <= cfg.gap_tol;
  rec.write_outputs();
  return rec;
}

ExperimentRecord run_szego_report(const ExperimentConfig& cfg) {
  auto action = WeightedAction::make(cfg.weights);
  if (action.n != 1) throw std::invalid_argument("kernel report needs n = 1");
  auto strat = stratify(action);
  for (int m : cfg.m_grid)
    if (m % strat.alpha != 0)
      throw std::invalid_argument("m_grid entries must be multiples of alpha");
  ExperimentRecord rec;
  rec.cfg = cfg;
  rec.theorem = "kernel-growth-bounds";
  auto pts = make_eval_points(action, 201);
  UpperBoundReport ub = check_upper_bound(action, cfg.m_grid, pts);

  if (!cfg.out.empty()) {
    fs::create_directories(cfg.out + "/plotdata");
    for (int m : cfg.m_grid) {
      SzegoProfile prof = szego_function(action, m, pts);
      std::ofstream out(cfg.out + "/plotdata/kernel_m" + std::to_string(m) + ".csv");
      out.precision(17);
      out << "s,S_m,S_m_normalized\n";
      for (std::size_t i = 0; i < pts.s.size(); ++i)
        out << pts.s[i] << "," << prof.values[i] << "," << prof.normalized[i] << "\n";
    }
  }
  for (std::size_t i = 0; i < cfg.m_grid.size(); ++i) {
    PointSummary p;
    p.index = cfg.m_grid[i];
    p.mean = ub.per_m_max[i];
    p.reference = ub.C_hat;
    p.rel_gap = std::abs(ub.per_m_max[i] - ub.C_hat) / ub.C_hat;
    rec.points.push_back(p);
    rec.trial_values.push_back({});
    rec.trial_errs.push_back({});
  }
  bool cert_ok = true;
  if (strat.periods.size() > 1) {
    auto cert = find_combining_multiples(action, strat, cfg.m_grid, cfg.c_target, pts);
    rec.certificate_json = certificate_to_json(cert, cfg.c_target);
    cert_ok = cert.found;
  }
  rec.pass = ub.stable && cert_ok;
  rec.write_outputs();
  return rec;
}

int run_selftest(bool verbose) {
  int failures = 0;
  auto report = [&](const std::string& name, bool ok) {
    if (!ok) ++failures;
    if (verbose || !ok)
      std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
  };
  // closed form of the free kernel
  {
    auto a = WeightedAction::make({1, 1});
    auto pts = make_eval_points(a, 51);
    double worst = 0.0;
    for (int m = 1; m <= 30; ++m) {
      auto prof = szego_function(a, m, pts);
      double cf = (m + 1) / (2.0 * M_PI * M_PI);
      for (double v : prof.values) worst = std::max(worst, std::abs(v - cf));
    }
    report("free kernel closed form", worst <= 1e-10);
  }
  // orthonormality on the quadrature grid
  {
    auto a = WeightedAction::make({1, 1});
    auto basis = fourier_basis(a, 12);
    QuadratureGrid grid = build_sphere_grid(1, 14);
    double worst = 0.0;
    for (int i = 0; i < basis->dim(); ++i)
      for (int j = i; j < basis->dim(); ++j) {
        KahanSumC acc;
        for (std::size_t q = 0; q < grid.size(); ++q)
          acc.add(grid.weights[q] * basis->eval_element(i, grid.nodes[q]) *
                  std::conj(basis->eval_element(j, grid.nodes[q])));
        worst = std::max(worst, std::abs(acc.value() - (i == j ? 1.0 : 0.0)));
      }
    report("basis orthonormality", worst <= 1e-8);
  }
  // combining multiples for the half-weighted sphere
  {
    auto a = WeightedAction::make({1, 2});
    auto strat = stratify(a);
    auto pts = make_eval_points(a, 101);
    auto cert = find_combining_multiples(a, strat, {8, 16, 24}, 0.25, pts);
    report("combining multiples certificate", cert.found && cert.c_hat > 0);
  }
  // deterministic sampling
  {
    SeededStream s{123, 4, 5};
    auto v1 = sample_unit_sphere(16, s);
    auto v2 = sample_unit_sphere(16, s);
    report("seeded draws replay", (v1 - v2).norm() == 0.0);
  }
  return failures;
}

}  // namespace crzero
