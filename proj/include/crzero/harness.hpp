#pragma once

// Experiment drivers: Monte Carlo sweeps over the CR and ball ensembles with
// deterministic seeding, plus the kernel growth report.  Each run writes a
// self-contained output directory (config.json, results.csv, summary.json,
// plotdata/*.csv).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crzero/bergman.hpp"
#include "crzero/currents.hpp"

namespace crzero {

struct ExperimentConfig {
  std::string mode = "equidist-cr";
  std::vector<int> weights{1, 1};
  std::vector<int> m_grid{8, 16, 32};   // CR: base indices; szego: Fourier weights
  std::vector<int> k_grid{4, 8, 16};    // boundary shell parameters
  int trials = 50;
  std::uint64_t seed = 20260826;
  std::string f_name = "one";           // CR test function
  std::string phi_name = "one";         // ball boundary test function
  std::string evaluator = "auto";       // auto | roots | weak
  double c_target = 0.25;               // kernel combining threshold
  double c0_factor = 0.5;               // boundary certificate target, as a
                                        // fraction of the asymptotic level
  int grid_level = 24;                  // sphere grid for reference integrals
  int ns = 32, neta = 24, nphi = 48;    // weak-field resolution
  double gap_tol = 0.10;                // pass threshold on the final rel gap
  bool variance = false;                // boundary: also estimate R_k
  std::string out;                      // output directory ("" = no files)
};

// flat key=value config file; '#' starts a comment; lists are comma separated
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);
std::string config_to_json(const ExperimentConfig& cfg);

// named test functions on the sphere
std::function<cplx(const Eigen::VectorXcd&)> named_test_function(const std::string& name);

struct PointSummary {
  int index = 0;          // m or k
  double mean = 0, stderr_ = 0;
  double reference = 0;   // limit value
  double rel_gap = 0;
  double expected = 0;    // finite-m expectation (CR runs)
  double fixed_path = 0;  // trial 0, the same sample path across indices
};

struct ExperimentRecord {
  ExperimentConfig cfg;
  std::string theorem;
  std::vector<PointSummary> points;
  std::vector<std::vector<double>> trial_values;  // per point
  std::vector<std::vector<double>> trial_errs;
  bool pass = false;
  // boundary extras
  std::vector<int> beta_b;      // certified basis cuts per k
  VarianceTable variance;
  // szego extras
  std::string certificate_json;

  void write_outputs() const;  // no-op when cfg.out is empty
};

ExperimentRecord run_equidist_cr(const ExperimentConfig& cfg);
ExperimentRecord run_equidist_boundary(const ExperimentConfig& cfg);
ExperimentRecord run_szego_report(const ExperimentConfig& cfg);

// quick internal consistency suite; returns the number of failures
int run_selftest(bool verbose);

}  // namespace crzero
