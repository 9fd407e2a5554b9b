// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qmlim/models.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qmlim {

// A model file plus the tolerances it selected and its content checksum.
struct LoadedModel {
  NamedModel model;
  Tolerances tol;
  std::string checksum;  // "fnv1a64:<16 hex digits>" over the file bytes
};

// Parse and validate a model JSON file (schema_version "1"); any structural,
// dimensional, or Hermiticity/unitarity problem throws ParseError with
// context. validation_override replaces the validation tolerance (CLI --tol).
LoadedModel load_model(const std::string& path,
                       std::optional<double> validation_override = std::nullopt);

// Serialize a model back to the same schema (shortest round-trip doubles, so
// load(save(m)) reproduces the matrices bit-exactly).
void save_model(const std::string& path, const NamedModel& m);

// One pass/fail row of a report. pass ⟺ value ≤ threshold; ok ⟺ pass matches
// the declared expectation.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  bool expected = true;
  bool ok = false;
};

CheckResult make_check(std::string name, double value, double threshold,
                       bool expected = true);

struct BoundRowOut {
  int pair = 0;
  int psi = 0;
  bool kernel = false;
  double eps_sq = 0.0;
  double rhs_general = 0.0;
  std::optional<double> rhs_yanase;
  double ratio_R = 1.0;
  double cv = 0.0;
};

struct OptimumOut {
  double l_min = 0.0, l_max = 0.0;
  double p_min = 0.0, p_max = 0.0;
  double r_min = 1.0;
  std::vector<Complex> state;
  double ratio_at_state = 1.0;
  double cv_at_state = 0.0;
  std::optional<double> grid_min;  // present when the grid search ran
};

struct Report {
  std::string tool = "qmlim 0.1.0";
  std::string command;
  std::string model;
  std::string model_checksum;
  std::uint64_t seed = 0;
  double tolerance = 1e-8;
  std::vector<CheckResult> checks;
  std::vector<BoundRowOut> bound_rows;
  std::optional<OptimumOut> optimum;
  std::string verdict;  // "PASS" | "FAIL"

  bool passed() const { return verdict == "PASS"; }
  void finalize();  // sets verdict from the checks
};

// 12-significant-digit lowercase scientific notation (the fixed report
// number format).
std::string format_sig12(double v);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);  // "fnv1a64:<hex>"

// Deterministic serialization; the trailing checksum covers every byte up to
// and including the verdict, so reruns differ only in the timestamp line.
std::string render_report_json(const Report& r, const std::string& timestamp);
std::string render_report_text(const Report& r, const std::string& timestamp);

std::string utc_timestamp_now();

}  // namespace qmlim
