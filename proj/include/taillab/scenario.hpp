#pragma once

#include "taillab/atom.hpp"
#include "taillab/io.hpp"
#include "taillab/tailfit.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace taillab::scenario {

enum class CheckKind {
  Within,  // |measured - claimed| <= tolerance
  AtLeast, // measured >= claimed
  Above,   // measured > claimed
  Below    // measured < claimed
};

const char *to_string(CheckKind kind);

struct ClaimCheck {
  std::string name;
  std::string claim; // the law being checked, in words
  CheckKind kind = CheckKind::Within;
  double claimed = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

ClaimCheck make_check(std::string name, std::string claim, CheckKind kind, double claimed,
                      double measured, double tolerance = 0.0);

struct ScenarioReport {
  std::string scenario;
  std::vector<ClaimCheck> checks;
  bool pass = false;
  double runtime_seconds = 0.0;
  io::Json details = io::Json::object();
  std::vector<std::string> artifacts; // file names relative to the output directory
};

struct ScenarioOptions {
  std::filesystem::path out_dir = ".";
  unsigned threads = 0;
  bool write_artifacts = true;
};

const std::vector<std::string> &scenario_names();

/// Runs one preset. Unknown names throw InvalidArgument.
ScenarioReport run_scenario(const std::string &name, const ScenarioOptions &options = {});

/// Report as JSON. The runtime is left out so repeated runs are byte-identical.
io::Json to_json(const ScenarioReport &report);

/// r,xi_free,K,xi_ind_series1,xi_ind_series2,xi_ind_direct,xi_total; methods
/// that were not run are written as NaN.
io::Table atom_table(const atom::TailModelResult &result);
io::Json atom_summary(const atom::TailModelResult &result);

io::Json to_json(const tailfit::TailFit &fit);
io::Json to_json(const tailfit::PowerFit &fit);

} // namespace taillab::scenario
