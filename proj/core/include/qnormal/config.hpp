#pragma once

#include <iosfwd>

#include "qnormal/construction.hpp"
#include "qnormal/expr.hpp"

namespace qnormal {

/// Flat key-value schedule description (the CLI's config-file format and the
/// serialization of a construction schedule). Term 1 is pinned to the fixed
/// (l_1, b_1=2, p_1=2, eps_1, k_1=1, lambda_2) tuple with block x1; the rules
/// govern i >= 2 with x_i = C_{b_i, w_i} and mu_i = lambda_{b_i}.
struct ScheduleConfig {
  std::string name = "custom";
  std::string x_rule = "champernowne";
  std::string b_rule = "i";
  std::string w_rule = "i^2";
  std::string l_rule = "i^(3*i)";
  std::string eps_rule = "1/i";
  std::string k_rule = "i";
  std::string k_limit = "infinite";  // or "finite:K"
  std::int64_t i_cap = 8;
  std::vector<digit_t> x1 = {0, 1};
  std::string eps1 = "3/5";
  std::string l1 = "0";

  bool operator==(const ScheduleConfig&) const = default;
};

/// Parses the `key = value` format, `#` comments; malformed lines are
/// rejected with their line number.
ScheduleConfig parse_schedule_config(std::istream& in);
ScheduleConfig parse_schedule_config_file(const std::string& path);
std::string serialize_schedule_config(const ScheduleConfig& config);

/// Named built-ins: "thm4.1" (canonical), "thm4.1-scaled" (l_i = i^3,
/// w_i = 2i, i_cap 6; the desk-sized variant).
ScheduleConfig builtin_schedule(std::string_view name);

Construction build_construction(const ScheduleConfig& config,
                                const ConstructionOptions& options = {});

}  // namespace qnormal
