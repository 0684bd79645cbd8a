// qnormal: digit streams, exact pattern counts, and verification suites for
// Cantor-series block constructions.

#include "CLI11.hpp"

#include "qnormal/analysis.hpp"
#include "qnormal/config.hpp"
#include "qnormal/error.hpp"
#include "qnormal/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace qnormal;

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

struct ScheduleFlags {
  std::string name = "thm4.1";
  std::string config_path;
  std::string l_rule, w_rule, b_rule;
  std::int64_t i_cap = -1;
  bool skip_validation = false;
};

void add_schedule_flags(CLI::App* cmd, ScheduleFlags& flags) {
  cmd->add_option("--schedule", flags.name, "Built-in schedule name (thm4.1, thm4.1-scaled)");
  cmd->add_option("--config", flags.config_path, "Schedule config file (key = value lines)");
  cmd->add_option("--l-rule", flags.l_rule, "Override the copy-count rule, e.g. 'i^3'");
  cmd->add_option("--w-rule", flags.w_rule, "Override the block-width rule, e.g. '2*i'");
  cmd->add_option("--b-rule", flags.b_rule, "Override the base rule (default 'i')");
  cmd->add_option("--i-cap", flags.i_cap, "Largest evaluated schedule index");
  cmd->add_flag("--skip-validation", flags.skip_validation,
                "Skip the per-block normality validation at build time");
}

Construction build_schedule(const ScheduleFlags& flags) {
  ScheduleConfig config = flags.config_path.empty() ? builtin_schedule(flags.name)
                                                    : parse_schedule_config_file(flags.config_path);
  if (!flags.l_rule.empty()) config.l_rule = flags.l_rule;
  if (!flags.w_rule.empty()) config.w_rule = flags.w_rule;
  if (!flags.b_rule.empty()) config.b_rule = flags.b_rule;
  if (flags.i_cap > 0) config.i_cap = flags.i_cap;
  if (!flags.l_rule.empty() || !flags.w_rule.empty() || !flags.b_rule.empty())
    config.name += "-scaled";
  ConstructionOptions options;
  options.validate_normality = !flags.skip_validation;
  return build_construction(config, options);
}

std::vector<BigInt> parse_checkpoints(const std::string& text, const Construction& c) {
  std::vector<BigInt> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token[0] == 'L' || token[0] == 'l') {
      const auto idx = parse_bigint(token.substr(1)).convert_to<std::int64_t>();
      out.push_back(c.cumulative_length(idx));
    } else {
      out.push_back(parse_bigint(token));
    }
  }
  if (out.empty()) raise(Errc::bad_config, "no checkpoints given");
  return out;
}

// block tokens: "all" (every base-B block of length k), digit strings like
// "01", or dash-separated digits like "0-1"
std::vector<Block> parse_blocks(const std::string& text, std::int64_t base, std::int64_t k) {
  std::vector<Block> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    if (token == "all") {
      std::vector<digit_t> digits(static_cast<std::size_t>(k), 0);
      while (true) {
        out.emplace_back(base, digits);
        std::int64_t pos = k - 1;
        while (pos >= 0 &&
               static_cast<std::int64_t>(++digits[static_cast<std::size_t>(pos)]) == base)
          digits[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0) break;
      }
      continue;
    }
    std::vector<digit_t> digits;
    if (token.find('-') != std::string::npos) {
      std::stringstream ds(token);
      std::string digit;
      while (std::getline(ds, digit, '-'))
        digits.push_back(static_cast<digit_t>(parse_bigint(digit).convert_to<std::uint32_t>()));
    } else {
      for (char ch : token) {
        if (ch < '0' || ch > '9') raise(Errc::bad_config, "bad digit '" + std::string(1, ch) + "'");
        digits.push_back(static_cast<digit_t>(ch - '0'));
      }
    }
    std::int64_t block_base = base;
    for (digit_t d : digits)
      block_base = std::max<std::int64_t>(block_base, static_cast<std::int64_t>(d) + 1);
    out.emplace_back(block_base, digits);
  }
  if (out.empty()) raise(Errc::bad_config, "no blocks given");
  return out;
}

BasicSequence parse_basic_sequence(const std::string& text) {
  if (text.rfind("const:", 0) == 0) return BasicSequence::constant(parse_bigint(text.substr(6)));
  if (text == "rule:n+1")
    return BasicSequence::from_rule("n+1", [](const BigInt& n) { return n + 1; });
  if (text.rfind("list:", 0) == 0) {
    std::vector<BigInt> qs;
    std::stringstream ss(text.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) qs.push_back(parse_bigint(item));
    return BasicSequence::from_list(std::move(qs));
  }
  raise(Errc::bad_config, "unknown basic sequence '" + text + "' (const:B, rule:n+1, list:...)");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) raise(Errc::bad_config, "cannot open output file '" + path + "'");
  return file;
}

int cmd_digits(const ScheduleFlags& flags, const std::string& from_str, std::int64_t count,
               const std::string& out_path) {
  const BigInt from = parse_bigint(from_str);
  if (from < 1) raise(Errc::bad_config, "positions are 1-based");
  if (count < 0) raise(Errc::bad_config, "count must be non-negative");
  if (count > 50'000'000) raise(Errc::unfeasible, "digit window too large");
  const Construction c = build_schedule(flags);
  const auto digits = c.digit_stream(from, static_cast<std::size_t>(count));
  std::ofstream file;
  std::ostream& os = open_output(out_path, file);
  for (std::size_t t = 0; t < digits.size(); ++t) {
    if (t) os << (t % 64 == 0 ? '\n' : ' ');
    os << digits[t];
  }
  if (!digits.empty()) os << '\n';
  return kExitPass;
}

int cmd_discrepancy(const ScheduleFlags& flags, std::int64_t k, const std::string& blocks_str,
                    const std::string& checkpoints_str, std::int64_t block_base,
                    const std::string& out_path, int threads) {
  const Construction c = build_schedule(flags);
  const auto checkpoints = parse_checkpoints(checkpoints_str, c);
  const auto blocks = parse_blocks(blocks_str, block_base, k);
  if (!range_set(c.bff()).contains(k))
    raise(Errc::bad_config, "k = " + std::to_string(k) + " outside R(W)");
  const auto report = discrepancy_sweep(c, blocks, k, checkpoints, threads);
  std::ofstream file;
  std::ostream& os = open_output(out_path, file);
  report.write_csv(os);
  if (report.all_pass) return kExitPass;
  std::cerr << "envelope violations:\n";
  for (const auto& row : report.rows)
    if (row.hyp_met && !row.pass)
      std::cerr << "  n=" << row.n.str() << " block=" << row.block.str()
                << " abs_err=" << to_decimal_string(row.abs_err, 6)
                << " envelope=" << to_decimal_string(row.envelope, 6) << "\n";
  return kExitVerifyFail;
}

int cmd_convert(const std::string& q_str, const std::string& value_str,
                const std::string& digits_str, std::int64_t n, unsigned precision,
                const std::string& out_path) {
  const BasicSequence q = parse_basic_sequence(q_str);
  std::ofstream file;
  std::ostream& os = open_output(out_path, file);
  if (!value_str.empty() && !digits_str.empty())
    raise(Errc::bad_config, "give either --value or --digits, not both");
  if (!value_str.empty()) {
    if (n < 1) raise(Errc::bad_config, "--n must be >= 1");
    const Rational x = parse_rational(value_str);
    const auto digits = value_to_digits(q, x, static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < digits.digits.size(); ++t) {
      if (t) os << ' ';
      os << digits.digits[t].str();
    }
    os << '\n';
    return kExitPass;
  }
  if (!digits_str.empty()) {
    std::vector<BigInt> digits;
    std::stringstream ss(digits_str);
    std::string item;
    while (std::getline(ss, item, ',')) digits.push_back(parse_bigint(item));
    const std::size_t len = n > 0 ? static_cast<std::size_t>(n) : digits.size();
    const auto exact = digits_to_value_exact(q, digits, len);
    const auto approx = digits_to_value(q, digits, len, precision);
    os << exact.value.str() << " tail_bound=" << to_decimal_string(exact.tail_bound, 8)
       << " value~" << highfloat_string(approx.value, 30) << '\n';
    return kExitPass;
  }
  raise(Errc::bad_config, "convert needs --value or --digits");
}

void print_suite_summary(std::ostream& os, const std::string& suite, std::int64_t cases,
                         std::int64_t failures) {
  os << "suite=" << suite << " cases=" << cases << " passes=" << (cases - failures)
     << " failures=" << failures << "\n";
}

int cmd_verify(const std::string& suite, const ScheduleFlags& flags, std::int64_t bmax,
               std::int64_t wmax, std::int64_t budget, std::int64_t imax, std::int64_t imin,
               std::int64_t k, const std::string& checkpoints_str, int threads) {
  if (suite == "champernowne") {
    const auto report = verify_champernowne_counting(bmax, wmax, budget, threads);
    print_suite_summary(std::cout, suite, report.cases, report.failures);
    for (const auto& f : report.failure_details) std::cerr << "  " << f << "\n";
    return report.pass() ? kExitPass : kExitVerifyFail;
  }
  if (suite == "wgood") {
    const Construction c = build_schedule(flags);
    const auto report = check_w_good(c.bff(), c.good_sequence(), imax, k);
    for (const auto& row : report.rows) {
      char buf[192];
      char r2[48] = "-", r3[48] = "-";
      if (row.has_r2) std::snprintf(r2, sizeof(r2), "%.6f", row.log_r2);
      if (row.has_r3) std::snprintf(r3, sizeof(r3), "%.6f", row.log_r3);
      std::snprintf(buf, sizeof(buf), "i=%lld log_r1=%.6f log_r2=%s log_r3=%s\n",
                    static_cast<long long>(row.i), row.log_r1, r2, r3);
      std::cout << buf;
    }
    const std::int64_t failures = (report.r1_increasing ? 0 : 1) +
                                  (report.r2_decreasing ? 0 : 1) +
                                  (report.r3_decreasing ? 0 : 1);
    print_suite_summary(std::cout, suite, 3, failures);
    return failures == 0 ? kExitPass : kExitVerifyFail;
  }
  if (suite == "surrogate") {
    const Construction c = build_schedule(flags);
    const auto checkpoints = parse_checkpoints(checkpoints_str, c);
    const auto report = s_minus_q_bound_check(c, k, checkpoints);
    std::int64_t failures = 0;
    for (const auto& row : report.rows)
      if (!row.pass) ++failures;
    if (!report.non_decreasing) ++failures;
    print_suite_summary(std::cout, suite, static_cast<std::int64_t>(report.rows.size()) + 1,
                        failures);
    return failures == 0 ? kExitPass : kExitVerifyFail;
  }
  if (suite == "envelope") {
    const Construction c = build_schedule(flags);
    std::int64_t cases = 0, failures = 0;
    for (std::int64_t i = imin; i <= imax; ++i) {
      const auto report = check_envelope_grid(c, k, i);
      ++cases;
      if (report.verdict == CheckVerdict::fail) {
        ++failures;
        std::cerr << "  i=" << i << ": " << report.detail << "\n";
      } else if (report.verdict == CheckVerdict::hypothesis_unmet) {
        std::cout << "i=" << i << " hypotheses unmet (reported, not failed)\n";
      }
    }
    print_suite_summary(std::cout, suite, cases, failures);
    return failures == 0 ? kExitPass : kExitVerifyFail;
  }
  if (suite == "epsprime") {
    ScheduleFlags local = flags;  // contexts at L_i need terms through i+1
    local.i_cap = std::max(local.i_cap, imax + 1);
    const Construction c = build_schedule(local);
    const auto trend = epsilon_prime_trend(c, k, imin, imax);
    for (const auto& row : trend.rows) {
      if (!row.defined) {
        std::cout << "i=" << row.i << " skipped (l_i = 0)\n";
        continue;
      }
      char buf[160];
      std::snprintf(buf, sizeof(buf), "i=%lld log_eps_prime=%.6f overhead_ok=%d\n",
                    static_cast<long long>(row.i), row.log_eps_prime, row.copy_overhead_bound_ok ? 1 : 0);
      std::cout << buf;
    }
    const std::int64_t failures = (trend.tail_decreasing ? 0 : 1) + (trend.copy_overhead_all_ok ? 0 : 1);
    print_suite_summary(std::cout, suite, 2, failures);
    return failures == 0 ? kExitPass : kExitVerifyFail;
  }
  raise(Errc::bad_config,
        "unknown suite '" + suite + "' (champernowne, wgood, surrogate, envelope, epsprime)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"digit streams and verification for Cantor-series block constructions"};
  app.require_subcommand(1);
  int threads = default_thread_count();
  app.add_option("--threads", threads, "Worker threads (results are thread-count independent)");

  ScheduleFlags digits_flags;
  std::string digits_from = "1";
  std::int64_t digits_count = 64;
  std::string digits_out;
  auto* digits_cmd = app.add_subcommand("digits", "Print a window of the constructed digit stream");
  add_schedule_flags(digits_cmd, digits_flags);
  digits_cmd->add_option("--from", digits_from, "First position (1-based)");
  digits_cmd->add_option("--count", digits_count, "Number of digits");
  digits_cmd->add_option("--out", digits_out, "Output file (default stdout)");

  ScheduleFlags disc_flags;
  std::int64_t disc_k = 1;
  std::string disc_blocks = "all";
  std::string disc_checkpoints;
  std::int64_t disc_base = 2;
  std::string disc_out;
  auto* disc_cmd = app.add_subcommand("discrepancy", "Counting-vs-expectation CSV report");
  add_schedule_flags(disc_cmd, disc_flags);
  disc_cmd->add_option("--k", disc_k, "Block length");
  disc_cmd->add_option("--blocks", disc_blocks, "Comma list: digit strings, 0-1 form, or 'all'");
  disc_cmd->add_option("--block-base", disc_base, "Base for 'all' and bare-digit blocks");
  disc_cmd->add_option("--checkpoints", disc_checkpoints, "Comma list of positions or L<i>")
      ->required();
  disc_cmd->add_option("--out", disc_out, "CSV output file (default stdout)");

  std::string conv_q = "const:10";
  std::string conv_value, conv_digits, conv_out;
  std::int64_t conv_n = 0;
  unsigned conv_precision = kDefaultPrecisionBits;
  auto* conv_cmd = app.add_subcommand("convert", "Cantor-series digits <-> values");
  conv_cmd->add_option("--q", conv_q, "Basic sequence: const:B, rule:n+1, list:q1,q2,...");
  conv_cmd->add_option("--value", conv_value, "Rational in [0,1) to expand");
  conv_cmd->add_option("--digits", conv_digits, "Comma digit list to evaluate");
  conv_cmd->add_option("--n", conv_n, "Digit count");
  conv_cmd->add_option("--precision", conv_precision, "Float mantissa bits");
  conv_cmd->add_option("--out", conv_out, "Output file (default stdout)");

  ScheduleFlags verify_flags;
  std::string verify_suite;
  std::int64_t verify_bmax = 3, verify_wmax = 6, verify_budget = 10'000'000;
  std::int64_t verify_imax = 10, verify_imin = 2, verify_k = 1;
  std::string verify_checkpoints;
  auto* verify_cmd = app.add_subcommand("verify", "Run a named verification suite");
  add_schedule_flags(verify_cmd, verify_flags);
  verify_cmd
      ->add_option("--suite", verify_suite, "champernowne | wgood | surrogate | envelope | epsprime")
      ->required();
  verify_cmd->add_option("--bmax", verify_bmax, "Largest base (champernowne)");
  verify_cmd->add_option("--wmax", verify_wmax, "Largest width (champernowne)");
  verify_cmd->add_option("--budget", verify_budget, "Stream-length budget");
  verify_cmd->add_option("--imax", verify_imax, "Largest schedule index");
  verify_cmd->add_option("--imin", verify_imin, "Smallest schedule index");
  verify_cmd->add_option("--k", verify_k, "Block length");
  verify_cmd->add_option("--checkpoints", verify_checkpoints, "Positions or L<i> (surrogate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (digits_cmd->parsed())
      return cmd_digits(digits_flags, digits_from, digits_count, digits_out);
    if (disc_cmd->parsed())
      return cmd_discrepancy(disc_flags, disc_k, disc_blocks, disc_checkpoints, disc_base,
                             disc_out, threads);
    if (conv_cmd->parsed())
      return cmd_convert(conv_q, conv_value, conv_digits, conv_n, conv_precision, conv_out);
    if (verify_cmd->parsed())
      return cmd_verify(verify_suite, verify_flags, verify_bmax, verify_wmax, verify_budget,
                        verify_imax, verify_imin, verify_k, verify_checkpoints, threads);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
