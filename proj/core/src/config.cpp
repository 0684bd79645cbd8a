#include "qnormal/config.hpp"

#include "qnormal/error.hpp"

#include <fstream>
#include <sstream>

namespace qnormal {

namespace {

std::string trim(std::string_view s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return std::string(s.substr(lo, hi - lo));
}

std::vector<digit_t> parse_digit_list(const std::string& text) {
  std::vector<digit_t> digits;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) raise(Errc::bad_config, "empty digit in list '" + text + "'");
    digits.push_back(static_cast<digit_t>(parse_bigint(t).convert_to<std::uint32_t>()));
  }
  if (digits.empty()) raise(Errc::bad_config, "empty digit list");
  return digits;
}

}  // namespace

ScheduleConfig parse_schedule_config(std::istream& in) {
  ScheduleConfig config;
  std::string line;
  int line_no = 0;
  bool saw_any = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      raise(Errc::bad_config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      raise(Errc::bad_config, "line " + std::to_string(line_no) + ": empty key or value");
    saw_any = true;
    try {
      if (key == "name") {
        config.name = value;
      } else if (key == "x-rule") {
        if (value != "champernowne")
          raise(Errc::bad_config, "only 'champernowne' x-rule is supported");
        config.x_rule = value;
      } else if (key == "b-rule") {
        RuleExpr::parse(value);
        config.b_rule = value;
      } else if (key == "w-rule") {
        RuleExpr::parse(value);
        config.w_rule = value;
      } else if (key == "l-rule") {
        RuleExpr::parse(value);
        config.l_rule = value;
      } else if (key == "eps-rule") {
        RuleExpr::parse(value);
        config.eps_rule = value;
      } else if (key == "k-rule") {
        RuleExpr::parse(value);
        config.k_rule = value;
      } else if (key == "k-limit") {
        if (value != "infinite" && value.rfind("finite:", 0) != 0)
          raise(Errc::bad_config, "k-limit must be 'infinite' or 'finite:K'");
        if (value.rfind("finite:", 0) == 0) parse_bigint(value.substr(7));
        config.k_limit = value;
      } else if (key == "i-cap") {
        config.i_cap = parse_bigint(value).convert_to<std::int64_t>();
      } else if (key == "x1") {
        config.x1 = parse_digit_list(value);
      } else if (key == "eps1") {
        parse_rational(value);
        config.eps1 = value;
      } else if (key == "l1") {
        parse_bigint(value);
        config.l1 = value;
      } else {
        raise(Errc::bad_config, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      raise(Errc::bad_config, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_any) raise(Errc::bad_config, "empty schedule config");
  return config;
}

ScheduleConfig parse_schedule_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::bad_config, "cannot open config file '" + path + "'");
  return parse_schedule_config(in);
}

std::string serialize_schedule_config(const ScheduleConfig& config) {
  std::ostringstream os;
  os << "# qnormal schedule\n";
  os << "name = " << config.name << "\n";
  os << "x-rule = " << config.x_rule << "\n";
  os << "b-rule = " << config.b_rule << "\n";
  os << "w-rule = " << config.w_rule << "\n";
  os << "l-rule = " << config.l_rule << "\n";
  os << "eps-rule = " << config.eps_rule << "\n";
  os << "k-rule = " << config.k_rule << "\n";
  os << "k-limit = " << config.k_limit << "\n";
  os << "i-cap = " << config.i_cap << "\n";
  os << "x1 = ";
  for (std::size_t t = 0; t < config.x1.size(); ++t) {
    if (t) os << ',';
    os << config.x1[t];
  }
  os << "\n";
  os << "eps1 = " << config.eps1 << "\n";
  os << "l1 = " << config.l1 << "\n";
  return os.str();
}

ScheduleConfig builtin_schedule(std::string_view name) {
  if (name == "thm4.1") {
    ScheduleConfig config;
    config.name = "thm4.1";
    return config;
  }
  if (name == "thm4.1-scaled") {
    ScheduleConfig config;
    config.name = "thm4.1-scaled";
    config.l_rule = "i^3";
    config.w_rule = "2*i";
    config.i_cap = 6;
    return config;
  }
  raise(Errc::bad_config, "unknown schedule '" + std::string(name) + "'");
}

Construction build_construction(const ScheduleConfig& config, const ConstructionOptions& options) {
  const RuleExpr b_rule = RuleExpr::parse(config.b_rule);
  const RuleExpr w_rule = RuleExpr::parse(config.w_rule);
  const RuleExpr l_rule = RuleExpr::parse(config.l_rule);
  const RuleExpr eps_rule = RuleExpr::parse(config.eps_rule);
  const RuleExpr k_rule = RuleExpr::parse(config.k_rule);
  const Rational eps1 = parse_rational(config.eps1);
  const BigInt l1 = parse_bigint(config.l1);
  const Block x1(2, config.x1);

  KLimit k_limit = KLimit::infinite();
  if (config.k_limit.rfind("finite:", 0) == 0)
    k_limit = KLimit::finite_at(parse_bigint(config.k_limit.substr(7)).convert_to<std::int64_t>());

  auto rule = [b_rule, l_rule, eps_rule, k_rule, eps1, l1](std::int64_t i) -> BffTerm {
    if (i == 1) return BffTerm{l1, 2, 2, eps1, 1, Weighting::uniform(2)};
    const BigInt idx(i);
    const std::int64_t b = b_rule.eval_integer(idx).convert_to<std::int64_t>();
    return BffTerm{l_rule.eval_integer(idx), b, b, eps_rule.eval(idx),
                   k_rule.eval_integer(idx).convert_to<std::int64_t>(), Weighting::uniform(b)};
  };
  auto source = [b_rule, w_rule, x1](std::int64_t i) -> BlockSource {
    if (i == 1) return BlockSource::from_block(x1);
    const BigInt idx(i);
    return BlockSource::champernowne(b_rule.eval_integer(idx).convert_to<std::int64_t>(),
                                     w_rule.eval_integer(idx).convert_to<std::int64_t>());
  };

  const bool canonical = config.name == "thm4.1";
  BffSpec spec(rule, k_limit, config.name);
  GoodSequence xs(source, config.name);
  return Construction(std::move(spec), std::move(xs), config.i_cap, options, canonical,
                      config.name);
}

}  // namespace qnormal
