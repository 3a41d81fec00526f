#include "actionalg/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace actionalg::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_real(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(x)) {
    throw ConfigError(what + ": '" + t + "' is not a real number");
  }
  return x;
}

long long parse_integer(std::string_view text, const std::string& what) {
  const std::string t = trim(text);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(what + ": '" + t + "' is not an integer");
  }
  return x;
}

const std::vector<std::string>& known_experiments() {
  static const std::vector<std::string> names = {"panalytic", "average", "norm",     "trace",
                                                 "orbits",    "pingpong", "blowup", "ideal"};
  return names;
}

}  // namespace

RawConfig parse_config_text(std::string_view text) {
  RawConfig raw;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    // '#' starts a comment anywhere; no value needs the character
    const std::string t = trim(std::string_view(line).substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(number) + ": empty key");
    if (raw.entries.contains(key)) {
      throw ConfigError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    raw.entries.emplace(key, value);
    raw.line_of.emplace(key, number);
  }
  return raw;
}

RawConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentConfig build_config(const RawConfig& raw, const std::string& experiment) {
  ExperimentConfig cfg;
  const auto where = [&](const std::string& key) {
    auto it = raw.line_of.find(key);
    return it == raw.line_of.end() ? "field '" + key + "'"
                                   : "line " + std::to_string(it->second) + " field '" + key + "'";
  };
  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    auto it = raw.entries.find(key);
    if (it == raw.entries.end()) return std::nullopt;
    return it->second;
  };
  const auto positive_int = [&](const std::string& key, int& target) {
    if (auto v = get(key)) {
      const long long x = parse_integer(*v, where(key));
      if (x < 1 || x > 1'000'000'000) throw ConfigError(where(key) + ": must be a positive integer");
      target = static_cast<int>(x);
    }
  };
  const auto positive_real = [&](const std::string& key, double& target) {
    if (auto v = get(key)) {
      const double x = parse_real(*v, where(key));
      if (!(x > 0)) throw ConfigError(where(key) + ": must be positive");
      target = x;
    }
  };
  const auto int_list = [&](const std::string& key, std::vector<int>& target) {
    if (auto v = get(key)) {
      target.clear();
      for (const auto& item : split_list(*v)) {
        const long long x = parse_integer(item, where(key));
        if (x < 1 || x > 1'000'000) throw ConfigError(where(key) + ": entries must be positive");
        target.push_back(static_cast<int>(x));
      }
    }
  };

  for (const auto& [key, value] : raw.entries) {
    static const std::vector<std::string> scalar_keys = {
        "presentation.orders",  "presentation.names",   "action",
        "experiment",           "budget.J_max",         "budget.J_list",
        "budget.numeric_J",     "budget.N_list",        "budget.L",
        "budget.R",             "budget.max_iterations", "budget.support_cap",
        "budget.prune_threshold", "budget.residual_target", "budget.c_min",
        "budget.C",             "budget.pairs",         "budget.l",
        "budget.k",             "budget.ball_cap",      "budget.restarts",
        "seed",                 "slack",                "output.path",
        "output.format"};
    const bool known = std::find(scalar_keys.begin(), scalar_keys.end(), key) != scalar_keys.end() ||
                       key.starts_with("elements.") || key.starts_with("operators.");
    if (!known) throw ConfigError(where(key) + ": unknown key");
  }

  cfg.experiment = experiment.empty() ? get("experiment").value_or("") : experiment;
  if (auto e = get("experiment"); e && !experiment.empty() && *e != experiment) {
    throw ConfigError(where("experiment") + ": config names '" + *e + "' but subcommand is '" +
                      experiment + "'");
  }
  if (std::find(known_experiments().begin(), known_experiments().end(), cfg.experiment) ==
      known_experiments().end()) {
    throw ConfigError("unknown experiment '" + cfg.experiment + "'");
  }
  if (auto a = get("action"); a && *a != "cayley") {
    throw ConfigError(where("action") + ": only 'cayley' actions are supported");
  }

  if (get("presentation.orders") || get("presentation.names")) {
    if (!get("presentation.orders") || !get("presentation.names")) {
      const std::string present = get("presentation.orders") ? "presentation.orders" : "presentation.names";
      throw ConfigError(where(present) +
                        ": presentation.orders and presentation.names must be given together");
    }
    const auto orders = split_list(*get("presentation.orders"));
    const auto names = split_list(*get("presentation.names"));
    if (orders.size() != names.size()) {
      throw ConfigError(where("presentation.names") + ": " + std::to_string(names.size()) +
                        " names for " + std::to_string(orders.size()) + " orders");
    }
    std::vector<Factor> factors;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      std::int64_t m = kInfiniteOrder;
      if (orders[i] != "inf" && orders[i] != "INFINITE") {
        m = parse_integer(orders[i], where("presentation.orders"));
        if (m < 2) throw ConfigError(where("presentation.orders") + ": finite orders must be >= 2");
      }
      factors.push_back({names[i], m});
    }
    try {
      cfg.presentation = Presentation(std::move(factors));
    } catch (const Error& e) {
      throw ConfigError(where("presentation.names") + ": " + e.what());
    }
  }

  positive_int("budget.J_max", cfg.J_max);
  int_list("budget.J_list", cfg.J_list);
  int_list("budget.numeric_J", cfg.numeric_J);
  int_list("budget.N_list", cfg.N_list);
  positive_int("budget.L", cfg.L);
  positive_int("budget.R", cfg.R);
  positive_real("budget.c_min", cfg.c_min);
  positive_real("budget.C", cfg.C);
  positive_int("budget.pairs", cfg.pairs);
  positive_int("budget.l", cfg.l);
  positive_int("budget.k", cfg.k);
  positive_int("budget.max_iterations", cfg.norm.max_iterations);
  int cap = static_cast<int>(cfg.norm.support_cap);
  positive_int("budget.support_cap", cap);
  cfg.norm.support_cap = static_cast<std::size_t>(cap);
  int ball_cap = static_cast<int>(cfg.ball_cap);
  positive_int("budget.ball_cap", ball_cap);
  cfg.ball_cap = static_cast<std::size_t>(ball_cap);
  positive_real("budget.prune_threshold", cfg.norm.prune_threshold);
  positive_real("budget.residual_target", cfg.norm.residual_target);
  if (auto v = get("budget.restarts")) {
    const long long r = parse_integer(*v, where("budget.restarts"));
    if (r < 0) throw ConfigError(where("budget.restarts") + ": must be >= 0");
    cfg.norm.restarts = static_cast<int>(r);
  }
  if (auto v = get("seed")) {
    cfg.seed = static_cast<std::uint64_t>(parse_integer(*v, where("seed")));
  }
  cfg.norm.seed = cfg.seed;
  if (auto v = get("slack")) {
    cfg.slack = parse_real(*v, where("slack"));
    if (cfg.slack < 0) throw ConfigError(where("slack") + ": must be >= 0");
  }
  cfg.output_path = get("output.path").value_or("");
  if (auto f = get("output.format")) {
    if (*f == "csv+svg") {
      cfg.svg = true;
    } else if (*f != "csv") {
      throw ConfigError(where("output.format") + ": expected 'csv' or 'csv+svg'");
    }
  }

  const Group group(cfg.presentation);
  for (const auto& [key, value] : raw.entries) {
    if (key.starts_with("elements.")) {
      try {
        group.parse(value);
      } catch (const ParseError& e) {
        throw ConfigError(where(key) + ": " + e.what());
      }
      cfg.elements.emplace(key.substr(9), value);
    } else if (key.starts_with("operators.")) {
      try {
        parse_operator(group, value);
      } catch (const ParseError& e) {
        throw ConfigError(where(key) + ": " + e.what());
      }
      cfg.operators.emplace(key.substr(10), value);
    }
  }

  for (const auto& [key, value] : raw.entries) {
    if (key == "experiment" || key == "output.path" || key == "output.format") continue;
    cfg.echo.push_back(key + "=" + value);
  }
  cfg.echo.push_back("experiment=" + cfg.experiment);
  cfg.echo.push_back("seed=" + std::to_string(cfg.seed));
  cfg.echo.push_back("slack=" + format_decimal(cfg.slack));
  std::sort(cfg.echo.begin(), cfg.echo.end());
  cfg.echo.erase(std::unique(cfg.echo.begin(), cfg.echo.end()), cfg.echo.end());
  return cfg;
}

std::string param_hash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& line : config.echo) {
    for (unsigned char c : line) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string format_decimal(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

namespace {

Complex parse_coefficient(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty()) throw ParseError("empty coefficient");
  const auto real = [](const std::string& s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ParseError("bad coefficient '" + s + "'");
    }
    return x;
  };
  if (t.front() == '(') {
    if (t.back() != ')') throw ParseError("unbalanced coefficient '" + t + "'");
    const auto parts = split_list(std::string_view(t).substr(1, t.size() - 2));
    if (parts.size() != 2) throw ParseError("complex coefficient needs (re,im): '" + t + "'");
    return {real(parts[0]), real(parts[1])};
  }
  if (t.back() == 'i') {
    const std::string mag = trim(std::string_view(t).substr(0, t.size() - 1));
    return {0.0, mag.empty() ? 1.0 : real(mag)};
  }
  return {real(t), 0.0};
}

}  // namespace

FormalOperator parse_operator(const Group& group, std::string_view text) {
  // split on top-level '+'/'-' that are not an exponent sign
  std::vector<std::pair<double, std::string>> terms;
  std::string cur;
  double sign = 1.0;
  int depth = 0;
  char prev = '\0';
  const auto flush = [&] {
    if (trim(cur).empty()) throw ParseError("empty term in operator '" + std::string(text) + "'");
    terms.emplace_back(sign, cur);
    cur.clear();
  };
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    const bool separator = depth == 0 && (c == '+' || c == '-') && prev != '^' && prev != '*' &&
                           prev != '\0';
    if (separator) {
      flush();
      sign = c == '-' ? -1.0 : 1.0;
      prev = c;
      continue;
    }
    if (c == '-' && prev == '\0') {
      sign = -1.0;
      prev = '*';  // allow "-2*a" and "-a"
      continue;
    }
    cur += c;
    if (!std::isspace(static_cast<unsigned char>(c))) prev = c;
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + std::string(text) + "'");
  flush();

  std::vector<FormalOperator::Term> out;
  for (const auto& [s, term] : terms) {
    Complex coefficient{1.0, 0.0};
    std::string word = term;
    int d = 0;
    std::size_t star = std::string::npos;
    for (std::size_t i = 0; i < term.size(); ++i) {
      if (term[i] == '(') ++d;
      if (term[i] == ')') --d;
      if (term[i] == '*' && d == 0) {
        star = i;
        break;
      }
    }
    if (star != std::string::npos) {
      coefficient = parse_coefficient(std::string_view(term).substr(0, star));
      word = term.substr(star + 1);
    }
    out.emplace_back(group.parse(word), s * coefficient);
  }
  return FormalOperator::from_terms(std::move(out));
}

std::string render_operator(const Group& group, const FormalOperator& T) {
  if (T.is_zero()) return "0";
  std::string out;
  for (const auto& [g, a] : T.terms()) {
    if (!out.empty()) out += " + ";
    if (a.imag() == 0.0) {
      out += format_decimal(a.real());
    } else {
      out += "(" + format_decimal(a.real()) + "," + format_decimal(a.imag()) + ")";
    }
    out += "*" + group.render(g);
  }
  return out;
}

FormalOperator random_operator(const Group& group, std::mt19937_64& rng, int max_support,
                               int max_length) {
  const auto words = CayleySpace(group).enumerate_ball(group.identity(), max_length);
  std::uniform_int_distribution<int> size_dist(1, max_support);
  std::uniform_int_distribution<std::size_t> word_dist(0, words.size() - 1);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  std::vector<FormalOperator::Term> terms;
  const int n = size_dist(rng);
  for (int i = 0; i < n; ++i) {
    const double re = coeff(rng);
    const double im = coeff(rng);
    terms.emplace_back(words[word_dist(rng)], Complex(re, im));
  }
  return FormalOperator::from_terms(std::move(terms));
}

std::string csv_line(const ResultRow& row) {
  std::string out = row.experiment;
  out += ',';
  out += row.param_hash;
  out += ',';
  out += std::to_string(row.index);
  out += ',';
  out += format_decimal(row.bound);
  out += ',';
  out += format_decimal(row.estimate);
  out += ',';
  out += format_decimal(row.residual);
  out += ',';
  out += std::to_string(row.support);
  out += ',';
  out += row.converged ? "true" : "false";
  out += ',';
  out += to_string(row.verdict);
  return out;
}

namespace {

struct Context {
  const ExperimentConfig& cfg;
  Group group;
  CayleySpace space;
  std::string hash;
  RunResult& result;

  GroupElement element(const std::string& name) const {
    auto it = cfg.elements.find(name);
    if (it == cfg.elements.end()) throw ConfigError("missing field 'elements." + name + "'");
    return group.parse(it->second);
  }
  bool has_element(const std::string& name) const { return cfg.elements.contains(name); }
  FormalOperator op(const std::string& name) const {
    auto it = cfg.operators.find(name);
    if (it == cfg.operators.end()) throw ConfigError("missing field 'operators." + name + "'");
    return parse_operator(group, it->second);
  }
  bool has_operator(const std::string& name) const { return cfg.operators.contains(name); }

  ResultRow& row(const std::string& experiment, long long index) {
    ResultRow r;
    r.experiment = experiment;
    r.param_hash = hash;
    r.index = index;
    result.rows.push_back(std::move(r));
    return result.rows.back();
  }
  void note(std::string line) { result.summary.push_back(std::move(line)); }

  void fill_estimate(ResultRow& r, const BoundRow& b) {
    r.bound = b.bound;
    r.estimate = b.estimate.lower_bound;
    r.residual = b.estimate.residual;
    r.support = b.estimate.support_size;
    r.converged = b.estimate.converged;
    r.verdict = row_verdict(b);
    if (b.falsified && result.witness.empty()) witness_vector(b.estimate.witness, r);
  }

  void witness_vector(const StateVector& v, const ResultRow& r) {
    std::string out = "# unit vector v with ||T v|| = " + format_decimal(r.estimate) +
                      " > bound " + format_decimal(r.bound) + " (" + r.experiment +
                      " index " + std::to_string(r.index) + ")\npoint,re,im\n";
    for (const auto& [x, c] : v.terms()) {
      out += group.render(x) + "," + format_decimal(c.real()) + "," + format_decimal(c.imag()) +
             "\n";
    }
    result.witness = std::move(out);
  }
};

std::vector<int> j_range(int J_max) {
  std::vector<int> out;
  for (int J = 1; J <= J_max; ++J) out.push_back(J);
  return out;
}

void run_panalytic(Context& ctx) {
  const GroupElement h = ctx.element("h");
  const GroupElement g = ctx.element("g");
  if (h.is_identity()) throw ConfigError("h must be nontrivial");
  ctx.note("P_analytic check: ||(1/J) sum_j pi(g^-j h g^j)|| <= C/sqrt(J), h = " +
           ctx.group.render(h) + ", g = " + ctx.group.render(g) + ", C = " +
           format_decimal(ctx.cfg.C));
  const auto Js = ctx.cfg.J_list.empty() ? j_range(ctx.cfg.J_max) : ctx.cfg.J_list;
  for (int J : Js) {
    const BoundRow b = panalytic_row(ctx.space, h, g, J, ctx.cfg.C, ctx.cfg.norm, ctx.cfg.slack);
    ctx.fill_estimate(ctx.row("panalytic", J), b);
  }
}

void run_average(Context& ctx) {
  const FormalOperator T = ctx.op("T");
  const GroupElement g = ctx.element("g");
  const auto Js = ctx.cfg.J_list.empty() ? std::vector<int>{1, 2, 4, 8} : ctx.cfg.J_list;
  ctx.note("averaging decay: ||M_J(T) - a_e Id|| <= (C/sqrt J) sum_F |a_h|, T = " +
           render_operator(ctx.group, T) + ", g = " + ctx.group.render(g));
  for (int J : Js) {
    const DecayRow d = averaging_decay_row(ctx.space, T, g, J, ctx.cfg.C, ctx.cfg.norm,
                                           ctx.cfg.slack);
    ResultRow& r = ctx.row("average", J);
    ctx.fill_estimate(r, d.check);
    if (d.residual_identity_coefficient != Complex(0.0)) {
      r.verdict = Verdict::kFalsified;
      ctx.note("J = " + std::to_string(J) + ": residual keeps a nonzero identity coefficient");
    }
  }
  // exact identity-coefficient conservation across the whole range
  const Complex a_e = canonical_trace(T);
  const int J_top = std::max(ctx.cfg.J_max, Js.empty() ? 1 : *std::max_element(Js.begin(), Js.end()));
  std::size_t preserved = 0;
  for (int J = 1; J <= J_top; ++J) {
    if (canonical_trace(average_MJ(ctx.group, T, g, J)) == a_e) ++preserved;
  }
  ResultRow& r = ctx.row("average.identity", J_top);
  r.bound = std::abs(a_e);
  r.estimate = std::abs(a_e);
  r.support = preserved;
  r.verdict = preserved == static_cast<std::size_t>(J_top) ? Verdict::kPass : Verdict::kFalsified;
  ctx.note("identity coefficient preserved exactly for " + std::to_string(preserved) + " of " +
           std::to_string(J_top) + " values of J");
}

void run_norm(Context& ctx) {
  const FormalOperator T = ctx.op("T");
  const NormEstimate e = norm_lower_bound(ctx.space, T, ctx.cfg.norm);
  const double upper = triangle_upper_bound(T);
  BoundRow b;
  b.J = 1;
  b.bound = upper;
  b.estimate = e;
  b.falsified = e.lower_bound > upper + ctx.cfg.slack;
  ctx.fill_estimate(ctx.row("norm", 1), b);
  ctx.note("T = " + render_operator(ctx.group, T));
  ctx.note("lower bound " + format_decimal(e.lower_bound) + " (cross-check " +
           format_decimal(e.cross_check) + ", " + std::to_string(e.iterations) +
           " iterations, support " + std::to_string(e.support_size) + ", radius " +
           std::to_string(e.radius_hint) + "), triangle upper bound " + format_decimal(upper));
}

void run_trace(Context& ctx) {
  std::vector<std::pair<FormalOperator, FormalOperator>> pairs;
  if (ctx.has_operator("S") || ctx.has_operator("T")) {
    pairs.emplace_back(ctx.op("S"), ctx.op("T"));
  } else {
    std::mt19937_64 rng(ctx.cfg.seed);
    for (int i = 0; i < ctx.cfg.pairs; ++i) {
      FormalOperator S = random_operator(ctx.group, rng, 5, 4);
      FormalOperator T = random_operator(ctx.group, rng, 5, 4);
      pairs.emplace_back(std::move(S), std::move(T));
    }
  }
  std::size_t failures = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [S, T] = pairs[i];
    const Complex st = trace_of_product(ctx.group, S, T);
    const Complex ts = trace_of_product(ctx.group, T, S);
    const Complex pos = trace_of_product(ctx.group, adjoint(ctx.group, S), S);
    ResultRow& r = ctx.row("trace", static_cast<long long>(i + 1));
    r.bound = 0.0;
    r.estimate = std::abs(st - ts);
    r.residual = std::abs(pos);
    r.support = S.support_size() + T.support_size();
    const bool ok = tracial_property_check(ctx.group, S, T);
    r.verdict = ok ? Verdict::kPass : Verdict::kFalsified;
    if (!ok) {
      ++failures;
      if (ctx.result.witness.empty()) {
        ctx.result.witness = "S = " + render_operator(ctx.group, S) +
                             "\nT = " + render_operator(ctx.group, T) + "\n";
      }
    }
  }
  if (ctx.has_element("g") && ctx.has_operator("T")) {
    const GroupElement g = ctx.element("g");
    const FormalOperator T = ctx.op("T");
    for (int J = 1; J <= ctx.cfg.J_max; ++J) {
      const bool same = canonical_trace(average_MJ(ctx.group, T, g, J)) == canonical_trace(T);
      ResultRow& r = ctx.row("trace.average", J);
      r.bound = std::abs(canonical_trace(T));
      r.estimate = std::abs(canonical_trace(average_MJ(ctx.group, T, g, J)));
      r.verdict = same ? Verdict::kPass : Verdict::kFalsified;
    }
  }
  ctx.note("tracial checks: " + std::to_string(pairs.size() - failures) + " of " +
           std::to_string(pairs.size()) + " pairs satisfy sigma(ST) = sigma(TS), sigma(S*S) >= 0");
}

void run_orbits(Context& ctx) {
  const GroupElement h = ctx.element("h");
  const GroupElement g = ctx.element("g");
  const Point x_i = ctx.has_element("x_i") ? ctx.element("x_i") : ctx.space.base_point();
  const int J = ctx.cfg.J_max;
  const DisjointnessReport d = check_Wj_disjoint(ctx.space, h, g, J, ctx.cfg.L, x_i);
  for (int j = -J; j <= J; ++j) {
    ResultRow& r = ctx.row("orbits", j);
    auto it = d.collisions_by_index.find(j);
    const std::size_t count = it == d.collisions_by_index.end() ? 0 : it->second;
    r.bound = 0.0;
    r.estimate = static_cast<double>(count);
    r.support = d.w0_words;
    r.verdict = count == 0 ? Verdict::kPass : Verdict::kFalsified;
  }
  ctx.note("W_j . x_i disjointness for |j| <= " + std::to_string(J) + ", " +
           std::to_string(d.w0_words) + " W_0 words of length <= " + std::to_string(ctx.cfg.L) +
           ": " + std::to_string(d.collision_count) + " collisions");
  if (!d.disjoint()) {
    const Group abstract = FreeProductProbe(ctx.group, h, g).abstract();
    std::string w = "# collisions (g^j u) x_i = (g^k v) x_i with stabilizer word v^-1 g^(j-k) u\n"
                    "j,u,k,v,point,stabilizer_word\n";
    for (const Collision& c : d.collisions) {
      w += std::to_string(c.j) + "," + abstract.render(c.u) + "," + std::to_string(c.k) + "," +
           abstract.render(c.v) + "," + ctx.group.render(c.point) + "," +
           abstract.render(c.stabilizer_word) + "\n";
    }
    ctx.result.witness = std::move(w);
  }

  const auto ball = ctx.space.enumerate_ball(ctx.space.base_point(), ctx.cfg.R);
  const std::vector<GroupElement> gens = {h, g};
  const OrbitDecomposition orbits = orbit_decompose(ctx.space, gens, ball);
  ctx.note("orbit decomposition of the radius-" + std::to_string(ctx.cfg.R) + " ball (" +
           std::to_string(ball.size()) + " points) under <h, g>: " +
           std::to_string(orbits.representatives.size()) + " representatives");

  const FaithfulnessReport f = faithfulness_check(ctx.space, ctx.cfg.L, ctx.cfg.R);
  ResultRow& r = ctx.row("orbits.faithfulness", ctx.cfg.L);
  r.bound = 0.0;
  r.estimate = static_cast<double>(f.violations.size());
  r.support = f.witnesses.size();
  r.verdict = f.pass() ? Verdict::kPass : Verdict::kFalsified;
  ctx.note("faithfulness: " + std::to_string(f.witnesses.size()) +
           " nontrivial words of length <= " + std::to_string(ctx.cfg.L) + " move a point, " +
           std::to_string(f.violations.size()) + " violations");
}

void run_pingpong(Context& ctx) {
  const GroupElement h = ctx.element("h");
  const GroupElement g = ctx.element("g");
  const PingPongReport p =
      pingpong_certificate(ctx.space, h, g, ctx.cfg.L, ctx.cfg.J_max, ctx.cfg.R, ctx.cfg.c_min);
  const auto count_row = [&](const std::string& name, long long index, std::size_t violations,
                             std::size_t checked) {
    ResultRow& r = ctx.row(name, index);
    r.bound = 0.0;
    r.estimate = static_cast<double>(violations);
    r.support = checked;
    r.verdict = violations == 0 ? Verdict::kPass : Verdict::kFalsified;
  };
  count_row("pingpong.injectivity", ctx.cfg.L, p.injectivity_violations.size(),
            p.injectivity_words);
  count_row("pingpong.disjointness", ctx.cfg.J_max, p.disjointness.collision_count,
            p.disjointness.w0_words);
  count_row("pingpong.ellipticity", ctx.cfg.L, p.ellipticity_violations.size(),
            p.ellipticity_words);
  for (std::size_t n = 0; n < p.displacements.size(); ++n) {
    ResultRow& r = ctx.row("pingpong.displacement", static_cast<long long>(n + 1));
    r.bound = ctx.cfg.c_min * static_cast<double>(n + 1);
    r.estimate = static_cast<double>(p.displacements[n]);
    r.verdict = r.estimate >= r.bound ? Verdict::kPass : Verdict::kFalsified;
  }
  ctx.note("ping-pong certificate for h = " + ctx.group.render(h) + ", g = " +
           ctx.group.render(g) + " (budgeted evidence, not a proof): " +
           std::string(to_string(p.verdict)));

  if (ctx.has_element("g1") && ctx.has_element("g2")) {
    const LoxodromicReport lox = loxodromic_probe(ctx.space, ctx.element("g1"), ctx.element("g2"),
                                                  ctx.cfg.l, ctx.cfg.k, ctx.cfg.J_max,
                                                  ctx.cfg.c_min);
    for (std::size_t n = 0; n < lox.displacements.size(); ++n) {
      ResultRow& r = ctx.row("pingpong.loxodromic", static_cast<long long>(n + 1));
      r.bound = ctx.cfg.c_min * static_cast<double>(n + 1);
      r.estimate = static_cast<double>(lox.displacements[n]);
      r.verdict = r.estimate >= r.bound ? Verdict::kPass : Verdict::kFalsified;
    }
    ctx.note("loxodromic probe w = " + ctx.group.render(lox.w) + ": growth rate " +
             format_decimal(lox.growth_rate));
  }
}

void run_blowup(Context& ctx) {
  const GroupElement h = ctx.element("h");
  const GroupElement g = ctx.element("g");
  const auto Ns = ctx.cfg.N_list.empty() ? std::vector<int>{1, 4, 9, 16} : ctx.cfg.N_list;
  for (int N : Ns) {
    const BlowupResult b = finite_order_blowup(ctx.group, h, g, N);
    const NormEstimate e = norm_lower_bound(ctx.space, b.op, ctx.cfg.norm);
    ResultRow& r = ctx.row("blowup", N);
    r.bound = std::sqrt(static_cast<double>(N));
    r.estimate = b.norm;
    r.residual = std::abs(e.lower_bound - b.norm);
    r.support = b.op.support_size();
    r.verdict = b.norm == r.bound ? Verdict::kPass : Verdict::kFalsified;
    ctx.note("N = " + std::to_string(N) + ": " + render_operator(ctx.group, b.op) +
             ", ||a||_2 = 1, norm " + format_decimal(b.norm));
  }
}

void run_ideal(Context& ctx) {
  const FormalOperator T = ctx.op("T");
  const GroupElement k = ctx.has_element("k") ? ctx.element("k") : ctx.group.identity();
  const GroupElement g = ctx.element("g");
  const auto numeric = ctx.cfg.numeric_J.empty() ? std::vector<int>{1, 2, 4} : ctx.cfg.numeric_J;
  const IdealExperimentReport rep =
      ideal_experiment(ctx.space, T, k, g, ctx.cfg.J_max, numeric, ctx.cfg.C, ctx.cfg.norm,
                       ctx.cfg.slack);
  for (const IdealRow& row : rep.rows) {
    if (row.residual) {
      ResultRow& r = ctx.row("ideal", row.J);
      ctx.fill_estimate(r, row.residual->check);
    }
  }
  for (const IdealRow& row : rep.rows) {
    ResultRow& r = ctx.row("ideal.threshold", row.J);
    r.bound = row.threshold;
    r.estimate = row.bound;
    r.residual = std::abs(row.identity_coefficient - rep.a_k);
    r.converged = row.bound < row.threshold;
    r.verdict = row.identity_coefficient == rep.a_k ? Verdict::kPass : Verdict::kFalsified;
  }
  ResultRow& r = ctx.row("ideal.closing", rep.closing_J.value_or(0));
  r.bound = std::abs(rep.a_k) / 2.0;
  r.estimate = rep.closing_J ? ctx.cfg.C / std::sqrt(static_cast<double>(*rep.closing_J)) *
                                   rep.coefficient_mass
                             : 0.0;
  r.converged = rep.closing_J.has_value();
  r.verdict = rep.closing_J ? Verdict::kPass : Verdict::kInconclusive;
  ctx.note("T0 = k^-1 T = " + render_operator(ctx.group, rep.T0) + ", a_k = " +
           format_decimal(std::abs(rep.a_k)) + ", sum_F |a_h| = " +
           format_decimal(rep.coefficient_mass));
  ctx.note(rep.closing_J ? "bound (C/sqrt J) sum_F |a_h| first drops below |a_k|/2 at J = " +
                               std::to_string(*rep.closing_J)
                         : "bound stays above |a_k|/2 for J <= " + std::to_string(ctx.cfg.J_max));
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  RunResult result;
  Context ctx{config, Group(config.presentation), CayleySpace(Group(config.presentation), config.ball_cap),
              param_hash(config), result};
  try {
    if (config.experiment == "panalytic") {
      run_panalytic(ctx);
    } else if (config.experiment == "average") {
      run_average(ctx);
    } else if (config.experiment == "norm") {
      run_norm(ctx);
    } else if (config.experiment == "trace") {
      run_trace(ctx);
    } else if (config.experiment == "orbits") {
      run_orbits(ctx);
    } else if (config.experiment == "pingpong") {
      run_pingpong(ctx);
    } else if (config.experiment == "blowup") {
      run_blowup(ctx);
    } else if (config.experiment == "ideal") {
      run_ideal(ctx);
    } else {
      throw ConfigError("unknown experiment '" + config.experiment + "'");
    }
  } catch (const BudgetExceeded& e) {
    result.summary.push_back(std::string("budget exceeded: ") + e.what());
    result.exit_code = kExitInconclusive;
    return result;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  Verdict overall = Verdict::kPass;
  for (const ResultRow& r : result.rows) overall = worst(overall, r.verdict);
  result.exit_code = overall == Verdict::kFalsified      ? kExitFalsified
                     : overall == Verdict::kInconclusive ? kExitInconclusive
                                                         : kExitPass;
  return result;
}

std::string render_csv(const RunResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRow& r : result.rows) {
    out += csv_line(r);
    out += '\n';
  }
  return out;
}

std::string render_summary(const ExperimentConfig& config, const RunResult& result) {
  std::string out = "experiment: " + config.experiment + "\nparameters:\n";
  for (const auto& line : config.echo) out += "  " + line + "\n";
  for (const auto& line : result.summary) out += line + "\n";
  std::size_t counts[3] = {0, 0, 0};
  for (const ResultRow& r : result.rows) ++counts[static_cast<int>(r.verdict)];
  out += "rows: " + std::to_string(result.rows.size()) + " (PASS " + std::to_string(counts[0]) +
         ", FALSIFIED " + std::to_string(counts[1]) + ", INCONCLUSIVE " +
         std::to_string(counts[2]) + ")\n";
  const char* verdict = result.exit_code == kExitPass          ? "PASS"
                        : result.exit_code == kExitFalsified   ? "FALSIFIED"
                                                               : "INCONCLUSIVE";
  out += std::string("verdict: ") + verdict + " (exit " + std::to_string(result.exit_code) + ")\n";
  return out;
}

std::string render_svg(const RunResult& result) {
  // estimate and bound against index, for the rows of the primary experiment
  std::vector<const ResultRow*> rows;
  for (const ResultRow& r : result.rows) {
    if (!result.rows.empty() && r.experiment == result.rows.front().experiment) rows.push_back(&r);
  }
  const double width = 640;
  const double height = 400;
  const double margin = 50;
  double x_min = 0;
  double x_max = 1;
  double y_max = 1e-12;
  if (!rows.empty()) {
    x_min = static_cast<double>(rows.front()->index);
    x_max = static_cast<double>(rows.back()->index);
    if (x_max <= x_min) x_max = x_min + 1;
  }
  for (const ResultRow* r : rows) y_max = std::max({y_max, r->bound, r->estimate});
  const auto px = [&](double x) { return margin + (x - x_min) / (x_max - x_min) * (width - 2 * margin); };
  const auto py = [&](double y) { return height - margin - y / y_max * (height - 2 * margin); };
  const auto polyline = [&](bool bound, const char* colour) {
    std::string pts;
    for (const ResultRow* r : rows) {
      pts += format_decimal(px(static_cast<double>(r->index))) + "," +
             format_decimal(py(bound ? r->bound : r->estimate)) + " ";
    }
    return std::string("<polyline fill=\"none\" stroke=\"") + colour +
           "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
  };
  std::string out =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n"
      "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n"
      "<line x1=\"50\" y1=\"350\" x2=\"590\" y2=\"350\" stroke=\"black\"/>\n"
      "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"350\" stroke=\"black\"/>\n";
  out += polyline(true, "#c0392b");
  out += polyline(false, "#2c3e50");
  out += "<text x=\"60\" y=\"40\" font-size=\"14\">" +
         (rows.empty() ? std::string("no rows") : rows.front()->experiment) +
         ": bound (red) and estimate (dark) vs index; y max " + format_decimal(y_max) +
         "</text>\n</svg>\n";
  return out;
}

void write_artifacts(const ExperimentConfig& config, const RunResult& result,
                     const std::string& prefix) {
  const auto write = [](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << text;
  };
  write(prefix + ".csv", render_csv(result));
  write(prefix + ".summary.txt", render_summary(config, result));
  if (config.svg) write(prefix + ".svg", render_svg(result));
  if (!result.witness.empty()) write(prefix + ".witness.txt", result.witness);
}

}  // namespace actionalg::cli
