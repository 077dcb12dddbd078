#include "ocf/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <utility>
#include <variant>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ocf/constants.hpp"
#include "ocf/core.hpp"
#include "ocf/errors.hpp"
#include "ocf/kuzmin.hpp"
#include "ocf/markov.hpp"
#include "ocf/measures.hpp"
#include "ocf/parallel.hpp"
#include "ocf/rational.hpp"
#include "ocf/simulation.hpp"

namespace ocf::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

// Tabular result: CSV gets a header, the rows and one "# key=value" line per
// summary entry; JSON gets {"rows": [...], key: value, ...}.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, Cell>> summary;
};

Cell opt(const std::optional<double>& v) {
  return v ? Cell{*v} : Cell{};
}

Cell integer_cell(const Integer& z) {
  if (mpz_fits_slong_p(z.get_mpz_t())) return Cell{static_cast<long long>(z.get_si())};
  return Cell{z.get_str()};
}

std::string csv_field(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return fmt::format("{:.17g}", v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        }
      },
      c);
}

json json_value(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return std::isfinite(v) ? json(v) : json(nullptr);
        } else {
          return json(v);
        }
      },
      c);
}

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t k = 0; k < t.columns.size(); ++k) os << (k ? "," : "") << t.columns[k];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << csv_field(row[k]);
    os << '\n';
  }
  for (const auto& [key, value] : t.summary) os << "# " << key << '=' << csv_field(value) << '\n';
}

json table_json(const Table& t) {
  json doc;
  json rows = json::array();
  for (const auto& row : t.rows) {
    json r;
    for (std::size_t k = 0; k < row.size(); ++k) r[t.columns[k]] = json_value(row[k]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  for (const auto& [key, value] : t.summary) doc[key] = json_value(value);
  return doc;
}

struct Settings {
  std::string format;
  std::string out_path;
  unsigned threads = 0;
  std::uint64_t seed = 20240901;
  std::optional<std::size_t> grid_size;
  long i_max = kDefaultIMax;
  int iterations = 12;
  std::size_t samples = 1'000'000;
  std::optional<int> steps;
  double tolerance = 1e-9;
};

class Emitter {
 public:
  Emitter(const Settings& s, std::ostream& out, const std::string& default_format)
      : format_(s.format.empty() ? default_format : s.format), path_(s.out_path), out_(out) {}

  bool csv() const { return format_ == "csv"; }

  void emit(const Table& t) {
    if (csv()) {
      write_csv(stream(), t);
    } else {
      stream() << table_json(t).dump(2) << '\n';
    }
  }

  void emit(const json& doc) { stream() << doc.dump(2) << '\n'; }

 private:
  std::ostream& stream() {
    if (path_.empty()) return out_;
    if (!file_.is_open()) {
      file_.open(path_);
      if (!file_) throw std::ios_base::failure("cannot open " + path_ + " for writing");
    }
    return file_;
  }

  std::string format_;
  std::string path_;
  std::ostream& out_;
  std::ofstream file_;
};

int cmd_constants(const Settings& s, std::ostream& out) {
  const auto& c = constants();
  Table t{{"name", "value"}, {}, {}};
  const std::vector<std::pair<std::string, double>> entries = {
      {"G", c.G},
      {"g", c.g},
      {"g2", c.g2},
      {"log_G", c.log_G},
      {"inv_3_log_G", c.inv_3_log_G},
      {"theta1", c.theta1},
      {"theta2", c.theta2},
      {"theta", c.theta},
      {"eta_target", c.eta_target},
      {"eta_inner_sum_target", c.eta_inner_sum_target}};
  Emitter e(s, out, "json");
  if (e.csv()) {
    for (const auto& [k, v] : entries) t.rows.push_back({k, v});
    e.emit(t);
  } else {
    json doc;
    for (const auto& [k, v] : entries) doc[k] = v;
    e.emit(doc);
  }
  return kOk;
}

int cmd_expand(const Settings& s, const std::string& p_text, const std::string& q_text,
               std::ostream& out) {
  Integer p, q;
  if (p.set_str(p_text, 10) != 0 || q.set_str(q_text, 10) != 0) {
    throw DomainError("numerator and denominator must be integers");
  }
  if (q == 0) throw DomainError("zero denominator");
  Integer d;
  mpz_gcd(d.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (d != 1) throw DomainError(p_text + "/" + q_text + " is not in lowest terms");
  const Rational x = make_rational(p, q);
  if (sgn(x) < 0 || x > 1) throw DomainError(to_string(x) + " is outside [0, 1]");

  const Expansion ex = expand(x);
  const auto rows = convergents(ex.digits);
  Emitter e(s, out, "json");
  if (e.csv()) {
    Table t{{"n", "a", "eps", "p", "q", "delta"}, {}, {{"terminated", ex.terminated}}};
    for (const auto& r : rows) {
      Cell a, eps;
      if (r.n >= 1) {
        a = integer_cell(ex.digits[r.n - 1].a);
        eps = static_cast<long long>(ex.digits[r.n - 1].eps);
      }
      t.rows.push_back({static_cast<long long>(r.n), a, eps, integer_cell(r.p),
                        integer_cell(r.q), static_cast<long long>(r.delta)});
    }
    e.emit(t);
    return kOk;
  }
  json doc;
  doc["digits"] = json::array();
  for (const auto& d1 : ex.digits) {
    doc["digits"].push_back({{"a", json_value(integer_cell(d1.a))}, {"eps", d1.eps}});
  }
  doc["convergents"] = json::array();
  for (const auto& r : rows) {
    doc["convergents"].push_back({{"n", r.n},
                                  {"p", json_value(integer_cell(r.p))},
                                  {"q", json_value(integer_cell(r.q))},
                                  {"delta", r.delta}});
  }
  doc["terminated"] = ex.terminated;
  e.emit(doc);
  return kOk;
}

int cmd_eta(const Settings& s, std::ostream& out) {
  const auto& c = constants();
  const RateConstant r = eta_constant(s.tolerance);
  const bool ok = std::abs(r.value - c.eta_target) <= 5e-6 &&
                  std::abs(r.inner_sum - c.eta_inner_sum_target) <= 5e-6 &&
                  r.tail_bound <= s.tolerance && r.value < 1.0;
  Emitter e(s, out, "json");
  if (e.csv()) {
    e.emit(Table{{"eta", "inner_sum", "terms_used", "tail_bound", "pass"},
                 {{r.value, r.inner_sum, static_cast<long long>(r.terms_used), r.tail_bound, ok}},
                 {}});
  } else {
    json doc;
    doc["eta"] = r.value;
    doc["inner_sum"] = r.inner_sum;
    doc["terms_used"] = r.terms_used;
    doc["tail_bound"] = r.tail_bound;
    doc["pass"] = ok;
    e.emit(doc);
  }
  return ok ? kOk : kGateFail;
}

int cmd_kuzmin(const Settings& s, std::ostream& out) {
  KuzminOptions opts;
  opts.iterations = s.iterations;
  opts.i_max = s.i_max;
  const ConvergenceReport rep =
      iterate_and_report(identity_cdf(s.grid_size.value_or(kDefaultKuzminGrid)), opts);

  Table t{{"n", "sup_err", "M_n", "ratio", "trustworthy", "verdict"}, {}, {}};
  bool ok = rep.all_pass();
  const ConvergenceRow* prev = nullptr;
  for (const auto& r : rep.rows) {
    t.rows.push_back({static_cast<long long>(r.n), r.error, r.aux, opt(r.ratio), r.trustworthy,
                      std::string(to_string(r.verdict))});
    // Over the trustworthy window sup |R_n| must decrease strictly.
    if (r.trustworthy && prev && prev->trustworthy && !(r.error < prev->error)) ok = false;
    prev = &r;
  }
  t.summary.emplace_back("fitted_rate", opt(rep.fitted_rate));
  t.summary.emplace_back("eta", eta_constant().value);
  t.summary.emplace_back("last_trustworthy_n",
                         rep.last_trustworthy_n ? Cell{static_cast<long long>(*rep.last_trustworthy_n)}
                                                : Cell{});
  for (const auto& note : rep.notes) t.summary.emplace_back("note", note);
  Emitter(s, out, "csv").emit(t);
  if (!rep.last_trustworthy_n) return kEmptyWindow;
  return ok ? kOk : kGateFail;
}

int cmd_markov(const Settings& s, const std::string& which, std::ostream& out) {
  const auto& c = constants();
  Table t;
  bool ok = true;
  if (which == "rowsum") {
    t.columns = {"w", "row_sum", "residual", "pass"};
    for (double w : rowsum_states()) {
      const double sum = kernel_row_sum(w, s.i_max);
      const double res = std::abs(sum - 1.0);
      t.rows.push_back({w, sum, res, res <= 1e-10});
      ok = ok && res <= 1e-10;
    }
  } else if (which == "stationarity") {
    t.columns = {"lo", "hi", "residual", "pass"};
    for (const auto& b : stationarity_suite()) {
      const double res = stationarity_residual(b);
      t.rows.push_back({b.lo, b.hi, res, res <= 1e-8});
      ok = ok && res <= 1e-8;
    }
  } else if (which == "prop1") {
    const TransitionOperator op(
        TransitionOperator::default_nodes(s.grid_size.value_or(kDefaultChainGrid)), s.i_max);
    t.columns = {"kind", "case", "var_f", "sup_f", "var_Uf", "bound", "pass"};
    auto add = [&](const std::string& kind, Cell which_case, const VariationReport& r) {
      t.rows.push_back({kind, which_case, r.var_f, r.sup_f, r.var_Uf, r.bound, r.satisfied});
      ok = ok && r.satisfied;
    };
    for (std::size_t k = 0; k < std::min<std::size_t>(s.samples, 50); ++k) {
      add("random", static_cast<long long>(k), check_prop1(op, random_bv_function(op, s.seed, k)));
    }
    for (double y : uniform_nodes(0.0, c.G, 21)) add("indicator", y, check_prop1_indicator(op, y));
  } else if (which == "thG") {
    const std::size_t fine_n = s.grid_size.value_or(kDefaultThGGrid);
    if (fine_n < 5) throw ValidationError("grid size must be >= 5");
    const TransitionOperator fine(TransitionOperator::default_nodes(fine_n), s.i_max);
    const TransitionOperator coarse(TransitionOperator::default_nodes((fine_n + 1) / 2), s.i_max);
    TheoremGConfig cfg;
    cfg.s0 = {0.0, 1.0 / 3.0, 1.0};
    cfg.n_max = s.steps.value_or(12);
    const ConvergenceReport rep = theorem_thG_check(fine, coarse, cfg);
    t.columns = {"n", "max_G_err", "max_F_err", "bound", "slack", "ratio", "trustworthy",
                 "verdict"};
    for (const auto& r : rep.rows) {
      t.rows.push_back({static_cast<long long>(r.n), r.error, r.aux, r.bound, r.slack,
                        opt(r.ratio), r.trustworthy, std::string(to_string(r.verdict))});
    }
    ok = rep.all_pass();
    t.summary.emplace_back("fitted_rate", opt(rep.fitted_rate));
    if (rep.fitted_rate && *rep.fitted_rate > c.theta + 0.02) ok = false;
    for (const auto& note : rep.notes) t.summary.emplace_back("note", note);
  } else {
    throw ValidationError("unknown markov check " + which);
  }
  Emitter(s, out, "csv").emit(t);
  return ok ? kOk : kMarkovFail;
}

int cmd_measures(const Settings& s, std::ostream& out) {
  const auto& c = constants();
  Table t{{"lo", "hi", "measure", "preimage_measure", "residual", "pass"}, {}, {}};
  bool ok = true;
  for (const auto& a : invariance_suite()) {
    const InvarianceResult r = t_invariance_check(a);
    t.rows.push_back({a.lo, a.hi, r.measure, r.preimage_measure, r.residual, r.residual <= 1e-9});
    ok = ok && r.residual <= 1e-9;
  }
  double gap = 0.0;
  for (double x : uniform_nodes(0.0, 1.0, 1001)) gap = std::max(gap, std::abs(rho_cdf(x) - limit_H(x)));
  t.summary.emplace_back("rho_cdf_1", rho_cdf(1.0));
  t.summary.emplace_back("xi_cdf_G", xi_cdf(c.G));
  t.summary.emplace_back("max_rho_cdf_minus_limit_H", gap);
  ok = ok && rho_cdf(1.0) == 1.0 && xi_cdf(c.G) == 1.0 && gap <= 1e-12;
  Emitter(s, out, "csv").emit(t);
  return ok ? kOk : kGateFail;
}

int cmd_simulate(const Settings& s, std::ostream& out) {
  const SimulationReport rep = simulate(s.seed, s.samples, s.steps.value_or(30));
  Table t{{"n", "ks_vs_limitH", "ks_s_vs_xi", "terminated_count", "verdict"}, {}, {}};
  for (const auto& r : rep.rows) {
    t.rows.push_back({static_cast<long long>(r.n), r.ks_vs_limit_H, opt(r.ks_s_vs_xi),
                      static_cast<long long>(r.terminated_count),
                      std::string(to_string(r.verdict))});
  }
  t.summary.emplace_back("seed", std::to_string(rep.seed));
  t.summary.emplace_back("samples", static_cast<long long>(rep.samples));
  t.summary.emplace_back("running_at_end", static_cast<long long>(rep.running_at_end));
  t.summary.emplace_back("ks_x0_vs_uniform", rep.ks_x0_vs_uniform);
  t.summary.emplace_back("ks_s1_vs_first_digit_law", opt(rep.ks_s1_vs_first_digit_law));
  t.summary.emplace_back("lambda_r1_gt_2", rep.lambda_r1_gt_2);
  t.summary.emplace_back("w2_fraction", opt(rep.w2_fraction));
  t.summary.emplace_back("w2_target", opt(rep.w2_target));
  for (const auto& g : rep.failed_gates) t.summary.emplace_back("failed_gate", g);
  Emitter(s, out, "csv").emit(t);
  return rep.all_pass() ? kOk : kSimulateBreach;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Odd continued fractions: exact expansions and Gauss-Kuzmin experiments", "ocf"};
  app.require_subcommand(1);
  app.fallthrough();

  Settings s;
  app.add_option("--format", s.format, "Output format (default depends on the command)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", s.out_path, "Write results to this file instead of standard output");
  app.add_option("--threads", s.threads, "Worker thread cap (0 = all cores)")->envname("OCF_THREADS");
  app.add_option("--seed", s.seed, "Random seed")->envname("OCF_SEED");
  app.add_option("--grid-size", s.grid_size, "Number of grid nodes")->check(CLI::Range(5, 1 << 24));
  app.add_option("--i-max", s.i_max, "Largest partial quotient summed explicitly (odd)");
  app.add_option("--iterations", s.iterations, "Kuzmin iterations")->check(CLI::NonNegativeNumber);
  app.add_option("--samples", s.samples, "Monte Carlo samples / random test functions")
      ->check(CLI::PositiveNumber);
  app.add_option("--steps", s.steps, "Orbit steps (simulate) or largest n (markov thG)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tolerance", s.tolerance, "Series tail tolerance (eta)")
      ->check(CLI::PositiveNumber);

  auto* constants_cmd = app.add_subcommand("constants", "Print the constants used throughout");
  std::string p_text, q_text;
  auto* expand_cmd = app.add_subcommand("expand", "OCF digits and convergents of p/q in [0, 1]");
  expand_cmd->add_option("numerator", p_text)->required();
  expand_cmd->add_option("denominator", q_text)->required();
  auto* kuzmin_cmd = app.add_subcommand("kuzmin", "Iterate the Gauss-Kuzmin equation from H0(x) = x");
  auto* eta_cmd = app.add_subcommand("eta", "Compute the contraction constant eta");
  std::string which;
  auto* markov_cmd = app.add_subcommand("markov", "Checks of the chain s_n and its operator");
  markov_cmd->add_option("check", which, "rowsum | stationarity | prop1 | thG")
      ->required()
      ->check(CLI::IsMember({"rowsum", "stationarity", "prop1", "thG"}));
  auto* measures_cmd = app.add_subcommand("measures", "T-invariance and CDF identities");
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo orbit statistics");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg;
    const int code = app.exit(e, out, msg);
    err << msg.str();
    return code == 0 ? kOk : kUsage;
  }

  try {
    set_thread_limit(s.threads);
    if (s.i_max < 1 || s.i_max % 2 == 0) throw DomainError("--i-max must be odd and positive");
    if (*constants_cmd) return cmd_constants(s, out);
    if (*expand_cmd) return cmd_expand(s, p_text, q_text, out);
    if (*kuzmin_cmd) return cmd_kuzmin(s, out);
    if (*eta_cmd) return cmd_eta(s, out);
    if (*markov_cmd) return cmd_markov(s, which, out);
    if (*measures_cmd) return cmd_measures(s, out);
    if (*simulate_cmd) return cmd_simulate(s, out);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " (achieved " << e.achieved();
    if (e.required_depth() > 0) err << ", required depth " << e.required_depth();
    err << ")\n";
    return kNumerical;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace ocf::cli
