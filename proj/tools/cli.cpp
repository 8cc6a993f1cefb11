#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "anml/errors.hpp"
#include "anml/luckiness.hpp"
#include "anml/oracle.hpp"
#include "anml/predictors.hpp"
#include "anml/regret.hpp"
#include "output.hpp"

namespace anml::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalArgs {
  std::string base = "nats";
  std::string format = "csv";
  int threads = ReduceOptions::from_environment().threads;

  Base base_unit() const { return base == "bits" ? Base::Bits : Base::Nats; }
  Format output_format() const { return format == "json" ? Format::Json : Format::Csv; }
  EvalOptions eval() const {
    EvalOptions options;
    options.reduce.threads = threads;
    return options;
  }
};

struct PredictorArgs {
  std::string predictor;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string prior = "jeffreys";
  std::string luckiness = "uniform";
  std::vector<int> past;
};

std::vector<std::string> split(const std::string& text, char separator) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, separator)) parts.push_back(part);
  return parts;
}

DirichletParams parse_params(const std::string& text, int m, const char* flag) {
  if (text == "jeffreys") return DirichletParams::jeffreys(m);
  if (text == "uniform" || text == "laplace") return DirichletParams::uniform(m);
  std::vector<double> values;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) throw UsageError(std::string(flag) + ": cannot parse '" + part + "'");
    values.push_back(v);
  }
  if (static_cast<int>(values.size()) != m) {
    throw UsageError(std::string(flag) + " needs " + std::to_string(m) + " values, got " +
                     std::to_string(values.size()));
  }
  for (double v : values) {
    if (!(v > 0.0)) throw UsageError(std::string(flag) + " values must be positive");
  }
  return DirichletParams(std::move(values));
}

LuckinessFunction luckiness_of(const PredictorArgs& args, int m) {
  if (!args.past.empty()) {
    if (static_cast<int>(args.past.size()) != m) throw UsageError("--past needs one count per symbol");
    return LuckinessFunction::conditional(CountVector(args.past));
  }
  return LuckinessFunction::dirichlet(parse_params(args.luckiness, m, "--luckiness"));
}

double require_alpha(const PredictorArgs& args, const std::string& name) {
  if (std::isnan(args.alpha)) throw UsageError("--predictor " + name + " needs --alpha");
  return args.alpha;
}

PredictorSpec build_spec(const PredictorArgs& args, int m) {
  std::string name = args.predictor;
  if (name.empty()) name = std::isnan(args.alpha) ? "kt" : "anml";
  if (name == "kt") return PredictorSpec::kt(m);
  if (name == "laplace") return PredictorSpec::laplace(m);
  if (name == "mixture") return PredictorSpec::mixture(parse_params(args.prior, m, "--prior"));
  if (name == "anml") return PredictorSpec::alpha_nml(require_alpha(args, name), parse_params(args.prior, m, "--prior"));
  if (name == "nml") return PredictorSpec::nml();
  if (name == "lanml") return PredictorSpec::luckiness_alpha_nml(require_alpha(args, name), luckiness_of(args, m).params());
  if (name == "lnml") return PredictorSpec::luckiness_nml(luckiness_of(args, m).params());
  throw UsageError("unknown predictor '" + name + "'");
}

void add_predictor_options(CLI::App* sub, PredictorArgs& args) {
  sub->add_option("--predictor", args.predictor, "kt|laplace|mixture|anml|nml|lanml|lnml (default kt, or anml with --alpha)")
      ->check(CLI::IsMember({"kt", "laplace", "mixture", "anml", "nml", "lanml", "lnml"}));
  sub->add_option("--alpha", args.alpha, "order of the alpha-NML predictors (>= 1)");
  sub->add_option("--prior", args.prior, "jeffreys|uniform|a1,a2,... for mixture and anml")->capture_default_str();
  sub->add_option("--luckiness", args.luckiness, "jeffreys|uniform|b1,b2,... for lanml and lnml")->capture_default_str();
  sub->add_option("--past", args.past, "past counts c1,c2,...: luckiness Dir(c + 1) (conditional NML)")
      ->delimiter(',');
}

OutputRecord::Value optional_alpha(const PredictorSpec& spec) {
  if (const auto a = spec.alpha()) return *a;
  return {};
}

std::vector<int> range_to(int last) {
  std::vector<int> values;
  for (int a = 1; a <= last; ++a) values.push_back(a);
  return values;
}

struct PredictCommand {
  PredictorArgs predictor;
  int m = 0;
  std::vector<int> counts;
  int horizon = 0;

  void attach(CLI::App* sub) {
    add_predictor_options(sub, predictor);
    sub->add_option("--m", m, "alphabet size")->required()->check(CLI::Range(2, 1 << 20));
    sub->add_option("--counts", counts, "past counts c1,c2,...")->required()->delimiter(',');
    sub->add_option("--horizon", horizon, "sequence length the predictor is normalized for (default past + 1)");
  }

  int execute(const GlobalArgs& global, std::ostream& out) const {
    if (static_cast<int>(counts.size()) != m) throw UsageError("--counts needs exactly --m values");
    const PredictorSpec spec = build_spec(predictor, m);
    const CountVector past(counts);
    const std::optional<int> h = horizon > 0 ? std::optional<int>(horizon) : std::nullopt;
    const auto p = conditional_distribution(spec, past, h, global.eval());
    const Base base = global.base_unit();
    std::vector<OutputRecord> records;
    for (int k = 0; k < m; ++k) {
      const double probability = p[static_cast<std::size_t>(k)];
      records.push_back(OutputRecord()
                            .add("predictor", spec.label())
                            .add("m", m)
                            .add("counts", past.to_string())
                            .add("symbol", k)
                            .add("probability", probability)
                            .add("log_loss_" + unit_suffix(base), in_base(-std::log(probability), base)));
    }
    write_records(out, global.output_format(), records);
    return kOk;
  }
};

struct RegretCommand {
  PredictorArgs predictor;
  std::string kind = "worst";
  int n = 0;
  int m = 0;
  double order = std::numeric_limits<double>::quiet_NaN();

  void attach(CLI::App* sub) {
    add_predictor_options(sub, predictor);
    sub->add_option("--kind", kind, "worst|average|alpha|luckiness-worst|luckiness-average|luckiness-alpha|luckiness-alpha-sup")
        ->check(CLI::IsMember({"worst", "average", "alpha", "luckiness-worst", "luckiness-average", "luckiness-alpha",
                               "luckiness-alpha-sup"}))
        ->capture_default_str();
    sub->add_option("--n", n, "sequence length")->required()->check(CLI::Range(1, 1 << 24));
    sub->add_option("--m", m, "alphabet size")->required()->check(CLI::Range(2, 1 << 20));
    sub->add_option("--order", order, "order of the alpha-regret kinds (default --alpha)");
  }

  double regret_order() const {
    const double value = std::isnan(order) ? predictor.alpha : order;
    if (std::isnan(value)) throw UsageError("--kind " + kind + " needs --order or --alpha");
    return value;
  }

  int execute(const GlobalArgs& global, std::ostream& out) const {
    const PredictorSpec spec = build_spec(predictor, m);
    const EvalOptions options = global.eval();
    const Base base = global.base_unit();
    std::optional<double> regret_alpha;
    std::optional<double> asymptotic;
    std::string maximizer;
    double value = 0.0;
    std::vector<std::string> notes;
    std::optional<double> lower_bound;

    if (kind == "worst") {
      const auto report = worst_case_regret(spec, n, m, options);
      value = report.value_nats;
      maximizer = report.maximizer_string();
      if (spec.is<Nml>()) asymptotic = asymptotic_shtarkov(n, m);
      if (spec.is<AlphaNml>() && spec.params()->is_jeffreys()) asymptotic = asymptotic_rmax(n, m, *spec.alpha());
      if (spec.is<Mixture>() && spec.params()->is_jeffreys()) asymptotic = asymptotic_rmax(n, m, 1.0);
    } else if (kind == "average" || kind == "alpha") {
      regret_alpha = kind == "average" ? 1.0 : regret_order();
      const auto report = alpha_regret(spec, n, m, *regret_alpha, options);
      value = report.value_nats;
      maximizer = report.maximizer_string();
      if (kind == "alpha" && *regret_alpha > 1.0 && spec.is<AlphaNml>() && *spec.alpha() == *regret_alpha) {
        lower_bound = sibson_mi_alpha(n, m, *regret_alpha, *spec.params(), options);
        const bool holds = value >= *lower_bound - 1e-9;
        notes.push_back("sibson_lower_bound_" + unit_suffix(base) + "=" + format_number(in_base(*lower_bound, base)) +
                        " regret>=bound:" + (holds ? "yes" : "no"));
      }
    } else {
      const LuckinessFunction pi = luckiness_of(predictor, m);
      if (kind == "luckiness-worst") {
        const auto report = worst_case_luckiness_regret(spec, pi, n, m, options);
        value = report.value_nats;
        maximizer = report.maximizer_string();
      } else if (kind == "luckiness-average") {
        value = average_luckiness_regret(spec, pi, n, m, options);
      } else if (kind == "luckiness-alpha") {
        regret_alpha = regret_order();
        value = luckiness_alpha_regret(spec, pi, n, m, *regret_alpha, options);
      } else {
        regret_alpha = regret_order();
        const auto report = luckiness_alpha_regret_supform(spec, pi, n, m, *regret_alpha, options);
        value = report.value_nats;
        maximizer = report.maximizer_string();
      }
    }

    const std::string unit = unit_suffix(base);
    OutputRecord record;
    record.add("n", n)
        .add("m", m)
        .add("alpha", optional_alpha(spec))
        .add("predictor", spec.label())
        .add("kind", kind)
        .add_optional("order", regret_alpha)
        .add("value_nats", value)
        .add("value_bits", nats_to_bits(value))
        .add("maximizer", maximizer)
        .add_optional("asymptotic_" + unit,
                      asymptotic ? std::optional<double>(in_base(*asymptotic, base)) : std::nullopt)
        .add_optional("gap_" + unit,
                      asymptotic ? std::optional<double>(in_base(std::fabs(value - *asymptotic), base)) : std::nullopt);
    if (lower_bound) {
      record.add("lower_bound_" + unit, in_base(*lower_bound, base)).add("lower_bound_holds", value >= *lower_bound - 1e-9);
    }
    write_records(out, global.output_format(), {record}, notes);
    return kOk;
  }
};

struct PercentTableCommand {
  std::vector<int> n_list{10, 50, 100};
  int alpha_max = 10;
  std::string path;

  void attach(CLI::App* sub) {
    sub->add_option("--n-list", n_list, "sequence lengths")->delimiter(',')->check(CLI::Range(1, 1 << 20));
    sub->add_option("--alpha-max", alpha_max, "largest integer alpha")->check(CLI::Range(1, 1 << 10))->capture_default_str();
    sub->add_option("--out", path, "output file (default stdout)");
  }

  int execute(const GlobalArgs& global, std::ostream& out) const {
    const auto rows = figure1_table(n_list, range_to(alpha_max), global.eval());
    const Base base = global.base_unit();
    const std::string unit = unit_suffix(base);
    std::vector<OutputRecord> records;
    for (const auto& row : rows) {
      records.push_back(OutputRecord()
                            .add("n", row.n)
                            .add("alpha", row.alpha)
                            .add("regret_" + unit, in_base(row.regret_nats, base))
                            .add("nml_regret_" + unit, in_base(row.nml_regret_nats, base))
                            .add("percent_increase", row.percent_increase));
    }
    const std::vector<std::string> notes = {"alpha=1 rows are the KT estimator (Krichevsky-Trofimov)"};
    if (path.empty()) {
      write_records(out, global.output_format(), records, notes);
      return kOk;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open '" + path + "' for writing");
    write_records(file, global.output_format(), records, notes);
    file.close();
    if (!file) throw IoError("failed writing '" + path + "'");
    return kOk;
  }
};

struct AsymptoticsCommand {
  int m = 2;
  double alpha = 1.0;
  std::vector<int> n_list{100, 400, 1600};
  std::string quantity = "rmax";

  void attach(CLI::App* sub) {
    sub->add_option("--m", m, "alphabet size")->check(CLI::Range(2, 64))->capture_default_str();
    sub->add_option("--alpha", alpha, "order (>= 1; > 1 for sibson)")->capture_default_str();
    sub->add_option("--n-list", n_list, "sequence lengths")->delimiter(',')->check(CLI::Range(1, 1 << 20));
    sub->add_option("--quantity", quantity, "rmax|sibson|shtarkov")
        ->check(CLI::IsMember({"rmax", "sibson", "shtarkov"}))
        ->capture_default_str();
  }

  int execute(const GlobalArgs& global, std::ostream& out) const {
    const EvalOptions options = global.eval();
    const Base base = global.base_unit();
    const std::string unit = unit_suffix(base);
    const auto jeffreys = DirichletParams::jeffreys(m);
    std::vector<OutputRecord> records;
    for (int n : n_list) {
      double exact = 0.0;
      double asymptotic = 0.0;
      if (quantity == "rmax") {
        exact = worst_case_regret(PredictorSpec::alpha_nml(alpha, jeffreys), n, m, options).value_nats;
        asymptotic = asymptotic_rmax(n, m, alpha);
      } else if (quantity == "sibson") {
        exact = sibson_mi_alpha(n, m, alpha, jeffreys, options);
        asymptotic = asymptotic_min_alpha_regret(n, m, alpha);
      } else {
        exact = sibson_mi_infinity(n, m, options);
        asymptotic = asymptotic_shtarkov(n, m);
      }
      OutputRecord record;
      record.add("n", n).add("m", m);
      if (quantity == "shtarkov") {
        record.add("alpha", OutputRecord::Value());
      } else {
        record.add("alpha", alpha);
      }
      records.push_back(record.add("quantity", quantity)
                            .add("exact_" + unit, in_base(exact, base))
                            .add("asymptotic_" + unit, in_base(asymptotic, base))
                            .add("gap_" + unit, in_base(std::fabs(exact - asymptotic), base)));
    }
    write_records(out, global.output_format(), records);
    return kOk;
  }
};

struct OracleCommand {
  std::string check;
  int n = 0;
  int m = 2;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string prior = "jeffreys";
  std::string luckiness = "2,2";

  void attach(CLI::App* sub) {
    sub->add_option("--check", check, "normalizer|lemma1|lemma2|theorem1|theorem5")
        ->required()
        ->check(CLI::IsMember({"normalizer", "lemma1", "lemma2", "theorem1", "theorem5"}));
    sub->add_option("--n", n, "sequence length")->required()->check(CLI::Range(1, 64));
    sub->add_option("--m", m, "alphabet size")->check(CLI::Range(2, 16))->capture_default_str();
    sub->add_option("--alpha", alpha, "order");
    sub->add_option("--prior", prior, "jeffreys|uniform|a1,a2,...")->capture_default_str();
    sub->add_option("--luckiness", luckiness, "b1,b2 for theorem5")->capture_default_str();
  }

  int execute(const GlobalArgs& global, std::ostream& out) const {
    const EvalOptions options = global.eval();
    const OracleConfig config;
    const DirichletParams a = parse_params(prior, m, "--prior");
    const auto need_alpha = [&] {
      if (std::isnan(alpha)) throw UsageError("--check " + check + " needs --alpha");
      return alpha;
    };
    double fast = 0.0;
    double reference = 0.0;
    double tolerance = 1e-10;
    bool relative = false;
    if (check == "normalizer") {
      const PredictorSpec spec = PredictorSpec::alpha_nml(need_alpha(), a);
      fast = log_normalizer(spec, n, m, options);
      reference = oracle_log_normalizer(spec, n, m, config);
      tolerance = 1e-9;
      relative = true;
    } else if (check == "lemma1") {
      const PredictorSpec spec = std::isnan(alpha) ? PredictorSpec::mixture(a) : PredictorSpec::alpha_nml(alpha, a);
      fast = worst_case_regret(spec, n, m, options).value_nats;
      const double shtarkov = oracle_shtarkov(n, m, config);
      const double log_z = oracle_log_normalizer(spec, n, m, config);
      reference = shtarkov + brute_sequence_max(
                                 n, m,
                                 [&](std::span<const int> x) {
                                   return oracle_log_ml(x, m) - shtarkov - oracle_log_numerator(spec, x, m) + log_z;
                                 },
                                 config);
    } else if (check == "lemma2") {
      const double order = need_alpha();
      const auto sides = lemma2_check(order, n, m, a, options);
      fast = sides.rhs;
      reference = oracle_worst_case_regret(PredictorSpec::alpha_nml(order, a), n, m, config);
    } else if (check == "theorem1") {
      fast = w_alpha_closed(n, m, need_alpha(), a);
      reference = oracle_w_alpha(n, m, alpha, a, config);
    } else {
      const double order = need_alpha();
      const auto b = parse_params(luckiness, m, "--luckiness");
      const auto pi = LuckinessFunction::dirichlet(b);
      fast = luckiness_alpha_regret(PredictorSpec::luckiness_alpha_nml(order, b), pi, n, m, order, options);
      reference = oracle_tilted_sibson_mi(b, n, order, config);
      tolerance = 1e-6;
    }
    const double difference = std::fabs(fast - reference);
    const double allowed = relative ? tolerance * std::max(1.0, std::fabs(reference)) : tolerance;
    const bool pass = difference <= allowed;
    const Base base = global.base_unit();
    const std::string unit = unit_suffix(base);
    OutputRecord record;
    record.add("check", check)
        .add("n", n)
        .add("m", m)
        .add_optional("alpha", std::isnan(alpha) ? std::nullopt : std::optional<double>(alpha))
        .add("fast_" + unit, in_base(fast, base))
        .add("oracle_" + unit, in_base(reference, base))
        .add("difference_" + unit, in_base(difference, base))
        .add("tolerance_nats", allowed)
        .add("pass", pass);
    write_records(out, global.output_format(), {record});
    return pass ? kOk : kCheckFailed;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Universal prediction with alpha-NML: next-symbol distributions, regrets, reference checks", "anml"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalArgs global;
  app.add_option("--base", global.base, "log base of reported values")
      ->check(CLI::IsMember({"nats", "bits"}))
      ->capture_default_str();
  app.add_option("--format", global.format, "csv|json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--threads", global.threads, "worker threads for type-class sums (default ANML_THREADS or 1)")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  PredictCommand predict;
  RegretCommand regret;
  PercentTableCommand percent_table;
  AsymptoticsCommand asymptotics;
  OracleCommand oracle;
  auto* predict_cmd = app.add_subcommand("predict", "next-symbol distribution given past counts");
  auto* regret_cmd = app.add_subcommand("regret", "regret of a predictor");
  auto* percent_table_cmd = app.add_subcommand("figure1", "percent increase of alpha-NML worst-case regret over NML, binary");
  auto* asymptotics_cmd = app.add_subcommand("asymptotics", "exact values against large-n expansions");
  auto* oracle_cmd = app.add_subcommand("oracle", "fast path against brute-force enumeration");
  predict.attach(predict_cmd);
  regret.attach(regret_cmd);
  percent_table.attach(percent_table_cmd);
  asymptotics.attach(asymptotics_cmd);
  oracle.attach(oracle_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*predict_cmd) return predict.execute(global, out);
    if (*regret_cmd) return regret.execute(global, out);
    if (*percent_table_cmd) return percent_table.execute(global, out);
    if (*asymptotics_cmd) return asymptotics.execute(global, out);
    return oracle.execute(global, out);
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUnsupported;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"anml"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace anml::cli
