// deepfactor command-line interface: synthesize panels, train models, run
// walk-forward backtests, explain predictions, and print reports.
//
// Exit codes: 0 success, 1 runtime/data failure, 2 usage error.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "deepfactor/attribution.hpp"
#include "deepfactor/backtest.hpp"
#include "deepfactor/baseline.hpp"
#include "deepfactor/data.hpp"
#include "deepfactor/descriptors.hpp"
#include "deepfactor/error.hpp"
#include "deepfactor/factors.hpp"
#include "deepfactor/io.hpp"
#include "deepfactor/lrp.hpp"
#include "deepfactor/net.hpp"
#include "deepfactor/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace deepfactor;

namespace {

struct CommonFlags {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int jobs = 1;  // 0 = all hardware threads
};

struct SynthFlags {
  int stocks = 500;
  int months = 120;
  std::string truth = "linear";
  double noise = 0.05;
};

struct ModelFlags {
  std::string model = "linear";  // deep1 | deep2 | linear | custom
  std::string hidden;            // comma list for custom nets
  int epochs = 100;
  int batch = 64;
  double learning_rate = 1e-3;
  double ridge = 0.0;
};

struct PanelFlags {
  std::string panel_path;
  bool raw = false;  // standardize on load
};

std::vector<int> parse_hidden(const std::string& text) {
  std::vector<int> dims;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string tok =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    if (!tok.empty()) dims.push_back(std::stoi(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (dims.empty()) throw CLI::ValidationError("--hidden", "expected a comma list like 80,50,10");
  return dims;
}

backtest::ModelKind model_kind_of(const ModelFlags& flags) {
  if (flags.model == "deep1") return backtest::ModelKind::Deep1;
  if (flags.model == "deep2") return backtest::ModelKind::Deep2;
  if (flags.model == "linear") return backtest::ModelKind::Linear;
  if (flags.model == "custom") return backtest::ModelKind::CustomDeep;
  throw CLI::ValidationError("--model", "must be one of deep1, deep2, linear, custom");
}

data::PanelDataset load_panel_flags(const PanelFlags& flags) {
  data::PanelDataset panel = data::load_panel(flags.panel_path, !flags.raw);
  if (flags.raw) data::standardize_panel(panel);
  for (const auto& w : panel.warnings()) std::cerr << "warning: " << w << "\n";
  return panel;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_run_config(const fs::path& out_dir, const std::string& command, const json& values) {
  json doc;
  doc["command"] = command;
  doc["flags"] = values;
  io::write_text_file(out_dir / "run_config.json", doc.dump(2) + "\n");
}

void print_summary_row(const backtest::BacktestReport& report) {
  std::cout << std::left << std::setw(12) << "Return [%]" << std::setw(16) << "Volatility [%]"
            << std::setw(14) << "Sharpe Ratio" << std::setw(10) << "MAE" << std::setw(10)
            << "RMSE" << "\n";
  std::ostringstream vol, sharpe;
  if (report.ann_vol) vol << std::fixed << std::setprecision(2) << *report.ann_vol * 100.0;
  if (report.sharpe) sharpe << std::fixed << std::setprecision(2) << *report.sharpe;
  std::cout << std::left << std::fixed << std::setprecision(2) << std::setw(12)
            << report.ann_return * 100.0 << std::setw(16) << vol.str() << std::setw(14)
            << sharpe.str() << std::setprecision(4) << std::setw(10) << report.mae
            << std::setw(10) << report.rmse << "\n";
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const CommonFlags& common, const SynthFlags& flags) {
  data::SynthSpec spec;
  spec.n_stocks = flags.stocks;
  spec.n_months = flags.months;
  spec.ground_truth = flags.truth == "linear" ? data::TruthKind::Linear : data::TruthKind::Nonlinear;
  spec.noise_sigma = flags.noise;
  spec.seed = common.seed;

  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);

  const data::PanelDataset panel = data::generate_synthetic(spec);
  data::emit_panel(panel, out_dir / "panel.csv");
  io::write_text_file(out_dir / "ground_truth.json",
                      io::ground_truth_json(data::ground_truth(spec.ground_truth), spec) + "\n");
  write_run_config(out_dir, "synth",
                   json{{"stocks", flags.stocks},
                        {"months", flags.months},
                        {"truth", flags.truth},
                        {"noise", flags.noise},
                        {"seed", common.seed},
                        {"out", common.out_dir}});
  std::cout << "wrote " << (out_dir / "panel.csv").string() << " (" << panel.stocks().size()
            << " stocks x " << panel.months().size() << " months)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

json model_flags_json(const ModelFlags& m) {
  return json{{"model", m.model},     {"hidden", m.hidden}, {"epochs", m.epochs},
              {"batch", m.batch},     {"lr", m.learning_rate}, {"ridge", m.ridge}};
}

// The `window` most recent non-empty sample months strictly before as_of,
// mirroring one walk-forward step.
std::vector<Sample> training_window(const data::PanelDataset& panel, Month as_of, int window) {
  std::vector<std::vector<Sample>> sets;
  for (auto it = panel.months().rbegin(); it != panel.months().rend(); ++it) {
    if (*it >= as_of) continue;
    auto built = factors::build_samples(panel, *it);
    if (built.samples.empty()) continue;
    sets.push_back(std::move(built.samples));
    if (static_cast<int>(sets.size()) == window) break;
  }
  if (static_cast<int>(sets.size()) < window) {
    throw InsufficientHistoryError("train: only " + std::to_string(sets.size()) +
                                       " sample months available before " + as_of.str() +
                                       ", need " + std::to_string(window),
                                   "");
  }
  std::vector<Sample> samples;
  for (auto it = sets.rbegin(); it != sets.rend(); ++it) {
    samples.insert(samples.end(), it->begin(), it->end());
  }
  return samples;
}

int cmd_train(const CommonFlags& common, const PanelFlags& panel_flags, const ModelFlags& model,
              const std::string& as_of_text, int window) {
  const Month as_of = Month::parse(as_of_text);
  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);

  const data::PanelDataset panel = load_panel_flags(panel_flags);
  const std::vector<Sample> samples = training_window(panel, as_of, window);

  const backtest::ModelKind kind = model_kind_of(model);
  if (kind == backtest::ModelKind::Linear) {
    const baseline::LinearModel fitted = baseline::ols_fit(samples, model.ridge);
    io::save_linear_model(fitted, out_dir / "model.json");
  } else {
    net::NetworkSpec spec;
    spec.input_dim = kInputDim;
    spec.hidden_dims = backtest::hidden_dims_for(
        kind, model.hidden.empty() ? std::vector<int>{} : parse_hidden(model.hidden));
    spec.seed = mix_seed(common.seed, static_cast<std::uint64_t>(as_of.ordinal()) * 2);
    net::TrainConfig train_config;
    train_config.epochs = model.epochs;
    train_config.batch_size = model.batch;
    train_config.learning_rate = model.learning_rate;
    train_config.seed = mix_seed(common.seed, static_cast<std::uint64_t>(as_of.ordinal()) * 2 + 1);
    const net::Network fitted = net::train(net::init_network(spec), samples, train_config);
    io::save_network(fitted, out_dir / "model.json");
  }

  json flags = model_flags_json(model);
  flags["panel"] = panel_flags.panel_path;
  flags["raw"] = panel_flags.raw;
  flags["as-of"] = as_of.str();
  flags["window"] = window;
  flags["seed"] = common.seed;
  flags["out"] = common.out_dir;
  write_run_config(out_dir, "train", flags);
  std::cout << "trained " << model.model << " on " << samples.size() << " samples, wrote "
            << (out_dir / "model.json").string() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// backtest
// ---------------------------------------------------------------------------

int cmd_backtest(const CommonFlags& common, const PanelFlags& panel_flags,
                 const ModelFlags& model, const std::string& start_text,
                 const std::string& end_text, int window, int quantiles) {
  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);

  backtest::WalkForwardConfig config;
  config.train_window = window;
  config.start_month = Month::parse(start_text);
  config.end_month = Month::parse(end_text);
  config.model_kind = model_kind_of(model);
  if (!model.hidden.empty()) {
    config.custom_hidden = parse_hidden(model.hidden);
    if (config.model_kind != backtest::ModelKind::Linear) {
      config.model_kind = backtest::ModelKind::CustomDeep;
    }
  }
  config.quantiles = quantiles;
  config.seed = common.seed;
  config.train.epochs = model.epochs;
  config.train.batch_size = model.batch;
  config.train.learning_rate = model.learning_rate;
  config.ridge_lambda = model.ridge;

  const data::PanelDataset panel = load_panel_flags(panel_flags);
  const backtest::BacktestReport report =
      backtest::walk_forward(panel, config, resolve_jobs(common.jobs));

  io::save_report(report, out_dir / "report.json");
  io::write_text_file(out_dir / "monthly.csv", io::report_monthly_csv(report));
  io::write_text_file(out_dir / "summary.csv", io::report_summary_csv(report));

  json flags = model_flags_json(model);
  if (config.model_kind == backtest::ModelKind::Deep1 ||
      config.model_kind == backtest::ModelKind::Deep2 ||
      config.model_kind == backtest::ModelKind::CustomDeep) {
    flags["hidden_dims"] = backtest::hidden_dims_for(config.model_kind, config.custom_hidden);
  }
  flags["panel"] = panel_flags.panel_path;
  flags["raw"] = panel_flags.raw;
  flags["start"] = config.start_month.str();
  flags["end"] = config.end_month.str();
  flags["window"] = window;
  flags["quantiles"] = quantiles;
  flags["seed"] = common.seed;
  flags["jobs"] = common.jobs;
  flags["out"] = common.out_dir;
  write_run_config(out_dir, "backtest", flags);

  print_summary_row(report);
  return 0;
}

// ---------------------------------------------------------------------------
// explain
// ---------------------------------------------------------------------------

int cmd_explain(const CommonFlags& common, const PanelFlags& panel_flags,
                const std::string& model_path, const std::string& month_text,
                const std::string& target, int quantiles, double stabilizer) {
  const Month month = Month::parse(month_text);
  const fs::path out_dir(common.out_dir);
  fs::create_directories(out_dir);

  const net::Network model = io::load_model_as_network(model_path);
  const data::PanelDataset panel = load_panel_flags(panel_flags);
  const auto built = factors::build_inputs(panel, month);
  if (built.rows.empty()) {
    throw Error("explain: no stocks with full lag history at " + month.str());
  }

  // Which stocks to explain.
  std::vector<const factors::InputRow*> selected;
  std::string scope;
  if (target.rfind("stock:", 0) == 0) {
    const std::string wanted = target.substr(6);
    for (const auto& row : built.rows) {
      if (row.stock_id == wanted) selected.push_back(&row);
    }
    if (selected.empty()) {
      throw Error("explain: unknown stock '" + wanted + "' at " + month.str());
    }
    scope = wanted;
  } else if (target == "top-quintile") {
    std::vector<std::string> ids;
    std::vector<double> predictions;
    for (const auto& row : built.rows) {
      ids.push_back(row.stock_id);
      predictions.push_back(net::forward(model, row.input).output);
    }
    const std::vector<int> buckets = backtest::quantile_assign(ids, predictions, quantiles);
    for (std::size_t i = 0; i < built.rows.size(); ++i) {
      if (buckets[i] == 1) selected.push_back(&built.rows[i]);
    }
    scope = "portfolio:Q1";
  } else {
    throw CLI::ValidationError("--target", "must be 'stock:<id>' or 'top-quintile'");
  }

  std::string csv = io::relevance_csv_header();
  std::vector<lrp::RelevanceVector> relevances;
  relevances.reserve(selected.size());
  for (const auto* row : selected) {
    const net::ForwardTrace trace = net::forward(model, row->input);
    lrp::RelevanceVector rel = lrp::relevance(model, trace, stabilizer);
    csv += io::relevance_csv_row(row->stock_id, rel);
    relevances.push_back(std::move(rel));
  }
  io::write_text_file(out_dir / "relevance.csv", csv);

  const FactorMap factor_map;
  attribution::FactorAttribution attr =
      relevances.size() == 1 && scope != "portfolio:Q1"
          ? attribution::aggregate_stock(relevances.front(), factor_map)
          : attribution::aggregate_portfolio(relevances, factor_map);
  attr.scope = scope;
  io::write_text_file(out_dir / "attribution.json", io::attribution_json(attr) + "\n");
  io::write_text_file(out_dir / "attribution.csv", io::attribution_csv(attr));

  write_run_config(out_dir, "explain",
                   json{{"model", model_path},
                        {"panel", panel_flags.panel_path},
                        {"raw", panel_flags.raw},
                        {"month", month.str()},
                        {"target", target},
                        {"quantiles", quantiles},
                        {"stabilizer", stabilizer},
                        {"out", common.out_dir}});

  std::cout << "explained " << selected.size() << " stock(s); factor shares [%]:\n";
  for (int f = 0; f < kNumFactors; ++f) {
    std::cout << "  " << std::left << std::setw(10) << factor_name(static_cast<Factor>(f))
              << std::fixed << std::setprecision(2) << attr.per_factor[f] << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int cmd_report(const CommonFlags& common, const std::string& report_path, bool correlations,
               const PanelFlags& panel_flags, const std::string& model_path,
               const std::string& month_text, const std::string& target, int quantiles) {
  if (!report_path.empty()) {
    const backtest::BacktestReport report = io::load_report(report_path);
    print_summary_row(report);
    if (common.out_dir != ".") {
      const fs::path out_dir(common.out_dir);
      fs::create_directories(out_dir);
      io::write_text_file(out_dir / "summary.csv", io::report_summary_csv(report));
      io::write_text_file(out_dir / "monthly.csv", io::report_monthly_csv(report));
    }
  }

  if (correlations) {
    if (model_path.empty() || panel_flags.panel_path.empty() || month_text.empty()) {
      throw CLI::ValidationError("--correlations",
                                 "needs --model, --panel and --month");
    }
    const Month month = Month::parse(month_text);
    const net::Network model = io::load_model_as_network(model_path);
    const data::PanelDataset panel = load_panel_flags(panel_flags);
    const auto built = factors::build_inputs(panel, month);
    if (built.rows.empty()) {
      throw Error("report: no stocks with full lag history at " + month.str());
    }

    std::vector<std::string> ids;
    std::vector<double> predictions;
    for (const auto& row : built.rows) {
      ids.push_back(row.stock_id);
      predictions.push_back(net::forward(model, row.input).output);
    }
    std::vector<std::size_t> keep;
    if (target == "top-quintile") {
      const std::vector<int> buckets = backtest::quantile_assign(ids, predictions, quantiles);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (buckets[i] == 1) keep.push_back(i);
      }
    } else {
      for (std::size_t i = 0; i < ids.size(); ++i) keep.push_back(i);
    }

    std::vector<double> kept_predictions;
    std::vector<DescriptorVector> kept_descriptors;  // lag-0 vectors
    for (std::size_t i : keep) {
      kept_predictions.push_back(predictions[i]);
      kept_descriptors.push_back(panel.find(month, ids[i])->descriptors);
    }
    const FactorMap factor_map;
    const attribution::FactorCorrelation corr =
        attribution::factor_correlations(kept_predictions, kept_descriptors, factor_map);

    std::cout << "factor correlations vs predicted return (" << target << ", " << month.str()
              << "):\n" << io::correlation_csv(corr);
    const fs::path out_dir(common.out_dir);
    fs::create_directories(out_dir);
    io::write_text_file(out_dir / "correlations.json", io::correlation_json(corr) + "\n");
    io::write_text_file(out_dir / "correlations.csv", io::correlation_csv(corr));
  }
  return 0;
}

// ---------------------------------------------------------------------------
// --config merging: a flat JSON object of long-option values, applied as if
// typed right after the subcommand so explicit flags override it.
// ---------------------------------------------------------------------------

std::vector<std::string> inject_config_args(const std::vector<std::string>& args) {
  // Locate "--config <path>" or "--config=<path>".
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    }
  }
  if (config_path.empty()) return args;

  const json doc = json::parse(io::read_text_file(config_path));
  if (!doc.is_object()) throw Error("config file must hold a JSON object of flag values");

  std::vector<std::string> injected;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
      continue;
    }
    injected.push_back("--" + key);
    if (value.is_string()) {
      injected.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      injected.push_back(joined);
    } else {
      injected.push_back(value.dump());
    }
  }

  // Insert right after the subcommand token (the first non-flag argument).
  std::vector<std::string> merged;
  bool inserted = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    merged.push_back(args[i]);
    if (!inserted && !args[i].empty() && args[i][0] != '-') {
      merged.insert(merged.end(), injected.begin(), injected.end());
      inserted = true;
    }
  }
  if (!inserted) throw Error("--config given but no subcommand named");
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep factor model: nonlinear return model with relevance attribution"};
  app.require_subcommand(1);

  CommonFlags common;
  SynthFlags synth;
  ModelFlags model;
  PanelFlags panel;
  std::string start_text, end_text, as_of_text, month_text;
  std::string model_path, report_path, target = "top-quintile";
  int window = 60;
  int quantiles = 5;
  double stabilizer = lrp::kDefaultStabilizer;
  bool correlations = false;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option("--seed", common.seed, "random seed");
    cmd->add_option("--jobs", common.jobs, "parallel workers (0 = all cores)");
    cmd->add_option("--config", config_path, "JSON file of flag values, overridden by explicit flags");
  };
  auto add_panel = [&](CLI::App* cmd) {
    cmd->add_option("--panel", panel.panel_path, "panel CSV path")->required();
    cmd->add_flag("--raw", panel.raw, "panel holds raw descriptors; standardize on load");
  };
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("--model", model.model, "deep1 | deep2 | linear | custom");
    cmd->add_option("--hidden", model.hidden, "custom hidden dims, e.g. 80,50,10");
    cmd->add_option("--epochs", model.epochs, "training epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--batch", model.batch, "mini-batch size")->check(CLI::PositiveNumber);
    cmd->add_option("--lr", model.learning_rate, "Adam learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--ridge", model.ridge, "ridge lambda for the linear model")
        ->check(CLI::NonNegativeNumber);
  };

  CLI::App* c_synth = app.add_subcommand("synth", "generate a synthetic panel with known ground truth");
  c_synth->add_option("--stocks", synth.stocks, "number of stocks")->check(CLI::Range(2, 100000));
  c_synth->add_option("--months", synth.months, "number of months")
      ->check(CLI::Range(data::kMinSynthMonths, 100000).description(
          "months must allow one walk-forward step (>= " +
          std::to_string(data::kMinSynthMonths) + ")"));
  c_synth->add_option("--truth", synth.truth, "linear | nonlinear")
      ->check(CLI::IsMember({"linear", "nonlinear"}));
  c_synth->add_option("--noise", synth.noise, "return noise sigma")->check(CLI::NonNegativeNumber);
  add_common(c_synth);

  CLI::App* c_train = app.add_subcommand("train", "fit one model on a trailing window");
  add_panel(c_train);
  add_model(c_train);
  c_train->add_option("--as-of", as_of_text, "prediction month; trains strictly before it")
      ->required();
  c_train->add_option("--window", window, "training window in months")->check(CLI::PositiveNumber);
  add_common(c_train);

  CLI::App* c_backtest = app.add_subcommand("backtest", "walk-forward quintile evaluation");
  add_panel(c_backtest);
  add_model(c_backtest);
  c_backtest->add_option("--start", start_text, "first prediction month")->required();
  c_backtest->add_option("--end", end_text, "last prediction month")->required();
  c_backtest->add_option("--window", window, "training window in months")
      ->check(CLI::PositiveNumber);
  c_backtest->add_option("--quantiles", quantiles, "portfolio quantiles")
      ->check(CLI::Range(2, 1000));
  add_common(c_backtest);

  CLI::App* c_explain = app.add_subcommand("explain", "relevance attribution for a stock or the top quintile");
  add_panel(c_explain);
  c_explain->add_option("--model", model_path, "model JSON (network or linear)")->required();
  c_explain->add_option("--month", month_text, "prediction month")->required();
  c_explain->add_option("--target", target, "stock:<id> | top-quintile");
  c_explain->add_option("--quantiles", quantiles, "portfolio quantiles")->check(CLI::Range(2, 1000));
  c_explain->add_option("--stabilizer", stabilizer, "relevance stabilizer epsilon")
      ->check(CLI::NonNegativeNumber);
  add_common(c_explain);

  CLI::App* c_report = app.add_subcommand("report", "print a saved report; optionally factor correlations");
  c_report->add_option("--report", report_path, "report JSON path");
  c_report->add_flag("--correlations", correlations, "compute factor/prediction rank correlations");
  c_report->add_option("--model", model_path, "model JSON (for --correlations)");
  c_report->add_option("--panel", panel.panel_path, "panel CSV (for --correlations)");
  c_report->add_flag("--raw", panel.raw, "panel holds raw descriptors");
  c_report->add_option("--month", month_text, "month (for --correlations)");
  c_report->add_option("--target", target, "top-quintile | all");
  c_report->add_option("--quantiles", quantiles, "portfolio quantiles")->check(CLI::Range(2, 1000));
  add_common(c_report);

  // Explicit flags override config-file values: config args are injected just
  // after the subcommand, and every option takes the last value given.
  for (CLI::App* sub : app.get_subcommands({})) {
    for (CLI::Option* opt : sub->get_options()) {
      if (opt->get_expected_min() > 0) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
  }

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = inject_config_args(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    // CLI11 wants reversed args for its vector-parse entry point.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (c_synth->parsed()) return cmd_synth(common, synth);
    if (c_train->parsed()) return cmd_train(common, panel, model, as_of_text, window);
    if (c_backtest->parsed())
      return cmd_backtest(common, panel, model, start_text, end_text, window, quantiles);
    if (c_explain->parsed())
      return cmd_explain(common, panel, model_path, month_text, target, quantiles, stabilizer);
    if (c_report->parsed())
      return cmd_report(common, report_path, correlations, panel, model_path, month_text, target,
                        quantiles);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
