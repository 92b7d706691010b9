#include "deepfactor/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deepfactor/error.hpp"

namespace deepfactor::io {

using nlohmann::json;

namespace {

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// Missing keys and wrong value types surface as ParseError too.
template <typename Fn>
auto interpret(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

json layers_to_json(const net::Network& network) {
  json layers = json::array();
  for (const auto& layer : network.layers()) {
    json w = json::array();
    for (Eigen::Index r = 0; r < layer.weights.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < layer.weights.cols(); ++c) row.push_back(layer.weights(r, c));
      w.push_back(std::move(row));
    }
    json b = json::array();
    for (Eigen::Index i = 0; i < layer.bias.size(); ++i) b.push_back(layer.bias(i));
    layers.push_back(json{{"w", std::move(w)}, {"b", std::move(b)}});
  }
  return layers;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string network_json(const net::Network& network) {
  json doc;
  doc["spec"] = {{"input_dim", network.spec().input_dim},
                 {"hidden_dims", network.spec().hidden_dims},
                 {"output_dim", network.spec().output_dim},
                 {"activation", "relu"},
                 {"seed", network.spec().seed}};
  doc["layers"] = layers_to_json(network);
  return doc.dump();
}

void save_network(const net::Network& network, const std::filesystem::path& path) {
  write_text_file(path, network_json(network));
}

net::Network parse_network_json(const std::string& text) {
  const json doc = parse_json(text, "network json");
  return interpret("network json", [&] {
    net::NetworkSpec spec;
    const auto& js = doc.at("spec");
    spec.input_dim = js.at("input_dim").get<int>();
    spec.hidden_dims = js.at("hidden_dims").get<std::vector<int>>();
    spec.output_dim = js.at("output_dim").get<int>();
    spec.seed = js.at("seed").get<std::uint64_t>();
    if (js.at("activation").get<std::string>() != "relu") {
      throw ParseError("network json: unsupported activation");
    }

    std::vector<net::Layer> layers;
    for (const auto& jl : doc.at("layers")) {
      const auto& w = jl.at("w");
      const auto& b = jl.at("b");
      if (w.empty()) throw ParseError("network json: empty weight matrix");
      net::Layer layer;
      layer.weights.resize(static_cast<Eigen::Index>(w.size()),
                           static_cast<Eigen::Index>(w[0].size()));
      for (std::size_t r = 0; r < w.size(); ++r) {
        if (w[r].size() != w[0].size()) throw ParseError("network json: ragged weight matrix");
        for (std::size_t c = 0; c < w[r].size(); ++c) layer.weights(r, c) = w[r][c].get<double>();
      }
      layer.bias.resize(static_cast<Eigen::Index>(b.size()));
      for (std::size_t i = 0; i < b.size(); ++i) layer.bias(i) = b[i].get<double>();
      layers.push_back(std::move(layer));
    }
    return net::Network(spec, std::move(layers));
  });
}

net::Network load_network(const std::filesystem::path& path) {
  return parse_network_json(read_text_file(path));
}

std::string linear_model_json(const baseline::LinearModel& model) {
  json doc;
  doc["intercept"] = model.intercept;
  json coef = json::array();
  for (Eigen::Index i = 0; i < model.coefficients.size(); ++i) coef.push_back(model.coefficients(i));
  doc["coefficients"] = std::move(coef);
  return doc.dump();
}

void save_linear_model(const baseline::LinearModel& model, const std::filesystem::path& path) {
  write_text_file(path, linear_model_json(model));
}

baseline::LinearModel parse_linear_model_json(const std::string& text) {
  const json doc = parse_json(text, "linear model json");
  return interpret("linear model json", [&] {
    baseline::LinearModel model;
    model.intercept = doc.at("intercept").get<double>();
    const auto& coef = doc.at("coefficients");
    model.coefficients.resize(static_cast<Eigen::Index>(coef.size()));
    for (std::size_t i = 0; i < coef.size(); ++i) model.coefficients(i) = coef[i].get<double>();
    return model;
  });
}

baseline::LinearModel load_linear_model(const std::filesystem::path& path) {
  return parse_linear_model_json(read_text_file(path));
}

net::Network load_model_as_network(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  const json doc = parse_json(text, "model json");
  if (doc.contains("layers")) return parse_network_json(text);
  if (doc.contains("coefficients")) {
    const baseline::LinearModel model = parse_linear_model_json(text);
    Eigen::MatrixXd weights = model.coefficients.transpose();
    Eigen::VectorXd bias(1);
    bias(0) = model.intercept;
    return net::make_affine_network(weights, bias);
  }
  throw ParseError("model json: neither a network ('layers') nor a linear model ('coefficients')");
}

namespace {

json month_result_to_json(const backtest::MonthResult& m) {
  return json{{"month", m.month.str()},
              {"stock_ids", m.stock_ids},
              {"predicted", m.predicted},
              {"realized", m.realized},
              {"bucket", m.bucket},
              {"long_short_return", m.long_short_return},
              {"mae", m.mae},
              {"rmse", m.rmse}};
}

backtest::MonthResult month_result_from_json(const json& j) {
  backtest::MonthResult m;
  m.month = Month::parse(j.at("month").get<std::string>());
  m.stock_ids = j.at("stock_ids").get<std::vector<std::string>>();
  m.predicted = j.at("predicted").get<std::vector<double>>();
  m.realized = j.at("realized").get<std::vector<double>>();
  m.bucket = j.at("bucket").get<std::vector<int>>();
  m.long_short_return = j.at("long_short_return").get<double>();
  m.mae = j.at("mae").get<double>();
  m.rmse = j.at("rmse").get<double>();
  return m;
}

}  // namespace

std::string report_json(const backtest::BacktestReport& report) {
  json doc;
  json months = json::array();
  for (const auto& m : report.months) months.push_back(month_result_to_json(m));
  doc["months"] = std::move(months);
  doc["mae"] = report.mae;
  doc["rmse"] = report.rmse;
  doc["ann_return"] = report.ann_return;
  doc["ann_vol"] = report.ann_vol ? json(*report.ann_vol) : json(nullptr);
  doc["sharpe"] = report.sharpe ? json(*report.sharpe) : json(nullptr);
  doc["residuals"] = report.residuals;
  return doc.dump();
}

void save_report(const backtest::BacktestReport& report, const std::filesystem::path& path) {
  write_text_file(path, report_json(report));
}

backtest::BacktestReport parse_report_json(const std::string& text) {
  const json doc = parse_json(text, "report json");
  return interpret("report json", [&] {
    backtest::BacktestReport report;
    for (const auto& jm : doc.at("months")) report.months.push_back(month_result_from_json(jm));
    report.mae = doc.at("mae").get<double>();
    report.rmse = doc.at("rmse").get<double>();
    report.ann_return = doc.at("ann_return").get<double>();
    if (!doc.at("ann_vol").is_null()) report.ann_vol = doc.at("ann_vol").get<double>();
    if (!doc.at("sharpe").is_null()) report.sharpe = doc.at("sharpe").get<double>();
    report.residuals = doc.at("residuals").get<std::vector<double>>();
    return report;
  });
}

backtest::BacktestReport load_report(const std::filesystem::path& path) {
  return parse_report_json(read_text_file(path));
}

std::string report_monthly_csv(const backtest::BacktestReport& report) {
  std::string out = "month,long_short_return,mae,rmse\n";
  for (const auto& m : report.months) {
    out += m.month.str();
    out += ',';
    out += format_double(m.long_short_return);
    out += ',';
    out += format_double(m.mae);
    out += ',';
    out += format_double(m.rmse);
    out += '\n';
  }
  return out;
}

std::string report_summary_csv(const backtest::BacktestReport& report) {
  std::string out = "Return [%],Volatility [%],Sharpe Ratio,MAE,RMSE\n";
  out += format_double(report.ann_return * 100.0);
  out += ',';
  if (report.ann_vol) out += format_double(*report.ann_vol * 100.0);
  out += ',';
  if (report.sharpe) out += format_double(*report.sharpe);
  out += ',';
  out += format_double(report.mae);
  out += ',';
  out += format_double(report.rmse);
  out += '\n';
  return out;
}

std::string relevance_csv_header() {
  std::string out = "stock_id,predicted,bias_absorbed";
  for (int cell = 0; cell < kInputDim; ++cell) {
    out += ',';
    out += descriptor_name(cell_descriptor(cell));
    out += "_lag";
    out += std::to_string(kLagMonths[cell_lag_index(cell)]);
  }
  out += '\n';
  return out;
}

std::string relevance_csv_row(const std::string& stock_id, const lrp::RelevanceVector& rel) {
  if (rel.per_input.size() != kInputDim) {
    throw DimensionError("relevance_csv_row: relevance length != " + std::to_string(kInputDim));
  }
  std::string out = stock_id;
  out += ',';
  out += format_double(rel.predicted);
  out += ',';
  out += format_double(rel.bias_absorbed);
  for (int cell = 0; cell < kInputDim; ++cell) {
    out += ',';
    out += format_double(rel.per_input(cell));
  }
  out += '\n';
  return out;
}

std::string attribution_json(const attribution::FactorAttribution& attribution) {
  json per_factor;
  for (int f = 0; f < kNumFactors; ++f) {
    per_factor[std::string(factor_name(static_cast<Factor>(f)))] = attribution.per_factor[f];
  }
  return json{{"scope", attribution.scope}, {"per_factor", std::move(per_factor)}}.dump();
}

std::string attribution_csv(const attribution::FactorAttribution& attribution) {
  std::string out = "factor,percentage\n";
  for (int f = 0; f < kNumFactors; ++f) {
    out += factor_name(static_cast<Factor>(f));
    out += ',';
    out += format_double(attribution.per_factor[f]);
    out += '\n';
  }
  return out;
}

std::string correlation_json(const attribution::FactorCorrelation& corr) {
  json per_factor;
  for (int f = 0; f < kNumFactors; ++f) {
    json entry;
    entry["spearman"] = corr.spearman[f] ? json(*corr.spearman[f]) : json(nullptr);
    entry["kendall"] = corr.kendall[f] ? json(*corr.kendall[f]) : json(nullptr);
    per_factor[std::string(factor_name(static_cast<Factor>(f)))] = std::move(entry);
  }
  return json{{"per_factor", std::move(per_factor)}, {"excluded", corr.excluded}}.dump();
}

std::string correlation_csv(const attribution::FactorCorrelation& corr) {
  std::string out = "factor,spearman,kendall\n";
  for (int f = 0; f < kNumFactors; ++f) {
    out += factor_name(static_cast<Factor>(f));
    out += ',';
    if (corr.spearman[f]) out += format_double(*corr.spearman[f]);
    out += ',';
    if (corr.kendall[f]) out += format_double(*corr.kendall[f]);
    out += '\n';
  }
  return out;
}

std::string ground_truth_json(const data::GroundTruth& truth, const data::SynthSpec& spec) {
  json doc;
  doc["kind"] = truth.kind == data::TruthKind::Linear ? "linear" : "nonlinear";
  doc["noise_sigma"] = spec.noise_sigma;
  doc["seed"] = spec.seed;
  doc["n_stocks"] = spec.n_stocks;
  doc["n_months"] = spec.n_months;
  if (truth.kind == data::TruthKind::Linear) {
    doc["intercept"] = truth.intercept;
    json coef = json::array();
    json nonzero;
    for (int cell = 0; cell < kInputDim; ++cell) {
      coef.push_back(truth.coefficients(cell));
      if (truth.coefficients(cell) != 0.0) {
        std::string name = std::string(descriptor_name(cell_descriptor(cell))) + "_lag" +
                           std::to_string(kLagMonths[cell_lag_index(cell)]);
        nonzero[name] = truth.coefficients(cell);
      }
    }
    doc["coefficients"] = std::move(coef);
    doc["nonzero"] = std::move(nonzero);
  } else {
    doc["c1"] = truth.c1;
    doc["c2"] = truth.c2;
    doc["c3"] = truth.c3;
    doc["form"] = "c1*tanh(2*PBR_lag0) + c2*(12-1MOM_lag0)*(ROE_lag0) - c3*(60VOL_lag0)^2";
  }
  return doc.dump();
}

}  // namespace deepfactor::io
