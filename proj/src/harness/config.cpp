#include "tokenlab/harness/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "tokenlab/error.hpp"

namespace tokenlab::harness {

using nlohmann::json;

namespace {

/// Walks one JSON object, tracking consumed keys so leftovers can be reported.
class Reader {
 public:
  Reader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) fail(path_, "expected an object");
  }

  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config " + path + ": " + what);
  }

  [[nodiscard]] std::string at(const std::string& key) const { return path_ + "." + key; }

  const json& require(const std::string& key) {
    auto it = node_.find(key);
    if (it == node_.end()) fail(at(key), "missing");
    seen_.insert(key);
    return *it;
  }

  [[nodiscard]] bool has(const std::string& key) const { return node_.contains(key); }

  double number(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "must be finite");
    return x;
  }

  double number_in(const std::string& key, double lo, double hi) {
    const double x = number(key);
    if (x < lo || x > hi) {
      fail(at(key), "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
    return x;
  }

  std::int64_t integer(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_integer()) fail(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::int64_t integer_min(const std::string& key, std::int64_t lo) {
    const auto x = integer(key);
    if (x < lo) fail(at(key), "must be >= " + std::to_string(lo));
    return x;
  }

  std::uint64_t unsigned_integer(const std::string& key) {
    const json& v = require(key);
    if (!v.is_number_unsigned()) fail(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key) {
    const json& v = require(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = require(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  Reader object(const std::string& key) { return Reader(require(key), at(key)); }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) fail(at(key), "unknown key");
    }
  }

  [[nodiscard]] const json& node() const noexcept { return node_; }
  [[nodiscard]] const std::string& path() const noexcept { return path_; }

 private:
  static std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

tokens::InformationVirtue read_virtue(Reader r) {
  tokens::InformationVirtue v;
  v.direction = r.string("direction");
  if (v.direction != "up") Reader::fail(r.at("direction"), "only \"up\" is supported");
  v.magnitude_low = r.number("magnitude_low");
  v.magnitude_high = r.number("magnitude_high");
  v.horizon = r.string("horizon");
  v.company = r.string("company");
  v.statement = r.string("statement");
  r.finish();
  try {
    tokens::validate(v);
  } catch (const ConfigError& e) {
    Reader::fail(r.path(), e.what());
  }
  return v;
}

tokens::TokenTemplate read_template(Reader r) {
  tokens::TokenTemplate t;
  t.text = r.string("text");
  t.determinism = r.number_in("determinism", 0.0, 1.0);
  t.stated_probability = r.number_in("stated_probability", 0.0, 1.0);
  t.item_count = static_cast<int>(r.integer_min("item_count", 0));
  t.specificity = r.number_in("specificity", 0.0, 1.0);
  r.finish();
  return t;
}

void read_tokens(Reader r, ExperimentConfig& cfg) {
  cfg.distinctness_threshold = r.number_in("distinctness_threshold", 0.0, 1e9);
  cfg.item_count_scale = r.number("item_count_scale");
  if (cfg.item_count_scale <= 0.0) Reader::fail(r.at("item_count_scale"), "must be positive");
  const json& filler = r.require("filler_items");
  if (!filler.is_array()) Reader::fail(r.at("filler_items"), "expected an array of strings");
  for (const auto& item : filler) {
    if (!item.is_string()) Reader::fail(r.at("filler_items"), "expected an array of strings");
    cfg.templates.filler_items.push_back(item.get<std::string>());
  }
  Reader cells = r.object("templates");
  for (const auto& [key, value] : cells.node().items()) {
    cfg.templates.cells[key] = read_template(cells.object(key));
  }
  cells.finish();
  r.finish();
}

agents::BehaviorProfile read_profile(Reader r) {
  agents::BehaviorProfile p;
  p.intensity = r.number_in("intensity", 0.0, 1.0);
  p.reaction_delay = static_cast<int>(r.integer_min("reaction_delay", 0));
  p.size_factor = r.number_in("size_factor", 0.0, 1e9);
  p.noise_sd = r.number_in("noise_sd", 0.0, 1e9);
  p.direction_confidence = r.number_in("direction_confidence", -1.0, 1.0);
  r.finish();
  return p;
}

agents::BehaviorMapping read_behavior(Reader r) {
  agents::BehaviorMapping m;
  m.intensity_min = r.number_in("intensity_min", 0.0, 1.0);
  m.intensity_max = r.number_in("intensity_max", 0.0, 1.0);
  if (m.intensity_min > m.intensity_max) {
    Reader::fail(r.at("intensity_min"), "must not exceed intensity_max");
  }
  m.delay_min = static_cast<int>(r.integer_min("delay_min", 0));
  m.delay_per_item = r.number_in("delay_per_item", 0.0, 1e9);
  m.size_min = r.number_in("size_min", 0.0, 1e9);
  m.size_max = r.number_in("size_max", 0.0, 1e9);
  m.noise_sd = r.number_in("noise_sd", 0.0, 1e9);
  m.separation = r.number_in("separation", 0.0, 1e9);
  m.base = read_profile(r.object("base"));
  m.intensity_jitter = r.number_in("intensity_jitter", 0.0, 1e9);
  m.delay_jitter = r.number_in("delay_jitter", 0.0, 1e9);
  m.size_jitter = r.number_in("size_jitter", 0.0, 1e9);
  m.confidence_jitter = r.number_in("confidence_jitter", 0.0, 1e9);
  r.finish();
  return m;
}

market::FlowParams read_flow(Reader r) {
  market::FlowParams f;
  f.arrival_rate = r.number_in("arrival_rate", 0.0, 1e6);
  f.market_fraction = r.number_in("market_fraction", 0.0, 1.0);
  f.half_spread_ticks = r.number_in("half_spread_ticks", 0.0, 1e9);
  f.price_dispersion_ticks = r.number_in("price_dispersion_ticks", 0.0, 1e9);
  f.min_size = r.integer_min("min_size", 1);
  f.max_size = r.integer_min("max_size", f.min_size);
  f.traders = static_cast<int>(r.integer_min("traders", 2));
  f.first_trader_id = r.integer_min("first_trader_id", market::kSubjectId + 1);
  f.opening_levels = static_cast<int>(r.integer_min("opening_levels", 0));
  f.opening_size = r.integer_min("opening_size", 1);
  f.order_lifetime = static_cast<int>(r.integer_min("order_lifetime", 0));
  r.finish();
  return f;
}

void read_market(Reader r, ExperimentConfig& cfg) {
  auto& m = cfg.market;
  m.steps = static_cast<int>(r.integer_min("steps", 2));
  m.tick_size = r.integer_min("tick_size", 1);
  m.start_price = r.integer_min("start_price", 1);
  m.allow_drift_override = r.boolean("allow_drift_override");
  auto drift = [&](const std::string& key) {
    const double d = r.number(key);
    if (!m.allow_drift_override &&
        (d < market::kMinDriftTarget || d > market::kMaxDriftTarget)) {
      Reader::fail(r.at(key), "must lie in [0.02, 0.05] unless allow_drift_override is set");
    }
    if (d <= -1.0) Reader::fail(r.at(key), "must exceed -1");
    return d;
  };
  m.drift_target = drift("drift_target");
  if (r.has("control_drift_target") && !r.node().at("control_drift_target").is_null()) {
    cfg.control_drift_target = drift("control_drift_target");
  } else if (r.has("control_drift_target")) {
    r.require("control_drift_target");
  }
  m.volatility = r.number_in("volatility", 0.0, 1.0);
  m.position_limit = r.integer_min("position_limit", 0);
  m.initial_cash = r.integer("initial_cash");
  m.initial_inventory = r.integer("initial_inventory");
  m.flow = read_flow(r.object("flow"));
  r.finish();
}

void read_cohorts(Reader r, ExperimentConfig& cfg) {
  for (const auto& [key, value] : r.node().items()) {
    if (!tokens::token_index(key)) Reader::fail(r.at(key), "not a token id (T1..T7)");
    const auto n = r.integer_min(key, 1);
    cfg.cohorts[key] = static_cast<std::size_t>(n);
  }
  for (const auto& label : tokens::token_labels()) {
    if (!cfg.cohorts.contains(label)) Reader::fail(r.at(label), "missing cohort count");
  }
  r.finish();
}

void read_split(Reader r, ExperimentConfig& cfg) {
  auto& s = cfg.split;
  const std::string mode = r.string("mode");
  if (mode == "pooled-random") {
    s.mode = analytics::SplitMode::pooled_random;
  } else if (mode == "fixed-counts") {
    s.mode = analytics::SplitMode::fixed_counts;
  } else {
    Reader::fail(r.at("mode"), "expected \"pooled-random\" or \"fixed-counts\"");
  }
  s.ratio = r.number("ratio");
  if (!(s.ratio > 0.0 && s.ratio < 1.0)) Reader::fail(r.at("ratio"), "must lie in (0, 1)");
  if (r.has("fixed_counts")) {
    Reader fc = r.object("fixed_counts");
    for (const auto& [key, value] : fc.node().items()) {
      if (!tokens::token_index(key)) Reader::fail(fc.at(key), "not a token id (T1..T7)");
      const json& pair = fc.require(key);
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
          !pair[1].is_number_unsigned()) {
        Reader::fail(fc.at(key), "expected [train, test] non-negative integers");
      }
      s.fixed_counts[key] = {pair[0].get<std::size_t>(), pair[1].get<std::size_t>()};
    }
    fc.finish();
  }
  if (s.mode == analytics::SplitMode::fixed_counts) {
    for (const auto& [label, n] : cfg.cohorts) {
      auto it = s.fixed_counts.find(label);
      if (it == s.fixed_counts.end()) {
        Reader::fail(r.at("fixed_counts." + label), "missing for fixed-counts mode");
      }
      if (it->second.train + it->second.test != n) {
        Reader::fail(r.at("fixed_counts." + label),
                     "train + test must equal the cohort count " + std::to_string(n));
      }
    }
  }
  r.finish();
}

void read_knn(Reader r, ExperimentConfig& cfg) {
  const auto k = r.integer_min("k", 1);
  if (k % 2 == 0) Reader::fail(r.at("k"), "must be odd");
  cfg.knn.k = static_cast<std::size_t>(k);
  const json& extra = r.require("extra_features");
  if (!extra.is_array()) Reader::fail(r.at("extra_features"), "expected an array of strings");
  for (const auto& name : extra) {
    if (!name.is_string()) Reader::fail(r.at("extra_features"), "expected an array of strings");
    cfg.extra_features.push_back(name.get<std::string>());
  }
  r.finish();
}

ServerConfig read_server(Reader r) {
  ServerConfig s;
  s.step_interval_ms = static_cast<int>(r.integer_min("step_interval_ms", 0));
  s.book_levels = static_cast<std::size_t>(r.integer_min("book_levels", 1));
  s.price_band = r.number_in("price_band", 0.0, 1.0);
  s.dataset_path = r.string("dataset_path");
  r.finish();
  return s;
}

}  // namespace

market::MarketConfig ExperimentConfig::market_for(const tokens::InformationToken& token) const {
  market::MarketConfig m = market;
  if (token.is_control() && control_drift_target) {
    m.drift_target = *control_drift_target;
  }
  return m;
}

ExperimentConfig parse_config(const json& doc) {
  Reader root(doc, "$");
  const auto version = root.integer("schema_version");
  if (version != kConfigSchemaVersion) {
    Reader::fail(root.at("schema_version"), "unsupported version " + std::to_string(version));
  }
  ExperimentConfig cfg;
  cfg.master_seed = root.unsigned_integer("master_seed");
  cfg.output_dir = root.string("output_dir");
  cfg.virtue = read_virtue(root.object("virtue"));
  read_tokens(root.object("tokens"), cfg);
  cfg.behavior = read_behavior(root.object("behavior"));
  read_market(root.object("market"), cfg);
  read_cohorts(root.object("cohorts"), cfg);
  read_split(root.object("split"), cfg);
  read_knn(root.object("knn"), cfg);
  cfg.server = read_server(root.object("server"));
  root.finish();

  // Templates are checked by building the token set once.
  (void)tokens::build_token_set(cfg.virtue, cfg.templates);
  cfg.split.seed = cfg.master_seed;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path.string());
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json templates = json::object();
  for (const auto& [key, t] : c.templates.cells) {
    templates[key] = {{"text", t.text},
                      {"determinism", t.determinism},
                      {"stated_probability", t.stated_probability},
                      {"item_count", t.item_count},
                      {"specificity", t.specificity}};
  }
  const auto& b = c.behavior;
  const auto& m = c.market;
  const auto& f = m.flow;
  json cohorts = json::object();
  for (const auto& [label, n] : c.cohorts) cohorts[label] = n;
  json fixed = json::object();
  for (const auto& [label, counts] : c.split.fixed_counts) fixed[label] = {counts.train, counts.test};

  json doc = {
      {"schema_version", kConfigSchemaVersion},
      {"master_seed", c.master_seed},
      {"output_dir", c.output_dir},
      {"virtue",
       {{"direction", c.virtue.direction},
        {"magnitude_low", c.virtue.magnitude_low},
        {"magnitude_high", c.virtue.magnitude_high},
        {"horizon", c.virtue.horizon},
        {"company", c.virtue.company},
        {"statement", c.virtue.statement}}},
      {"tokens",
       {{"distinctness_threshold", c.distinctness_threshold},
        {"item_count_scale", c.item_count_scale},
        {"filler_items", c.templates.filler_items},
        {"templates", templates}}},
      {"behavior",
       {{"intensity_min", b.intensity_min},
        {"intensity_max", b.intensity_max},
        {"delay_min", b.delay_min},
        {"delay_per_item", b.delay_per_item},
        {"size_min", b.size_min},
        {"size_max", b.size_max},
        {"noise_sd", b.noise_sd},
        {"separation", b.separation},
        {"base",
         {{"intensity", b.base.intensity},
          {"reaction_delay", b.base.reaction_delay},
          {"size_factor", b.base.size_factor},
          {"noise_sd", b.base.noise_sd},
          {"direction_confidence", b.base.direction_confidence}}},
        {"intensity_jitter", b.intensity_jitter},
        {"delay_jitter", b.delay_jitter},
        {"size_jitter", b.size_jitter},
        {"confidence_jitter", b.confidence_jitter}}},
      {"market",
       {{"steps", m.steps},
        {"tick_size", m.tick_size},
        {"start_price", m.start_price},
        {"drift_target", m.drift_target},
        {"control_drift_target",
         c.control_drift_target ? json(*c.control_drift_target) : json(nullptr)},
        {"volatility", m.volatility},
        {"allow_drift_override", m.allow_drift_override},
        {"position_limit", m.position_limit},
        {"initial_cash", m.initial_cash},
        {"initial_inventory", m.initial_inventory},
        {"flow",
         {{"arrival_rate", f.arrival_rate},
          {"market_fraction", f.market_fraction},
          {"half_spread_ticks", f.half_spread_ticks},
          {"price_dispersion_ticks", f.price_dispersion_ticks},
          {"min_size", f.min_size},
          {"max_size", f.max_size},
          {"traders", f.traders},
          {"first_trader_id", f.first_trader_id},
          {"opening_levels", f.opening_levels},
          {"opening_size", f.opening_size},
          {"order_lifetime", f.order_lifetime}}}}},
      {"cohorts", cohorts},
      {"split",
       {{"mode", c.split.mode == analytics::SplitMode::fixed_counts ? "fixed-counts"
                                                                   : "pooled-random"},
        {"ratio", c.split.ratio},
        {"fixed_counts", fixed}}},
      {"knn", {{"k", c.knn.k}, {"extra_features", c.extra_features}}},
      {"server",
       {{"step_interval_ms", c.server.step_interval_ms},
        {"book_levels", c.server.book_levels},
        {"price_band", c.server.price_band},
        {"dataset_path", c.server.dataset_path}}},
  };
  return doc;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') {
    return std::filesystem::path(env);
  }
  return std::nullopt;
}

}  // namespace tokenlab::harness
