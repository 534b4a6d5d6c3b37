#include "tokenlab/tokens.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tokenlab/error.hpp"

namespace tokenlab::tokens {

std::string_view to_string(Modality m) noexcept {
  switch (m) {
    case Modality::deterministic: return "deterministic";
    case Modality::probabilistic: return "probabilistic";
    case Modality::quantity_load: return "quantity-load";
    case Modality::control: return "control";
  }
  return "unknown";
}

std::string_view to_string(Level l) noexcept {
  switch (l) {
    case Level::high: return "high";
    case Level::low: return "low";
    case Level::none: return "none";
  }
  return "unknown";
}

void validate(const InformationVirtue& virtue) {
  if (!(virtue.magnitude_low > 0.0) || !(virtue.magnitude_low <= virtue.magnitude_high)) {
    throw ConfigError("virtue: need 0 < magnitude_low <= magnitude_high");
  }
}

std::string cell_key(Modality m, Level l) {
  if (m == Modality::control) {
    return "control";
  }
  return std::string(to_string(m)) + "-" + std::string(to_string(l));
}

std::optional<std::size_t> token_index(std::string_view label) noexcept {
  if (label.size() != 2 || label[0] != 'T' || label[1] < '1' || label[1] > '7') {
    return std::nullopt;
  }
  return static_cast<std::size_t>(label[1] - '1');
}

std::string token_label(std::size_t index) {
  return "T" + std::to_string(index + 1);
}

std::vector<std::string> token_labels() {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kTokenCount; ++i) out.push_back(token_label(i));
  return out;
}

namespace {

struct Cell {
  Modality modality;
  Level level;
};

constexpr std::array<Cell, kTokenCount> kCells{{
    {Modality::deterministic, Level::high},
    {Modality::deterministic, Level::low},
    {Modality::probabilistic, Level::high},
    {Modality::probabilistic, Level::low},
    {Modality::quantity_load, Level::high},
    {Modality::quantity_load, Level::low},
    {Modality::control, Level::none},
}};

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::round(fraction * 1000.0) / 10.0);
  return buf;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string fill(std::string text, const InformationVirtue& v, const TokenTemplate& t) {
  replace_all(text, "{statement}", v.statement);
  replace_all(text, "{company}", v.company);
  replace_all(text, "{low}", percent(v.magnitude_low));
  replace_all(text, "{high}", percent(v.magnitude_high));
  replace_all(text, "{probability}", percent(t.stated_probability));
  replace_all(text, "{items}", std::to_string(t.item_count));
  return text;
}

void check_range(const std::string& key, const TokenTemplate& t) {
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(t.determinism) || !unit(t.stated_probability) || !unit(t.specificity)) {
    throw ConfigError("token template '" + key +
                      "': determinism, stated_probability and specificity must lie in [0, 1]");
  }
  if (t.item_count < 0) {
    throw ConfigError("token template '" + key + "': item_count must be >= 0");
  }
}

}  // namespace

std::vector<InformationToken> build_token_set(const InformationVirtue& virtue,
                                              const TokenTemplates& templates) {
  validate(virtue);
  auto shared = std::make_shared<const InformationVirtue>(virtue);
  std::vector<InformationToken> out;
  out.reserve(kTokenCount);
  for (std::size_t i = 0; i < kTokenCount; ++i) {
    const auto& cell = kCells[i];
    const std::string key = cell_key(cell.modality, cell.level);
    auto it = templates.cells.find(key);
    if (it == templates.cells.end()) {
      throw ConfigError("token templates: missing cell '" + key + "'");
    }
    const TokenTemplate& tmpl = it->second;
    check_range(key, tmpl);

    InformationToken token;
    token.id = token_label(i);
    token.index = i;
    token.modality = cell.modality;
    token.level = cell.level;
    token.parameters = tmpl;

    if (cell.modality != Modality::control) {
      token.virtue = shared;
      const std::string line = fill(tmpl.text, virtue, tmpl);
      if (cell.modality == Modality::quantity_load && tmpl.item_count > 1) {
        if (templates.filler_items.empty()) {
          throw ConfigError("token template '" + key + "': filler_items required for item_count > 1");
        }
        // The virtue line sits in the middle of the padded list.
        const auto n = static_cast<std::size_t>(tmpl.item_count);
        std::string text;
        std::size_t filler = 0;
        for (std::size_t k = 0; k < n; ++k) {
          text += "- ";
          if (k == n / 2) {
            text += line;
          } else {
            text += templates.filler_items[filler++ % templates.filler_items.size()];
          }
          text += '\n';
        }
        token.artifact_text = std::move(text);
      } else {
        token.artifact_text = line;
      }
    }
    token.encoding = encode_token(token);
    out.push_back(std::move(token));
  }
  return out;
}

Encoding encode_token(const InformationToken& token) noexcept {
  if (token.is_control()) {
    return {};
  }
  const auto& p = token.parameters;
  return {p.determinism, p.stated_probability, static_cast<double>(p.item_count), p.specificity};
}

TokenDistinctnessReport check_distinctness(const std::vector<InformationToken>& tokens,
                                           double threshold, double item_count_scale) {
  if (!(item_count_scale > 0.0)) {
    throw ConfigError("distinctness: item_count_scale must be positive");
  }
  TokenDistinctnessReport report;
  report.threshold = threshold;
  const std::size_t n = tokens.size();
  std::vector<std::array<double, 4>> points;
  for (const auto& t : tokens) {
    report.labels.push_back(t.id);
    auto v = t.encoding.values();
    v[2] /= item_count_scale;
    points.push_back(v);
  }
  report.pairwise_distance.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t d = 0; d < 4; ++d) {
        const double diff = points[i][d] - points[j][d];
        sum += diff * diff;
      }
      report.pairwise_distance[i][j] = report.pairwise_distance[j][i] = std::sqrt(sum);
    }
  }
  const std::size_t guided = std::min(n, kGuidedTokenCount);
  double min_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < guided; ++i) {
    for (std::size_t j = i + 1; j < guided; ++j) {
      min_d = std::min(min_d, report.pairwise_distance[i][j]);
    }
  }
  report.min_offdiagonal_guided = guided >= 2 ? min_d : 0.0;
  report.sufficient = guided >= 2 && min_d > threshold;
  return report;
}

std::string render_distinctness(const TokenDistinctnessReport& report) {
  std::ostringstream out;
  char buf[32];
  out << "Token encoding distances (Euclidean, normalized)\n\n     ";
  for (const auto& l : report.labels) {
    std::snprintf(buf, sizeof buf, "%8s", l.c_str());
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < report.labels.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%-5s", report.labels[i].c_str());
    out << buf;
    for (double d : report.pairwise_distance[i]) {
      std::snprintf(buf, sizeof buf, "%8.3f", d);
      out << buf;
    }
    out << '\n';
  }
  std::snprintf(buf, sizeof buf, "%.3f", report.min_offdiagonal_guided);
  out << "\nmin distance T1-T6: " << buf;
  std::snprintf(buf, sizeof buf, "%.3f", report.threshold);
  out << "\nthreshold: " << buf << "\nsufficient: " << (report.sufficient ? "true" : "false")
      << '\n';
  return out.str();
}

}  // namespace tokenlab::tokens
