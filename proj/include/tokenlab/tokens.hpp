#pragma once

// Information virtue, the seven token conditions, their numeric encoding and
// the pairwise distinctness check over encodings.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tokenlab::tokens {

inline constexpr std::size_t kTokenCount = 7;
inline constexpr std::size_t kGuidedTokenCount = 6;

enum class Modality : std::uint8_t { deterministic, probabilistic, quantity_load, control };
enum class Level : std::uint8_t { high, low, none };

[[nodiscard]] std::string_view to_string(Modality m) noexcept;
[[nodiscard]] std::string_view to_string(Level l) noexcept;

/// The fixed meaning every guided token expresses: an upward move of
/// magnitude_low..magnitude_high within one session.
struct InformationVirtue {
  std::string direction = "up";
  double magnitude_low = 0.02;
  double magnitude_high = 0.05;
  std::string horizon = "one session";
  std::string company = "X";
  std::string statement = "Stock price for company 'X' will increase today.";

  friend bool operator==(const InformationVirtue&, const InformationVirtue&) = default;
};

/// Throws ConfigError unless 0 < magnitude_low <= magnitude_high.
void validate(const InformationVirtue& virtue);

/// (determinism, stated_probability, item_count, specificity)
struct Encoding {
  double determinism = 0.0;
  double stated_probability = 0.0;
  double item_count = 0.0;
  double specificity = 0.0;

  [[nodiscard]] std::array<double, 4> values() const noexcept {
    return {determinism, stated_probability, item_count, specificity};
  }

  friend bool operator==(const Encoding&, const Encoding&) = default;
};

/// One editable template cell. Text placeholders: {statement} {company}
/// {low} {high} {probability} {items}.
struct TokenTemplate {
  std::string text;
  double determinism = 0.0;
  double stated_probability = 0.0;
  int item_count = 1;
  double specificity = 0.0;

  friend bool operator==(const TokenTemplate&, const TokenTemplate&) = default;
};

/// Template cells keyed "deterministic-high" ... "quantity_load-low", "control".
struct TokenTemplates {
  std::map<std::string, TokenTemplate> cells;
  /// Distractor lines used to pad quantity-load artifacts.
  std::vector<std::string> filler_items;

  friend bool operator==(const TokenTemplates&, const TokenTemplates&) = default;
};

[[nodiscard]] std::string cell_key(Modality m, Level l);

struct InformationToken {
  std::string id;  // "T1" .. "T7"
  std::size_t index = 0;
  Modality modality = Modality::control;
  Level level = Level::none;
  std::string artifact_text;
  TokenTemplate parameters;
  /// Shared by all guided tokens; null for the control condition.
  std::shared_ptr<const InformationVirtue> virtue;
  Encoding encoding;

  [[nodiscard]] bool is_control() const noexcept { return modality == Modality::control; }
};

/// Position of a label "T1".."T7" in the token order, if valid.
[[nodiscard]] std::optional<std::size_t> token_index(std::string_view label) noexcept;
[[nodiscard]] std::string token_label(std::size_t index);
[[nodiscard]] std::vector<std::string> token_labels();

/// T1..T6 = {deterministic, probabilistic, quantity-load} x {high, low} in
/// that order, T7 = control. Throws ConfigError naming a missing cell.
[[nodiscard]] std::vector<InformationToken> build_token_set(const InformationVirtue& virtue,
                                                            const TokenTemplates& templates);

/// Control maps to the zero vector; guided tokens take their template parameters.
[[nodiscard]] Encoding encode_token(const InformationToken& token) noexcept;

struct TokenDistinctnessReport {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> pairwise_distance;
  double min_offdiagonal_guided = 0.0;
  double threshold = 0.0;
  bool sufficient = false;
};

/// Euclidean distances over encodings with item_count divided by
/// item_count_scale. `sufficient` requires every pair among the first six
/// tokens to be strictly farther apart than `threshold`.
[[nodiscard]] TokenDistinctnessReport check_distinctness(const std::vector<InformationToken>& tokens,
                                                         double threshold,
                                                         double item_count_scale = 12.0);

[[nodiscard]] std::string render_distinctness(const TokenDistinctnessReport& report);

}  // namespace tokenlab::tokens
