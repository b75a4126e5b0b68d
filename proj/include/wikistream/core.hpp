#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wikistream {

/// Raised for any input that violates a documented contract. `field()` names
/// the offending field or argument.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

using Day = std::chrono::sys_days;

/// Parses "YYYY-MM-DD" optionally followed by a time part ("T..." or " ...").
/// The time part is ignored; only the UTC calendar date is kept.
Day parse_day(std::string_view text);
std::string format_day(Day day);

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

enum class UserType : int { human = 0, bot = 1 };
enum class ContributionType : int { positive = 0, negative = 1 };
enum class JointClass : int { human_benign = 0, human_malign = 1, bot_benign = 2, bot_malign = 3 };
enum class Target { user_type, contribution_type };

UserType derive_user_type(bool is_bot) noexcept;
/// Positive iff the OK probability is strictly above one half.
ContributionType derive_contribution_type(double ok_probability);
JointClass joint_class(UserType user, ContributionType contribution) noexcept;
UserType user_of(JointClass joint) noexcept;
ContributionType contribution_of(JointClass joint) noexcept;

std::string_view to_string(JointClass joint) noexcept;
std::optional<JointClass> parse_joint_class(std::string_view text) noexcept;
std::string_view to_string(Target target) noexcept;
Target parse_target(std::string_view text);

struct TargetLabels {
  UserType user_type = UserType::human;
  ContributionType contribution_type = ContributionType::positive;

  JointClass joint() const noexcept { return joint_class(user_type, contribution_type); }
  int label(Target target) const noexcept {
    return target == Target::user_type ? static_cast<int>(user_type)
                                       : static_cast<int>(contribution_type);
  }
};

// Probability groups, in the column order of the ingest schema.
struct OresScores {
  std::array<double, 4> edit{};     // damaging_true, damaging_false, goodfaith_true, goodfaith_false
  std::array<double, 5> item{};     // A, B, C, D, E
  std::array<double, 4> article{};  // OK, attack, spam, vandalism
  std::array<double, 6> wp10{};     // B, C, FA, GA, start, stub

  static constexpr std::size_t kColumns = 19;

  double ok() const noexcept { return article[0]; }
  std::array<double, kColumns> flat() const noexcept;
  static OresScores from_flat(std::span<const double, kColumns> values) noexcept;
};

inline constexpr double kProbabilitySumTolerance = 1e-6;

/// Throws ValidationError when a probability lies outside [0,1] or a group
/// does not sum to one within kProbabilitySumTolerance.
void validate(const OresScores& scores);

/// Rescales each group to sum to exactly one (groups summing to zero become uniform).
void renormalize(OresScores& scores) noexcept;

struct EditEvent {
  std::string contributor_id;
  bool is_bot = false;
  std::string page_id;
  Day day{};
  double review_length = 0;
  double links = 0;
  double repeated_links = 0;
  double chars_inserted = 0;
  double chars_deleted = 0;
  bool was_reverted = false;
  OresScores ores;
  bool synthetic = false;
};

void validate(const EditEvent& event);

// Feature catalogue #3..#18 with the multi-probability rows flattened.
enum class Feature : std::uint8_t {
  reviews,
  mean_review_length,
  pages,
  revisions_per_page,
  revisions_per_week,
  pages_per_week,
  reverts,
  revert_frequency,
  links_ratio,
  repeated_links_ratio,
  chars_inserted,
  chars_deleted,
  damaging_true,
  damaging_false,
  goodfaith_true,
  goodfaith_false,
  item_a,
  item_b,
  item_c,
  item_d,
  item_e,
  article_ok,
  article_attack,
  article_spam,
  article_vandalism,
  wp10_b,
  wp10_c,
  wp10_fa,
  wp10_ga,
  wp10_start,
  wp10_stub,
};

inline constexpr std::size_t kFeatureCount = 31;
inline constexpr std::size_t kOresOffset = static_cast<std::size_t>(Feature::damaging_true);

constexpr std::size_t index_of(Feature f) noexcept { return static_cast<std::size_t>(f); }
std::string_view feature_id(Feature f) noexcept;
/// Accepts ids with or without a leading '#', e.g. "7", "#18.stub".
std::optional<Feature> parse_feature_id(std::string_view text) noexcept;
const std::array<Feature, kFeatureCount>& all_features() noexcept;

/// Values paired with their feature identifiers, in canonical order.
struct FeatureVector {
  std::vector<Feature> ids;
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  /// Throws ValidationError unless ids are unique, canonical and values finite.
  void validate() const;
  std::optional<double> get(Feature f) const noexcept;
};

struct FeatureSet {
  std::string name;
  std::vector<Feature> features;

  std::size_t size() const noexcept { return features.size(); }
  static FeatureSet basic();         // set1: #3..#14
  static FeatureSet full();          // set2: every catalogue column
  static FeatureSet user_type_selected();          // set3-target1
  static FeatureSet contribution_type_selected();  // set3-target2
  /// Canonical union of the two selected sets (the stacking model's input).
  static FeatureSet stacking_input();
  static FeatureSet by_name(std::string_view name);
  static FeatureSet from_ids(std::string name, std::span<const std::string> ids);
};

/// One contributor-day. Counts are summed over the day's events and
/// probabilities are arithmetic means.
struct DailyAggregate {
  std::string contributor_id;
  Day day{};
  bool is_bot = false;
  bool synthetic = false;
  double reviews = 0;             // #3
  double mean_review_length = 0;  // #4
  double pages = 0;               // #5
  double reverts = 0;             // #9
  double links_ratio = 0;         // #11
  double repeated_links_ratio = 0;  // #12
  double chars_inserted = 0;      // #13
  double chars_deleted = 0;       // #14
  OresScores ores;                // #15..#18
  ContributionType contribution_type = ContributionType::positive;

  UserType user_type() const noexcept { return derive_user_type(is_bot); }
  TargetLabels labels() const noexcept { return {user_type(), contribution_type}; }
  /// All catalogue columns at day level; #7 = #3 and #8 = #5 (one week),
  /// #6 = #3/#5 and #10 = #9/#3.
  std::array<double, kFeatureCount> day_features() const noexcept;
};

}  // namespace wikistream
