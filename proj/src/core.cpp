#include "wikistream/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace wikistream {

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

namespace {

int parse_int(std::string_view text, std::string_view whole) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ValidationError("timestamp", "not an ISO-8601 date: '" + std::string(whole) + "'");
  return value;
}

constexpr std::array<std::string_view, kFeatureCount> kFeatureIds = {
    "3",  "4",  "5",  "6",  "7",  "8",  "9",  "10", "11", "12", "13", "14",
    "15.damaging_true", "15.damaging_false", "15.goodfaith_true", "15.goodfaith_false",
    "16.A", "16.B", "16.C", "16.D", "16.E",
    "17.OK", "17.attack", "17.spam", "17.vandalism",
    "18.B", "18.C", "18.FA", "18.GA", "18.start", "18.stub",
};

template <std::size_t N>
void check_group(const std::array<double, N>& group, std::size_t begin, std::size_t end,
                 std::string_view name) {
  double sum = 0;
  for (std::size_t i = begin; i < end; ++i) {
    double p = group[i];
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
      throw ValidationError(std::string(name), "probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbabilitySumTolerance)
    throw ValidationError(std::string(name), "probability group sum is " + std::to_string(sum) +
                                                 ", expected 1");
}

template <std::size_t N>
void normalize_range(std::array<double, N>& group, std::size_t begin, std::size_t end) {
  double sum = 0;
  for (std::size_t i = begin; i < end; ++i) sum += group[i];
  for (std::size_t i = begin; i < end; ++i)
    group[i] = sum > 0 ? group[i] / sum : 1.0 / static_cast<double>(end - begin);
}

}  // namespace

Day parse_day(std::string_view text) {
  if (text.size() < 10 || text[4] != '-' || text[7] != '-')
    throw ValidationError("timestamp", "not an ISO-8601 date: '" + std::string(text) + "'");
  if (text.size() > 10 && text[10] != 'T' && text[10] != ' ')
    throw ValidationError("timestamp", "not an ISO-8601 date: '" + std::string(text) + "'");
  int y = parse_int(text.substr(0, 4), text);
  int m = parse_int(text.substr(5, 2), text);
  int d = parse_int(text.substr(8, 2), text);
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw ValidationError("timestamp", "invalid calendar date: '" + std::string(text) + "'");
  return Day{ymd};
}

std::string format_day(Day day) {
  std::chrono::year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

UserType derive_user_type(bool is_bot) noexcept { return is_bot ? UserType::bot : UserType::human; }

ContributionType derive_contribution_type(double ok_probability) {
  if (!std::isfinite(ok_probability) || ok_probability < 0.0 || ok_probability > 1.0)
    throw ValidationError("art_ok", "OK probability must lie in [0,1]");
  return ok_probability > 0.5 ? ContributionType::positive : ContributionType::negative;
}

JointClass joint_class(UserType user, ContributionType contribution) noexcept {
  return static_cast<JointClass>(2 * static_cast<int>(user) + static_cast<int>(contribution));
}

UserType user_of(JointClass joint) noexcept { return static_cast<UserType>(static_cast<int>(joint) / 2); }

ContributionType contribution_of(JointClass joint) noexcept {
  return static_cast<ContributionType>(static_cast<int>(joint) % 2);
}

std::string_view to_string(JointClass joint) noexcept {
  switch (joint) {
    case JointClass::human_benign: return "human-benign";
    case JointClass::human_malign: return "human-malign";
    case JointClass::bot_benign: return "bot-benign";
    case JointClass::bot_malign: return "bot-malign";
  }
  return "unknown";
}

std::optional<JointClass> parse_joint_class(std::string_view text) noexcept {
  for (int i = 0; i < 4; ++i) {
    auto jc = static_cast<JointClass>(i);
    if (to_string(jc) == text) return jc;
  }
  return std::nullopt;
}

std::string_view to_string(Target target) noexcept {
  return target == Target::user_type ? "user_type" : "contribution_type";
}

Target parse_target(std::string_view text) {
  if (text == "user_type" || text == "1") return Target::user_type;
  if (text == "contribution_type" || text == "2") return Target::contribution_type;
  throw ValidationError("target", "unknown target '" + std::string(text) + "'");
}

std::array<double, OresScores::kColumns> OresScores::flat() const noexcept {
  std::array<double, kColumns> out{};
  auto it = std::copy(edit.begin(), edit.end(), out.begin());
  it = std::copy(item.begin(), item.end(), it);
  it = std::copy(article.begin(), article.end(), it);
  std::copy(wp10.begin(), wp10.end(), it);
  return out;
}

OresScores OresScores::from_flat(std::span<const double, kColumns> values) noexcept {
  OresScores s;
  auto it = values.begin();
  std::copy_n(it, 4, s.edit.begin());
  std::copy_n(it + 4, 5, s.item.begin());
  std::copy_n(it + 9, 4, s.article.begin());
  std::copy_n(it + 13, 6, s.wp10.begin());
  return s;
}

void validate(const OresScores& s) {
  check_group(s.edit, 0, 2, "dmg_t/dmg_f");
  check_group(s.edit, 2, 4, "gf_t/gf_f");
  check_group(s.item, 0, 5, "item_a..item_e");
  check_group(s.article, 0, 4, "art_ok..art_vandalism");
  check_group(s.wp10, 0, 6, "wp10_b..wp10_stub");
}

void renormalize(OresScores& s) noexcept {
  normalize_range(s.edit, 0, 2);
  normalize_range(s.edit, 2, 4);
  normalize_range(s.item, 0, 5);
  normalize_range(s.article, 0, 4);
  normalize_range(s.wp10, 0, 6);
}

void validate(const EditEvent& e) {
  if (e.contributor_id.empty()) throw ValidationError("contributor_id", "must not be empty");
  auto count = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0) throw ValidationError(name, "count must be finite and >= 0");
  };
  count(e.review_length, "review_length");
  count(e.links, "links");
  count(e.repeated_links, "repeated_links");
  count(e.chars_inserted, "chars_inserted");
  count(e.chars_deleted, "chars_deleted");
  validate(e.ores);
}

std::string_view feature_id(Feature f) noexcept { return kFeatureIds[index_of(f)]; }

std::optional<Feature> parse_feature_id(std::string_view text) noexcept {
  if (!text.empty() && text.front() == '#') text.remove_prefix(1);
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    if (kFeatureIds[i] == text) return static_cast<Feature>(i);
  return std::nullopt;
}

const std::array<Feature, kFeatureCount>& all_features() noexcept {
  static const auto features = [] {
    std::array<Feature, kFeatureCount> a{};
    for (std::size_t i = 0; i < kFeatureCount; ++i) a[i] = static_cast<Feature>(i);
    return a;
  }();
  return features;
}

void FeatureVector::validate() const {
  if (ids.size() != values.size()) throw ValidationError("ids", "identifier and value counts differ");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0 && index_of(ids[i]) <= index_of(ids[i - 1]))
      throw ValidationError("ids", "identifiers must be unique and in canonical order");
    if (!std::isfinite(values[i]))
      throw ValidationError(std::string(feature_id(ids[i])), "value is not finite");
  }
}

std::optional<double> FeatureVector::get(Feature f) const noexcept {
  auto it = std::lower_bound(ids.begin(), ids.end(), f,
                             [](Feature a, Feature b) { return index_of(a) < index_of(b); });
  if (it == ids.end() || *it != f) return std::nullopt;
  return values[static_cast<std::size_t>(it - ids.begin())];
}

FeatureSet FeatureSet::basic() {
  FeatureSet s{"set1", {}};
  for (std::size_t i = 0; i <= index_of(Feature::chars_deleted); ++i) s.features.push_back(static_cast<Feature>(i));
  return s;
}

FeatureSet FeatureSet::full() {
  return {"set2", std::vector<Feature>(all_features().begin(), all_features().end())};
}

FeatureSet FeatureSet::user_type_selected() {
  using F = Feature;
  return {"set3-target1",
          {F::revisions_per_page, F::revisions_per_week, F::pages_per_week, F::reverts,
           F::revert_frequency, F::repeated_links_ratio, F::goodfaith_true, F::item_e, F::wp10_b,
           F::wp10_stub}};
}

FeatureSet FeatureSet::contribution_type_selected() {
  using F = Feature;
  return {"set3-target2", {F::wp10_b, F::wp10_c, F::wp10_fa, F::wp10_start, F::wp10_stub}};
}

FeatureSet FeatureSet::stacking_input() {
  auto a = user_type_selected().features;
  auto b = contribution_type_selected().features;
  std::vector<Feature> merged;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged),
                 [](Feature x, Feature y) { return index_of(x) < index_of(y); });
  return {"stacking", std::move(merged)};
}

FeatureSet FeatureSet::by_name(std::string_view name) {
  if (name == "set1" || name == "1") return basic();
  if (name == "set2" || name == "2") return full();
  if (name == "set3-target1" || name == "set3") return user_type_selected();
  if (name == "set3-target2") return contribution_type_selected();
  if (name == "stacking") return stacking_input();
  throw ValidationError("feature_set", "unknown feature set '" + std::string(name) + "'");
}

FeatureSet FeatureSet::from_ids(std::string name, std::span<const std::string> ids) {
  FeatureSet s{std::move(name), {}};
  for (const auto& id : ids) {
    auto f = parse_feature_id(id);
    if (!f) throw ValidationError("feature_set", "unknown feature identifier '" + id + "'");
    s.features.push_back(*f);
  }
  std::sort(s.features.begin(), s.features.end(),
            [](Feature a, Feature b) { return index_of(a) < index_of(b); });
  if (std::adjacent_find(s.features.begin(), s.features.end()) != s.features.end())
    throw ValidationError("feature_set", "duplicate feature identifier");
  return s;
}

std::array<double, kFeatureCount> DailyAggregate::day_features() const noexcept {
  std::array<double, kFeatureCount> f{};
  f[index_of(Feature::reviews)] = reviews;
  f[index_of(Feature::mean_review_length)] = mean_review_length;
  f[index_of(Feature::pages)] = pages;
  f[index_of(Feature::revisions_per_page)] = pages > 0 ? reviews / pages : 0.0;
  f[index_of(Feature::revisions_per_week)] = reviews;
  f[index_of(Feature::pages_per_week)] = pages;
  f[index_of(Feature::reverts)] = reverts;
  f[index_of(Feature::revert_frequency)] = reviews > 0 ? reverts / reviews : 0.0;
  f[index_of(Feature::links_ratio)] = links_ratio;
  f[index_of(Feature::repeated_links_ratio)] = repeated_links_ratio;
  f[index_of(Feature::chars_inserted)] = chars_inserted;
  f[index_of(Feature::chars_deleted)] = chars_deleted;
  auto probs = ores.flat();
  std::copy(probs.begin(), probs.end(), f.begin() + kOresOffset);
  return f;
}

}  // namespace wikistream
