#include "wikistream/profile.hpp"

#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>

#include "json.hpp"

namespace wikistream {

double ContributorProfile::weeks() const noexcept {
  auto span_days = static_cast<double>((last_seen - first_seen).count() + 1);
  return std::max(1.0, std::ceil(span_days / 7.0));
}

double ContributorProfile::value(Feature f) const noexcept {
  switch (f) {
    case Feature::reviews: return reviews;
    case Feature::mean_review_length: return mean_review_length.value;
    case Feature::pages: return pages;
    case Feature::revisions_per_page: return revisions_per_page.value;
    case Feature::revisions_per_week: return revisions_per_week;
    case Feature::pages_per_week: return pages_per_week;
    case Feature::reverts: return reverts;
    case Feature::revert_frequency: return revert_frequency;
    case Feature::links_ratio: return links_ratio;
    case Feature::repeated_links_ratio: return repeated_links_ratio;
    case Feature::chars_inserted: return chars_inserted;
    case Feature::chars_deleted: return chars_deleted;
    default: return ores[index_of(f) - kOresOffset].value;
  }
}

void ContributorProfile::apply(const DailyAggregate& a) {
  if (n_updates == 0) {
    contributor_id = a.contributor_id;
    first_seen = last_seen = a.day;
  }
  first_seen = std::min(first_seen, a.day);
  last_seen = std::max(last_seen, a.day);
  is_bot = is_bot || a.is_bot;
  ++n_updates;

  reviews += a.reviews;
  pages += a.pages;
  reverts += a.reverts;
  links_ratio += a.links_ratio;
  repeated_links_ratio += a.repeated_links_ratio;
  chars_inserted += a.chars_inserted;
  chars_deleted += a.chars_deleted;

  mean_review_length.add(a.mean_review_length);
  revisions_per_page.add(a.pages > 0 ? a.reviews / a.pages : 0.0);
  auto probs = a.ores.flat();
  for (std::size_t i = 0; i < probs.size(); ++i) ores[i].add(probs[i]);

  double w = weeks();
  revisions_per_week = reviews / w;
  pages_per_week = pages / w;
  revert_frequency = reviews > 0 ? reverts / reviews : 0.0;
}

FeatureVector to_feature_vector(const ContributorProfile& profile, const FeatureSet& features) {
  FeatureVector v;
  v.ids = features.features;
  v.values.reserve(features.size());
  for (auto f : features.features) {
    if (index_of(f) >= kFeatureCount)
      throw ValidationError("feature_set", "unknown feature in set '" + features.name + "'");
    v.values.push_back(profile.value(f));
  }
  return v;
}

ContributorProfile ProfileStore::update(const DailyAggregate& aggregate) {
  std::unique_lock lock(mutex_);
  auto it = profiles_.find(aggregate.contributor_id);
  if (it == profiles_.end()) it = profiles_.emplace(aggregate.contributor_id, ContributorProfile{}).first;
  it->second.apply(aggregate);
  return it->second;
}

std::optional<ContributorProfile> ProfileStore::find(const std::string& contributor_id) const {
  std::shared_lock lock(mutex_);
  auto it = profiles_.find(contributor_id);
  if (it == profiles_.end()) return std::nullopt;
  return it->second;
}

std::size_t ProfileStore::size() const {
  std::shared_lock lock(mutex_);
  return profiles_.size();
}

std::vector<ContributorProfile> ProfileStore::snapshot() const {
  std::shared_lock lock(mutex_);
  std::vector<ContributorProfile> out;
  out.reserve(profiles_.size());
  for (const auto& [id, p] : profiles_) out.push_back(p);
  return out;
}

namespace {

nlohmann::ordered_json mean_to_json(const RunningMean& m) { return {m.value, m.count}; }

RunningMean mean_from_json(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<std::size_t>()};
}

}  // namespace

void ProfileStore::export_jsonl(std::ostream& out) const {
  std::shared_lock lock(mutex_);
  for (const auto& [id, p] : profiles_) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["contributor_id"] = p.contributor_id;
    j["is_bot"] = p.is_bot;
    j["first_seen"] = format_day(p.first_seen);
    j["last_seen"] = format_day(p.last_seen);
    j["n_updates"] = p.n_updates;
    j["sums"] = {p.reviews, p.pages, p.reverts, p.links_ratio, p.repeated_links_ratio, p.chars_inserted,
                 p.chars_deleted};
    j["mean_review_length"] = mean_to_json(p.mean_review_length);
    j["revisions_per_page"] = mean_to_json(p.revisions_per_page);
    auto& ores = j["ores"] = nlohmann::ordered_json::array();
    for (const auto& m : p.ores) ores.push_back(mean_to_json(m));
    j["derived"] = {p.revisions_per_week, p.pages_per_week, p.revert_frequency};
    out << j.dump() << '\n';
  }
}

void ProfileStore::import_jsonl(std::istream& in) {
  std::unique_lock lock(mutex_);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      ContributorProfile p;
      p.contributor_id = j.at("contributor_id").get<std::string>();
      p.is_bot = j.at("is_bot").get<bool>();
      p.first_seen = parse_day(j.at("first_seen").get<std::string>());
      p.last_seen = parse_day(j.at("last_seen").get<std::string>());
      p.n_updates = j.at("n_updates").get<std::size_t>();
      const auto& sums = j.at("sums");
      p.reviews = sums.at(0);
      p.pages = sums.at(1);
      p.reverts = sums.at(2);
      p.links_ratio = sums.at(3);
      p.repeated_links_ratio = sums.at(4);
      p.chars_inserted = sums.at(5);
      p.chars_deleted = sums.at(6);
      p.mean_review_length = mean_from_json(j.at("mean_review_length"));
      p.revisions_per_page = mean_from_json(j.at("revisions_per_page"));
      const auto& ores = j.at("ores");
      if (ores.size() != p.ores.size()) throw ValidationError("ores", "expected 19 running means");
      for (std::size_t i = 0; i < p.ores.size(); ++i) p.ores[i] = mean_from_json(ores[i]);
      const auto& derived = j.at("derived");
      p.revisions_per_week = derived.at(0);
      p.pages_per_week = derived.at(1);
      p.revert_frequency = derived.at(2);
      profiles_[p.contributor_id] = std::move(p);
    } catch (const nlohmann::json::exception& err) {
      throw ValidationError("profiles", "line " + std::to_string(line_no) + ": " + err.what());
    }
  }
}

}  // namespace wikistream
