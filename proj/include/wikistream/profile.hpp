#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "wikistream/core.hpp"

namespace wikistream {

/// Running arithmetic mean folded as m += (x - m) / n.
struct RunningMean {
  double value = 0;
  std::size_t count = 0;

  void add(double x) noexcept {
    ++count;
    value += (x - value) / static_cast<double>(count);
  }
};

/// Incremental contributor state. Sums cover #3, #5, #9, #11..#14; running
/// means cover #4, #6 and every probability column of #15..#18; #7, #8 and
/// #10 are recomputed from the sums after each update.
struct ContributorProfile {
  std::string contributor_id;
  bool is_bot = false;
  Day first_seen{};
  Day last_seen{};
  std::size_t n_updates = 0;

  double reviews = 0;               // #3
  double pages = 0;                 // #5
  double reverts = 0;               // #9
  double links_ratio = 0;           // #11
  double repeated_links_ratio = 0;  // #12
  double chars_inserted = 0;        // #13
  double chars_deleted = 0;         // #14

  RunningMean mean_review_length;                       // #4
  RunningMean revisions_per_page;                       // #6
  std::array<RunningMean, OresScores::kColumns> ores;   // #15..#18

  double revisions_per_week = 0;  // #7
  double pages_per_week = 0;      // #8
  double revert_frequency = 0;    // #10

  /// max(1, ceil(span_days / 7)), span counted inclusively.
  double weeks() const noexcept;
  double value(Feature f) const noexcept;
  void apply(const DailyAggregate& aggregate);
};

/// Values of `features` read from a profile, in the feature set's order.
FeatureVector to_feature_vector(const ContributorProfile& profile, const FeatureSet& features);

/// One profile per contributor. Reads may run concurrently; updates are
/// exclusive.
class ProfileStore {
 public:
  ProfileStore() = default;
  ProfileStore(const ProfileStore&) = delete;
  ProfileStore& operator=(const ProfileStore&) = delete;

  /// Folds the aggregate into its contributor's profile and returns a copy.
  ContributorProfile update(const DailyAggregate& aggregate);
  std::optional<ContributorProfile> find(const std::string& contributor_id) const;
  std::size_t size() const;
  std::vector<ContributorProfile> snapshot() const;  // sorted by contributor id

  void export_jsonl(std::ostream& out) const;
  void import_jsonl(std::istream& in);

 private:
  mutable std::shared_mutex mutex_;
  std::map<std::string, ContributorProfile, std::less<>> profiles_;
};

}  // namespace wikistream
