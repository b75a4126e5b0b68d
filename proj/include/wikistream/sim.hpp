#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "wikistream/core.hpp"

namespace wikistream {

/// Behavior model of one joint class. Probability groups are Dirichlet around
/// a per-contributor mean; the OK probability is Beta on the archetype's side
/// of one half.
struct BehaviorArchetype {
  std::string name;
  JointClass joint = JointClass::human_benign;

  double edits_per_day = 2;   // Poisson mean
  double min_edits = 1;       // daily count clipped to [min_edits, max_edits]
  double max_edits = 1e9;
  double review_length_mu = 4;  // log-normal
  double review_length_sigma = 0.5;
  double revert_probability = 0.05;
  double links_per_edit = 1;  // Poisson mean
  double repeated_link_share = 0.1;
  double inserted_mu = 5;  // log-normal chars inserted
  double inserted_sigma = 1;
  double deleted_mu = 3;
  double deleted_sigma = 1;
  std::size_t page_pool = 10;

  std::array<double, 2> ok_beta{4, 2};  // shape of the distance from the boundary
  std::array<double, 2> damaging_beta{2, 6};
  std::array<double, 2> goodfaith_beta{6, 2};
  std::array<double, 5> item_mean{0.2, 0.2, 0.2, 0.2, 0.2};
  std::array<double, 6> wp10_mean{1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6};
  double personal_concentration = 40;  // spread of contributor means around the archetype mean
  double event_concentration = 30;     // spread of single edits around the contributor mean

  UserType user_type() const noexcept { return user_of(joint); }
  ContributionType contribution_type() const noexcept { return contribution_of(joint); }
  void validate() const;
};

/// Default archetypes in joint-class order.
std::array<BehaviorArchetype, 4> default_archetypes();

struct SimConfig {
  std::array<std::size_t, 4> counts{10, 10, 10, 10};  // human-benign, human-malign, bot-benign, bot-malign
  Day start = parse_day("2020-01-01");
  std::size_t span_days = 30;
  std::size_t active_days = 0;  // distinct active days per contributor; 0 = every day
  std::uint64_t seed = 0;
  double noise = 0.0;  // 0 = fully separable
  std::array<BehaviorArchetype, 4> archetypes = default_archetypes();

  void validate() const;
  /// key = value lines (counts, human_benign, ..., start, span_days,
  /// active_days, seed, noise); '#' starts a comment.
  static SimConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);
};

struct SimContributor {
  std::string contributor_id;
  JointClass archetype = JointClass::human_benign;
};

struct SimOutput {
  std::vector<EditEvent> events;  // sorted by day, then contributor id
  std::vector<SimContributor> contributors;
};

SimOutput simulate(const SimConfig& config);

void write_labels_csv(const std::vector<SimContributor>& contributors, std::ostream& out);

}  // namespace wikistream
