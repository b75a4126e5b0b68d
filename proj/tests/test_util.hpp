#pragma once

#include <random>
#include <string>
#include <vector>

#include "wikistream/core.hpp"

namespace testutil {

using namespace wikistream;

inline OresScores scores(double ok, double goodfaith = 0.7) {
  OresScores s;
  s.edit = {0.2, 0.8, goodfaith, 1 - goodfaith};
  s.item = {0.2, 0.2, 0.2, 0.2, 0.2};
  s.article = {ok, (1 - ok) / 2, (1 - ok) / 4, (1 - ok) / 4};
  s.wp10 = {0.25, 0.15, 0.1, 0.1, 0.2, 0.2};
  return s;
}

inline EditEvent event(const std::string& contributor, const std::string& day, bool bot = false, double ok = 0.9,
                       double review_length = 20) {
  EditEvent e;
  e.contributor_id = contributor;
  e.is_bot = bot;
  e.page_id = "p1";
  e.day = parse_day(day);
  e.review_length = review_length;
  e.links = 2;
  e.repeated_links = 1;
  e.chars_inserted = 100;
  e.chars_deleted = 10;
  e.ores = scores(ok);
  return e;
}

inline DailyAggregate aggregate(const std::string& contributor, const std::string& day, bool bot, double ok,
                                double reviews = 3, double pages = 2) {
  DailyAggregate a;
  a.contributor_id = contributor;
  a.day = parse_day(day);
  a.is_bot = bot;
  a.reviews = reviews;
  a.mean_review_length = 25;
  a.pages = pages;
  a.reverts = 1;
  a.links_ratio = 0.05;
  a.repeated_links_ratio = 0.01;
  a.chars_inserted = 300;
  a.chars_deleted = 40;
  a.ores = scores(ok);
  a.contribution_type = derive_contribution_type(ok);
  return a;
}

inline std::vector<double> gaussian_vector(std::mt19937& rng, std::size_t n, double mean = 0, double sd = 1) {
  std::normal_distribution<double> d(mean, sd);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace testutil
