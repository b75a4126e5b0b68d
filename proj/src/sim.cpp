#include "wikistream/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>

#include "wikistream/random.hpp"

namespace wikistream {

namespace {

template <std::size_t N>
std::array<double, N> draw_dirichlet(Rng& rng, const std::array<double, N>& mean, double concentration) {
  std::array<double, N> out{};
  double sum = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double a = std::max(mean[i] * concentration, 1e-3);
    out[i] = std::gamma_distribution<double>(a, 1.0)(rng);
    sum += out[i];
  }
  if (!(sum > 0)) return mean;
  for (auto& v : out) v /= sum;
  return out;
}

template <std::size_t N>
std::array<double, N> normalized(std::array<double, N> v) {
  double sum = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= sum;
  return v;
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw ValidationError(key, "not a number: '" + value + "'");
  }
  if (used != value.size()) throw ValidationError(key, "not a number: '" + value + "'");
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  double v = parse_double(key, value);
  if (v < 0 || v != std::floor(v)) throw ValidationError(key, "must be a non-negative integer");
  return static_cast<std::size_t>(v);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

void BehaviorArchetype::validate() const {
  auto positive = [&](double v, const char* field) {
    if (!(v > 0) || !std::isfinite(v)) throw ValidationError(field, name + ": must be positive");
  };
  positive(edits_per_day, "edits_per_day");
  positive(review_length_sigma, "review_length_sigma");
  positive(inserted_sigma, "inserted_sigma");
  positive(deleted_sigma, "deleted_sigma");
  positive(personal_concentration, "personal_concentration");
  positive(event_concentration, "event_concentration");
  for (double v : ok_beta) positive(v, "ok_beta");
  for (double v : damaging_beta) positive(v, "damaging_beta");
  for (double v : goodfaith_beta) positive(v, "goodfaith_beta");
  for (double v : item_mean) positive(v, "item_mean");
  for (double v : wp10_mean) positive(v, "wp10_mean");
  if (min_edits < 1 || max_edits < min_edits) throw ValidationError("min_edits", name + ": need 1 <= min <= max");
  if (revert_probability < 0 || revert_probability > 1)
    throw ValidationError("revert_probability", name + ": must lie in [0, 1]");
  if (repeated_link_share < 0 || repeated_link_share > 1)
    throw ValidationError("repeated_link_share", name + ": must lie in [0, 1]");
  if (links_per_edit < 0) throw ValidationError("links_per_edit", name + ": must be non-negative");
  if (page_pool == 0) throw ValidationError("page_pool", name + ": must be positive");
}

std::array<BehaviorArchetype, 4> default_archetypes() {
  BehaviorArchetype hb;
  hb.name = "human-benign";
  hb.joint = JointClass::human_benign;
  hb.edits_per_day = 2;
  hb.max_edits = 12;
  hb.review_length_mu = 4.0;
  hb.revert_probability = 0.03;
  hb.links_per_edit = 1.5;
  hb.repeated_link_share = 0.1;
  hb.inserted_mu = 5.5;
  hb.deleted_mu = 3.5;
  hb.page_pool = 8;
  hb.ok_beta = {4, 2};
  hb.damaging_beta = {2, 8};
  hb.goodfaith_beta = {8, 2};
  hb.item_mean = {0.10, 0.25, 0.30, 0.20, 0.15};
  hb.wp10_mean = {0.28, 0.22, 0.08, 0.17, 0.15, 0.10};

  BehaviorArchetype hm = hb;
  hm.name = "human-malign";
  hm.joint = JointClass::human_malign;
  hm.review_length_mu = 2.5;
  hm.revert_probability = 0.5;
  hm.links_per_edit = 0.5;
  hm.inserted_mu = 4.0;
  hm.deleted_mu = 6.0;
  hm.damaging_beta = {8, 2};
  hm.goodfaith_beta = {3, 4};
  hm.item_mean = {0.03, 0.07, 0.15, 0.30, 0.45};
  hm.wp10_mean = {0.06, 0.12, 0.01, 0.03, 0.30, 0.48};

  BehaviorArchetype bb = hb;
  bb.name = "bot-benign";
  bb.joint = JointClass::bot_benign;
  bb.edits_per_day = 50;
  bb.min_edits = 20;
  bb.max_edits = 1e9;
  bb.review_length_mu = 3.0;
  bb.review_length_sigma = 0.2;
  bb.revert_probability = 0.01;
  bb.links_per_edit = 3;
  bb.repeated_link_share = 0.3;
  bb.inserted_mu = 3.5;
  bb.deleted_mu = 2.5;
  bb.page_pool = 400;
  bb.item_mean = {0.05, 0.15, 0.30, 0.30, 0.20};
  bb.wp10_mean = {0.10, 0.18, 0.02, 0.06, 0.30, 0.34};

  BehaviorArchetype bm = bb;
  bm.name = "bot-malign";
  bm.joint = JointClass::bot_malign;
  bm.revert_probability = 0.4;
  bm.links_per_edit = 4;
  bm.repeated_link_share = 0.6;
  bm.inserted_mu = 4.5;
  bm.deleted_mu = 5.0;
  bm.damaging_beta = {8, 2};
  bm.goodfaith_beta = {2, 6};
  bm.item_mean = {0.02, 0.05, 0.13, 0.30, 0.50};
  bm.wp10_mean = {0.03, 0.08, 0.01, 0.02, 0.26, 0.60};

  return {hb, hm, bb, bm};
}

void SimConfig::validate() const {
  std::size_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw ValidationError("counts", "total population is zero");
  if (span_days < 1) throw ValidationError("span_days", "must be at least one day");
  if (active_days > span_days) throw ValidationError("active_days", "exceeds span_days");
  if (!(noise >= 0 && noise <= 1)) throw ValidationError("noise", "must lie in [0, 1]");
  for (const auto& a : archetypes) a.validate();
}

void SimConfig::set(const std::string& key, const std::string& value) {
  static const std::array<const char*, 4> names{"human_benign", "human_malign", "bot_benign", "bot_malign"};
  for (std::size_t i = 0; i < names.size(); ++i)
    if (key == names[i]) {
      counts[i] = parse_count(key, value);
      return;
    }
  if (key == "counts") {
    std::array<std::size_t, 4> parsed{};
    std::size_t n = 0, pos = 0;
    while (pos <= value.size()) {
      auto comma = value.find(',', pos);
      auto part = trim(value.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (n >= 4) throw ValidationError(key, "expected four comma-separated counts");
      parsed[n++] = parse_count(key, part);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (n != 4) throw ValidationError(key, "expected four comma-separated counts");
    counts = parsed;
  } else if (key == "start") {
    start = parse_day(value);
  } else if (key == "span_days") {
    span_days = parse_count(key, value);
  } else if (key == "active_days") {
    active_days = parse_count(key, value);
  } else if (key == "seed") {
    try {
      std::size_t used = 0;
      seed = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError(key, "not an unsigned integer: '" + value + "'");
    }
  } else if (key == "noise") {
    noise = parse_double(key, value);
  } else {
    throw ValidationError(key, "unknown simulator setting");
  }
}

SimConfig SimConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config", "cannot open '" + path + "'");
  SimConfig config;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config", "expected key = value: '" + line + "'");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  config.validate();
  return config;
}

SimOutput simulate(const SimConfig& config) {
  config.validate();
  SimOutput out;

  std::array<double, 6> global_wp10{};
  std::array<double, 5> global_item{};
  for (const auto& a : config.archetypes) {
    for (std::size_t i = 0; i < 6; ++i) global_wp10[i] += a.wp10_mean[i] / 4;
    for (std::size_t i = 0; i < 5; ++i) global_item[i] += a.item_mean[i] / 4;
  }

  const std::size_t active = config.active_days ? config.active_days : config.span_days;
  std::size_t index = 0;
  std::uint64_t page_base = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& arch = config.archetypes[k];
    const bool own_benign = arch.contribution_type() == ContributionType::positive;
    for (std::size_t n = 0; n < config.counts[k]; ++n, ++index) {
      Rng rng = substream(config.seed, index);
      char id[32];
      std::snprintf(id, sizeof id, "user-%05zu", index);
      out.contributors.push_back({id, arch.joint});

      auto wp10 = normalized(draw_dirichlet(rng, normalized(arch.wp10_mean), arch.personal_concentration));
      auto item = normalized(draw_dirichlet(rng, normalized(arch.item_mean), arch.personal_concentration));
      for (std::size_t i = 0; i < 6; ++i) wp10[i] = (1 - config.noise) * wp10[i] + config.noise * global_wp10[i];
      for (std::size_t i = 0; i < 5; ++i) item[i] = (1 - config.noise) * item[i] + config.noise * global_item[i];

      std::vector<std::uint64_t> pages(arch.page_pool);
      std::iota(pages.begin(), pages.end(), page_base);
      page_base += arch.page_pool;

      std::vector<std::size_t> days(config.span_days);
      std::iota(days.begin(), days.end(), 0);
      for (std::size_t a = 0; a < active; ++a)
        std::swap(days[a], days[std::uniform_int_distribution<std::size_t>(a, days.size() - 1)(rng)]);
      days.resize(active);
      std::sort(days.begin(), days.end());

      std::uniform_int_distribution<std::size_t> pick_page(0, pages.size() - 1);
      std::bernoulli_distribution flip(config.noise);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (auto d : days) {
        double count = std::poisson_distribution<long>(arch.edits_per_day)(rng);
        count = std::clamp(count, arch.min_edits, arch.max_edits);
        for (long e = 0; e < static_cast<long>(count); ++e) {
          EditEvent ev;
          ev.contributor_id = id;
          ev.is_bot = arch.user_type() == UserType::bot;
          ev.page_id = "page-" + std::to_string(pages[pick_page(rng)]);
          ev.day = config.start + std::chrono::days(static_cast<int>(d));

          bool benign = flip(rng) ? !own_benign : own_benign;
          bool own = benign == own_benign;
          double distance = draw_beta(rng, arch.ok_beta[0], arch.ok_beta[1]);
          double ok = benign ? 0.51 + 0.49 * distance : 0.49 * (1 - distance);
          auto rest = draw_dirichlet<3>(rng, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 3.0);
          ev.ores.article = {ok, (1 - ok) * rest[0], (1 - ok) * rest[1], (1 - ok) * rest[2]};

          auto dmg = arch.damaging_beta, gf = arch.goodfaith_beta;
          if (!own) {
            std::swap(dmg[0], dmg[1]);
            std::swap(gf[0], gf[1]);
          }
          double damaging = draw_beta(rng, dmg[0], dmg[1]);
          double goodfaith = draw_beta(rng, gf[0], gf[1]);
          ev.ores.edit = {damaging, 1 - damaging, goodfaith, 1 - goodfaith};
          auto item_draw = draw_dirichlet(rng, item, arch.event_concentration);
          std::copy(item_draw.begin(), item_draw.end(), ev.ores.item.begin());
          auto wp10_draw = draw_dirichlet(rng, wp10, arch.event_concentration);
          std::copy(wp10_draw.begin(), wp10_draw.end(), ev.ores.wp10.begin());
          renormalize(ev.ores);

          double revert_p = own ? arch.revert_probability : (benign ? 0.03 : 0.5);
          ev.was_reverted = unit(rng) < revert_p;
          ev.review_length =
              std::round(std::lognormal_distribution<double>(arch.review_length_mu, arch.review_length_sigma)(rng));
          ev.links = static_cast<double>(std::poisson_distribution<long>(arch.links_per_edit)(rng));
          ev.repeated_links = static_cast<double>(
              std::binomial_distribution<long>(static_cast<long>(ev.links), arch.repeated_link_share)(rng));
          ev.chars_inserted = std::round(std::lognormal_distribution<double>(arch.inserted_mu, arch.inserted_sigma)(rng));
          ev.chars_deleted = std::round(std::lognormal_distribution<double>(arch.deleted_mu, arch.deleted_sigma)(rng));
          out.events.push_back(std::move(ev));
        }
      }
    }
  }
  std::stable_sort(out.events.begin(), out.events.end(), [](const EditEvent& a, const EditEvent& b) {
    if (a.day != b.day) return a.day < b.day;
    return a.contributor_id < b.contributor_id;
  });
  return out;
}

void write_labels_csv(const std::vector<SimContributor>& contributors, std::ostream& out) {
  out << "contributor_id,archetype\n";
  for (const auto& c : contributors) out << c.contributor_id << ',' << to_string(c.archetype) << '\n';
}

}  // namespace wikistream
