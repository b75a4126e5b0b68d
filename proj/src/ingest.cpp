#include "wikistream/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "json.hpp"

namespace wikistream {

namespace {

constexpr std::size_t kFixedColumns = 10;

const std::array<std::string_view, OresScores::kColumns> kProbabilityColumns = {
    "dmg_t",  "dmg_f",  "gf_t",   "gf_f",   "item_a",        "item_b", "item_c",
    "item_d", "item_e", "art_ok", "art_attack", "art_spam",  "art_vandalism", "wp10_b",
    "wp10_c", "wp10_fa", "wp10_ga", "wp10_start", "wp10_stub"};

double parse_number(std::string_view text, std::string_view field) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw ValidationError(std::string(field), "not a number: '" + std::string(text) + "'");
  return value;
}

bool parse_flag(std::string_view text, std::string_view field) {
  if (text == "1" || text == "true") return true;
  if (text == "0" || text == "false") return false;
  throw ValidationError(std::string(field), "expected 0/1, got '" + std::string(text) + "'");
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

// Field accessor abstracting CSV rows and JSON objects.
template <typename Get>
EditEvent build_event(Get&& get) {
  EditEvent e;
  e.contributor_id = get.text("contributor_id");
  e.is_bot = get.flag("is_bot");
  e.page_id = get.text("page_id");
  e.day = parse_day(get.text("timestamp"));
  e.review_length = get.number("review_length");
  e.links = get.number("links");
  e.repeated_links = get.number("repeated_links");
  e.chars_inserted = get.number("chars_inserted");
  e.chars_deleted = get.number("chars_deleted");
  e.was_reverted = get.flag("was_reverted");
  std::array<double, OresScores::kColumns> probs{};
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = get.number(kProbabilityColumns[i]);
  e.ores = OresScores::from_flat(probs);
  e.synthetic = get.optional_flag("synthetic");
  validate(e);
  return e;
}

struct CsvRow {
  const std::vector<std::string>& fields;
  const std::unordered_map<std::string, std::size_t>& index;

  const std::string& raw(std::string_view key) const {
    auto it = index.find(std::string(key));
    if (it == index.end()) throw ValidationError(std::string(key), "missing column");
    return fields[it->second];
  }
  std::string text(std::string_view key) const { return raw(key); }
  double number(std::string_view key) const { return parse_number(raw(key), key); }
  bool flag(std::string_view key) const { return parse_flag(raw(key), key); }
  bool optional_flag(std::string_view key) const {
    auto it = index.find(std::string(key));
    return it != index.end() && !fields[it->second].empty() && parse_flag(fields[it->second], key);
  }
};

struct JsonRow {
  const nlohmann::json& obj;

  const nlohmann::json& raw(std::string_view key) const {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) throw ValidationError(std::string(key), "missing key");
    return *it;
  }
  std::string text(std::string_view key) const {
    const auto& v = raw(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw ValidationError(std::string(key), "expected a string");
  }
  double number(std::string_view key) const {
    const auto& v = raw(key);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_number(v.get_ref<const std::string&>(), key);
    throw ValidationError(std::string(key), "expected a number");
  }
  bool flag(std::string_view key) const {
    const auto& v = raw(key);
    if (v.is_boolean()) return v.get<bool>();
    if (v.is_number_integer()) return parse_flag(std::to_string(v.get<long long>()), key);
    if (v.is_string()) return parse_flag(v.get_ref<const std::string&>(), key);
    throw ValidationError(std::string(key), "expected 0/1");
  }
  bool optional_flag(std::string_view key) const { return obj.contains(std::string(key)) && flag(key); }
};

std::vector<std::string> event_row(const EditEvent& e) {
  std::vector<std::string> row{quote_csv(e.contributor_id),
                               e.is_bot ? "1" : "0",
                               quote_csv(e.page_id),
                               format_day(e.day),
                               format_number(e.review_length),
                               format_number(e.links),
                               format_number(e.repeated_links),
                               format_number(e.chars_inserted),
                               format_number(e.chars_deleted),
                               e.was_reverted ? "1" : "0"};
  for (double p : e.ores.flat()) row.push_back(format_number(p));
  return row;
}

}  // namespace

ParseError::ParseError(std::size_t line, std::string field, const std::string& message)
    : ValidationError(std::move(field), "line " + std::to_string(line) + ": " + message), line_(line) {}

StreamSource StreamSource::from_path(std::filesystem::path path, Ordering ordering) {
  auto ext = path.extension().string();
  InputFormat format = (ext == ".jsonl" || ext == ".ndjson") ? InputFormat::jsonl : InputFormat::csv;
  return {std::move(path), format, ordering};
}

const std::vector<std::string>& event_columns() {
  static const std::vector<std::string> columns = [] {
    std::vector<std::string> c{"contributor_id", "is_bot",         "page_id",       "timestamp",
                               "review_length",  "links",          "repeated_links", "chars_inserted",
                               "chars_deleted",  "was_reverted"};
    for (auto p : kProbabilityColumns) c.emplace_back(p);
    return c;
  }();
  return columns;
}

std::vector<EditEvent> parse_events_csv(std::istream& in) {
  std::vector<EditEvent> events;
  std::string line;
  std::size_t line_no = 0;
  std::unordered_map<std::string, std::size_t> index;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (!have_header) {
      if (line_no == 1 && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
      for (std::size_t i = 0; i < fields.size(); ++i) index[fields[i]] = i;
      for (const auto& col : event_columns())
        if (!index.contains(col)) throw ParseError(line_no, col, "header is missing column '" + col + "'");
      have_header = true;
      continue;
    }
    if (fields.size() != index.size())
      throw ParseError(line_no, "", "expected " + std::to_string(index.size()) + " fields, found " +
                                        std::to_string(fields.size()));
    try {
      events.push_back(build_event(CsvRow{fields, index}));
    } catch (const ValidationError& err) {
      throw ParseError(line_no, err.field(), err.what());
    }
  }
  return events;
}

std::vector<EditEvent> parse_events_jsonl(std::istream& in) {
  std::vector<EditEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& err) {
      throw ParseError(line_no, "", std::string("malformed JSON: ") + err.what());
    }
    if (!obj.is_object()) throw ParseError(line_no, "", "expected a JSON object");
    try {
      events.push_back(build_event(JsonRow{obj}));
    } catch (const ValidationError& err) {
      throw ParseError(line_no, err.field(), err.what());
    }
  }
  return events;
}

std::vector<EditEvent> parse_events(const StreamSource& source) {
  std::ifstream in(source.path);
  if (!in) throw ValidationError("path", "cannot open '" + source.path.string() + "'");
  auto events = source.format == InputFormat::jsonl ? parse_events_jsonl(in) : parse_events_csv(in);
  if (source.ordering == Ordering::sort_by_day)
    std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.day < b.day; });
  return events;
}

void write_events_csv(std::ostream& out, std::span<const EditEvent> events, bool synthetic_column) {
  const auto& cols = event_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  if (synthetic_column) out << ",synthetic";
  out << '\n';
  for (const auto& e : events) {
    auto row = event_row(e);
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    if (synthetic_column) out << ',' << (e.synthetic ? '1' : '0');
    out << '\n';
  }
}

void write_events_jsonl(std::ostream& out, std::span<const EditEvent> events, bool synthetic_column) {
  const auto& cols = event_columns();
  for (const auto& e : events) {
    nlohmann::ordered_json obj;
    obj[cols[0]] = e.contributor_id;
    obj[cols[1]] = e.is_bot ? 1 : 0;
    obj[cols[2]] = e.page_id;
    obj[cols[3]] = format_day(e.day);
    obj[cols[4]] = e.review_length;
    obj[cols[5]] = e.links;
    obj[cols[6]] = e.repeated_links;
    obj[cols[7]] = e.chars_inserted;
    obj[cols[8]] = e.chars_deleted;
    obj[cols[9]] = e.was_reverted ? 1 : 0;
    auto probs = e.ores.flat();
    for (std::size_t i = 0; i < probs.size(); ++i) obj[cols[kFixedColumns + i]] = probs[i];
    if (synthetic_column) obj["synthetic"] = e.synthetic ? 1 : 0;
    out << obj.dump() << '\n';
  }
}

std::vector<DailyAggregate> aggregate_daily(std::span<const EditEvent> events) {
  struct Accumulator {
    std::size_t count = 0;
    bool is_bot = false;
    bool synthetic = true;
    double length = 0, links = 0, repeated = 0, inserted = 0, deleted = 0, reverts = 0;
    std::set<std::string_view> pages;
    std::array<double, OresScores::kColumns> probs{};
  };
  std::map<std::pair<Day, std::string_view>, Accumulator> groups;
  for (const auto& e : events) {
    auto& acc = groups[{e.day, e.contributor_id}];
    ++acc.count;
    acc.is_bot = acc.is_bot || e.is_bot;
    acc.synthetic = acc.synthetic && e.synthetic;
    acc.length += e.review_length;
    acc.links += e.links;
    acc.repeated += e.repeated_links;
    acc.inserted += e.chars_inserted;
    acc.deleted += e.chars_deleted;
    acc.reverts += e.was_reverted ? 1.0 : 0.0;
    acc.pages.insert(e.page_id);
    auto p = e.ores.flat();
    for (std::size_t i = 0; i < p.size(); ++i) acc.probs[i] += p[i];
  }

  std::vector<DailyAggregate> out;
  out.reserve(groups.size());
  for (auto& [key, acc] : groups) {
    DailyAggregate a;
    a.contributor_id = std::string(key.second);
    a.day = key.first;
    a.is_bot = acc.is_bot;
    a.synthetic = acc.synthetic;
    auto n = static_cast<double>(acc.count);
    a.reviews = n;
    a.mean_review_length = acc.length / n;
    a.pages = static_cast<double>(acc.pages.size());
    a.reverts = acc.reverts;
    a.links_ratio = acc.length > 0 ? acc.links / acc.length : 0.0;
    a.repeated_links_ratio = acc.length > 0 ? acc.repeated / acc.length : 0.0;
    a.chars_inserted = acc.inserted;
    a.chars_deleted = acc.deleted;
    for (auto& p : acc.probs) p /= n;
    a.ores = OresScores::from_flat(acc.probs);
    a.contribution_type = derive_contribution_type(std::clamp(a.ores.ok(), 0.0, 1.0));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<EditEvent> expand_to_events(const DailyAggregate& a) {
  auto n = static_cast<std::size_t>(std::max(1.0, std::round(a.reviews)));
  auto pages = static_cast<std::size_t>(std::clamp(std::round(a.pages), 1.0, static_cast<double>(n)));
  auto reverts = static_cast<std::size_t>(std::clamp(std::round(a.reverts), 0.0, static_cast<double>(n)));
  std::vector<EditEvent> events(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& e = events[i];
    e.contributor_id = a.contributor_id;
    e.is_bot = a.is_bot;
    e.page_id = a.contributor_id + "/page-" + std::to_string(i % pages);
    e.day = a.day;
    e.review_length = a.mean_review_length;
    e.links = a.links_ratio * a.mean_review_length;
    e.repeated_links = a.repeated_links_ratio * a.mean_review_length;
    e.chars_inserted = a.chars_inserted / static_cast<double>(n);
    e.chars_deleted = a.chars_deleted / static_cast<double>(n);
    e.was_reverted = i < reverts;
    e.ores = a.ores;
    e.synthetic = a.synthetic;
  }
  return events;
}

DatasetSummary summarize(std::span<const DailyAggregate> aggregates) {
  struct Tally {
    bool is_bot = false;
    std::size_t positive = 0, negative = 0;
  };
  std::map<std::string_view, Tally> contributors;
  DatasetSummary s;
  s.n_aggregates = aggregates.size();
  for (const auto& a : aggregates) {
    auto& t = contributors[a.contributor_id];
    t.is_bot = t.is_bot || a.is_bot;
    (a.contribution_type == ContributionType::positive ? t.positive : t.negative) += 1;
    s.n_events += static_cast<std::size_t>(std::llround(a.reviews));
  }
  s.n_contributors = contributors.size();
  for (const auto& [id, t] : contributors) {
    (t.is_bot ? s.n_bots : s.n_humans) += 1;
    auto contribution = t.positive > t.negative ? ContributionType::positive : ContributionType::negative;
    s.joint_histogram[static_cast<std::size_t>(joint_class(derive_user_type(t.is_bot), contribution))] += 1;
  }
  return s;
}

DatasetSummary summarize(std::span<const EditEvent> events) {
  auto aggregates = aggregate_daily(events);
  auto s = summarize(std::span<const DailyAggregate>(aggregates));
  std::set<std::string_view> pages;
  for (const auto& e : events) pages.insert(e.page_id);
  s.n_pages = pages.size();
  s.n_events = events.size();
  return s;
}

}  // namespace wikistream
