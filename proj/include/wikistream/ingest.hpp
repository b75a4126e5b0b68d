#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wikistream/core.hpp"

namespace wikistream {

enum class InputFormat { csv, jsonl };
enum class Ordering { as_is, sort_by_day };

struct StreamSource {
  std::filesystem::path path;
  InputFormat format = InputFormat::csv;
  Ordering ordering = Ordering::as_is;

  /// Format inferred from the extension (".jsonl"/".ndjson" -> jsonl, otherwise csv).
  static StreamSource from_path(std::filesystem::path path, Ordering ordering = Ordering::as_is);
};

/// A ValidationError that also carries the 1-based input line.
class ParseError : public ValidationError {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Column order of the event schema. JSONL objects use the same keys.
const std::vector<std::string>& event_columns();

std::vector<EditEvent> parse_events(const StreamSource& source);
std::vector<EditEvent> parse_events_csv(std::istream& in);
std::vector<EditEvent> parse_events_jsonl(std::istream& in);

/// `synthetic_column` appends the provenance column "synthetic".
void write_events_csv(std::ostream& out, std::span<const EditEvent> events, bool synthetic_column = false);
void write_events_jsonl(std::ostream& out, std::span<const EditEvent> events, bool synthetic_column = false);

/// One aggregate per (contributor, day), sorted by day then contributor id.
std::vector<DailyAggregate> aggregate_daily(std::span<const EditEvent> events);

/// Expands an aggregate into event rows that aggregate_daily folds back into
/// the same aggregate. Reviews, pages and reverts are rounded to whole events.
std::vector<EditEvent> expand_to_events(const DailyAggregate& aggregate);

struct DatasetSummary {
  std::size_t n_pages = 0;
  std::size_t n_contributors = 0;
  std::size_t n_events = 0;
  std::size_t n_aggregates = 0;
  std::size_t n_bots = 0;
  std::size_t n_humans = 0;
  std::array<std::size_t, 4> joint_histogram{};  // indexed by JointClass
};

/// Contributor-level counts. A contributor's contribution class is the
/// majority over its aggregates, ties going to malign. n_pages is only known
/// when summarizing events.
DatasetSummary summarize(std::span<const DailyAggregate> aggregates);
DatasetSummary summarize(std::span<const EditEvent> events);

}  // namespace wikistream
