// wikistream command-line tool.
//
// Exit codes: 0 success, 2 invalid input or arguments, 3 runtime failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wikistream/analysis.hpp"
#include "wikistream/eval.hpp"
#include "wikistream/fabricate.hpp"
#include "wikistream/ingest.hpp"
#include "wikistream/profile.hpp"
#include "wikistream/sim.hpp"

namespace fs = std::filesystem;
using namespace wikistream;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("out", "cannot write '" + path.string() + "'");
  return out;
}

void require_file(const std::string& path, const char* field) {
  if (path.empty()) throw ValidationError(field, "missing path");
  if (!fs::is_regular_file(path)) throw ValidationError(field, "no such file: '" + path + "'");
}

std::vector<EditEvent> load_events(const std::string& path) {
  require_file(path, "input");
  return parse_events(StreamSource::from_path(path, Ordering::sort_by_day));
}

std::vector<DailyAggregate> load_aggregates(const std::string& path) { return aggregate_daily(load_events(path)); }

void write_events(const fs::path& path, std::span<const EditEvent> events, bool synthetic_column) {
  auto out = open_output(path);
  if (path.extension() == ".jsonl")
    write_events_jsonl(out, events, synthetic_column);
  else
    write_events_csv(out, events, synthetic_column);
}

std::vector<EditEvent> to_events(std::span<const DailyAggregate> aggregates) {
  std::vector<EditEvent> events;
  for (const auto& a : aggregates) {
    auto rows = expand_to_events(a);
    events.insert(events.end(), rows.begin(), rows.end());
  }
  return events;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    for (std::string part; std::getline(ss, part, ',');)
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

// Expands `--config FILE` (key = value lines, '#' comments) into flags placed
// before the user's own arguments; a key already given on the command line is
// skipped so flags win. "true" becomes a bare flag and "false" is dropped.
std::vector<std::string> expand_config(std::vector<std::string> args, CLI::App& app) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  require_file(path, "config");
  std::ifstream in(path);
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  CLI::App* sub = nullptr;
  if (args.size() > 1) {
    try {
      sub = app.get_subcommand(args[1]);
    } catch (const CLI::OptionNotFound&) {
    }
  }
  if (!sub) return args;
  auto given = [&](const CLI::Option* opt) {
    for (const auto& a : args) {
      for (const auto& l : opt->get_lnames())
        if (a == "--" + l || a.rfind("--" + l + "=", 0) == 0) return true;
      for (const auto& s : opt->get_snames())
        if (a.rfind("-" + s, 0) == 0 && a.rfind("--", 0) != 0) return true;
    }
    return false;
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config", path + ":" + std::to_string(line_no) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    auto flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt) throw ValidationError("config", path + ":" + std::to_string(line_no) + ": unknown setting '" + key + "'");
    if (given(opt)) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  // args[0] is the program, args[1] the subcommand.
  auto at = args.size() > 1 ? args.begin() + 2 : args.end();
  args.insert(at, extra.begin(), extra.end());
  return args;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string input, out = "analysis", target = "user_type";
  double threshold = 0.15;
};

void run_analyze(const AnalyzeArgs& a) {
  auto aggregates = load_aggregates(a.input);
  auto report = correlation_report(aggregates, parse_target(a.target), a.threshold);
  auto csv = open_output(fs::path(a.out) / "correlation.csv");
  write_correlation_csv(csv, report);
  auto json = open_output(fs::path(a.out) / "correlation.json");
  write_correlation_json(json, report);
  std::cout << "features with |r| > " << format_number(a.threshold) << ": " << report.reported().size() << " of "
            << report.entries.size() << '\n';
  for (const auto& e : report.reported()) std::cout << "  " << feature_id(e.feature) << "  " << format_number(e.r) << '\n';
}

// ---- select ----------------------------------------------------------------

struct SelectArgs {
  std::string input, out = "selection", target = "user_type", features = "set2";
  std::size_t count = 10;
  double step = 0.05, lambda = 0.01;
};

void run_select(const SelectArgs& a) {
  auto aggregates = load_aggregates(a.input);
  auto set = FeatureSet::by_name(a.features);
  auto x = feature_matrix(aggregates, set.features);
  auto y = target_vector(aggregates, parse_target(a.target));
  L1Options options;
  options.lambda = a.lambda;
  auto result = rfe(x, y, set.features, a.count, a.step, options);
  auto csv = open_output(fs::path(a.out) / "selection.csv");
  write_selection_csv(csv, result, set.features);
  auto json = open_output(fs::path(a.out) / "selection.json");
  write_selection_json(json, result, set.features);
  std::cout << "selected " << result.selected.features.size() << " features in " << result.rounds << " rounds:";
  for (auto f : result.selected.features) std::cout << ' ' << feature_id(f);
  std::cout << '\n';
}

// ---- synthesize / balance ----------------------------------------------------

struct SynthesizeArgs {
  std::string input, out = "synthetic";
  std::optional<std::size_t> count;
  std::uint64_t seed = 0;
  std::size_t k_max = 8;
};

void run_synthesize(const SynthesizeArgs& a) {
  auto aggregates = load_aggregates(a.input);
  auto result = balance_dataset(aggregates, a.seed, a.count);
  const auto& features = all_features();
  fs::path dir(a.out);

  auto samples = open_output(dir / "synthetic_samples.csv");
  samples << "cluster";
  for (auto f : features) samples << ',' << feature_id(f);
  samples << '\n';
  Matrix all;
  for (std::size_t c = 0; c < result.batches.size(); ++c) {
    const auto& batch = result.batches[c];
    for (std::size_t r = 0; r < batch.samples.rows(); ++r) {
      samples << c;
      for (double v : batch.samples.row(r)) samples << ',' << format_number(v);
      samples << '\n';
      all.append_row(batch.samples.row(r));
    }
  }

  if (result.n_synthetic == 0) {
    std::cerr << "warning: classes already balanced, nothing generated\n";
  } else {
    auto synthetic_stats = quartile_stats(all, features);
    auto changes = compare_stats(result.bot_stats, synthetic_stats);
    auto cmp = open_output(dir / "comparison.csv");
    write_comparison_csv(cmp, result.bot_stats, changes);
  }

  std::vector<DailyAggregate> bots;
  for (const auto& agg : aggregates)
    if (agg.is_bot) bots.push_back(agg);
  auto bot_matrix = feature_matrix(bots, features);
  auto standardized = Standardizer::fit(bot_matrix).transform(bot_matrix);
  auto curve = k_selection_curve(standardized, 1, std::min(a.k_max, bots.size()), a.seed);
  auto elbow = open_output(dir / "k_selection.csv");
  elbow << "k,mean_distance\n";
  for (std::size_t i = 0; i < curve.k.size(); ++i) elbow << curve.k[i] << ',' << format_number(curve.mean_distance[i]) << '\n';

  nlohmann::ordered_json summary;
  summary["schema_version"] = 1;
  summary["seed"] = a.seed;
  summary["human_contributors"] = result.n_human_contributors;
  summary["bot_contributors"] = result.n_bot_contributors;
  summary["generated"] = result.n_synthetic;
  auto& clusters = summary["clusters"] = nlohmann::ordered_json::array();
  for (const auto& b : result.batches) clusters.push_back({{"samples", b.samples.rows()}, {"seed", b.seed}});
  auto js = open_output(dir / "synthesize.json");
  js << summary.dump(2) << '\n';
  std::cout << "generated " << result.n_synthetic << " synthetic bot samples\n";
}

struct BalanceArgs {
  std::string input, out = "balanced.csv";
  std::optional<std::size_t> count;
  std::uint64_t seed = 0;
};

void run_balance(const BalanceArgs& a) {
  auto events = load_events(a.input);
  auto aggregates = aggregate_daily(events);
  auto result = balance_dataset(aggregates, a.seed, a.count);
  std::vector<DailyAggregate> synthetic;
  for (const auto& agg : result.combined)
    if (agg.synthetic) synthetic.push_back(agg);
  auto rows = to_events(synthetic);
  events.insert(events.end(), rows.begin(), rows.end());
  std::stable_sort(events.begin(), events.end(), [](const EditEvent& x, const EditEvent& y) { return x.day < y.day; });
  write_events(a.out, events, true);

  nlohmann::ordered_json summary;
  summary["schema_version"] = 1;
  summary["seed"] = a.seed;
  summary["real_aggregates"] = result.n_real;
  summary["synthetic_aggregates"] = result.n_synthetic;
  summary["combined_aggregates"] = result.combined.size();
  summary["human_contributors"] = result.n_human_contributors;
  summary["bot_contributors"] = result.n_bot_contributors;
  auto js = open_output(fs::path(a.out).replace_extension(".json"));
  js << summary.dump(2) << '\n';
  std::cout << "combined stream: " << result.n_real << " real + " << result.n_synthetic
            << " synthetic = " << result.combined.size() << " aggregates\n";
}

// ---- profile -----------------------------------------------------------------

struct ProfileArgs {
  std::string input, out = "profiles.jsonl", resume, features = "set2", features_out;
};

void run_profile(const ProfileArgs& a) {
  auto aggregates = load_aggregates(a.input);
  ProfileStore store;
  if (!a.resume.empty()) {
    require_file(a.resume, "resume");
    std::ifstream in(a.resume);
    store.import_jsonl(in);
  }
  for (const auto& agg : aggregates) store.update(agg);
  auto out = open_output(a.out);
  store.export_jsonl(out);
  if (!a.features_out.empty()) {
    auto set = FeatureSet::by_name(a.features);
    auto csv = open_output(a.features_out);
    csv << "contributor_id,is_bot";
    for (auto f : set.features) csv << ',' << feature_id(f);
    csv << '\n';
    for (const auto& p : store.snapshot()) {
      csv << p.contributor_id << ',' << (p.is_bot ? 1 : 0);
      for (double v : to_feature_vector(p, set).values) csv << ',' << format_number(v);
      csv << '\n';
    }
  }
  std::cout << "profiles: " << store.size() << " contributors from " << aggregates.size() << " aggregates\n";
}

// ---- evaluate ------------------------------------------------------------------

struct EvaluateArgs {
  std::string input, out = "evaluation", target = "contribution_type", save_model, load_model;
  std::vector<std::string> classifiers{"rf"}, feature_sets;
  std::uint64_t seed = 0;
  bool balance = false, no_stacking_raw = false, final_window = false;
  std::size_t window = 1000, threads = 0;
};

void run_evaluate(const EvaluateArgs& a) {
  auto aggregates = load_aggregates(a.input);
  if (a.balance) aggregates = balance_dataset(aggregates, a.seed).combined;
  Target target = parse_target(a.target);
  auto classifiers = split_list(a.classifiers);
  auto sets = split_list(a.feature_sets);
  for (const auto& c : classifiers)
    if (!is_classifier_id(c)) make_classifier(c, 0);  // throws the validation error

  std::vector<GridJob> jobs;
  for (const auto& c : classifiers) {
    if (c == "stacking") {
      jobs.push_back({c, FeatureSet::stacking_input(), target, a.seed, !a.no_stacking_raw});
      continue;
    }
    auto names = sets;
    if (names.empty()) names = {target == Target::user_type ? "set3-target1" : "set3-target2"};
    for (const auto& s : names) jobs.push_back({c, FeatureSet::by_name(s), target, a.seed, !a.no_stacking_raw});
  }
  if ((!a.save_model.empty() || !a.load_model.empty()) && jobs.size() != 1)
    throw ValidationError("save-model", "model checkpoints need exactly one classifier/feature-set pair");

  PrequentialOptions options;
  options.window = a.window;
  std::vector<PrequentialResult> results;
  if (jobs.size() == 1 && (!a.save_model.empty() || !a.load_model.empty())) {
    const auto& job = jobs.front();
    std::unique_ptr<OnlineClassifier> model;
    if (!a.load_model.empty()) {
      require_file(a.load_model, "load-model");
      std::ifstream in(a.load_model);
      model = classifier_from_json(nlohmann::json::parse(in));
    } else {
      model = make_classifier(job.classifier, job.seed, job.stacking_raw_features);
    }
    ProfileStore profiles;
    results.push_back(prequential_run(aggregates, profiles, *model, job.features, job.target, options));
    results.back().report.seed = job.seed;
    if (!a.save_model.empty()) {
      auto out = open_output(a.save_model);
      out << model->to_json().dump() << '\n';
    }
  } else {
    std::size_t threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
    results = run_grid(aggregates, jobs, threads, options);
  }

  fs::path dir(a.out);
  std::vector<MetricsReport> reports;
  for (auto& r : results) {
    auto stem = r.report.classifier + "_" + r.report.feature_set;
    auto log = open_output(dir / ("predictions_" + stem + ".csv"));
    write_prediction_log_csv(r.log, r.report.class_names, log);
    auto series = open_output(dir / ("series_" + stem + ".csv"));
    write_series_csv(r.report, series);
    reports.push_back(r.report);
  }
  auto js = open_output(dir / "report.json");
  write_report_json(reports, js);
  auto txt = open_output(dir / "report.txt");
  write_report_table(reports, txt, a.final_window);
  write_report_table(reports, std::cout, a.final_window);
}

// ---- simulate ------------------------------------------------------------------

struct SimulateArgs {
  std::string out = "sim", format = "csv", counts, start;
  std::optional<std::size_t> span_days, active_days;
  std::optional<std::uint64_t> seed;
  std::optional<double> noise;
};

void run_simulate(const SimulateArgs& a) {
  SimConfig config;
  if (!a.counts.empty()) config.set("counts", a.counts);
  if (!a.start.empty()) config.set("start", a.start);
  if (a.span_days) config.span_days = *a.span_days;
  if (a.active_days) config.active_days = *a.active_days;
  if (a.seed) config.seed = *a.seed;
  if (a.noise) config.noise = *a.noise;
  if (a.format != "csv" && a.format != "jsonl") throw ValidationError("format", "expected csv or jsonl");
  auto sim = simulate(config);
  fs::path dir(a.out);
  write_events(dir / ("events." + a.format), sim.events, false);
  auto labels = open_output(dir / "labels.csv");
  write_labels_csv(sim.contributors, labels);
  std::cout << "simulated " << sim.contributors.size() << " contributors, " << sim.events.size() << " events\n";
}

// ---- report --------------------------------------------------------------------

Metrics metrics_from_json(const nlohmann::json& j) {
  std::vector<std::vector<std::uint64_t>> rows = j.at("confusion").get<std::vector<std::vector<std::uint64_t>>>();
  return metrics_from(ConfusionMatrix::from_rows(rows));
}

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
  bool final_window = false;
};

void run_report(const ReportArgs& a) {
  std::vector<MetricsReport> reports;
  for (const auto& path : a.inputs) {
    require_file(path, "input");
    std::ifstream in(path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("input", path + ": " + e.what());
    }
    if (j.value("schema_version", 0) != 1) throw ValidationError("schema_version", path + ": unsupported report");
    for (const auto& run : j.at("runs")) {
      MetricsReport r;
      r.classifier = run.at("classifier");
      r.feature_set = run.at("feature_set");
      r.target = parse_target(run.at("target").get<std::string>());
      r.cumulative = metrics_from_json(run.at("cumulative"));
      r.final_window = metrics_from_json(run.at("final_window"));
      r.total_seconds = run.at("timing").at("total_seconds");
      r.ms_per_event = run.at("timing").at("ms_per_event");
      reports.push_back(std::move(r));
    }
  }
  if (a.out.empty()) {
    write_report_table(reports, std::cout, a.final_window);
  } else {
    auto out = open_output(a.out);
    write_report_table(reports, out, a.final_window);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stream mining of wiki contributors: profiling, synthetic balancing and online classification."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wikistream 1.0");
  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value file; command-line flags take precedence");
  };

  AnalyzeArgs analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Pearson correlation of every feature with a target");
  c_analyze->add_option("-i,--input", analyze.input, "Event file (.csv or .jsonl)")->required();
  c_analyze->add_option("-t,--target", analyze.target, "user_type or contribution_type")->capture_default_str();
  c_analyze->add_option("--threshold", analyze.threshold, "Report features with |r| above this")->capture_default_str();
  c_analyze->add_option("-o,--out", analyze.out, "Output directory")->capture_default_str();
  add_config(c_analyze);

  SelectArgs select;
  auto* c_select = app.add_subcommand("select", "Recursive feature elimination over an L1 logistic model");
  c_select->add_option("-i,--input", select.input, "Event file")->required();
  c_select->add_option("-t,--target", select.target, "user_type or contribution_type")->capture_default_str();
  c_select->add_option("-f,--features", select.features, "Candidate feature set")->capture_default_str();
  c_select->add_option("-n,--count", select.count, "Features to keep")->capture_default_str();
  c_select->add_option("--step", select.step, "Fraction removed per round")->capture_default_str();
  c_select->add_option("--lambda", select.lambda, "L1 strength")->capture_default_str();
  c_select->add_option("-o,--out", select.out, "Output directory")->capture_default_str();
  add_config(c_select);

  SynthesizeArgs synth;
  auto* c_synth = app.add_subcommand("synthesize", "Generate synthetic bot samples and a statistics comparison");
  c_synth->add_option("-i,--input", synth.input, "Event file")->required();
  c_synth->add_option("-n,--count", synth.count, "Samples to generate (default: human/bot contributor gap)");
  c_synth->add_option("-s,--seed", synth.seed, "Seed")->capture_default_str();
  c_synth->add_option("--k-max", synth.k_max, "Largest K in the k_selection.csv curve")->capture_default_str();
  c_synth->add_option("-o,--out", synth.out, "Output directory")->capture_default_str();
  add_config(c_synth);

  BalanceArgs balance;
  auto* c_balance = app.add_subcommand("balance", "Write the event stream with synthetic bots filling the class gap");
  c_balance->add_option("-i,--input", balance.input, "Event file")->required();
  c_balance->add_option("-n,--count", balance.count, "Override the number of synthetic samples");
  c_balance->add_option("-s,--seed", balance.seed, "Seed")->capture_default_str();
  c_balance->add_option("-o,--out", balance.out, "Output event file (.csv or .jsonl)")->capture_default_str();
  add_config(c_balance);

  ProfileArgs profile;
  auto* c_profile = app.add_subcommand("profile", "Build incremental contributor profiles");
  c_profile->add_option("-i,--input", profile.input, "Event file")->required();
  c_profile->add_option("-o,--out", profile.out, "Profile checkpoint (JSONL)")->capture_default_str();
  c_profile->add_option("--resume", profile.resume, "Start from an earlier checkpoint");
  c_profile->add_option("-f,--features", profile.features, "Feature set for --features-out")->capture_default_str();
  c_profile->add_option("--features-out", profile.features_out, "Also write one feature row per contributor");
  add_config(c_profile);

  EvaluateArgs eval;
  auto* c_eval = app.add_subcommand("evaluate", "Prequential test-then-train evaluation");
  c_eval->add_option("-i,--input", eval.input, "Event file")->required();
  c_eval->add_option("-c,--classifier", eval.classifiers, "nb, dt, rf, bc, stacking (comma list allowed)")
      ->capture_default_str();
  c_eval->add_option("-f,--features", eval.feature_sets,
                     "set1, set2, set3-target1, set3-target2 (comma list; default: selected set of the target)");
  c_eval->add_option("-t,--target", eval.target, "user_type or contribution_type")->capture_default_str();
  c_eval->add_option("-s,--seed", eval.seed, "Seed")->capture_default_str();
  c_eval->add_flag("--balance", eval.balance, "Balance the stream with synthetic bots first");
  c_eval->add_flag("--no-stacking-raw", eval.no_stacking_raw, "Level-2 stacking sees only level-1 probabilities");
  c_eval->add_flag("--final", eval.final_window, "Print final-20% metrics instead of cumulative ones");
  c_eval->add_option("-w,--window", eval.window, "Sliding window size for the series output")->capture_default_str();
  c_eval->add_option("-j,--threads", eval.threads, "Worker threads for the grid (0 = hardware)")->capture_default_str();
  c_eval->add_option("--save-model", eval.save_model, "Write the trained model checkpoint (single run)");
  c_eval->add_option("--load-model", eval.load_model, "Continue from a model checkpoint (single run)");
  c_eval->add_option("-o,--out", eval.out, "Output directory")->capture_default_str();
  add_config(c_eval);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Generate a labelled contributor event stream");
  c_sim->add_option("--counts", sim.counts, "human-benign,human-malign,bot-benign,bot-malign (default 10,10,10,10)");
  c_sim->add_option("--start", sim.start, "First day (YYYY-MM-DD)");
  c_sim->add_option("--span-days", sim.span_days, "Days covered (default 30)");
  c_sim->add_option("--active-days", sim.active_days, "Active days per contributor (default: all)");
  c_sim->add_option("-s,--seed", sim.seed, "Seed (default 0)");
  c_sim->add_option("--noise", sim.noise, "0 = separable archetypes (default 0)");
  c_sim->add_option("--format", sim.format, "csv or jsonl")->capture_default_str();
  c_sim->add_option("-o,--out", sim.out, "Output directory")->capture_default_str();
  add_config(c_sim);

  ReportArgs report;
  auto* c_report = app.add_subcommand("report", "Render report.json files as a table");
  c_report->add_option("inputs", report.inputs, "report.json files")->required();
  c_report->add_flag("--final", report.final_window, "Final-20% metrics instead of cumulative ones");
  c_report->add_option("-o,--out", report.out, "Write the table to a file");
  add_config(c_report);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args), app);
    std::vector<const char*> raw;
    for (const auto& s : args) raw.push_back(s.c_str());
    try {
      app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : kExitValidation;
    }
    if (c_analyze->parsed()) run_analyze(analyze);
    if (c_select->parsed()) run_select(select);
    if (c_synth->parsed()) run_synthesize(synth);
    if (c_balance->parsed()) run_balance(balance);
    if (c_profile->parsed()) run_profile(profile);
    if (c_eval->parsed()) run_evaluate(eval);
    if (c_sim->parsed()) run_simulate(sim);
    if (c_report->parsed()) run_report(report);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
