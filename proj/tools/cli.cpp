#include "cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tabreason/dataset.hpp"
#include "tabreason/error.hpp"
#include "tabreason/evaluation.hpp"
#include "tabreason/instance.hpp"
#include "tabreason/orchestrator.hpp"
#include "tabreason/sql.hpp"

namespace tabreason::cli {

namespace {

constexpr const char* kSynopsis =
    "usage: tabreason <command> [options]\n"
    "  infer          --data FILE --backend SPEC --out FILE [--config FILE] [--parallelism N] [--record FILE]\n"
    "  eval           --traces FILE --data FILE [--metrics accuracy,f1,judge] [--judge-backend SPEC]\n"
    "                 [--group-by TAG,...] [--format text|json]\n"
    "  sql            --table FILE --query SQL\n"
    "  build-dataset  --data FILE --teacher SPEC --out FILE [--segments full|no-plan|no-reasoning]\n"
    "                 [--config FILE] [--parallelism N] [--sample N --seed S] [--candidates FILE]\n"
    "backend SPEC: replay:PATH | http | http://HOST[:PORT]/PATH | https://...\n";

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A JSON object in the instance table schema, or a plain pipe table.
Table load_table(const std::string& path) {
  const std::string body = read_file(path);
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_discarded() && j.is_object()) return table_from_json(j.contains("table") ? j["table"] : j);
  return parse_pipe_table(body);
}

Settings settings_from(const std::string& config_path) {
  if (config_path.empty()) return {};
  return load_settings(config_path);
}

PromptTemplates templates_from(const Settings& s) {
  if (s.template_dir) return PromptTemplates::with_overrides(*s.template_dir);
  return PromptTemplates::builtin();
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, ',')) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

std::unique_ptr<Backend> make_backend(const std::string& spec, const Settings& settings) {
  if (spec.rfind("replay:", 0) == 0) return ReplayBackend::from_file(spec.substr(7), settings.replay_mode);
  if (spec == "http") return std::make_unique<HttpBackend>(settings.http);
  if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
    HttpConfig http = settings.http;
    http.base_url = spec;
    return std::make_unique<HttpBackend>(http);
  }
  throw CLI::ValidationError("backend", "unrecognized backend '" + spec + "'");
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Plan-then-reason table question answering", "tabreason"};
  app.require_subcommand(1);

  std::string data, backend_spec, config, out_path, record, traces, metrics = "accuracy", judge_spec, group_by,
      format = "text", table_path, query, segments = "full", candidates_path;
  std::size_t parallelism = 0, sample = 0;
  std::uint64_t seed = 0;

  auto* infer = app.add_subcommand("infer", "run the pipeline over a dataset");
  infer->add_option("--data", data, "instances JSONL")->required()->check(CLI::ExistingFile);
  infer->add_option("--backend", backend_spec, "model backend")->required();
  infer->add_option("--config", config, "key=value config file")->check(CLI::ExistingFile);
  infer->add_option("--out", out_path, "trace JSONL to write")->required();
  infer->add_option("--parallelism", parallelism, "concurrent instances")->check(CLI::PositiveNumber);
  infer->add_option("--record", record, "write the session as a replay script");

  auto* eval = app.add_subcommand("eval", "score traces against gold answers");
  eval->add_option("--traces", traces, "trace JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--data", data, "instances JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--metrics", metrics, "comma list of accuracy, f1, judge");
  eval->add_option("--judge-backend", judge_spec, "backend for the judge metric");
  eval->add_option("--config", config, "key=value config file")->check(CLI::ExistingFile);
  eval->add_option("--group-by", group_by, "comma list of tag keys");
  eval->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* sqlc = app.add_subcommand("sql", "run one query against a table file");
  sqlc->add_option("--table", table_path, "table JSON or pipe table")->required()->check(CLI::ExistingFile);
  sqlc->add_option("--query", query, "SELECT statement")->required();

  auto* build = app.add_subcommand("build-dataset", "generate, filter and export training pairs");
  build->add_option("--data", data, "instances JSONL")->required()->check(CLI::ExistingFile);
  build->add_option("--teacher", backend_spec, "teacher backend")->required();
  build->add_option("--out", out_path, "training JSONL to write")->required();
  build->add_option("--segments", segments, "full, no-plan or no-reasoning")
      ->check(CLI::IsMember({"full", "no-plan", "reasoning-only", "no-reasoning"}));
  build->add_option("--config", config, "key=value config file")->check(CLI::ExistingFile);
  build->add_option("--parallelism", parallelism, "concurrent instances")->check(CLI::PositiveNumber);
  build->add_option("--sample", sample, "sample this many instances first");
  build->add_option("--seed", seed, "sampling seed");
  build->add_option("--candidates", candidates_path, "also write every candidate with its verdict");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis;
    return 2;
  }

  try {
    if (*sqlc) {
      out << sql::format_result(sql::run(query, load_table(table_path)));
      return 0;
    }

    Settings settings = settings_from(config);
    if (parallelism) settings.parallelism = parallelism;
    const PromptTemplates templates = templates_from(settings);

    if (*infer) {
      const auto instances = load_instances(data);
      auto backend = make_backend(backend_spec, settings);
      std::unique_ptr<RecordingBackend> recorder;
      Backend* active = backend.get();
      if (!record.empty()) {
        recorder = std::make_unique<RecordingBackend>(*backend);
        active = recorder.get();
      }
      const auto results = run_batch(instances, settings.run, *active, settings.parallelism, templates);
      write_results(out_path, results);
      if (recorder) record_session(record, recorder->entries());
      std::size_t failed = 0;
      for (const auto& r : results) {
        if (r.outcome.status != Status::Ok) {
          ++failed;
          err << r.outcome.instance_id << ": " << to_string(r.outcome.status) << ": " << r.outcome.error << "\n";
        }
      }
      err << results.size() << " instances, " << failed << " failed, mean api calls " << mean_api_calls(results)
          << "\n";
      return failed ? 1 : 0;
    }

    if (*eval) {
      const auto instances = load_instances(data);
      const auto results = load_results(traces);
      ReportOptions options;
      std::unique_ptr<Backend> judge;
      for (const auto& m : split_list(metrics)) {
        if (m == "accuracy") continue;
        if (m == "f1") {
          options.three_class_f1 = true;
        } else if (m == "judge") {
          if (judge_spec.empty()) {
            err << "error: the judge metric needs --judge-backend\n" << kSynopsis;
            return 2;
          }
          judge = make_backend(judge_spec, settings);
          options.judge = judge.get();
        } else {
          err << "error: unknown metric '" << m << "'\n" << kSynopsis;
          return 2;
        }
      }
      options.group_by = split_list(group_by);
      const EvalReport report = build_report(results, instances, options);
      if (format == "json") {
        out << report_to_json(report).dump(2) << "\n";
      } else {
        out << report_to_text(report);
      }
      return report.failed ? 1 : 0;
    }

    if (*build) {
      auto instances = load_instances(data);
      if (sample) instances = sample_instances(instances, sample, seed);
      auto teacher_backend = make_backend(backend_spec, settings);
      const auto set = generate_candidates(instances, *teacher_backend, settings.run, settings.parallelism, templates);
      for (const auto& e : set.errors) err << e.instance_id << ": " << e.message << "\n";
      const auto filtered = consistency_filter(set.candidates, instances);
      if (!candidates_path.empty()) {
        std::ofstream cf(candidates_path, std::ios::binary | std::ios::trunc);
        if (!cf) throw Error(ErrorCode::IoFailure, "cannot write " + candidates_path);
        for (const auto& c : set.candidates) {
          nlohmann::ordered_json j;
          j["id"] = c.instance_id;
          j["answer"] = final_answer_to_json(c.extracted_answer);
          j["consistent"] = c.consistent;
          j["tags"] = std::vector<std::string>(c.error_tags.begin(), c.error_tags.end());
          j["api_calls"] = c.api_calls;
          cf << j.dump() << "\n";
        }
      }
      err << set.candidates.size() << " candidates, " << set.errors.size() << " errors, " << filtered.kept.size()
          << " kept, " << filtered.dropped.size() << " dropped\n";
      if (filtered.kept.empty()) {
        err << "error: no consistent candidates to export\n";
        return 1;
      }
      export_jsonl(out_path, filtered.kept, segment_selection_from_string(segments));
      return set.errors.empty() ? 0 : 1;
    }
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis;
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tabreason::cli
