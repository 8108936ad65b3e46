#include "patchsearch/cli.hpp"

#include <iomanip>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "patchsearch/errors.hpp"
#include "patchsearch/io/atomic_write.hpp"
#include "patchsearch/io/synth.hpp"
#include "patchsearch/io/workbench.hpp"

namespace patchsearch::cli {
namespace {

int resolve_workers(const std::optional<int>& flag) { return flag ? *flag : io::workers_from_env(1); }

void print_timing(std::ostream& out, const std::vector<StageTiming>& timing) {
  const double total = std::accumulate(timing.begin(), timing.end(), 0.0,
                                       [](double acc, const StageTiming& t) { return acc + t.mean_ms; });
  out << std::left << std::setw(10) << "stage" << std::right << std::setw(12) << "mean_ms" << std::setw(12)
      << "p50_ms" << std::setw(12) << "p95_ms" << std::setw(9) << "share" << '\n';
  out << std::fixed << std::setprecision(3);
  for (const auto& t : timing) {
    out << std::left << std::setw(10) << t.stage << std::right << std::setw(12) << t.mean_ms << std::setw(12)
        << t.p50_ms << std::setw(12) << t.p95_ms << std::setw(8) << std::setprecision(1)
        << (total > 0 ? 100.0 * t.mean_ms / total : 0.0) << '%' << std::setprecision(3) << '\n';
  }
  out << std::left << std::setw(10) << "total" << std::right << std::setw(12) << total << '\n';
  out.unsetf(std::ios::floatfield);
}

std::string bench_document(const std::vector<StageTiming>& timing, int warmup, int iters, std::size_t queries) {
  using Json = nlohmann::ordered_json;
  std::ostringstream ss;
  ss << Json{{"schema", "patchsearch.bench"}, {"version", 1}, {"warmup", warmup}, {"iters", iters}, {"queries", queries}}
            .dump()
     << '\n';
  for (const auto& t : timing) {
    ss << Json{{"stage", t.stage}, {"mean_ms", t.mean_ms}, {"p50_ms", t.p50_ms}, {"p95_ms", t.p95_ms}}.dump() << '\n';
  }
  return ss.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-shot personal object search over patch feature maps"};
  app.name(args.empty() ? "patchsearch" : args.front());
  app.require_subcommand(1);

  // enroll
  std::string enroll_manifest, enroll_out;
  int k_s = kDefaultSupportClusters;
  std::uint64_t enroll_seed = 0;
  std::optional<int> enroll_workers;
  auto* enroll_cmd = app.add_subcommand("enroll", "Build class models from the manifest's support images");
  enroll_cmd->add_option("--manifest", enroll_manifest, "Dataset manifest")->required();
  enroll_cmd->add_option("--out", enroll_out, "Output store file")->required();
  enroll_cmd->add_option("--k-s", k_s, "Support clusters for bbox prompts")->check(CLI::Range(2, 1 << 20));
  enroll_cmd->add_option("--seed", enroll_seed, "k-means seed");
  enroll_cmd->add_option("--workers", enroll_workers, "Worker threads")->check(CLI::Range(1, 1024));

  // search
  std::string search_store, search_manifest, search_out;
  std::vector<std::string> search_features;
  SearchConfig search_config;
  std::optional<double> class_threshold;
  std::optional<int> search_workers;
  auto* search_cmd = app.add_subcommand("search", "Search query feature maps for every enrolled class");
  search_cmd->add_option("--store", search_store, "Enrolled store")->required();
  auto* features_opt = search_cmd->add_option("--features", search_features, "Query feature files");
  auto* manifest_opt = search_cmd->add_option("--manifest", search_manifest, "Search every query of a manifest");
  features_opt->excludes(manifest_opt);
  search_cmd->add_option("--k-q", search_config.k_q, "Query prepass clusters")->check(CLI::Range(1, 1 << 20));
  search_cmd->add_option("--alpha-co", search_config.alpha_co, "Coordinate scaling")->check(CLI::NonNegativeNumber);
  search_cmd->add_flag("--refine", search_config.refine, "Refine masks with the query prepass");
  search_cmd->add_option("--class-threshold", class_threshold, "Open-set acceptance cutoff on the class score");
  search_cmd->add_option("--seed", search_config.seed, "Prepass k-means seed");
  search_cmd->add_option("--workers", search_workers, "Worker threads")->check(CLI::Range(1, 1024));
  search_cmd->add_option("--out", search_out, "Output results file")->required();

  // eval
  std::string eval_manifest, eval_results, eval_out, eval_mode = "mask";
  auto* eval_cmd = app.add_subcommand("eval", "Compute mIoU, ACC and cPREC for a results file");
  eval_cmd->add_option("--manifest", eval_manifest, "Dataset manifest")->required();
  eval_cmd->add_option("--results", eval_results, "Results file from `search`")->required();
  eval_cmd->add_option("--mode", eval_mode, "Localization mode")->check(CLI::IsMember({"mask", "bbox"}));
  eval_cmd->add_option("--out", eval_out, "Output report file");

  // bench
  std::string bench_manifest, bench_store, bench_out;
  int iters = 10, warmup = 2;
  SearchConfig bench_config;
  bench_config.refine = true;
  auto* bench_cmd = app.add_subcommand("bench", "Time the engine stages over the manifest's queries");
  bench_cmd->add_option("--manifest", bench_manifest, "Dataset manifest")->required();
  bench_cmd->add_option("--store", bench_store, "Enrolled store")->required();
  bench_cmd->add_option("--iters", iters, "Timed iterations")->check(CLI::Range(1, 1 << 20));
  bench_cmd->add_option("--warmup", warmup, "Discarded iterations")->check(CLI::Range(0, 1 << 20));
  bench_cmd->add_option("--k-q", bench_config.k_q, "Query prepass clusters")->check(CLI::Range(1, 1 << 20));
  bench_cmd->add_option("--alpha-co", bench_config.alpha_co, "Coordinate scaling")->check(CLI::NonNegativeNumber);
  bench_cmd->add_option("--seed", bench_config.seed, "Prepass k-means seed");
  bench_cmd->add_option("--out", bench_out, "Write the timing table as line-delimited JSON");

  // synth
  std::string synth_spec, synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth_cmd->add_option("--spec", synth_spec, "Synthetic dataset spec (JSON)")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("patchsearch");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*enroll_cmd) {
      const auto manifest = io::load_manifest(enroll_manifest);
      const auto store = io::enroll_manifest(manifest, k_s, enroll_seed, resolve_workers(enroll_workers));
      io::save_store(enroll_out, store);
      out << "enrolled " << store.models.size() << " classes -> " << enroll_out << '\n';
    } else if (*search_cmd) {
      if (search_features.empty() && search_manifest.empty()) {
        err << "search: one of --features or --manifest is required\n";
        return kUsage;
      }
      search_config.class_threshold = class_threshold;
      const auto store = io::load_store(search_store);
      std::vector<io::QueryFile> queries;
      if (!search_manifest.empty()) {
        queries = io::manifest_queries(io::load_manifest(search_manifest));
      } else {
        for (const auto& f : search_features) queries.push_back({std::filesystem::path(f).stem().string(), f});
      }
      const auto doc = io::search_files(store, queries, search_config, resolve_workers(search_workers));
      io::save_results(search_out, doc);
      out << "searched " << doc.queries.size() << " queries x " << doc.classes.size() << " classes -> " << search_out
          << '\n';
    } else if (*eval_cmd) {
      const auto manifest = io::load_manifest(eval_manifest);
      const auto results = io::load_results(eval_results);
      const auto report = io::evaluate_results(manifest, results, eval_mode == "bbox" ? EvalMode::BBox : EvalMode::Mask);
      if (!eval_out.empty()) io::save_report(eval_out, report, eval_mode, manifest.classes);
      out << std::setprecision(6) << "records " << report.n_records << "\nmIoU    " << report.miou << "\nACC     "
          << report.acc << "\ncPREC   " << report.cprec << '\n';
    } else if (*bench_cmd) {
      const auto manifest = io::load_manifest(bench_manifest);
      const auto store = io::load_store(bench_store);
      const auto timing = io::bench_pipeline(manifest, store, bench_config, warmup, iters);
      print_timing(out, timing);
      if (!bench_out.empty()) {
        io::write_file_atomic(bench_out, bench_document(timing, warmup, iters, manifest.queries.size()));
      }
    } else if (*synth_cmd) {
      const auto spec = io::parse_synth_spec(io::read_text_file(synth_spec));
      const auto manifest = io::synth_dataset(spec, synth_out);
      out << "wrote " << manifest.supports.size() << " supports and " << manifest.queries.size() << " queries -> "
          << synth_out << '\n';
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}

}  // namespace patchsearch::cli
