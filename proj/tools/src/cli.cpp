#include "epkit_cli/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "epkit_cli/io.hpp"

#ifndef EPKIT_VERSION
#define EPKIT_VERSION "0.0.0"
#endif

namespace epkit::cli {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::string output;
  double tol_rank = ToleranceConfig{}.rank_rtol;
  double tol_eq = ToleranceConfig{}.eq_atol;
  bool timing = false;
  bool inject_fault = false;
  unsigned threads = 1;

  std::string input;
  std::string theorem;
  Index dim = 8;
  Index rank = -1;
  double condition_bound = 0.0;
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  std::string family;
  Index n_max = 10;
};

std::uint64_t seed_from_env() {
  const char* raw = std::getenv("EPKIT_SEED");
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string_view text(raw);
  std::uint64_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw UsageError("EPKIT_SEED must be an unsigned 64-bit integer");
  }
  return value;
}

void emit(const Options& o, const io::json& report, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (o.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.output, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot write '" + o.output + "'");
  file << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"EP operator toolkit: classification, pseudoinverse identities and property checks"};
  app.set_version_flag("--version", std::string(EPKIT_VERSION));
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();
  app.add_option("--output,-o", o.output, "Report path (default: standard output)");
  app.add_option("--tol-rank", o.tol_rank, "Relative singular-value cutoff for numerical rank");
  app.add_option("--tol-eq", o.tol_eq, "Absolute tolerance for equality tests");
  app.add_flag("--timing", o.timing, "Include wall-clock timings in the report");
  app.add_option("--threads", o.threads, "Worker threads for verifier trials")->check(CLI::Range(1U, 256U));
  app.add_flag("--inject-fault", o.inject_fault)->group("");

  CLI::App* classify_cmd = app.add_subcommand("classify", "Classify a matrix read from a JSON matrix file");
  classify_cmd->add_option("input,--input,-i", o.input, "Matrix file")->required();

  CLI::App* verify_cmd = app.add_subcommand("verify", "Run one property verifier");
  verify_cmd->add_option("theorem,--theorem", o.theorem, "Verifier id, e.g. thm2.1")->required();
  CLI::Option* dim_opt = verify_cmd->add_option("--dim", o.dim, "Matrix dimension");
  verify_cmd->add_option("--rank", o.rank, "Rank of generated instances (default: dim - 2)");
  verify_cmd->add_option("--condition-bound", o.condition_bound, "Condition bound of generated blocks");
  verify_cmd->add_option("--trials", o.trials, "Number of trials");
  CLI::Option* verify_seed = verify_cmd->add_option("--seed", o.seed, "Master seed (fallback: EPKIT_SEED)");

  CLI::App* suite_cmd = app.add_subcommand("suite", "Run every verifier at its default parameters");
  suite_cmd->add_option("--trials", o.trials, "Trials per verifier");
  CLI::Option* suite_seed = suite_cmd->add_option("--seed", o.seed, "Master seed (fallback: EPKIT_SEED)");

  CLI::App* model_cmd = app.add_subcommand("model", "Tabulate truncations of a diagonal operator model");
  model_cmd->add_option("family,--family", o.family, "Model family")->required();
  model_cmd->add_option("--n-max", o.n_max, "Largest truncation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const ToleranceConfig tol{o.tol_rank, o.tol_eq};
    tol.validate();
    io::ReportFile report{EPKIT_VERSION, tol, ClassificationReport{}, std::nullopt};
    int code = kExitOk;

    if (*classify_cmd) {
      const ComplexMatrix m = io::read_matrix_file(o.input);
      if (!m.is_square()) throw UsageError("classify needs a square matrix");
      report.payload = classify(m, tol);
    } else if (*verify_cmd) {
      GeneratorSpec spec = default_spec(o.theorem, verify_seed->count() ? o.seed : seed_from_env());
      if (dim_opt->count()) spec.dim = o.dim;
      spec.rank = o.rank >= 0 ? o.rank : std::max<Index>(spec.dim - 2, 0);
      if (o.condition_bound > 0.0) spec.condition_bound = o.condition_bound;
      RunOptions run{};
      run.threads = o.threads;
      run.inject_fault = o.inject_fault;
      TheoremVerdict v = run_theorem_check(o.theorem, spec, o.trials, tol, run);
      code = v.passed() ? kExitOk : kExitPropertyFailed;
      report.payload = std::move(v);
    } else if (*suite_cmd) {
      RunOptions run{};
      run.threads = o.threads;
      run.inject_fault = o.inject_fault;
      SuiteResult s = run_suite(suite_seed->count() ? o.seed : seed_from_env(), o.trials, tol, run);
      code = s.passed() ? kExitOk : kExitPropertyFailed;
      report.payload = std::move(s);
    } else if (*model_cmd) {
      report.payload = limit_study(parse_model_family(o.family), o.n_max, tol);
    }

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    if (o.timing) report.wall_time_ms = elapsed;
    emit(o, io::report_file_to_json(report), out);
    err << "epkit: " << io::payload_kind(report.payload) << " finished in " << elapsed << " ms";
    if (code == kExitPropertyFailed) err << " (property violated)";
    err << "\n";
    return code;
  } catch (const Error& e) {
    err << "epkit: error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "epkit: error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace epkit::cli
