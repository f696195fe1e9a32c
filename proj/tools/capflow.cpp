#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "capflow/diagnostics.hpp"
#include "capflow/flow.hpp"
#include "capflow/io.hpp"
#include "capflow/parallel.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace capflow;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kCheckFailed = 2;

struct Options {
  std::string config;
  std::string out;
  std::string trace_dir;
  int levels = 3;
  double h_exponent = 2.0;
  int size = 4;
  int trials = 100;
  std::uint64_t seed = 1;
  bool corrupt = false;
  bool assert_contact = false;
  double contact_tolerance = 0.1;
};

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_failures(const DiagnosticsReport& rep) {
  for (const auto& e : rep.entries)
    if (e.status == CheckEntry::Status::fail)
      std::cerr << "check failed: " << e.name << " value " << e.value << " threshold "
                << (e.threshold ? *e.threshold : 0.0) << " step " << e.step << '\n';
}

int cmd_run(const Options& o) {
  const json src = load_json(o.config);
  const FlowConfig cfg = parse_config(src);
  const fs::path dir = o.out.empty() ? fs::path("out") / cfg.name : fs::path(o.out);
  const auto t0 = std::chrono::steady_clock::now();
  const FlowTrace trace = run_flow(cfg);
  const double run_seconds = elapsed(t0);
  DiagnoseOptions dopt;
  dopt.assert_contact_angle = o.assert_contact;
  dopt.contact_tolerance = o.contact_tolerance;
  const auto rep = diagnose(trace, dopt);
  auto files = write_trace_dir(dir, trace, src);
  write_text(dir / "diagnostics.csv", rep.to_csv());
  files.push_back("diagnostics.csv");
  write_manifest(dir, src, files,
                 {{"steps", trace.records.back().k},
                  {"stationary", trace.stationary},
                  {"threads", max_threads()},
                  {"wall_seconds", run_seconds}});
  std::cout << cfg.name << ": " << trace.records.back().k << " steps in " << run_seconds
            << " s, output in " << dir.string() << '\n';
  if (!rep.all_pass()) {
    print_failures(rep);
    return kCheckFailed;
  }
  return kOk;
}

int cmd_study(const Options& o) {
  const json src = load_json(o.config);
  const FlowConfig cfg = parse_config(src);
  const fs::path dir = o.out.empty() ? fs::path("out") / (cfg.name + "_study") : fs::path(o.out);
  const auto t0 = std::chrono::steady_clock::now();
  const StudyReport study = refine_study(cfg, o.levels, o.h_exponent);
  const double seconds = elapsed(t0);
  fs::create_directories(dir);
  std::vector<std::string> files;

  std::string diffs = "time,level,diff\n";
  for (std::size_t j = 0; j < study.times.size(); ++j)
    for (std::size_t i = 0; i < study.diffs[j].size(); ++i) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.17g,%zu,%.17g\n", study.times[j], i, study.diffs[j][i]);
      diffs += buf;
    }
  write_text(dir / "study.csv", diffs);
  files.push_back("study.csv");

  bool ok = true;
  std::string levels = "level,dx,h,steps,holder_modulus,velocity_l2,lambda_l2,off_volume\n";
  for (std::size_t i = 0; i < study.levels.size(); ++i) {
    const auto& l = study.levels[i];
    const auto s = velocity_and_multiplier_stats(l.trace);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d,%.17g,%.17g,%.17g,%d\n", i, l.dx, l.h,
                  l.trace.records.back().k, holder_modulus(l.trace, l.trace.p0), s.velocity,
                  s.lambda, s.off_volume);
    levels += buf;
    const auto rep = diagnose(l.trace);
    const std::string name = "diagnostics_level" + std::to_string(i) + ".csv";
    write_text(dir / name, rep.to_csv());
    files.push_back(name);
    if (!rep.all_pass()) {
      print_failures(rep);
      ok = false;
    }
  }
  write_text(dir / "levels.csv", levels);
  files.push_back("levels.csv");

  DiagnosticsReport checks;
  for (auto& c : study_checks(study)) checks.add(std::move(c));
  write_text(dir / "study_checks.csv", checks.to_csv());
  files.push_back("study_checks.csv");
  write_manifest(dir, src, files,
                 {{"levels", o.levels},
                  {"h_exponent", o.h_exponent},
                  {"threads", max_threads()},
                  {"wall_seconds", seconds}});
  std::cout << cfg.name << ": " << o.levels << " levels in " << seconds << " s, output in "
            << dir.string() << '\n';
  if (!checks.all_pass()) {
    print_failures(checks);
    ok = false;
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_oracle(const Options& o) {
  const auto cut = oracle::mincut_suite(o.size, o.trials, o.seed, o.corrupt);
  const auto st = oracle::step_suite(o.size, o.trials, o.seed + 1, o.corrupt);
  std::cout << "mincut: " << cut.exact << "/" << cut.trials << " exact (" << cut.seconds
            << " s)\n"
            << "step: " << st.exact << "/" << st.trials << " exact, " << st.within << "/"
            << st.trials << " within one penalty quantum (" << st.seconds << " s)\n";
  return cut.pass() && st.pass() ? kOk : kCheckFailed;
}

int cmd_diagnose(const Options& o) {
  const FlowTrace trace = read_trace_dir(o.trace_dir);
  DiagnoseOptions dopt;
  dopt.assert_contact_angle = o.assert_contact;
  dopt.contact_tolerance = o.contact_tolerance;
  const auto rep = diagnose(trace, dopt);
  std::cout << rep.to_csv();
  if (!rep.all_pass()) {
    print_failures(rep);
    return kCheckFailed;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Volume-preserving capillary flow of droplets by minimizing movements"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run a flow and write trace, snapshots and diagnostics");
  run->add_option("config", o.config, "JSON configuration")->required();
  run->add_option("--out", o.out, "Output directory");
  run->add_flag("--assert-contact", o.assert_contact, "Fail when the contact angle is off");
  run->add_option("--contact-tolerance", o.contact_tolerance, "Contact cosine tolerance");

  auto* study = app.add_subcommand("study", "Refinement study over h and dx");
  study->add_option("config", o.config, "JSON configuration")->required();
  study->add_option("--levels", o.levels, "Number of levels (>= 2)")->required();
  study->add_option("--out", o.out, "Output directory");
  study->add_option("--h-exponent", o.h_exponent, "h scales as dx^p across levels")
      ->check(CLI::Range(0.0, 4.0));

  auto* orc = app.add_subcommand("oracle", "Compare the solvers against enumeration");
  orc->add_option("--size", o.size, "Grid side (2 to 5)")->check(CLI::Range(2, 5));
  orc->add_option("--trials", o.trials, "Number of random instances")->check(CLI::PositiveNumber);
  orc->add_option("--seed", o.seed, "Random seed");
  orc->add_flag("--corrupt", o.corrupt)->group("");

  auto* diag = app.add_subcommand("diagnose", "Re-run diagnostics over a trace directory");
  diag->add_option("trace-dir", o.trace_dir, "Directory written by run")->required();
  diag->add_flag("--assert-contact", o.assert_contact, "Fail when the contact angle is off");
  diag->add_option("--contact-tolerance", o.contact_tolerance, "Contact cosine tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  configure_threads_from_env();
  try {
    if (*run) return cmd_run(o);
    if (*study) return cmd_study(o);
    if (*orc) return cmd_oracle(o);
    if (*diag) return cmd_diagnose(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
