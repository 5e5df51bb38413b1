// Command-line front end. Exit codes: 0 success, 1 invalid model or failed
// run, 2 usage error.

#pragma once

#include <chrono>
#include <iomanip>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "cdrestruct/engine.hpp"
#include "cdrestruct/generator.hpp"
#include "cdrestruct/metrics.hpp"
#include "cdrestruct/model_io.hpp"

namespace cdrestruct {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline void print_effectiveness(std::ostream& out, const MetricsSnapshot& before, const MetricsSnapshot& after) {
  out << "effectiveness: ";
  if (auto e = effectiveness(before, after)) out << std::fixed << std::setprecision(1) << *e * 100.0 << "%\n";
  else out << "n/a (no duplication to remove)\n";
}

inline int cmd_restructure(const std::string& in, const std::string& out_path, EngineOptions options, bool metrics,
                           std::ostream& out, std::ostream& err) {
  ClassModel model = load_model_file(in);
  options.trace_stream = &out;
  auto start = std::chrono::steady_clock::now();
  RestructureReport report;
  try {
    report = restructure(model, options);
  } catch (const IterationLimitExceeded& e) {
    err << "error: " << e.what() << " (" << e.report().applications.size() << " rule applications made)\n";
    return kExitFailure;
  }
  auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  save_model_file(model, out_path);

  if (metrics) {
    out << "before: " << report.metrics_before << '\n';
    out << "after: " << report.metrics_after << '\n';
    print_effectiveness(out, report.metrics_before, report.metrics_after);
    out << "new classes: " << report.created_entities.size() << '\n';
    out << "rule applications: " << report.applications.size() << '\n';
    out << "iterations: " << report.iterations << '\n';
    out << "elapsed ms: " << std::fixed << std::setprecision(3) << elapsed << '\n';
  }
  return kExitOk;
}

inline int cmd_validate(const std::string& in, std::ostream& out, std::ostream& err) {
  std::ifstream file(in, std::ios::binary);
  if (!file) {
    err << "error: cannot open " << in << '\n';
    return kExitFailure;
  }
  std::ostringstream buf;
  buf << file.rdbuf();
  auto problems = check_document(buf.str());
  if (problems.empty()) {
    out << in << ": ok\n";
    return kExitOk;
  }
  for (const auto& p : problems) err << in << ": " << p.what() << '\n';
  return kExitFailure;
}

inline int cmd_metrics(const std::string& in, std::ostream& out) {
  ClassModel model = load_model_file(in);
  out << snapshot(model) << '\n';
  return kExitOk;
}

inline int cmd_generate(const GeneratorSpec& spec, const std::string& out_path, std::ostream& out) {
  ClassModel model = generate_model(spec);
  save_model_file(model, out_path);
  out << "generated " << to_string(spec.family) << " scale=" << spec.scale << " seed=" << spec.seed
      << " elements=" << element_count(model) << '\n';
  return kExitOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pull duplicated attributes of class models up into superclasses"};
  app.name("cdrestruct");
  app.require_subcommand(1);

  std::string in, out_path;
  EngineOptions options;
  std::size_t max_iterations = 0;
  bool metrics = false;

  auto* restructure_cmd = app.add_subcommand("restructure", "Restructure a model and write the result");
  restructure_cmd->add_option("input", in, "Input model file")->required();
  restructure_cmd->add_option("-o,--output", out_path, "Output model file")->required();
  restructure_cmd->add_flag("--multi-inheritance", options.multi_inheritance,
                            "Remove all remaining duplication using multiple inheritance");
  restructure_cmd->add_option("--min-subclasses", options.min_subclasses,
                              "Direct subclasses needed before pulling into an existing superclass")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  restructure_cmd->add_option("--max-iterations", max_iterations, "Fail if no fixpoint after N passes")
      ->check(CLI::PositiveNumber);
  restructure_cmd->add_flag("--metrics", metrics, "Print before/after metrics");
  restructure_cmd->add_flag("--trace", options.trace, "Print every rule application");

  auto* validate_cmd = app.add_subcommand("validate", "Check a model file and list its problems");
  validate_cmd->add_option("input", in, "Input model file")->required();

  auto* metrics_cmd = app.add_subcommand("metrics", "Print the metrics of a model file");
  metrics_cmd->add_option("input", in, "Input model file")->required();

  GeneratorSpec spec;
  std::string family;
  auto* generate_cmd = app.add_subcommand("generate", "Write a seeded synthetic model");
  generate_cmd->add_option("--family", family, "flat, star or mixed")
      ->required()
      ->check(CLI::IsMember({"flat", "star", "mixed", "FlatShared", "StarHierarchies", "Mixed"}));
  generate_cmd->add_option("--scale", spec.scale, "Number of groups/stars")->required()->check(CLI::PositiveNumber);
  generate_cmd->add_option("--seed", spec.seed, "PRNG seed")->required();
  generate_cmd->add_option("-o,--output", out_path, "Output model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run 'cdrestruct --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (restructure_cmd->parsed()) {
      if (max_iterations > 0) options.max_iterations = max_iterations;
      return detail::cmd_restructure(in, out_path, options, metrics, out, err);
    }
    if (validate_cmd->parsed()) return detail::cmd_validate(in, out, err);
    if (metrics_cmd->parsed()) return detail::cmd_metrics(in, out);
    if (generate_cmd->parsed()) {
      spec.family = *parse_family(family);
      return detail::cmd_generate(spec, out_path, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace cdrestruct
