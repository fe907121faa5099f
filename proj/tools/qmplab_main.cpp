#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "qmplab/density_operator.hpp"
#include "qmplab/errors.hpp"
#include "qmplab/experiments.hpp"
#include "qmplab/matrix_json.hpp"
#include "qmplab/measurement.hpp"

namespace {

struct Options {
  std::size_t ds = 2;
  std::size_t de = 4;
  std::size_t rank = 1;
  double epsilon = 0.1;
  std::string delta = "auto";
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string output;
  std::string emit_model;
  std::string emit_state;
  std::string model_path;
  std::string state_path;
};

qmplab::ExperimentConfig to_config(const Options& opt) {
  qmplab::ExperimentConfig config;
  config.d_s = opt.ds;
  config.d_e = opt.de;
  config.epsilon = opt.epsilon;
  config.ready_rank = opt.rank;
  config.samples = opt.samples;
  config.seed = opt.seed;
  if (opt.delta != "auto") {
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(opt.delta, &consumed);
    } catch (const std::exception&) {
      throw qmplab::ParameterError("cli: --delta expects a number or \"auto\", got " + opt.delta);
    }
    if (consumed != opt.delta.size()) {
      throw qmplab::ParameterError("cli: --delta expects a number or \"auto\", got " + opt.delta);
    }
    config.delta = value;
  }
  config.validate();
  return config;
}

void emit(const std::string& content, const std::string& output) {
  if (output.empty()) {
    std::cout << content;
  } else {
    qmplab::write_text_file_atomic(output, content);
  }
}

// Short status note on the error stream; color only on a terminal and only
// when NO_COLOR is unset.
void print_verdict(const std::string& what, bool pass) {
  const bool color = std::getenv("NO_COLOR") == nullptr && isatty(STDERR_FILENO) == 1;
  const char* tag = pass ? "pass" : "fail";
  if (color) {
    std::cerr << what << ": " << (pass ? "\033[32m" : "\033[31m") << tag << "\033[0m\n";
  } else {
    std::cerr << what << ": " << tag << "\n";
  }
}

void add_experiment_flags(CLI::App* cmd, Options& opt, bool with_format) {
  cmd->add_option("--ds", opt.ds, "microsystem dimension")->capture_default_str();
  cmd->add_option("--de", opt.de, "environment dimension")->capture_default_str();
  cmd->add_option("--rank", opt.rank, "ready-state rank")->capture_default_str();
  cmd->add_option("--epsilon", opt.epsilon, "region separation parameter, in (0, 1/2)")
      ->capture_default_str();
  cmd->add_option("--delta", opt.delta, "neighborhood radius, or \"auto\"")
      ->capture_default_str();
  cmd->add_option("--samples", opt.samples, "sweep sample count")->capture_default_str();
  cmd->add_option("--seed", opt.seed, "random seed")->capture_default_str();
  cmd->add_option("--output", opt.output, "write output to this path instead of stdout");
  if (with_format) {
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
  }
}

// Reference state of configuration 1: the evolved premeasurement product of
// psi1 with the ready state.
qmplab::DensityOperator config1_reference(const qmplab::MeasurementModel& model) {
  return qmplab::evolve(
      model, qmplab::make_density(qmplab::kron(qmplab::pure_projector(model.psi1).matrix(),
                                               model.ready.matrix())));
}

int run_qmp(const Options& opt, bool pure) {
  const qmplab::ExperimentConfig config = to_config(opt);
  if (!opt.emit_model.empty() || !opt.emit_state.empty()) {
    const qmplab::MeasurementModel model = qmplab::experiment_model(config);
    if (!opt.emit_model.empty()) {
      qmplab::save_model(model, opt.emit_model);
    }
    if (!opt.emit_state.empty()) {
      qmplab::write_text_file_atomic(opt.emit_state,
                                     qmplab::density_to_json(config1_reference(model)) + "\n");
    }
  }
  const qmplab::Report report =
      pure ? qmplab::run_pure_qmp(config) : qmplab::run_impure_qmp(config);
  emit(opt.format == "csv" ? qmplab::sweep_to_csv(report) : qmplab::report_to_json(report),
       opt.output);
  print_verdict(report.name, report.pass);
  return report.pass ? 0 : 1;
}

// Output stem: path minus a trailing extension, used for the sweep sidecars.
std::string path_stem(const std::string& path) {
  const std::size_t slash = path.find_last_of('/');
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path;
  }
  return path.substr(0, dot);
}

int run_verify(const Options& opt) {
  const qmplab::ExperimentConfig config = to_config(opt);

  qmplab::ExperimentConfig pure_config = config;
  pure_config.ready_rank = 1; // the pure experiment is defined for rank 1 only

  std::vector<qmplab::Report> reports;
  reports.push_back(qmplab::verify_automorphism(config));
  reports.push_back(qmplab::verify_orthogonality(config));
  reports.push_back(qmplab::run_pure_qmp(pure_config));
  reports.push_back(qmplab::run_impure_qmp(config));

  bool all_pass = true;
  for (const qmplab::Report& report : reports) {
    all_pass = all_pass && report.pass;
    print_verdict(report.name, report.pass);
  }

  std::string suite;
  suite += "{\n";
  suite += "  \"suite\": \"verify\",\n";
  suite += std::string("  \"verdict\": ") + (all_pass ? "\"pass\"" : "\"fail\"") + ",\n";
  suite += "  \"reports\": [\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    std::string body = qmplab::report_to_json(reports[i]);
    if (!body.empty() && body.back() == '\n') {
      body.pop_back();
    }
    suite += body;
    suite += (i + 1 < reports.size()) ? ",\n" : "\n";
  }
  suite += "  ]\n";
  suite += "}\n";

  emit(suite, opt.output);
  if (!opt.output.empty()) {
    const std::string stem = path_stem(opt.output);
    qmplab::write_text_file_atomic(stem + "-pure.csv", qmplab::sweep_to_csv(reports[2]));
    qmplab::write_text_file_atomic(stem + "-impure.csv", qmplab::sweep_to_csv(reports[3]));
  }
  print_verdict("suite", all_pass);
  return all_pass ? 0 : 1;
}

int run_classify(const Options& opt) {
  const qmplab::MeasurementModel model = qmplab::load_model(opt.model_path);
  nlohmann::json state_json;
  try {
    state_json = nlohmann::json::parse(qmplab::read_text_file(opt.state_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw qmplab::ValidationError(std::string("classify: invalid state JSON: ") + e.what());
  }
  const qmplab::DensityOperator state = qmplab::density_from_json(state_json);
  const qmplab::ConfigurationRegions regions = qmplab::make_regions(model, opt.epsilon);
  const qmplab::Classification cls = qmplab::classify(state, regions);

  std::string out;
  out += "{\n";
  out += "  \"label\": \"" + qmplab::to_string(cls.label) + "\",\n";
  out += "  \"overlap1\": " + qmplab::format_double(cls.overlap1) + ",\n";
  out += "  \"overlap2\": " + qmplab::format_double(cls.overlap2) + ",\n";
  out += "  \"distance1\": " + qmplab::format_double(cls.distance1) + ",\n";
  out += "  \"distance2\": " + qmplab::format_double(cls.distance2) + "\n";
  out += "}\n";
  emit(out, opt.output);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-model laboratory: builds explicit premeasurement models and runs "
               "seeded verification experiments on them"};
  app.require_subcommand(1);

  Options opt;

  CLI::App* verify = app.add_subcommand(
      "verify", "run the full experiment suite and emit a combined JSON report");
  add_experiment_flags(verify, opt, false);

  CLI::App* qmp_pure = app.add_subcommand(
      "qmp-pure", "pure-state sweep around the balanced superposition");
  add_experiment_flags(qmp_pure, opt, true);
  qmp_pure->add_option("--emit-model", opt.emit_model, "also save the constructed model here");
  qmp_pure->add_option("--emit-state", opt.emit_state,
                       "also save the configuration-1 reference state here");

  CLI::App* qmp_impure = app.add_subcommand(
      "qmp-impure", "density-operator sweep around the balanced superposition");
  add_experiment_flags(qmp_impure, opt, true);
  qmp_impure->add_option("--emit-model", opt.emit_model, "also save the constructed model here");
  qmp_impure->add_option("--emit-state", opt.emit_state,
                         "also save the configuration-1 reference state here");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "density-operator sweep, per-sample CSV output by default");
  add_experiment_flags(sweep, opt, true);
  sweep->get_option("--format")->default_str("csv");

  CLI::App* classify = app.add_subcommand(
      "classify", "classify a stored state against a stored model's regions");
  classify->add_option("--model", opt.model_path, "model JSON path")->required();
  classify->add_option("--state", opt.state_path, "density JSON path")->required();
  classify->add_option("--epsilon", opt.epsilon, "region separation parameter, in (0, 1/2)")
      ->capture_default_str();
  classify->add_option("--output", opt.output, "write output to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) {
      return run_verify(opt);
    }
    if (qmp_pure->parsed()) {
      return run_qmp(opt, true);
    }
    if (qmp_impure->parsed()) {
      return run_qmp(opt, false);
    }
    if (sweep->parsed()) {
      if (sweep->count("--format") == 0) {
        opt.format = "csv";
      }
      return run_qmp(opt, false);
    }
    if (classify->parsed()) {
      return run_classify(opt);
    }
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
