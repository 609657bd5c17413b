// tilda: command-line front end for training, evaluation and simulation.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <ranges>
#include <string>
#include <vector>

#include "tilda/tilda.hpp"

namespace fs = std::filesystem;
using namespace tilda;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  return os;
}

std::string sniff_magic(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  char magic[4] = {};
  is.read(magic, 4);
  return std::string(magic, static_cast<std::size_t>(is.gcount()));
}

void check_dataset(const TildaConfig& cfg, const Dataset& d, const std::string& what) {
  if (d.dim != cfg.dim || d.classes != cfg.classes) {
    throw ConfigError(what + " has T=" + std::to_string(d.dim) + ", C=" + std::to_string(d.classes) +
                      " but the config says T=" + std::to_string(cfg.dim) +
                      ", C=" + std::to_string(cfg.classes));
  }
}

// ---- gen-data

struct GenDataArgs {
  std::string spec, out_train, out_test;
};

void gen_data(const GenDataArgs& a) {
  const auto spec = load_synthetic_spec(a.spec);
  const auto data = gen_synthetic(spec);
  data.train.save(a.out_train);
  data.test.save(a.out_test);
  std::printf("train: %zu records, test: %zu records in %zu groups, nearest-centroid ceiling %.4f\n",
              data.train.records.size(), data.test.records.size(), data.test.groups().size(),
              nearest_centroid_accuracy(data));
}

// ---- train

struct TrainArgs {
  std::string config, data, model, log;
};

void train(const TrainArgs& a) {
  const auto rc = load_run_config(a.config);
  const auto data = Dataset::load(a.data);
  check_dataset(rc.model, data, a.data);
  const auto order = stream_order(data.records.size(), rc.stream_seed);
  auto stream = order | std::views::transform(
                            [&data](std::size_t i) { return data.records[i].to_feature_vector(); });

  if (rc.quantize) {
    if (!a.log.empty()) throw UsageError("--log is only available for float training (quantize = false)");
    hw::SimMachine machine(rc.model);
    const auto fmt = machine.formats().feature_anchor;
    std::uint64_t cycles = 0;
    for (auto&& x : stream) cycles += machine.learn(quantize_vector(x.values, fmt), *x.label);
    machine.save(a.model);
    std::printf("learned %zu examples in %llu simulated cycles\n", order.size(),
                static_cast<unsigned long long>(cycles));
    return;
  }

  AnchorBank bank(rc.model);
  TrainingLog log(rc.model.dim, rc.model.parts);
  const auto n = learn_stream(bank, stream, a.log.empty() ? nullptr : &log);
  bank.save(a.model);
  if (!a.log.empty()) log.save(a.log);
  std::printf("learned %zu examples\n", n);
}

// ---- predict

struct PredictArgs {
  std::string model, data, out;
  std::uint32_t versions = 0;
};

void predict(const PredictArgs& a) {
  const auto data = Dataset::load(a.data);
  const auto groups = data.groups();
  auto first_n = [&](std::span<const DatasetRecord> g) {
    const std::size_t n = a.versions == 0 ? g.size() : a.versions;
    if (g.size() < n) {
      throw UsageError("group " + std::to_string(g.front().group) + " has only " +
                       std::to_string(g.size()) + " versions");
    }
    return g.first(n);
  };

  std::vector<std::uint32_t> predicted;
  const auto magic = sniff_magic(a.model);
  if (magic == "TLDB") {
    const auto bank = AnchorBank::load(a.model);
    check_dataset(bank.config(), data, a.data);
    for (const auto& g : groups) {
      std::vector<FeatureVector> versions;
      for (const auto& r : first_n(g)) versions.push_back(r.to_feature_vector());
      predicted.push_back(bank.predict_group(versions).final_class);
    }
  } else if (magic == "TLSM") {
    // the vote depth is fixed per machine, so keep one per group size
    std::map<std::size_t, hw::SimMachine> machines;
    for (const auto& g : groups) {
      const auto sel = first_n(g);
      auto it = machines.find(sel.size());
      if (it == machines.end()) {
        auto m = hw::SimMachine::load(a.model, static_cast<std::uint32_t>(sel.size()));
        check_dataset(m.config(), data, a.data);
        m.set_mode(hw::Mode::process);
        it = machines.emplace(sel.size(), std::move(m)).first;
      }
      const auto fmt = it->second.formats().feature_anchor;
      std::vector<std::vector<std::int64_t>> versions;
      for (const auto& r : sel) versions.push_back(quantize_vector(r.to_feature_vector().values, fmt));
      predicted.push_back(it->second.classify(versions).cls);
    }
  } else {
    throw FormatError(a.model + " is not a model file");
  }

  auto os = open_out(a.out);
  os << "group,label,predicted\n";
  std::size_t correct = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    os << groups[i].front().group << ',' << groups[i].front().label << ',' << predicted[i] << '\n';
    correct += predicted[i] == groups[i].front().label ? 1 : 0;
  }
  std::printf("%zu groups, %zu match their label\n", groups.size(), correct);
}

// ---- eval / simulate

struct EvalArgs {
  std::string config, train, test, variants = "float,quant,sim", format = "text", out;
};

void write_report(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  open_out(out) << text;
}

void eval(const EvalArgs& a) {
  const auto rc = load_run_config(a.config);
  const auto variants = parse_variant_list(a.variants);
  const auto format = parse_report_format(a.format);
  ExperimentOptions opt;
  opt.frequency_hz = rc.frequency_hz();
  const auto result =
      run_experiment(rc.model, Dataset::load(a.train), Dataset::load(a.test), variants, rc.stream_seed, opt);
  write_report(render_report(result, format), a.out);
}

struct SimulateArgs {
  std::string config, train, test, trace;
  std::uint64_t max_trace_cycles = 0;
};

void simulate(const SimulateArgs& a) {
  const auto rc = load_run_config(a.config);
  ExperimentOptions opt;
  opt.frequency_hz = rc.frequency_hz();
  std::ofstream trace;
  if (!a.trace.empty()) {
    trace = open_out(a.trace);
    trace << hw::SimMachine::trace_header() << '\n';
    opt.trace = &trace;
    if (a.max_trace_cycles > 0) opt.max_trace_cycles = a.max_trace_cycles;
  }
  const std::vector<Variant> variants{Variant::hwsim};
  const auto result =
      run_experiment(rc.model, Dataset::load(a.train), Dataset::load(a.test), variants, rc.stream_seed, opt);
  std::cout << render_report(result, ReportFormat::text);
  std::cout << render_hardware(result.timing, result.resources);
}

// ---- report-resources

void report_resources(const std::string& config) {
  const auto rc = load_run_config(config);
  std::cout << render_hardware(hw::timing_report(rc.model, rc.frequency_hz()), hw::resource_report(rc.model));
}

// ---- verify-log

struct VerifyArgs {
  std::string model, log;
  double tolerance = 1e-9;
};

int verify_log(const VerifyArgs& a) {
  const auto r = replay_verify(AnchorBank::load(a.model), TrainingLog::load(a.log), a.tolerance);
  std::cout << r.summary() << '\n';
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incremental anchor-vector classifier with a fixed-point datapath simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tilda 0.1.0");

  GenDataArgs gen;
  auto* c_gen = app.add_subcommand("gen-data", "Generate a synthetic train/test dataset pair");
  c_gen->add_option("--spec", gen.spec, "Dataset spec file (key = value)")->required();
  c_gen->add_option("--out-train", gen.out_train, "Training set output (.csv for text)")->required();
  c_gen->add_option("--out-test", gen.out_test, "Test set output (.csv for text)")->required();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Train a model in one pass over a dataset");
  c_train->add_option("--config", tr.config, "Run config file")->required();
  c_train->add_option("--data", tr.data, "Training dataset")->required();
  c_train->add_option("--model", tr.model, "Model output")->required();
  c_train->add_option("--log", tr.log, "Write the slot-assignment log for verify-log");

  PredictArgs pr;
  auto* c_pred = app.add_subcommand("predict", "Classify every group of a dataset");
  c_pred->add_option("--model", pr.model, "Model written by train")->required();
  c_pred->add_option("--data", pr.data, "Dataset to classify")->required();
  c_pred->add_option("--out", pr.out, "CSV output: group,label,predicted")->required();
  c_pred->add_option("--versions", pr.versions, "Versions per group to vote over (0 = all)");

  EvalArgs ev;
  auto* c_eval = app.add_subcommand("eval", "Train and evaluate one or more variants");
  c_eval->add_option("--config", ev.config, "Run config file")->required();
  c_eval->add_option("--train", ev.train, "Training dataset")->required();
  c_eval->add_option("--test", ev.test, "Test dataset")->required();
  c_eval->add_option("--variants", ev.variants, "Comma-separated list of float, quant, sim")
      ->capture_default_str();
  c_eval->add_option("--format", ev.format, "text, csv or json-lines")->capture_default_str();
  c_eval->add_option("--out", ev.out, "Write the report here instead of stdout");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Run the cycle-level datapath simulator");
  c_sim->add_option("--config", sim.config, "Run config file")->required();
  c_sim->add_option("--train", sim.train, "Training dataset")->required();
  c_sim->add_option("--test", sim.test, "Test dataset")->required();
  c_sim->add_option("--trace", sim.trace, "Per-cycle CSV trace output");
  c_sim->add_option("--max-trace-cycles", sim.max_trace_cycles, "Stop tracing after this many cycles");

  std::string res_config;
  auto* c_res = app.add_subcommand("report-resources", "Print closed-form timing and resource figures");
  c_res->add_option("--config", res_config, "Run config file")->required();

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify-log", "Recompute a float model from its training log");
  c_ver->add_option("--model", ver.model, "Float model (TLDB)")->required();
  c_ver->add_option("--log", ver.log, "Log written by train --log")->required();
  c_ver->add_option("--tolerance", ver.tolerance, "Max relative anchor error")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_gen->parsed()) gen_data(gen);
    if (c_train->parsed()) train(tr);
    if (c_pred->parsed()) predict(pr);
    if (c_eval->parsed()) eval(ev);
    if (c_sim->parsed()) simulate(sim);
    if (c_res->parsed()) report_resources(res_config);
    if (c_ver->parsed()) return verify_log(ver);
  } catch (const ConfigError& e) {
    std::cerr << "tilda: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "tilda: usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "tilda: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
