// Command-line front end: `run` localizes one program against one
// counterexample; `bench` replays the bundled corpus against its golden
// fixtures.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "locfaults/locfaults.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;        // internal errors, fixture mismatches
constexpr int kExitRejectedCe = 2;   // inputs are not a usable counterexample
constexpr int kExitParseError = 3;   // unreadable/ill-formed source or inputs

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

locfaults::CounterExample parse_ce_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.is_object()) throw std::runtime_error("counterexample file must be a JSON object");
  locfaults::CounterExample ce;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_integer())
      throw std::runtime_error("counterexample value for '" + it.key() + "' must be an integer");
    ce[it.key()] = it.value().get<locfaults::Int>();
  }
  return ce;
}

struct RunArgs {
  std::string source;
  std::string ce;
  int kmax = 3;
  int mcs_bound = 3;
  int unroll_bound = 10;
  locfaults::Int domain_lo = -1'000'000;
  locfaults::Int domain_hi = 1'000'000;
  std::string format = "text";
  std::string dump_cfg;
  bool trace = false;
};

int cmd_run(const RunArgs& args) {
  locfaults::Program program;
  locfaults::CounterExample ce;
  try {
    program = locfaults::parse_program(read_file(args.source));
    ce = parse_ce_json(read_file(args.ce));
  } catch (const locfaults::SourceError& e) {
    std::cerr << "error: " << args.source << ": " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  }

  locfaults::Program unrolled = locfaults::unroll(program, args.unroll_bound);
  if (!args.dump_cfg.empty()) {
    std::ofstream out(args.dump_cfg);
    out << locfaults::to_dot(locfaults::build_cfg(unrolled));
  }

  locfaults::LocalizeOptions opt;
  opt.k_max = args.kmax;
  opt.mcs_bound = args.mcs_bound;
  opt.solver.default_lo = args.domain_lo;
  opt.solver.default_hi = args.domain_hi;
  opt.solver.trace = args.trace;

  try {
    locfaults::McsReport report = locfaults::localize(unrolled, ce, opt);
    if (args.format == "json")
      std::cout << locfaults::render_json(report) << "\n";
    else
      std::cout << locfaults::render_text(report);
    return kExitOk;
  } catch (const locfaults::CounterExampleError& e) {
    std::cerr << "rejected: " << e.what() << "\n";
    return kExitRejectedCe;
  } catch (const locfaults::UnrollBoundExceeded& e) {
    std::cerr << "rejected: " << e.what() << " (raise --unroll)\n";
    return kExitRejectedCe;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string corpus = "benchmarks";
  std::string filter;
  std::string format = "text";
  bool write_golden = false;
};

json entries_to_json(const locfaults::McsReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json entry;
    entry["deviations"] = std::vector<int>(e.deviations.begin(), e.deviations.end());
    entry["mcs"] = json::array();
    for (const auto& m : e.mcs_list) entry["mcs"].push_back(m.lines);
    entries.push_back(std::move(entry));
  }
  return entries;
}

json strip_timings(json j) {
  if (j.is_object()) {
    j.erase("preprocess_ms");
    j.erase("localize_ms");
    for (auto& [key, value] : j.items()) value = strip_timings(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = strip_timings(value);
  }
  return j;
}

std::string entry_cell(const json& entries) {
  std::string out;
  for (const auto& e : entries) {
    if (!out.empty()) out += " | ";
    std::string devs;
    for (const auto& d : e["deviations"]) {
      if (!devs.empty()) devs += ",";
      devs += std::to_string(d.get<int>()) + "*";
    }
    if (!devs.empty()) out += "[" + devs + "] ";
    std::string sets;
    for (const auto& m : e["mcs"]) {
      if (!sets.empty()) sets += ",";
      sets += "{";
      std::string lines;
      for (const auto& l : m) {
        if (!lines.empty()) lines += ",";
        lines += std::to_string(l.get<int>());
      }
      sets += lines + "}";
    }
    out += sets.empty() ? "(no mcs)" : sets;
  }
  return out.empty() ? "-" : out;
}

int cmd_bench(const BenchArgs& args) {
  std::vector<fs::path> sources;
  for (const auto& entry : fs::directory_iterator(args.corpus))
    if (entry.path().extension() == ".imp") sources.push_back(entry.path());
  std::sort(sources.begin(), sources.end());

  json out;
  out["programs"] = json::array();
  bool mismatch = false;

  for (const auto& source : sources) {
    std::string name = source.stem().string();
    if (!args.filter.empty() && name.find(args.filter) == std::string::npos) continue;
    fs::path ce_path = source.parent_path() / (name + ".ce.json");
    if (!fs::exists(ce_path)) {
      std::cerr << "bench: skipping " << name << " (no counterexample file)\n";
      continue;
    }

    locfaults::Program program = locfaults::parse_program(read_file(source));
    locfaults::CounterExample ce = parse_ce_json(read_file(ce_path));
    locfaults::Program unrolled = locfaults::unroll(program, 10);

    json record;
    record["program"] = name;
    record["counterexample"] = json::object();
    for (const auto& [k, v] : ce) record["counterexample"][k] = v;

    bool rejected = false;
    try {
      locfaults::validate_ce(unrolled, ce);
    } catch (const locfaults::CounterExampleError&) {
      rejected = true;
    }
    record["not_a_counterexample"] = rejected;

    double preprocess_ms = 0.0;
    if (!rejected) {
      record["runs"] = json::array();
      for (int kmax = 0; kmax <= 3; ++kmax) {
        locfaults::LocalizeOptions opt;
        opt.k_max = kmax;
        opt.mcs_bound = 3;
        locfaults::McsReport report = locfaults::localize(unrolled, ce, opt);
        json run;
        run["kmax"] = kmax;
        run["entries"] = entries_to_json(report);
        run["localize_ms"] = report.localize_ms;
        preprocess_ms = report.preprocess_ms;
        record["runs"].push_back(std::move(run));
      }
      record["preprocess_ms"] = preprocess_ms;
    }

    fs::path golden_path = fs::path(args.corpus) / "golden" / (name + ".json");
    if (args.write_golden) {
      fs::create_directories(golden_path.parent_path());
      std::ofstream g(golden_path);
      g << strip_timings(record).dump(2) << "\n";
    } else if (fs::exists(golden_path)) {
      json golden = json::parse(read_file(golden_path));
      json actual = strip_timings(record);
      if (golden != actual) {
        mismatch = true;
        std::cerr << "FIXTURE MISMATCH for " << name << "\n  expected: " << golden.dump()
                  << "\n  actual:   " << actual.dump() << "\n";
      }
    } else {
      mismatch = true;
      std::cerr << "FIXTURE MISSING for " << name << " (" << golden_path.string() << ")\n";
    }

    out["programs"].push_back(std::move(record));
  }

  if (args.format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& rec : out["programs"]) {
      std::cout << rec["program"].get<std::string>();
      if (rec["not_a_counterexample"].get<bool>()) {
        std::cout << ": counterexample rejected (program satisfies its postcondition)\n";
        continue;
      }
      std::cout << "\n";
      for (const auto& run : rec["runs"]) {
        std::ostringstream label;
        label << "  k<=" << run["kmax"].get<int>();
        std::cout << label.str() << std::string(8 - label.str().size(), ' ')
                  << entry_cell(run["entries"]) << "  (" << run["localize_ms"].get<double>()
                  << " ms)\n";
      }
    }
  }

  if (mismatch && !args.write_golden) return kExitError;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LocFaults-style fault localization for integer programs"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "localize faults in one program");
  run->add_option("--source", run_args.source, "program source (.imp)")->required();
  run->add_option("--ce", run_args.ce, "counterexample JSON file")->required();
  run->add_option("--kmax", run_args.kmax, "maximum deviated conditions")->check(CLI::Range(0, 64));
  run->add_option("--mcs-bound", run_args.mcs_bound, "MCS cardinality bound")
      ->check(CLI::Range(1, 64));
  run->add_option("--unroll", run_args.unroll_bound, "loop unrolling bound")
      ->check(CLI::Range(1, 1 << 20));
  run->add_option("--domain-lo", run_args.domain_lo, "lower variable bound");
  run->add_option("--domain-hi", run_args.domain_hi, "upper variable bound");
  run->add_option("--format", run_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  run->add_option("--dump-cfg", run_args.dump_cfg, "write the CFG in DOT form to this file");
  run->add_flag("--trace-propagation", run_args.trace, "dump solver domain prunes to stderr");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "run the bundled corpus against golden fixtures");
  bench->add_option("--corpus", bench_args.corpus, "corpus directory");
  bench->add_option("--filter", bench_args.filter, "only programs whose name contains this");
  bench->add_option("--format", bench_args.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  bench->add_flag("--write-golden", bench_args.write_golden,
                  "regenerate golden fixtures instead of comparing");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_args);
    return cmd_bench(bench_args);
  } catch (const locfaults::SourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
