// Command-line front-end: validate, analyze, transition, simulate, report,
// generate. Output goes to stdout or --out, written once at the end.
// Exit status: 0 clean, 1 diagnostics or violations, 2 errors.

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "madf/generator.hpp"
#include "madf/io.hpp"
#include "madf/kernels.hpp"

using namespace madf;
using io::Json;

namespace {

struct Options {
  std::string graph;
  std::string scenario;
  std::string alloc;
  std::string scheduler;
  std::string protocol;
  std::string timing;  // empty: sps for analyses, the scenario's own for simulations
  std::string format = "text";
  std::string out;
  std::string from;
  std::string alloc_out;
  std::uint64_t seed = 1;
  bool error_json = false;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_st("madf");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* level = std::getenv("MADF_LOG");
  spdlog::set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    io::write_file(o.out, text);
    spdlog::info("wrote {}", o.out);
  }
}

Timing analysis_timing(const Options& o) {
  return parse_timing(o.timing.empty() ? "sps" : o.timing);
}

std::vector<SteadyStateSchedule> analyse_modes(const MadfGraph& g, Timing timing) {
  std::vector<SteadyStateSchedule> out;
  for (const auto& mode : g.control.modes) {
    const auto inst = instantiate_mode(g, mode);
    auto s = steady_state(inst);
    spdlog::debug("mode {}: H={} L={}", mode, s.hyper_period, s.latency);
    out.push_back(timing == Timing::sps ? std::move(s) : self_timed_schedule(inst, s));
  }
  return out;
}

std::optional<Allocation> load_alloc(const Options& o) {
  if (o.alloc.empty()) return std::nullopt;
  auto a = io::load_allocation(o.alloc);
  if (o.scheduler == "edf") a.bound = UtilizationBound::edf();
  if (o.scheduler == "rm") a.bound = UtilizationBound::rm();
  return a;
}

std::vector<ActorId> actor_order(const MadfGraph& g) {
  std::vector<ActorId> ids;
  for (const auto& a : g.actors) ids.push_back(a.id);
  return ids;
}

int cmd_validate(const Options& o) {
  const auto g = io::load_graph(o.graph);
  const auto diags = validate_graph(g);
  if (o.format == "json") {
    Json list = Json::array();
    for (const auto& d : diags) list.push_back(io::diagnostic_to_json(d));
    emit(o, dump({{"diagnostics", list}}));
  } else {
    emit(o, diags.empty() ? "ok\n" : io::diagnostics_to_text(diags));
  }
  return diags.empty() ? 0 : 1;
}

int cmd_analyze(const Options& o) {
  const auto g = io::load_graph(o.graph);
  const auto modes = analyse_modes(g, analysis_timing(o));
  if (o.format == "json") {
    Json list = Json::array();
    for (const auto& s : modes) list.push_back(io::schedule_to_json(s));
    emit(o, dump({{"modes", list}}));
  } else {
    emit(o, io::schedules_to_text(modes, actor_order(g)));
  }
  return 0;
}

int cmd_transition(const Options& o) {
  const auto g = io::load_graph(o.graph);
  const auto modes = analyse_modes(g, analysis_timing(o));
  const auto alloc = load_alloc(o);
  std::vector<Diagnostic> diags;
  if (alloc) diags = validate_allocation(*alloc, modes);
  for (const auto& d : diags) spdlog::info("{} [{}]: {}", d.code, d.subject, d.message);
  std::vector<TransitionAnalysis> ts;
  if (diags.empty()) ts = analyze_all_transitions(modes, alloc ? &*alloc : nullptr);
  if (o.format == "json") {
    Json list = Json::array();
    for (const auto& t : ts) list.push_back(io::transition_to_json(t));
    Json dl = Json::array();
    for (const auto& d : diags) dl.push_back(io::diagnostic_to_json(d));
    emit(o, dump({{"allocation_diagnostics", dl}, {"transitions", list}}));
  } else {
    emit(o, diags.empty() ? io::transitions_to_text(ts) : io::diagnostics_to_text(diags));
  }
  return diags.empty() ? 0 : 1;
}

struct SimulationRun {
  Scenario scenario;
  SimTrace trace;
  std::vector<Violation> violations;
};

SimulationRun run_simulation(const Options& o, const MadfGraph& g,
                             const std::vector<SteadyStateSchedule>& sps, const Allocation* alloc) {
  SimulationRun run;
  run.scenario = io::load_scenario(o.scenario);
  if (!o.protocol.empty()) run.scenario.protocol = parse_protocol(o.protocol);
  if (!o.timing.empty()) run.scenario.timing = parse_timing(o.timing);
  std::map<ModeId, SteadyStateSchedule> by_mode;
  for (const auto& s : sps) by_mode[s.mode] = s;
  run.trace = simulate(g, by_mode, alloc, run.scenario);
  const auto regime =
      run.scenario.timing == Timing::sps ? sps : analyse_modes(g, Timing::self_timed);
  std::map<ModeId, SteadyStateSchedule> regime_by_mode;
  for (const auto& s : regime) regime_by_mode[s.mode] = s;
  run.violations = verify_trace(run.trace, regime_by_mode, analyze_all_transitions(regime, alloc));
  for (const auto& v : run.violations)
    spdlog::info("violation at {}: {} {}: {}", v.time, v.kind, v.subject, v.message);
  return run;
}

int cmd_simulate(const Options& o) {
  const auto g = io::load_graph(o.graph);
  const auto sps = analyse_modes(g, Timing::sps);
  const auto alloc = load_alloc(o);
  const auto run = run_simulation(o, g, sps, alloc ? &*alloc : nullptr);
  if (o.format == "csv") {
    emit(o, io::trace_to_csv(run.trace));
  } else if (o.format == "json") {
    Json v = Json::array();
    for (const auto& x : run.violations) v.push_back(io::violation_to_json(x));
    emit(o, dump({{"scenario", io::scenario_to_json(run.scenario)},
                  {"simulation", io::trace_summary_to_json(run.trace)},
                  {"violations", v}}));
  } else {
    std::string text = io::trace_summary_to_text(run.trace);
    if (!run.violations.empty()) {
      text += "\nverification:\n";
      for (const auto& x : run.violations)
        text += "  " + std::to_string(x.time) + " " + x.kind + " " + x.subject + ": " + x.message +
                "\n";
    }
    emit(o, text);
  }
  return run.violations.empty() ? 0 : 1;
}

int cmd_report(const Options& o) {
  io::Report r;
  if (!o.from.empty()) {
    const auto j = io::load_json(o.from);
    try {
      r = io::report_from_json(j);
    } catch (const ParseError& e) {
      throw ParseError(o.from + ":" + e.what());
    }
  } else {
    if (o.graph.empty()) throw ModelError("usage", "report needs a graph file or --from");
    r.graph = io::load_graph(o.graph);
    r.diagnostics = validate_graph(r.graph);
    if (r.diagnostics.empty()) {
      const auto timing = analysis_timing(o);
      r.modes = analyse_modes(r.graph, timing);
      r.allocation = load_alloc(o);
      if (r.allocation) r.allocation_diagnostics = validate_allocation(*r.allocation, r.modes);
      if (r.allocation_diagnostics.empty())
        r.transitions = analyze_all_transitions(r.modes, r.allocation ? &*r.allocation : nullptr);
      if (!o.scenario.empty() && r.allocation_diagnostics.empty()) {
        const auto sps = timing == Timing::sps ? r.modes : analyse_modes(r.graph, Timing::sps);
        auto run = run_simulation(o, r.graph, sps, r.allocation ? &*r.allocation : nullptr);
        r.scenario = run.scenario;
        r.simulation = std::move(run.trace);
        r.simulation->events.clear();
        r.violations = std::move(run.violations);
      }
    }
  }
  emit(o, o.format == "json" ? dump(io::report_to_json(r)) : io::report_to_text(r));
  const bool clean =
      r.diagnostics.empty() && r.allocation_diagnostics.empty() && r.violations.empty();
  return clean ? 0 : 1;
}

int cmd_generate(const Options& o) {
  const auto c = generate_case(o.seed);
  if (!o.alloc_out.empty()) io::write_file(o.alloc_out, dump(io::allocation_to_json(c.allocation)));
  emit(o, dump(io::graph_to_json(c.graph)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"Mode-aware dataflow analysis: SPS schedules, MOO transitions, simulation"};
  app.require_subcommand(1);
  Options o;

  auto add_format = [&](CLI::App* c, std::vector<std::string> allowed) {
    c->add_option("--format", o.format, "Output format")->check(CLI::IsMember(allowed));
    c->add_option("--out", o.out, "Write output to this file instead of stdout");
    c->add_flag("--error-json", o.error_json, "Report errors as JSON on stdout");
  };
  auto add_timing = [&](CLI::App* c) {
    c->add_option("--timing", o.timing, "Timing regime")
        ->check(CLI::IsMember({"sps", "self-timed"}));
  };
  auto add_alloc = [&](CLI::App* c) {
    c->add_option("--alloc", o.alloc, "Allocation file")->check(CLI::ExistingFile);
    c->add_option("--scheduler", o.scheduler, "Override the allocation's scheduler")
        ->check(CLI::IsMember({"edf", "rm"}));
  };

  auto* validate = app.add_subcommand("validate", "Check every structural invariant of a graph");
  validate->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  add_format(validate, {"json", "text"});

  auto* analyze = app.add_subcommand("analyze", "Steady-state schedule of every mode");
  analyze->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  add_format(analyze, {"json", "text"});
  add_timing(analyze);

  auto* transition = app.add_subcommand("transition", "Analyse every ordered mode pair");
  transition->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  add_format(transition, {"json", "text"});
  add_alloc(transition);
  add_timing(transition);

  auto* sim = app.add_subcommand("simulate", "Run a mode-change scenario");
  sim->add_option("graph", o.graph, "Graph file")->required()->check(CLI::ExistingFile);
  sim->add_option("scenario", o.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
  sim->add_option("--protocol", o.protocol, "Override the scenario's protocol")
      ->check(CLI::IsMember({"moo", "st", "sync"}));
  add_format(sim, {"json", "text", "csv"});
  add_alloc(sim);
  add_timing(sim);

  auto* report = app.add_subcommand("report", "Combined validation, analysis and simulation");
  report->add_option("graph", o.graph, "Graph file")->check(CLI::ExistingFile);
  report->add_option("--scenario", o.scenario, "Scenario to simulate")->check(CLI::ExistingFile);
  report->add_option("--from", o.from, "Re-render a JSON report")->check(CLI::ExistingFile);
  report->add_option("--protocol", o.protocol, "Override the scenario's protocol")
      ->check(CLI::IsMember({"moo", "st", "sync"}));
  add_format(report, {"json", "text"});
  add_alloc(report);
  add_timing(report);

  auto* gen = app.add_subcommand("generate", "Write a random consistent graph");
  gen->add_option("--seed", o.seed, "Generator seed");
  gen->add_option("--out", o.out, "Write output to this file instead of stdout");
  gen->add_option("--alloc-out", o.alloc_out, "Also write the generated allocation");

  CLI11_PARSE(app, argc, argv);
  spdlog::debug("kernels: {}", kernels::isa_name(kernels::active_isa()));

  try {
    if (*validate) return cmd_validate(o);
    if (*analyze) return cmd_analyze(o);
    if (*transition) return cmd_transition(o);
    if (*sim) return cmd_simulate(o);
    if (*report) return cmd_report(o);
    if (*gen) return cmd_generate(o);
  } catch (const Error& e) {
    if (o.error_json)
      std::cout << dump(io::error_to_json(e));
    else
      std::cerr << "error (" << e.kind() << "): " << e.what() << "\n";
    return 2;
  }
  return 0;
}
