// artherapist: batch driver for simulations, sweeps, scoring and the service.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <pthread.h>
#include <signal.h>
#include <unistd.h>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "artherapist/codec.hpp"
#include "artherapist/presets.hpp"
#include "artherapist/service.hpp"
#include "artherapist/simulator.hpp"
#include "artherapist/storage.hpp"

namespace {

using namespace artherapist;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t random_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::string cell(const std::optional<double>& v) { return v ? format_number(*v) : "-"; }

// Posts a document through the service unless one with that id exists.
void ensure_document(ApiService& api, const std::string& collection, const std::string& id, const json& body) {
  const auto found = api.handle({"GET", "/api/v1/" + collection + "/" + id, {}, {}, ""});
  if (found.status == 200) return;
  const auto created = api.handle({"POST", "/api/v1/" + collection, {}, {}, body.dump()});
  if (created.status != 201)
    throw Error(ErrorCode::io_failure, "cannot create " + collection + "/" + id + ": " + created.body.dump());
}

// --- simulate ---------------------------------------------------------------

struct SimulateOptions {
  int patients = 1;
  int sessions = 1;
  std::optional<std::uint64_t> seed;
  BehaviorParams behavior;
  std::string store;
};

int run_simulate(const SimulateOptions& o) {
  const auto issues = check_behavior(o.behavior);
  if (!issues.empty()) throw UsageError("invalid behavior: " + summarize(issues));
  std::uint64_t seed = 0;
  if (o.seed) {
    seed = *o.seed;
  } else {
    seed = random_seed();
    std::cerr << "seed: " << seed << '\n';
  }

  Store store(o.store);
  ApiService api(store);
  ensure_document(api, "games", kSimGameId, to_json(simulation_game()));
  ensure_document(api, "programs", kSimProgramId, to_json(simulation_program()));
  ensure_document(api, "doctors", kSimDoctorId, to_json(DoctorProfile{kSimDoctorId, Experience::expert, Involvement::full}));

  std::ostringstream table;
  table << std::left << std::setw(12) << "patient_id" << std::setw(10) << "sessions" << std::setw(22) << "mean_PI"
        << std::setw(22) << "mean_GF" << "level" << '\n';
  for (int p = 1; p <= o.patients; ++p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sim-p%04d", p);
    const std::string patient_id = buf;
    ensure_document(api, "patients", patient_id, to_json(PatientProfile{patient_id, 1, std::nullopt, {}}));
    const std::string treatment_id = "sim-t" + patient_id.substr(5);
    ensure_document(api, "treatments", treatment_id,
                    to_json(Treatment{treatment_id, patient_id, kSimDoctorId, kSimGameId, {kSimProgramId}}));

    std::vector<double> pis;
    std::vector<double> gfs;
    int level = 1;
    for (int s = 1; s <= o.sessions; ++s) {
      const auto up = static_cast<std::uint64_t>(p);
      const auto us = static_cast<std::uint64_t>(s);
      BehaviorParams b = o.behavior;
      b.seed = derive_seed(seed, {up, us, 2});
      const json request = {{"patient_id", patient_id},
                            {"program_id", kSimProgramId},
                            {"seed", derive_seed(seed, {up, us, 1})},
                            {"behavior", to_json(b)}};
      const auto r = api.handle({"POST", "/api/v1/sessions", {}, {}, request.dump()});
      if (r.status != 201) throw Error(ErrorCode::io_failure, "session launch failed: " + r.body.dump());
      const auto m = metrics_from_json(r.body.at("metrics"));
      if (m.PI) pis.push_back(*m.PI);
      if (m.GF) gfs.push_back(*m.GF);
      level = r.body.at("transition").at("to_level").get<int>();
    }
    table << std::setw(12) << patient_id << std::setw(10) << o.sessions << std::setw(22)
          << cell(summarize_field(pis).mean) << std::setw(22) << cell(summarize_field(gfs).mean) << level << '\n';
  }
  std::cout << table.str();
  return kExitOk;
}

// --- metrics ----------------------------------------------------------------

int run_metrics(const std::string& store_root, const std::string& session_id, const std::string& format) {
  Store store(store_root);
  const auto [tally, metrics] = score_stored_session(store, session_id);
  if (format == "json") {
    std::cout << session_metrics_document(session_id, tally, metrics).dump(2) << '\n';
  } else if (format == "csv") {
    std::cout << kMetricsCsvHeader << '\n' << metrics_csv_row(session_id, tally, metrics) << '\n';
  } else {
    auto row = [](const char* name, const std::string& value) {
      std::cout << std::left << std::setw(12) << name << value << '\n';
    };
    row("session_id", session_id);
    row("T", std::to_string(tally.T));
    row("C", std::to_string(tally.C));
    row("I", std::to_string(tally.I()));
    row("K", std::to_string(tally.K));
    row("OE", std::to_string(tally.OE));
    row("CE", std::to_string(tally.CE));
    for (std::size_t f = 0; f < kMetricFieldCount; ++f) row(kMetricFields[f], cell(metric_field(metrics, f)));
  }
  return kExitOk;
}

// --- sweep ------------------------------------------------------------------

struct SweepOptions {
  std::string grid;
  int sessions_per_cell = 100;
  std::string out;
  int level = 1;
  std::optional<std::uint64_t> seed;
};

std::vector<BehaviorParams> load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read grid file " + path);
  const json raw = json::parse(in, nullptr, false);
  if (raw.is_discarded()) throw UsageError("grid file is not valid JSON");
  if (!raw.is_array()) throw UsageError("grid file must hold a JSON list of behavior parameter objects");
  if (raw.empty()) throw UsageError("grid is empty");
  std::vector<BehaviorParams> grid;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto p = behavior_from_json(raw[i]);
    if (!p) throw UsageError("grid[" + std::to_string(i) + "]: " + p.summary());
    grid.push_back(p.value());
  }
  return grid;
}

int run_sweep(const SweepOptions& o) {
  const auto grid = load_grid(o.grid);
  const GameDefinition game = simulation_game();
  const LevelDefinition* level = game.level(o.level);
  if (!level) throw UsageError("--level must lie in 1.." + std::to_string(game.max_level()));
  std::uint64_t seed = 0;
  if (o.seed) {
    seed = *o.seed;
  } else {
    seed = random_seed();
    std::cerr << "seed: " << seed << '\n';
  }
  const SessionConfig config = derive_session_config(*level, simulation_program(), {"sweep", "sweep", kSimGameId, seed});
  const auto table = sweep(grid, o.sessions_per_cell, config);
  detail::write_file_atomic(o.out, sweep_csv(table), false);
  return kExitOk;
}

// --- serve ------------------------------------------------------------------

int run_serve(const std::string& store_root, const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw UsageError("--listen expects HOST:PORT");
  const std::string host = listen.substr(0, colon);
  const auto port = parse_integer<int>(listen.substr(colon + 1));
  if (host.empty() || !port || *port < 0 || *port > 65535) throw UsageError("--listen expects HOST:PORT");

  // Block the stop signals before any server thread exists so only the
  // waiter below receives them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Store store(store_root);
  ApiService api(store);
  HttpServer server(api);
  int bound = *port;
  if (*port == 0) {
    bound = server.bind_any_port(host);
    if (bound < 0) {
      std::cerr << "error: cannot bind " << host << '\n';
      return kExitRuntime;
    }
  } else if (!server.bind(host, *port)) {
    std::cerr << "error: cannot bind " << listen << '\n';
    return kExitRuntime;
  }
  std::cout << "listening on " << host << ':' << bound << std::endl;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  const bool ok = server.listen_after_bind();
  // Wake the waiter if the server stopped on its own.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artherapist: attention game sessions, metrics and service"};
  app.set_config("--config", "", "Optional TOML/INI file with option defaults; flags override");
  app.require_subcommand(1);

  std::string store_root;
  auto add_store = [&](CLI::App* cmd) {
    cmd->add_option("--store", store_root, "Store directory")->envname("ARTHERAPIST_STORE")->required();
  };

  SimulateOptions sim;
  std::uint64_t sim_seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Run synthetic patients through the built-in game");
  simulate->add_option("--patients", sim.patients, "Number of patients")->check(CLI::Range(1, 100000));
  simulate->add_option("--sessions", sim.sessions, "Sessions per patient")->check(CLI::Range(1, 100000));
  auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "Root seed");
  simulate->add_option("--attention", sim.behavior.attention, "P(attentive response)")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--impulsivity", sim.behavior.impulsivity, "P(impulsive response)")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--dropout", sim.behavior.dropout_hazard, "Per-try quit probability, [0, 1)")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--rt-log-mean", sim.behavior.rt_log_mean, "Log-mean response time");
  simulate->add_option("--rt-log-sd", sim.behavior.rt_log_sd, "Log-sd of response time");
  add_store(simulate);

  std::string session_id;
  std::string format = "table";
  auto* metrics = app.add_subcommand("metrics", "Score a sealed session from its event log");
  metrics->add_option("--session", session_id, "Session id")->required();
  metrics->add_option("--format", format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  add_store(metrics);

  SweepOptions sw;
  std::uint64_t sweep_seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Aggregate metrics over a grid of behavior parameters");
  sweep_cmd->add_option("--grid", sw.grid, "JSON list of behavior parameter objects")->required();
  sweep_cmd->add_option("--sessions-per-cell", sw.sessions_per_cell, "Sessions per grid cell")
      ->check(CLI::Range(1, 10000000));
  sweep_cmd->add_option("--out", sw.out, "Output CSV path")->required();
  sweep_cmd->add_option("--level", sw.level, "Level of the built-in game");
  auto* sweep_seed_opt = sweep_cmd->add_option("--seed", sweep_seed, "Root seed for session layouts");

  std::string listen = "127.0.0.1:8080";
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--listen", listen, "HOST:PORT (port 0 picks a free port)");
  add_store(serve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*simulate) {
      if (*sim_seed_opt) sim.seed = sim_seed;
      sim.store = store_root;
      return run_simulate(sim);
    }
    if (*metrics) return run_metrics(store_root, session_id, format);
    if (*sweep_cmd) {
      if (*sweep_seed_opt) sw.seed = sweep_seed;
      return run_sweep(sw);
    }
    if (*serve) return run_serve(store_root, listen);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
