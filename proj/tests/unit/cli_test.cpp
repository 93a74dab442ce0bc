#include <gtest/gtest.h>

#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <netinet/in.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "artherapist/codec.hpp"
#include "artherapist/storage.hpp"
#include "fixtures.hpp"

using namespace artherapist;
using fixtures::TempDir;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;  // stdout and stderr
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(ARTHERAPIST_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp_tree(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename() != ".lock") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) all += std::filesystem::relative(f, root).string() + "\n" + detail::read_file(f);
  return all;
}

void store_session(const std::string& root, const SessionEngine& e) {
  EventStore store(root);
  store.create_segment(SegmentHeader::from_config(e.config()));
  for (const auto& ev : e.events()) store.append_event(e.config().session_id, ev);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Cli, SimulateIsByteForByteReproducible) {
  TempDir a, b;
  const auto ra = run("simulate --patients 2 --sessions 3 --seed 7 --store " + a.str());
  const auto rb = run("simulate --patients 2 --sessions 3 --seed 7 --store " + b.str());
  ASSERT_EQ(ra.exit_code, 0) << ra.out;
  ASSERT_EQ(rb.exit_code, 0) << rb.out;
  EXPECT_EQ(ra.out, rb.out);
  EXPECT_EQ(slurp_tree(a.path()), slurp_tree(b.path()));
  EXPECT_EQ(lines(ra.out).size(), 3u);
  TempDir c;
  EXPECT_NE(run("simulate --patients 2 --sessions 3 --seed 8 --store " + c.str()).out, ra.out);
}

TEST(Cli, PerfectPlayerHasMeanGfOne) {
  TempDir d;
  const auto r = run("simulate --patients 2 --sessions 4 --seed 1 --attention 1 --impulsivity 0 --dropout 0 --store " +
                     d.str());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::istringstream in(rows[i]);
    std::string id, sessions, pi, gf;
    in >> id >> sessions >> pi >> gf;
    EXPECT_EQ(gf, "1") << rows[i];
  }
}

TEST(Cli, UsageErrorsExitTwo) {
  TempDir d;
  const auto r = run("simulate --dropout 1.5 --seed 1 --store " + d.str());
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.out.find("range"), std::string::npos) << r.out;
  EXPECT_EQ(run("simulate --attention -0.1 --store " + d.str()).exit_code, 2);
  EXPECT_EQ(run("simulate --patients 0 --store " + d.str()).exit_code, 2);
  EXPECT_EQ(run("bogus").exit_code, 2);
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("metrics --store " + d.str()).exit_code, 2);
  EXPECT_EQ(run("metrics --session x --format xml --store " + d.str()).exit_code, 2);
  EXPECT_EQ(run("--help").exit_code, 0);
}

TEST(Cli, SimulateWithoutSeedPrintsTheChosenSeed) {
  TempDir d, e;
  const auto r = run("simulate --store " + d.str());
  ASSERT_EQ(r.exit_code, 0);
  const auto pos = r.out.find("seed: ");
  ASSERT_NE(pos, std::string::npos);
  const std::string seed = r.out.substr(pos + 6, r.out.find('\n', pos) - pos - 6);
  const auto again = run("simulate --seed " + seed + " --store " + e.str());
  EXPECT_EQ(r.out.substr(r.out.find('\n', pos) + 1), again.out);
}

TEST(Cli, ConfigFileSuppliesDefaultsAndFlagsOverride) {
  TempDir d, e;
  const auto cfg = d.path() / "run.toml";
  std::ofstream(cfg) << "[simulate]\nseed = 7\npatients = 2\nattention = 1.0\nimpulsivity = 0.0\n";
  const auto r = run("--config " + cfg.string() + " simulate --store " + (d.path() / "s").string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(lines(r.out).size(), 3u);
  const auto flags = run("simulate --seed 7 --patients 2 --attention 1 --impulsivity 0 --store " + e.str());
  EXPECT_EQ(r.out, flags.out);
  const auto over = run("--config " + cfg.string() + " simulate --patients 1 --store " + (d.path() / "t").string());
  EXPECT_EQ(lines(over.out).size(), 2u);
}

TEST(Cli, MetricsForAnGoldenSession) {
  TempDir d;
  store_session(d.str(), fixtures::golden_engine(fixtures::sim_level_config("golden")));
  const auto csv = run("metrics --session golden --format csv --store " + d.str());
  ASSERT_EQ(csv.exit_code, 0) << csv.out;
  const auto rows = lines(csv.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], kMetricsCsvHeader);
  const auto header = split(rows[0], ',');
  const auto cells = split(rows[1], ',');
  ASSERT_EQ(header.size(), cells.size());
  std::map<std::string, std::string> row;
  for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
  EXPECT_NEAR(std::stod(row["PI"]), 0.54, 1e-12);
  EXPECT_NEAR(std::stod(row["SD"]), 0.70711, 1e-5);
  EXPECT_EQ(row["T"], "10");
  EXPECT_EQ(row["K"], "2");

  const auto js = run("metrics --session golden --format json --store " + d.str());
  ASSERT_EQ(js.exit_code, 0);
  const auto doc = json::parse(js.out);
  EXPECT_NEAR(doc["PI"].get<double>(), 0.54, 1e-12);
  // CSV and JSON agree to the last bit.
  EXPECT_EQ(std::stod(row["CRF"]), doc["CRF"].get<double>());

  const auto table = run("metrics --session golden --store " + d.str());
  ASSERT_EQ(table.exit_code, 0);
  EXPECT_NE(table.out.find("PI          0.54"), std::string::npos) << table.out;
}

TEST(Cli, MetricsLeavesAbsentCellsEmpty) {
  TempDir d;
  auto e = SessionEngine::start(fixtures::sim_level_config("zero"));
  while (!e.finished()) e.deliver_timeout(e.try_deadline());
  store_session(d.str(), e);
  const auto csv = run("metrics --session zero --format csv --store " + d.str());
  ASSERT_EQ(csv.exit_code, 0);
  const auto cells = split(lines(csv.out)[1], ',');
  const auto header = split(kMetricsCsvHeader, ',');
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "M" || header[i] == "SD" || header[i] == "CRF" || header[i] == "PI")
      EXPECT_EQ(cells[i], "") << header[i];
    if (header[i] == "IAF") EXPECT_EQ(cells[i], "1");
  }
  const auto js = json::parse(run("metrics --session zero --format json --store " + d.str()).out);
  EXPECT_TRUE(js["PI"].is_null());
}

TEST(Cli, MetricsFailsForUnknownOrUnsealedSessions) {
  TempDir d;
  EXPECT_EQ(run("metrics --session nope --store " + d.str()).exit_code, 1);
  auto e = SessionEngine::start(fixtures::sim_level_config("open"));
  EventStore store(d.path());
  store.create_segment(SegmentHeader::from_config(e.config()));
  for (const auto& ev : e.events()) store.append_event("open", ev);
  const auto r = run("metrics --session open --store " + d.str());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.out.find("not sealed"), std::string::npos) << r.out;
}

TEST(Cli, SweepWritesOneRowPerCell) {
  TempDir d;
  const auto grid = d.path() / "grid.json";
  const auto out = d.path() / "out.csv";
  std::ofstream(grid) << R"([{"attention": 0.5}])";
  auto r = run("sweep --grid " + grid.string() + " --sessions-per-cell 1 --seed 3 --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(lines(detail::read_file(out)).size(), 2u);

  std::ofstream(grid) << R"([{"attention": 0.2, "seed": 1}, {"attention": 0.9, "seed": 2}])";
  r = run("sweep --grid " + grid.string() + " --sessions-per-cell 1000 --seed 3 --out " + out.string());
  ASSERT_EQ(r.exit_code, 0) << r.out;
  const auto rows = lines(detail::read_file(out));
  ASSERT_EQ(rows.size(), 3u);
  const auto header = split(rows[0], ',');
  const auto col = std::find(header.begin(), header.end(), "IAF_mean") - header.begin();
  EXPECT_GT(std::stod(split(rows[1], ',')[col]), std::stod(split(rows[2], ',')[col]));
}

TEST(Cli, SweepRejectsBadGrids) {
  TempDir d;
  const auto grid = d.path() / "grid.json";
  const std::string tail = " --sessions-per-cell 1 --seed 1 --out " + (d.path() / "o.csv").string();
  std::ofstream(grid) << "[]";
  EXPECT_EQ(run("sweep --grid " + grid.string() + tail).exit_code, 2);
  std::ofstream(grid) << "[{\"attention\": 7}]";
  EXPECT_EQ(run("sweep --grid " + grid.string() + tail).exit_code, 2);
  std::ofstream(grid) << "not json";
  EXPECT_EQ(run("sweep --grid " + grid.string() + tail).exit_code, 2);
  std::ofstream(grid) << "{\"attention\": 0.5}";
  EXPECT_EQ(run("sweep --grid " + grid.string() + tail).exit_code, 2);
  EXPECT_EQ(run("sweep --grid " + (d.path() / "missing.json").string() + tail).exit_code, 2);
}

namespace {

struct ServeProcess {
  pid_t pid = -1;
  int out = -1;

  static ServeProcess start(const std::string& store, const std::string& listen) {
    int fds[2];
    if (pipe(fds) != 0) return {};
    const pid_t pid = fork();
    if (pid == 0) {
      dup2(fds[1], 1);
      dup2(fds[1], 2);
      close(fds[0]);
      execl(ARTHERAPIST_CLI_PATH, ARTHERAPIST_CLI_PATH, "serve", "--listen", listen.c_str(), "--store", store.c_str(),
            static_cast<char*>(nullptr));
      _exit(127);
    }
    close(fds[1]);
    return {pid, fds[0]};
  }

  std::string read_line() const {
    std::string line;
    char c;
    while (read(out, &c, 1) == 1 && c != '\n') line += c;
    return line;
  }

  int wait_exit() const {
    int status = 0;
    waitpid(pid, &status, 0);
    close(out);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
};

}  // namespace

TEST(Cli, ServeAnswersAndStopsCleanlyOnInterrupt) {
  TempDir d;
  auto server = ServeProcess::start(d.str(), "127.0.0.1:0");
  const std::string line = server.read_line();
  ASSERT_EQ(line.rfind("listening on 127.0.0.1:", 0), 0u) << line;
  const int port = std::stoi(line.substr(line.rfind(':') + 1));
  httplib::Client client("127.0.0.1", port);
  const auto res = client.Get("/api/v1/patients");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body), json({{"items", json::array()}}));
  kill(server.pid, SIGINT);
  EXPECT_EQ(server.wait_exit(), 0);
}

TEST(Cli, ServeFailsWhenThePortIsTaken) {
  TempDir d;
  const int sock = socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  ASSERT_EQ(bind(sock, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  ASSERT_EQ(listen(sock, 1), 0);
  socklen_t len = sizeof addr;
  getsockname(sock, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  const auto r = run("serve --listen 127.0.0.1:" + std::to_string(port) + " --store " + d.str());
  EXPECT_EQ(r.exit_code, 1) << r.out;
  close(sock);
  EXPECT_EQ(run("serve --listen nonsense --store " + d.str()).exit_code, 2);
}
