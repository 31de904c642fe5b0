#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fne/cli.hpp"
#include "fne/io.hpp"

using namespace fne;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("fne_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fne");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Csv, TraceRoundTripIsExact) {
  const Orbit o(build_block_mesh(8, 2));
  const CesaroTrace tr = cesaro_norms(o, o.mesh().size());
  std::stringstream ss;
  io::write_csv(ss, io::trace_table(o, tr));
  const io::Table back = io::read_csv(ss);
  ASSERT_EQ(back.header, (std::vector<std::string>{"n", "t", "rho", "y_norm"}));
  ASSERT_EQ(back.rows.size(), tr.upto());
  for (std::size_t i = 0; i < back.rows.size(); ++i) {
    const std::size_t n = i + 1;
    ASSERT_EQ(back.rows[i][0].get<std::size_t>(), n);
    ASSERT_EQ(back.rows[i][1].get<double>(), o.t(n));
    ASSERT_EQ(back.rows[i][2].get<double>(), o.rho(n));
    ASSERT_EQ(back.rows[i][3].get<double>(), tr.norm_at(n));
  }
}

TEST(Csv, RandomDoublesRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  io::Table t{{"x"}, {}};
  for (int i = 0; i < 2000; ++i) t.rows.push_back({u(rng) * std::pow(10.0, i % 40 - 20)});
  std::stringstream ss;
  io::write_csv(ss, t);
  const io::Table back = io::read_csv(ss);
  for (std::size_t i = 0; i < t.rows.size(); ++i) ASSERT_EQ(back.rows[i][0].get<double>(), t.rows[i][0].get<double>());
}

TEST(Csv, RaggedRowsRejected) {
  std::stringstream ss("a,b\n1,2\n3\n");
  EXPECT_THROW(io::read_csv(ss), std::runtime_error);
}

TEST(Tables, MeshHeadersAndBlockColumn) {
  std::stringstream h, b;
  io::write_csv(h, io::mesh_table(build_harmonic_mesh(0.125, 3)));
  EXPECT_EQ(h.str(), "n,d,t,block\n1,0.125,0,\n2,0.0625,0.125,\n3,0.041666666666666664,0.1875,\n");
  const Mesh bm = build_block_mesh(8, 2);
  io::write_csv(b, io::block_meta_table(*bm.block_meta()));
  std::string header;
  std::getline(b, header);
  EXPECT_EQ(header, "k,w,i,Q,block_end,j_unit");
  const io::Table mesh = io::mesh_table(bm);
  EXPECT_EQ(mesh.rows.front()[3].get<int>(), 1);
  EXPECT_EQ(mesh.rows.back()[3].get<int>(), 2);
}

TEST(Tables, CurveSamples) {
  const std::vector<double> ts{0.0, 1.0};
  const io::Table c = io::coord_samples_table(ts, 3);
  EXPECT_EQ(c.header, (std::vector<std::string>{"t", "k", "u_k"}));
  EXPECT_EQ(c.rows.size(), 8u);
  const std::vector<double> rs{-1.0, 0.0, 1.0};
  const io::Table l = io::l2_samples_table(ts, rs);
  EXPECT_EQ(l.header, (std::vector<std::string>{"t", "r", "value"}));
  EXPECT_EQ(l.rows.size(), 6u);
}

TEST(PlotData, HarmonicRowCount) {
  TempDir dir;
  const Orbit o(build_harmonic_mesh(0.125, 100));
  const CesaroTrace tr = cesaro_norms(o, 100);
  io::export_plot_data(tr, nullptr, dir / "plot.csv");
  const std::string text = slurp(dir / "plot.csv");
  EXPECT_EQ(count_lines(text), 101u);
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,y_norm,tag,block");
}

TEST(PlotData, BlockProbeRows) {
  const Orbit o(build_block_mesh(8, 2));
  const CesaroTrace tr = cesaro_norms(o, o.mesh().size());
  const io::Table t = io::plot_table(tr, o.mesh().block_meta());
  std::vector<std::string> tags;
  for (const auto& row : t.rows)
    if (row[2].is_string()) tags.push_back(row[2].get<std::string>() + std::to_string(row[3].get<int>()));
  EXPECT_EQ(tags, (std::vector<std::string>{"unit1", "end1", "unit2", "end2"}));
  EXPECT_EQ(t.rows.size(), tr.upto() + 4);
}

TEST(PlotData, EmptyTraceRejected) {
  TempDir dir;
  EXPECT_THROW(io::export_plot_data(CesaroTrace{}, nullptr, dir / "x.csv"), std::invalid_argument);
  const Orbit o(build_harmonic_mesh(0.125, 10));
  EXPECT_THROW(io::export_plot_data(cesaro_norms(o, 10), nullptr, dir / "missing" / "x.csv"), std::runtime_error);
}

TEST(Cli, DeltaOutOfRangeIsUsageError) {
  const CliResult r = run_cli({"mesh", "--kind", "harmonic", "--delta", "0.2"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("--delta"), std::string::npos);
  EXPECT_EQ(count_lines(r.err), 1u);
}

TEST(Cli, OtherUsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify", "--suite", "nope"},
           {"mesh", "--kind", "block", "--q1", "7"},
           {"mesh", "--q1", "abc"},
           {"mesh", "--frobnicate"},
           {"export", "--what", "blocks", "--kind", "harmonic", "--out", "-"},
       }) {
    const CliResult r = run_cli(args);
    EXPECT_EQ(r.code, cli::kExitUsage) << args[0] << " " << args[1];
    EXPECT_EQ(count_lines(r.err), 1u) << r.err;
  }
}

TEST(Cli, VerifyHarmonicWritesReport) {
  TempDir dir;
  const std::string out = (dir / "h.json").string();
  const CliResult r = run_cli({"verify", "--suite", "harmonic", "--delta", "0.125", "--n", "10000", "--out", out});
  EXPECT_EQ(r.code, cli::kExitPass) << r.err;
  EXPECT_EQ(r.out.rfind("SUITE harmonic: ", 0), 0u);
  const auto json = nlohmann::json::parse(slurp(out));
  ASSERT_TRUE(json.is_array());
  for (const auto& rec : json) EXPECT_TRUE(rec["pass"].get<bool>()) << rec.dump();
}

TEST(Cli, CesaroBlockTrace) {
  TempDir dir;
  const std::string out = (dir / "trace.csv").string();
  const CliResult r = run_cli({"cesaro", "--kind", "block", "--q1", "8", "--blocks", "4", "--out", out});
  EXPECT_EQ(r.code, cli::kExitPass) << r.err;
  const io::Table t = io::read_csv_file(out);
  EXPECT_EQ(t.header, (std::vector<std::string>{"n", "t", "rho", "y_norm"}));
  const io::Table blocks = io::read_csv_file(dir / "trace_blocks.csv");
  EXPECT_EQ(blocks.header.size(), 9u);
  EXPECT_EQ(blocks.rows.size(), 4u);
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
  TempDir dir;
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"kind": "harmonic", "delta": 0.05, "n": 20, "format": "json"})";
  }
  const std::string cfg = (dir / "cfg.json").string();
  const std::string a = (dir / "a.json").string();
  ASSERT_EQ(run_cli({"mesh", "--config", cfg, "--out", a}).code, 0);
  auto rows = nlohmann::json::parse(slurp(a));
  ASSERT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows[0]["d"].get<double>(), 0.05);

  const std::string b = (dir / "b.csv").string();
  ASSERT_EQ(run_cli({"mesh", "--config", cfg, "--delta", "0.1", "--format", "csv", "--out", b}).code, 0);
  const io::Table t = io::read_csv_file(b);
  EXPECT_EQ(t.rows.size(), 20u);
  EXPECT_EQ(t.rows[0][1].get<double>(), 0.1);

  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"colour": 3})";
  }
  const CliResult r = run_cli({"mesh", "--config", (dir / "bad.json").string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_NE(r.err.find("colour"), std::string::npos);
}

TEST(Cli, IdenticalRunsAreByteIdentical) {
  TempDir dir;
  for (const std::string& name : {"one", "two"}) {
    ASSERT_EQ(run_cli({"verify", "--suite", "block", "--q1", "8", "--blocks", "2", "--seed", "4", "--out",
                   (dir / (name + ".json")).string()})
                  .code,
              0);
    ASSERT_EQ(run_cli({"export", "--kind", "block", "--blocks", "2", "--what", "plot", "--out",
                   (dir / (name + ".csv")).string()})
                  .code,
              0);
  }
  EXPECT_EQ(slurp(dir / "one.json"), slurp(dir / "two.json"));
  EXPECT_EQ(slurp(dir / "one.csv"), slurp(dir / "two.csv"));
}

TEST(Cli, StdoutTargetAndHelp) {
  const CliResult r = run_cli({"export", "--what", "coord", "--t-max", "1", "--samples", "3", "--k-max", "2", "--out", "-"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,k,u_k");
  EXPECT_EQ(count_lines(r.out), 10u);
  const CliResult h = run_cli({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("verify"), std::string::npos);
}

TEST(Cli, DefaultOutputNames) {
  cli::RunConfig cfg;
  cfg.command = cli::Command::verify;
  cfg.suite = cli::Suite::block;
  EXPECT_EQ(cli::default_output(cfg), "block_report.json");
  cfg.command = cli::Command::cesaro;
  cfg.format = io::Format::json;
  EXPECT_EQ(cli::default_output(cfg), "trace.json");
}
