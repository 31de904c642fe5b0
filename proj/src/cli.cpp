#include "fne/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include "fne/orbit.hpp"
#include "fne/verify.hpp"

namespace fne::cli {

namespace {

const std::map<std::string, MeshKind> kKinds{{"harmonic", MeshKind::harmonic}, {"block", MeshKind::block}};
const std::map<std::string, io::Format> kFormats{{"csv", io::Format::csv}, {"json", io::Format::json}};
const std::map<std::string, Suite> kSuites{
    {"harmonic", Suite::harmonic}, {"block", Suite::block}, {"aux", Suite::aux}, {"curve", Suite::curve}};
const std::map<std::string, ExportWhat> kExports{{"plot", ExportWhat::plot},
                                                 {"blocks", ExportWhat::blocks},
                                                 {"summary", ExportWhat::summary},
                                                 {"coord", ExportWhat::coord},
                                                 {"l2", ExportWhat::l2}};

template <class E>
E lookup(const std::map<std::string, E>& table, const std::string& value, const std::string& flag) {
  auto it = table.find(value);
  if (it == table.end()) {
    std::string choices;
    for (const auto& [name, _] : table) choices += (choices.empty() ? "" : "|") + name;
    throw UsageError(flag + " " + value + " is not one of {" + choices + "}");
  }
  return it->second;
}

template <class E>
std::string name_of(const std::map<std::string, E>& table, E value) {
  for (const auto& [name, v] : table)
    if (v == value) return name;
  return "?";
}

std::string text(double x) {
  std::ostringstream ss;
  ss << x;
  return ss.str();
}

struct RawFlags {
  std::string kind = "harmonic";
  std::string format = "csv";
  std::string suite = "harmonic";
  std::string what = "plot";
  std::string config;
};

// Config keys mirror the long flag names with '-' replaced by '_'.
void apply_config(const std::string& path, const std::map<std::string, CLI::Option*>& given, RunConfig& cfg,
                  RawFlags& raw) {
  std::ifstream is(path);
  if (!is) throw UsageError("--config " + path + " cannot be opened");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config " + path + " is not valid JSON");
  }
  if (!doc.is_object()) throw UsageError("--config " + path + " must hold a JSON object");

  using Setter = std::function<void(const nlohmann::json&)>;
  const std::map<std::string, Setter> setters{
      {"kind", [&](const nlohmann::json& v) { raw.kind = v.get<std::string>(); }},
      {"delta", [&](const nlohmann::json& v) { cfg.delta = v.get<double>(); }},
      {"q1", [&](const nlohmann::json& v) { cfg.q1 = v.get<std::int64_t>(); }},
      {"blocks", [&](const nlohmann::json& v) { cfg.blocks = v.get<std::size_t>(); }},
      {"n", [&](const nlohmann::json& v) { cfg.n = v.get<std::size_t>(); }},
      {"q_override", [&](const nlohmann::json& v) { cfg.q_override = v.get<std::vector<std::int64_t>>(); }},
      {"seed", [&](const nlohmann::json& v) { cfg.seed = v.get<std::uint64_t>(); }},
      {"threads", [&](const nlohmann::json& v) { cfg.threads = v.get<unsigned>(); }},
      {"pair_budget", [&](const nlohmann::json& v) { cfg.pair_budget = v.get<std::size_t>(); }},
      {"out", [&](const nlohmann::json& v) { cfg.out = v.get<std::string>(); }},
      {"format", [&](const nlohmann::json& v) { raw.format = v.get<std::string>(); }},
      {"suite", [&](const nlohmann::json& v) { raw.suite = v.get<std::string>(); }},
      {"what", [&](const nlohmann::json& v) { raw.what = v.get<std::string>(); }},
      {"t_max", [&](const nlohmann::json& v) { cfg.t_max = v.get<double>(); }},
      {"samples", [&](const nlohmann::json& v) { cfg.samples = v.get<std::size_t>(); }},
      {"k_max", [&](const nlohmann::json& v) { cfg.k_max = v.get<std::size_t>(); }},
  };
  for (const auto& [key, value] : doc.items()) {
    auto setter = setters.find(key);
    if (setter == setters.end()) throw UsageError("--config key '" + key + "' is not a known flag");
    auto opt = given.find(key);
    if (opt != given.end() && opt->second->count() > 0) continue;
    if (value.is_number() && value.get<double>() < 0 && key != "delta" && key != "t_max")
      throw UsageError("--config key '" + key + "' must be non-negative");
    try {
      setter->second(value);
    } catch (const nlohmann::json::exception&) {
      throw UsageError("--config key '" + key + "' has the wrong type");
    }
  }
}

void validate(const RunConfig& cfg) {
  const bool harmonic = cfg.command == Command::verify ? cfg.suite == Suite::harmonic : cfg.kind == MeshKind::harmonic;
  const bool block = cfg.command == Command::verify ? cfg.suite == Suite::block : cfg.kind == MeshKind::block;
  if (harmonic && !(cfg.delta > 0.0 && cfg.delta <= 0.125))
    throw UsageError("--delta " + text(cfg.delta) + " must lie in (0, 1/8]");
  if (harmonic && cfg.n < 2) throw UsageError("--n " + std::to_string(cfg.n) + " must be at least 2");
  if (block && cfg.q1 < 8) throw UsageError("--q1 " + std::to_string(cfg.q1) + " must be at least 8");
  if (block && cfg.blocks < (cfg.command == Command::verify ? 2u : 1u))
    throw UsageError("--blocks " + std::to_string(cfg.blocks) + " is too small");
  if (block && cfg.blocks > 12) throw UsageError("--blocks " + std::to_string(cfg.blocks) + " exceeds 12");
  if (cfg.pair_budget == 0) throw UsageError("--pair-budget must be positive");
  if (!(cfg.t_max > 0.0)) throw UsageError("--t-max " + text(cfg.t_max) + " must be positive");
  if (cfg.samples < 1) throw UsageError("--samples must be at least 1");
}

std::ostream* open_target(const std::string& path, std::ofstream& file, std::ostream& out) {
  if (path == "-") return &out;
  file.open(path, std::ios::binary);
  if (!file) throw UsageError("--out " + path + " cannot be opened for writing");
  return &file;
}

void emit(const std::string& path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
  std::ofstream file;
  std::ostream* os = open_target(path, file, out);
  body(*os);
  os->flush();
  if (!*os) throw UsageError("--out " + path + " could not be written");
}

std::string sibling(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix + p.extension().string())).string();
}

Mesh build_mesh(const RunConfig& cfg) {
  if (cfg.kind == MeshKind::harmonic) return build_harmonic_mesh(cfg.delta, cfg.n);
  BlockMeshOptions options;
  options.q_override = cfg.q_override;
  try {
    return build_block_mesh(cfg.q1, cfg.blocks, options);
  } catch (const std::invalid_argument& e) {
    if (!cfg.q_override.empty()) throw UsageError(std::string("--q-override: ") + e.what());
    throw;
  }
}

verify::SuiteOptions suite_options(const RunConfig& cfg) {
  verify::SuiteOptions o;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  o.pair_budget = cfg.pair_budget;
  o.q_override = cfg.q_override;
  return o;
}

MeshValidationOptions mesh_options(const RunConfig& cfg) {
  MeshValidationOptions o;
  o.pair_budget = cfg.pair_budget;
  o.seed = cfg.seed;
  o.threads = cfg.threads;
  return o;
}

std::vector<double> grid(double lo, double hi, std::size_t count) {
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

CesaroTrace trace_for(const Orbit& orbit, const RunConfig& cfg) {
  std::size_t upto = orbit.mesh().size();
  if (cfg.kind == MeshKind::block && cfg.n != 0) upto = std::min(upto, cfg.n);
  CesaroOptions options;
  options.threads = cfg.threads;
  return cesaro_norms(orbit, upto, {}, options);
}

}  // namespace

std::string default_output(const RunConfig& cfg) {
  const std::string ext = cfg.format == io::Format::csv ? ".csv" : ".json";
  switch (cfg.command) {
    case Command::mesh: return "mesh" + ext;
    case Command::orbit: return "orbit" + ext;
    case Command::cesaro: return "trace" + ext;
    case Command::verify: return name_of(kSuites, cfg.suite) + "_report.json";
    case Command::export_data: return name_of(kExports, cfg.what) + ext;
  }
  return "out" + ext;
}

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Firmly nonexpansive orbits with non-convergent Cesaro means", "fne"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  RunConfig cfg;
  RawFlags raw;
  std::map<std::string, CLI::Option*> given;

  struct Sub {
    Command command;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {Command::mesh, "mesh", "Build and validate a mesh, write n,d,t,block"},
      {Command::orbit, "orbit", "Build the orbit, run its identity and firm checks, write n,t,rho"},
      {Command::cesaro, "cesaro", "Stream Cesaro mean norms, write n,t,rho,y_norm"},
      {Command::verify, "verify", "Run a verification suite and write its JSON report"},
      {Command::export_data, "export", "Write plot data, block tables or curve samples"},
  };
  std::vector<std::pair<CLI::App*, Command>> apps;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    apps.emplace_back(sub, s.command);
    sub->add_option("--kind", raw.kind, "harmonic|block");
    sub->add_option("--delta", cfg.delta, "Harmonic scale, 0 < delta <= 1/8");
    sub->add_option("--q1", cfg.q1, "First block parameter Q_1 >= 8");
    sub->add_option("--blocks", cfg.blocks, "Number of blocks");
    sub->add_option("--n", cfg.n, "Harmonic steps, or Cesaro cutoff for block meshes");
    sub->add_option("--q-override", cfg.q_override, "Explicit Q_2, Q_3, ... (each at least the minimal one)");
    sub->add_option("--seed", cfg.seed, "Seed for sampled checks");
    sub->add_option("--threads", cfg.threads, "Worker threads, 0 for all cores");
    sub->add_option("--pair-budget", cfg.pair_budget, "Pair count above which pair sweeps are sampled");
    sub->add_option("--out", cfg.out, "Output path, - for standard output");
    sub->add_option("--format", raw.format, "csv|json");
    sub->add_option("--config", raw.config, "JSON file with flag values; flags win");
    if (s.command == Command::verify) sub->add_option("--suite", raw.suite, "harmonic|block|aux|curve");
    if (s.command == Command::export_data) {
      sub->add_option("--what", raw.what, "plot|blocks|summary|coord|l2");
      sub->add_option("--t-max", cfg.t_max, "Curve samples: largest t");
      sub->add_option("--samples", cfg.samples, "Curve samples: number of t values");
      sub->add_option("--k-max", cfg.k_max, "Curve samples: largest coordinate index");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (auto nl = msg.find('\n'); nl != std::string::npos) msg.resize(nl);
    throw UsageError(msg);
  }

  CLI::App* chosen = nullptr;
  for (auto& [sub, command] : apps)
    if (sub->parsed()) {
      chosen = sub;
      cfg.command = command;
    }
  for (const char* key : {"kind", "delta", "q1", "blocks", "n", "q_override", "seed", "threads", "pair_budget",
                          "out", "format", "suite", "what", "t_max", "samples", "k_max"}) {
    std::string flag = std::string("--") + key;
    for (char& c : flag)
      if (c == '_') c = '-';
    if (CLI::Option* opt = chosen->get_option_no_throw(flag)) given[key] = opt;
  }
  if (!raw.config.empty()) apply_config(raw.config, given, cfg, raw);

  cfg.kind = lookup(kKinds, raw.kind, "--kind");
  cfg.format = lookup(kFormats, raw.format, "--format");
  cfg.suite = lookup(kSuites, raw.suite, "--suite");
  cfg.what = lookup(kExports, raw.what, "--what");

  const bool n_set = given.count("n") && given.at("n")->count() > 0;
  if (cfg.n == 0 && !n_set) {
    const bool harmonic = cfg.command == Command::verify ? cfg.suite == Suite::harmonic : cfg.kind == MeshKind::harmonic;
    if (harmonic) cfg.n = kDefaultHarmonicSteps;
  }
  validate(cfg);
  return cfg;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string path = cfg.out.empty() ? default_output(cfg) : cfg.out;
  std::ostream& log = path == "-" ? err : out;

  switch (cfg.command) {
    case Command::mesh: {
      const Mesh mesh = build_mesh(cfg);
      VerificationReport report = validate_mesh(mesh, mesh_options(cfg));
      emit(path, out, [&](std::ostream& os) { io::write(os, io::mesh_table(mesh), cfg.format); });
      log << report.summary_line() << '\n';
      return report.all_passed() ? kExitPass : kExitCheckFailure;
    }
    case Command::orbit: {
      Mesh mesh = build_mesh(cfg);
      VerificationReport report("orbit", cfg.seed);
      report.merge(validate_mesh(mesh, mesh_options(cfg)));
      if (!report.all_passed()) {
        log << report.summary_line() << '\n';
        return kExitCheckFailure;
      }
      const Orbit orbit(std::move(mesh));
      verify::append_orbit_checks(report, orbit, suite_options(cfg));
      emit(path, out, [&](std::ostream& os) { io::write(os, io::orbit_table(orbit), cfg.format); });
      log << report.summary_line() << '\n';
      return report.all_passed() ? kExitPass : kExitCheckFailure;
    }
    case Command::cesaro: {
      const Orbit orbit(build_mesh(cfg));
      const CesaroTrace trace = trace_for(orbit, cfg);
      emit(path, out, [&](std::ostream& os) { io::write(os, io::trace_table(orbit, trace), cfg.format); });
      if (const BlockMeta* meta = orbit.mesh().block_meta(); meta && path != "-") {
        io::write_file(sibling(path, "_blocks"), io::block_summary_table(*meta, trace), cfg.format);
      }
      return kExitPass;
    }
    case Command::verify: {
      VerificationReport report;
      const verify::SuiteOptions options = suite_options(cfg);
      switch (cfg.suite) {
        case Suite::harmonic: report = verify::suite_harmonic(cfg.delta, cfg.n, options); break;
        case Suite::block: report = verify::suite_block(cfg.q1, cfg.blocks, options); break;
        case Suite::aux: {
          verify::AuxiliaryOptions aux;
          aux.seed = cfg.seed;
          report = verify::suite_auxiliary(aux);
          break;
        }
        case Suite::curve: {
          verify::RealizationOptions real;
          real.seed = cfg.seed;
          report = verify::suite_realization(real);
          break;
        }
      }
      emit(path, out, [&](std::ostream& os) { os << report.dump_json(); });
      log << report.summary_line() << '\n';
      return report.all_passed() ? kExitPass : kExitCheckFailure;
    }
    case Command::export_data: {
      io::Table table;
      if (cfg.what == ExportWhat::coord || cfg.what == ExportWhat::l2) {
        const auto ts = grid(0.0, cfg.t_max, cfg.samples);
        if (cfg.what == ExportWhat::coord) {
          table = io::coord_samples_table(ts, cfg.k_max);
        } else {
          const auto rs = grid(-6.0, 2.0 * cfg.t_max + 6.0, 4 * cfg.samples + 1);
          table = io::l2_samples_table(ts, rs);
        }
      } else {
        const Orbit orbit(build_mesh(cfg));
        const BlockMeta* meta = orbit.mesh().block_meta();
        if (cfg.what != ExportWhat::plot && !meta)
          throw UsageError("--what " + name_of(kExports, cfg.what) + " needs --kind block");
        if (cfg.what == ExportWhat::blocks) {
          table = io::block_meta_table(*meta);
        } else {
          const CesaroTrace trace = trace_for(orbit, cfg);
          table = cfg.what == ExportWhat::plot ? io::plot_table(trace, meta) : io::block_summary_table(*meta, trace);
        }
      }
      emit(path, out, [&](std::ostream& os) { io::write(os, table, cfg.format); });
      return kExitPass;
    }
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    return run(parse_args(argc, argv), out, err);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitPass;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace fne::cli
