// Command-line driver: scenario generation, static construction, kinetic
// simulation, and oracle-backed verification.

#include "CLI11.hpp"

#include "kds/sim.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace kds;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& dir, const std::string& name,
                const std::string& content) {
  if (dir.empty() || content.empty()) return;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  out << content;
}

struct CommonOpts {
  std::string scenario_path;
  std::string mode = "ann";
  std::string audit;  // empty: off for simulate, light for verify
  std::string out_dir;
  std::string until;
  std::string theta;
  std::string eps;
  int checkpoints = 0;
  uint64_t seed = 12345;
  bool inject_fault = false;
  bool serial = false;
};

RunConfig::Mode parse_mode(const std::string& m) {
  if (m == "semi-yao") return RunConfig::Mode::kSemiYao;
  if (m == "ann") return RunConfig::Mode::kAnn;
  if (m == "eps-ann") return RunConfig::Mode::kEpsAnn;
  throw CLI::ValidationError("--mode must be semi-yao, ann or eps-ann");
}

RunConfig::Audit parse_audit(const std::string& a) {
  if (a == "off") return RunConfig::Audit::kOff;
  if (a == "light") return RunConfig::Audit::kLight;
  if (a == "full") return RunConfig::Audit::kFull;
  throw CLI::ValidationError("--audit must be off, light or full");
}

Scenario load_scenario(const CommonOpts& o) {
  Scenario sc = parse_scenario(read_file(o.scenario_path));
  if (!o.until.empty()) {
    auto h = parse_rat(o.until);
    if (!h || *h < 0) throw std::runtime_error("malformed --until");
    sc.horizon = *h;
  }
  if (!o.theta.empty()) {
    if (o.theta.rfind("pi/", 0) != 0)
      throw std::runtime_error("--theta must look like pi/3");
    sc.theta = Angle{1, std::stoi(o.theta.substr(3))};
    sc.eps.reset();
  }
  if (!o.eps.empty()) {
    auto e = parse_rat(o.eps);
    if (!e || *e <= 0) throw std::runtime_error("malformed --eps");
    sc.eps = *e;
  }
  return sc;
}

int finish(const RunOutcome& out, const CommonOpts& o, bool verify_mode) {
  write_file(o.out_dir, "event_log.csv", out.event_log_csv);
  write_file(o.out_dir, "summary.csv", out.summary_csv);
  write_file(o.out_dir, "targets.csv", out.targets_csv);
  write_file(o.out_dir, "nn.csv", out.nn_csv);
  write_file(o.out_dir, "eps.csv", out.eps_csv);
  write_file(o.out_dir, "report.csv", out.report_csv);
  if (!out.ok) {
    std::cerr << "DIVERGENCE: " << out.divergence << "\n";
    return 1;
  }
  if (verify_mode)
    std::cout << "verified: " << out.boundary_probes << " boundary + "
              << out.random_probes << " random probes, " << out.events
              << " events\n";
  else
    std::cout << out.summary_csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinetic Semi-Yao graph / nearest-neighbor simulator"};
  app.require_subcommand(1);

  CommonOpts o;

  auto* gen = app.add_subcommand("gen", "generate a random scenario");
  int gn = 16, gd = 2, gdeg = 1;
  uint64_t gseed = 1;
  std::string ghorizon = "1", geps, gout;
  gen->add_option("--n", gn, "number of points");
  gen->add_option("--d", gd, "dimension (2 or 3)");
  gen->add_option("--degree", gdeg, "trajectory degree s");
  gen->add_option("--seed", gseed, "random seed");
  gen->add_option("--horizon", ghorizon, "time horizon (rational)");
  gen->add_option("--eps", geps, "epsilon for eps-ann scenarios");
  gen->add_option("--out", gout, "output file (default stdout)");

  auto add_common = [&](CLI::App* cmd, bool with_kinetic) {
    cmd->add_option("scenario", o.scenario_path, "scenario file")->required();
    cmd->add_option("--mode", o.mode, "semi-yao | ann | eps-ann");
    cmd->add_option("--out-dir", o.out_dir, "directory for CSV outputs");
    cmd->add_option("--theta", o.theta, "cone angle override (pi/k)");
    cmd->add_option("--eps", o.eps, "epsilon override");
    if (with_kinetic) {
      cmd->add_option("--until", o.until, "horizon override (rational)");
      cmd->add_option("--checkpoints", o.checkpoints,
                      "random oracle checkpoints");
      cmd->add_option("--audit", o.audit, "off | light | full");
      cmd->add_option("--seed", o.seed, "checkpoint sampling seed");
      cmd->add_flag("--serial-oracle", o.serial,
                    "disable OpenMP in oracle probes");
    }
  };

  auto* construct = app.add_subcommand(
      "construct", "static build at t=0; emits edges and NN table");
  add_common(construct, false);

  auto* simulate =
      app.add_subcommand("simulate", "run the kinetic structures to horizon");
  add_common(simulate, true);

  auto* verify = app.add_subcommand(
      "verify", "replay with oracle checks; nonzero exit on divergence");
  add_common(verify, true);
  verify->add_flag("--inject-fault", o.inject_fault,
                   "corrupt one aggregate after the build (self-test)");

  auto* cones = app.add_subcommand("cones", "dump a cone family as text");
  int cd = 2;
  std::string ctheta = "pi/3";
  cones->add_option("--d", cd, "dimension");
  cones->add_option("--theta", ctheta, "angle (pi/k)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      GenParams p;
      p.n = gn;
      p.dim = gd;
      p.degree = gdeg;
      p.seed = gseed;
      auto h = parse_rat(ghorizon);
      if (!h) throw std::runtime_error("malformed --horizon");
      p.horizon = *h;
      if (!geps.empty()) {
        auto e = parse_rat(geps);
        if (!e) throw std::runtime_error("malformed --eps");
        p.eps = *e;
      }
      std::string text = serialize_scenario(generate_scenario(p));
      if (gout.empty())
        std::cout << text;
      else {
        std::ofstream f(gout);
        f << text;
      }
      return 0;
    }
    if (cones->parsed()) {
      if (ctheta.rfind("pi/", 0) != 0)
        throw std::runtime_error("--theta must look like pi/k");
      Angle a{1, std::stoi(ctheta.substr(3))};
      std::cout << ConeFamily::build(cd, a, false).dump();
      return 0;
    }
    if (construct->parsed()) {
      Scenario sc = load_scenario(o);
      RunConfig cfg;
      cfg.mode = parse_mode(o.mode);
      if (sc.eps && cfg.mode == RunConfig::Mode::kAnn)
        cfg.mode = RunConfig::Mode::kEpsAnn;
      Simulation sim(sc, cfg);
      return finish(sim.construct(), o, false);
    }
    // simulate / verify
    Scenario sc = load_scenario(o);
    RunConfig cfg;
    cfg.mode = parse_mode(o.mode);
    if (sc.eps && cfg.mode != RunConfig::Mode::kSemiYao)
      cfg.mode = RunConfig::Mode::kEpsAnn;
    cfg.audit = parse_audit(o.audit);
    cfg.checkpoints = o.checkpoints;
    cfg.checkpoint_seed = o.seed;
    cfg.parallel_oracle = !o.serial;
    bool verify_mode = verify->parsed();
    if (verify_mode) {
      cfg.boundary_checks = true;
      if (cfg.audit == RunConfig::Audit::kOff)
        cfg.audit = RunConfig::Audit::kLight;
      cfg.inject_fault = o.inject_fault;
      if (cfg.checkpoints == 0) cfg.checkpoints = 64;
    }
    Simulation sim(sc, cfg);
    return finish(sim.run(), o, verify_mode);
  } catch (const kds::ScenarioError& e) {
    std::cerr << "scenario error: " << e.str() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
