#pragma once

#include "kds/ann.hpp"
#include "kds/eps_ann.hpp"
#include "kds/oracle.hpp"
#include "kds/scenario.hpp"
#include "kds/sygraph.hpp"

#include <memory>

namespace kds {

struct RunConfig {
  enum class Mode { kSemiYao, kAnn, kEpsAnn };
  enum class Audit { kOff, kLight, kFull };
  Mode mode = Mode::kAnn;
  Audit audit = Audit::kOff;
  int checkpoints = 0;           // random oracle checkpoints over [0, T]
  bool boundary_checks = false;  // oracle probe after every event boundary
  uint64_t checkpoint_seed = 12345;
  bool parallel_oracle = true;
  bool inject_fault = false;  // corrupt one aggregate after the build
  Rat boundary_delta = Rat(1, 10000000);  // probe offset cap after events
};

struct RunOutcome {
  SimStats stats;
  bool ok = true;
  std::string divergence;  // first divergence / audit failure detail
  uint64_t boundary_probes = 0;
  uint64_t random_probes = 0;
  uint64_t events = 0;
  std::string event_log_csv;
  std::string summary_csv;
  std::string targets_csv;  // final Semi-Yao targets
  std::string nn_csv;       // final nearest-neighbor table
  std::string eps_csv;      // final eps-nn table with achieved ratios
  std::string report_csv;   // one row per oracle probe
};

// Event-driven run of the kinetic structures over [0, horizon], with
// batched oracle verification at probe times. The event loop is single
// threaded; oracle probes are pure functions of (scenario, t) and fan out
// across threads.
class Simulation {
 public:
  Simulation(const Scenario& sc, const RunConfig& cfg);
  RunOutcome run();

  // Static build + exports only (construct command).
  RunOutcome construct();

 private:
  struct Probe {
    Rat t;
    bool boundary;
    std::vector<std::vector<uint32_t>> targets;
    std::vector<uint32_t> nn;
    std::vector<uint32_t> eps_nn;
  };

  void build_structures();
  void take_probe(const Rat& t, bool boundary);
  bool verify_probes(RunOutcome& out) const;
  void export_state(RunOutcome& out) const;
  std::string describe(uint32_t internal) const;  // original id for CSV

  Scenario sc_;
  RunConfig cfg_;
  ConeFamily family_;
  SimStats stats_;
  std::unique_ptr<EventQueue> queue_;
  std::unique_ptr<SemiYaoKds> sy_;
  std::unique_ptr<AllNearestKds> ann_;
  std::unique_ptr<EpsAnnKds> eps_;
  std::vector<Probe> probes_;
  std::ostringstream event_log_;
  uint64_t event_rows_ = 0;
};

}  // namespace kds
