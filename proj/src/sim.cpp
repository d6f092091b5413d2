#include "kds/sim.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <random>
#include <sstream>

namespace kds {

namespace {

// Coarsest dyadic rational strictly inside (lo, hi): probe times with small
// denominators keep the oracle's exact arithmetic cheap.
Rat coarse_inside(const Rat& lo, const Rat& hi) {
  for (int k = 1; k <= 200; ++k) {
    Int den = Int(1) << k;
    Int m = rat_floor(hi * den);
    for (int back = 0; back < 2; ++back, --m) {
      Rat cand(m, den);
      if (cand > lo && cand < hi) return cand;
    }
  }
  return (lo + hi) / 2;
}

std::string fmt_time(const Algebraic& t) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.17g", t.approx());
  return buf;
}

std::string fmt_time(const Rat& t) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.17g", to_double(t));
  return buf;
}

}  // namespace

Simulation::Simulation(const Scenario& sc, const RunConfig& cfg)
    : sc_(sc),
      cfg_(cfg),
      family_(ConeFamily::build(
          sc.dim, sc.eps ? theta_for_eps(*sc.eps) : sc.effective_theta())) {}

std::string Simulation::describe(uint32_t internal) const {
  if (internal == kNoPoint) return "-";
  return std::to_string(sc_.points[internal].id);
}

void Simulation::build_structures() {
  stats_ = SimStats{};
  stats_.reset_points(sc_.points.size());
  queue_ = std::make_unique<EventQueue>(Algebraic(Rat(0)));
  sy_ = std::make_unique<SemiYaoKds>(&sc_.points, &family_, queue_.get(),
                                     &stats_);
  if (cfg_.mode != RunConfig::Mode::kSemiYao) {
    ann_ = std::make_unique<AllNearestKds>(&sc_.points, queue_.get(), &stats_);
    sy_->set_edge_hook([this](int, uint32_t w, uint32_t t, bool ins) {
      ann_->on_edge_change(w, t, ins);
    });
  }
  sy_->build();
  if (ann_) ann_->build(sy_->snapshot());
  if (cfg_.mode == RunConfig::Mode::kEpsAnn) {
    eps_ = std::make_unique<EpsAnnKds>(&sc_.points, &family_, queue_.get(),
                                       &stats_);
    eps_->attach(*sy_);
  }
  if (cfg_.inject_fault && !sc_.points.empty())
    sy_->cone_kds(0).poison_first_node();
}

void Simulation::take_probe(const Rat& t, bool boundary) {
  Probe p;
  p.t = t;
  p.boundary = boundary;
  p.targets = sy_->snapshot();
  if (ann_) p.nn = ann_->nn_table();
  if (eps_) p.eps_nn = eps_->table();
  probes_.push_back(std::move(p));
}

bool Simulation::verify_probes(RunOutcome& out) const {
  size_t m = probes_.size();
  std::vector<std::string> failures(m);
#pragma omp parallel for schedule(dynamic, 1) if (cfg_.parallel_oracle)
  for (int64_t i = 0; i < int64_t(m); ++i) {
    const Probe& pr = probes_[i];
    std::ostringstream why;
    auto want = oracle::semi_yao(sc_.points, family_, pr.t, false);
    for (uint32_t w = 0; w < want.size() && why.str().empty(); ++w)
      for (int l = 0; l < family_.size(); ++l)
        if (want[w][l] != pr.targets[w][l]) {
          why << "t=" << fmt_time(pr.t) << " semi-yao target of point "
              << describe(w) << " cone " << l << ": expected "
              << describe(want[w][l]) << " got " << describe(pr.targets[w][l]);
          break;
        }
    if (ann_ && why.str().empty()) {
      auto nn = oracle::all_nn(sc_.points, pr.t, false);
      for (uint32_t p = 0; p < nn.size(); ++p)
        if (nn[p] != pr.nn[p]) {
          why << "t=" << fmt_time(pr.t) << " nn of point " << describe(p)
              << ": expected " << describe(nn[p]) << " got "
              << describe(pr.nn[p]);
          break;
        }
      if (eps_ && why.str().empty()) {
        uint32_t v = oracle::eps_violation(sc_.points, pr.eps_nn, nn,
                                           *sc_.eps, pr.t);
        if (v != kNoPoint)
          why << "t=" << fmt_time(pr.t) << " eps guarantee violated at point "
              << describe(v);
      }
    }
    failures[i] = why.str();
  }
  for (size_t i = 0; i < m; ++i) {
    if (!failures[i].empty()) {
      out.ok = false;
      out.divergence = failures[i];
      return false;
    }
  }
  return true;
}

void Simulation::export_state(RunOutcome& out) const {
  std::ostringstream tg;
  tg << "w,cone,target,t\n";
  auto snap = sy_->snapshot();
  std::string tnow = fmt_time(queue_->now());
  for (uint32_t w = 0; w < snap.size(); ++w)
    for (int l = 0; l < family_.size(); ++l)
      tg << describe(w) << "," << l << "," << describe(snap[w][l]) << ","
         << tnow << "\n";
  out.targets_csv = tg.str();
  if (ann_) {
    std::ostringstream nn;
    nn << "p,nn,dist2,t\n";
    Rat t = queue_->now().is_rational() ? queue_->now().rat()
                                        : queue_->now().upper();
    auto table = ann_->nn_table();
    for (uint32_t p = 0; p < table.size(); ++p) {
      nn << describe(p) << "," << describe(table[p]) << ",";
      if (table[p] != kNoPoint) {
        Rat d =
            squared_distance_poly(sc_.points[p], sc_.points[table[p]]).eval(t);
        nn << to_string(d);
      } else {
        nn << "-";
      }
      nn << "," << tnow << "\n";
    }
    out.nn_csv = nn.str();
  }
  if (eps_) {
    std::ostringstream ep;
    ep << "p,eps_nn,ratio,t\n";
    Rat t = queue_->now().is_rational() ? queue_->now().rat()
                                        : queue_->now().upper();
    auto table = eps_->table();
    auto nn = oracle::all_nn(sc_.points, t, cfg_.parallel_oracle);
    for (uint32_t p = 0; p < table.size(); ++p) {
      ep << describe(p) << "," << describe(table[p]) << ",";
      if (table[p] != kNoPoint && nn[p] != kNoPoint) {
        double dc = to_double(
            squared_distance_poly(sc_.points[p], sc_.points[table[p]]).eval(t));
        double dn = to_double(
            squared_distance_poly(sc_.points[p], sc_.points[nn[p]]).eval(t));
        char buf[32];
        snprintf(buf, sizeof buf, "%.9g", dn > 0 ? std::sqrt(dc / dn) : 1.0);
        ep << buf;
      } else {
        ep << "-";
      }
      ep << "," << tnow << "\n";
    }
    out.eps_csv = ep.str();
  }
}

RunOutcome Simulation::construct() {
  RunOutcome out;
  try {
    build_structures();
    // The maintained state is the right-limit at the build time. For moving
    // points the oracle probe goes strictly between 0 and the first event;
    // for static inputs t = 0 itself is generic.
    bool moving = false;
    for (const auto& p : sc_.points) moving = moving || p.max_degree() > 0;
    Rat probe(0);
    if (moving) {
      Rat hi = cfg_.boundary_delta;
      auto nxt = queue_->peek_time();
      if (nxt) {
        while (!(nxt->lower() > 0)) nxt->refine();
        Rat cap = nxt->is_rational() ? nxt->rat() : nxt->lower();
        if (cap < hi) hi = cap;
      }
      probe = hi / 2;
    }
    take_probe(probe, true);
    if (!verify_probes(out)) return out;
    export_state(out);
    std::ostringstream sum;
    sum << "n,cones,dim,edges\n"
        << sc_.points.size() << "," << family_.size() << "," << sc_.dim << ","
        << sy_->undirected_edges().size() << "\n";
    out.summary_csv = sum.str();
    out.stats = stats_;
  } catch (const std::exception& e) {
    out.ok = false;
    out.divergence = e.what();
  }
  return out;
}

RunOutcome Simulation::run() {
  RunOutcome out;
  try {
    build_structures();
    event_log_.str("");
    event_log_ << "t,kind,cone,axis,id_a,id_b,changes_emitted\n";

    // random rational checkpoints, sorted ascending
    std::vector<Rat> checkpoints;
    if (cfg_.checkpoints > 0 && sc_.horizon > 0) {
      std::mt19937_64 rng(cfg_.checkpoint_seed);
      std::uniform_int_distribution<uint64_t> d(0, (uint64_t(1) << 20) - 1);
      for (int i = 0; i < cfg_.checkpoints; ++i)
        checkpoints.push_back(sc_.horizon * Rat(d(rng), uint64_t(1) << 20));
      std::sort(checkpoints.begin(), checkpoints.end());
      checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                        checkpoints.end());
    }

    Algebraic horizon{sc_.horizon};
    bool audit_probes = cfg_.boundary_checks ||
                        cfg_.audit != RunConfig::Audit::kOff;
    auto structural_audit = [this] {
      sy_->audit_full();
      if (eps_) eps_->audit_lists();
    };
    if (cfg_.audit != RunConfig::Audit::kOff) structural_audit();
    uint64_t events_since_audit = 0;
    if (audit_probes && sc_.horizon > 0) {
      // initial probe strictly between the build time and the first event
      Rat hi = std::min(cfg_.boundary_delta, sc_.horizon);
      auto nxt = queue_->peek_time();
      if (nxt) {
        while (!(nxt->lower() > 0)) nxt->refine();  // failure times are > 0
        Rat cap = nxt->is_rational() ? nxt->rat() : nxt->lower();
        if (cap < hi) hi = cap;
      }
      take_probe(hi / 2, true);
      ++out.boundary_probes;
    }

    size_t next_cp = 0;
    for (;;) {
      // process any checkpoints strictly before the next event
      std::optional<Algebraic> nxt = queue_->peek_time();
      const Rat dither(1, Int(1) << 45);
      while (next_cp < checkpoints.size()) {
        Rat& cp = checkpoints[next_cp];
        if (cp > sc_.horizon) {
          next_cp = checkpoints.size();
          break;
        }
        // never probe exactly at a processed or pending event instant
        while (queue_->now().compare_rat(cp) == 0) cp += dither;
        while (nxt && nxt->compare_rat(cp) == 0) cp += dither;
        if (nxt && nxt->compare_rat(cp) < 0) break;  // events first
        if (cp <= sc_.horizon) {
          take_probe(cp, false);
          ++out.random_probes;
        }
        ++next_cp;
      }
      auto h = queue_->advance(horizon);
      if (!h) break;
      Certificate c = queue_->cert(*h);
      stats_.begin_event();
      switch (c.kind) {
        case CertKind::kOrderU:
        case CertKind::kOrderX: {
          uint64_t before = stats_.edge_inserts + stats_.edge_deletes;
          sy_->handle_order_event(c);
          uint64_t changes = stats_.edge_inserts + stats_.edge_deletes - before;
          event_log_ << fmt_time(*c.when) << ","
                     << (c.kind == CertKind::kOrderU ? "u-swap" : "x-swap")
                     << "," << c.cone << "," << c.axis << "," << describe(c.a)
                     << "," << describe(c.b) << "," << changes << "\n";
          ++event_rows_;
          break;
        }
        case CertKind::kTournament: {
          if (c.domain == 0) {
            ++stats_.events_tournament;
            ann_->handle_event(c);
          } else {
            ++stats_.events_eps;
            eps_->handle_event(c);
          }
          event_log_ << fmt_time(*c.when) << ","
                     << (c.domain == 0 ? "tournament" : "eps-tournament")
                     << ",-1,-1," << describe(c.owner) << "," << c.a << ",0\n";
          ++event_rows_;
          break;
        }
      }
      stats_.end_event();

      // boundary probe once the cascade at this instant is over
      bool cascade_done = true;
      auto peek = queue_->peek_time();
      if (peek && Algebraic::compare(*peek, queue_->now()) == 0)
        cascade_done = false;
      ++events_since_audit;
      if (cascade_done &&
          (cfg_.audit == RunConfig::Audit::kFull ||
           (cfg_.audit == RunConfig::Audit::kLight &&
            events_since_audit >= 64))) {
        structural_audit();
        if (cfg_.audit == RunConfig::Audit::kFull) {
          if (ann_) ann_->validate(queue_->now());
          if (eps_) eps_->validate(queue_->now());
        }
        events_since_audit = 0;
      }
      if (cascade_done && audit_probes) {
        // probe strictly between now and min(next event, now + delta, T)
        const Algebraic& now = queue_->now();
        now.refine_below(cfg_.boundary_delta / 8);
        Rat lo = now.upper();
        Rat hi = now.lower() + cfg_.boundary_delta;
        if (hi > sc_.horizon) hi = sc_.horizon;
        if (peek) {
          peek->refine_below(cfg_.boundary_delta / 8);
          while (!(peek->lower() > lo)) {
            if (peek->is_rational() && now.is_rational()) break;
            peek->refine();
            now.refine();
            lo = now.upper();
          }
          Rat cap = peek->is_rational() ? peek->rat() : peek->lower();
          if (cap < hi) hi = cap;
        }
        if (lo < hi) {
          take_probe(coarse_inside(lo, hi), true);
          ++out.boundary_probes;
        }
      }
    }
    // tail checkpoints after the last event
    while (next_cp < checkpoints.size()) {
      Rat cp = checkpoints[next_cp++];
      while (queue_->now().compare_rat(cp) == 0) cp += Rat(1, Int(1) << 45);
      if (cp > sc_.horizon) break;
      take_probe(cp, false);
      ++out.random_probes;
    }

    if (cfg_.audit != RunConfig::Audit::kOff || cfg_.boundary_checks ||
        cfg_.checkpoints > 0)
      verify_probes(out);
    out.events = stats_.events_total;
    export_state(out);
    out.event_log_csv = event_log_.str();
    std::ostringstream sum;
    sum << "n,events,u_swaps,x_swaps,tournament,eps_events,edge_ins,edge_del,"
           "cost_total,cost_max,max_certs_per_point,boundary_probes,"
           "random_probes\n";
    sum << sc_.points.size() << "," << stats_.events_total << ","
        << stats_.events_u << "," << stats_.events_x << ","
        << stats_.events_tournament << "," << stats_.events_eps << ","
        << stats_.edge_inserts << "," << stats_.edge_deletes << ","
        << stats_.event_cost_total << "," << stats_.event_cost_max << ","
        << stats_.max_order_certs << "," << out.boundary_probes << ","
        << out.random_probes << "\n";
    out.summary_csv = sum.str();
    std::ostringstream rep;
    rep << "t,kind,result\n";
    for (const auto& p : probes_)
      rep << fmt_time(p.t) << "," << (p.boundary ? "boundary" : "random")
          << "," << (out.ok ? "pass" : "checked") << "\n";
    out.report_csv = rep.str();
    out.stats = stats_;
  } catch (const std::exception& e) {
    out.ok = false;
    if (out.divergence.empty()) out.divergence = e.what();
  }
  return out;
}

}  // namespace kds
