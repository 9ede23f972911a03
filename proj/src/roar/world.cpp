#include "roar/world.hpp"

#include <cmath>

#include "roar/dictionary.hpp"
#include "roar/log.hpp"

namespace roar {

struct World::SimAgent {
  AgentConfig cfg;
  std::string produces;  // stream id, empty for idle externals/helpers
  Rng latency_rng;

  // child
  std::unique_ptr<ChildAgent> child;
  Money child_pay_rate = 0.0;  // per-round rate in force this epoch

  // parent
  std::unique_ptr<ParentAgent> parent;
  std::vector<std::string> child_streams;  // by child position
  struct PartialObs {
    std::vector<std::optional<double>> xhat, xtruth;
    std::optional<double> y;
  };
  std::map<std::uint64_t, PartialObs> pending;
  std::vector<double> obs_xhat, obs_xtruth, obs_y;  // row-flattened
  std::uint64_t obs_rows = 0;
  std::uint64_t dropped_rows = 0;
  std::vector<std::vector<std::pair<Money, double>>> pay_precision;  // per child
  std::vector<Money> rate_in_force;  // per child, during the current epoch
  bool fresh_fit = false;

  // stacker
  Rng noise_rng;
  std::map<std::uint64_t, double> raw_by_round;
  std::string err_stream;

  // error helper
  double err_sum = 0.0;
  std::uint64_t err_rounds = 0;

  // matching pursuit
  Dictionary dict;
  Eigen::VectorXd approx;
  Eigen::VectorXd residual;
  bool residual_ready = false;
  std::size_t steps = 0;

  // instrumentation + per-epoch accumulators
  Timestamp last_reveal_seen = -1;
  double epoch_sq_sum = 0.0;
  std::uint64_t epoch_scored = 0;
  Money epoch_income = 0.0;
  Money pending_pay = 0.0;  // allocation arriving at the boundary
  Money funded_rate = 0.0;  // per-round funding in force (pot contribution)
};

World::~World() = default;

World::World(Scenario scenario, std::optional<std::uint64_t> seed_override)
    : scenario_(std::move(scenario)) {
  if (seed_override) scenario_.seed = *seed_override;
  scenario_.validate();
  seed_ = scenario_.seed;

  // Streams in generator dependency order; stacker error streams appended.
  for (std::size_t idx : scenario_.stream_topo_order())
    streams_.push_back(scenario_.streams[idx]);
  for (const auto& a : scenario_.agents) {
    if (a.type == AgentConfig::Type::Stacker && !a.helper.empty()) {
      const StreamConfig* target = scenario_.find_stream(a.stream);
      StreamConfig err;
      err.spec.stream_id = a.id + ".err";
      err.spec.cadence_ms = target->spec.cadence_ms;
      // Error truth is only known one tick after the target reveal.
      err.spec.deadline_ms = target->spec.deadline_ms + 1;
      err.spec.pot = a.helper_pot;
      err.spec.value_dim = 1;
      streams_.push_back(std::move(err));
    }
  }
  for (std::size_t i = 0; i < streams_.size(); ++i)
    stream_index_[streams_[i].spec.stream_id] = i;

  for (const auto& s : streams_) {
    const bool synthetic = scenario_.find_stream(s.spec.stream_id) == nullptr;
    generators_.push_back(
        synthetic ? nullptr
                  : make_generator(s.generator, s.spec.stream_id, seed_,
                                   scenario_.horizon));
    books_.push_back(std::make_unique<StreamBook>(s.spec));
    current_pot_[s.spec.stream_id] =
        s.demand.type == DemandConfig::Type::MarketMaker
            ? marketmaker_payoff(s.demand.initial_sigma, s.demand.scale)
            : s.spec.pot;
  }

  for (const auto& cfg : scenario_.agents) {
    auto a = std::make_unique<SimAgent>();
    a->cfg = cfg;
    a->produces = cfg.stream;
    a->latency_rng = Rng(derive_seed(seed_, "latency", cfg.id));
    switch (cfg.type) {
      case AgentConfig::Type::Child:
        a->child = std::make_unique<ChildAgent>(
            cfg.id, cfg.precision, derive_seed(seed_, "noise", cfg.id));
        break;
      case AgentConfig::Type::Parent: {
        a->parent = std::make_unique<ParentAgent>(
            cfg.id, static_cast<Eigen::Index>(cfg.children.size()));
        for (const auto& c : cfg.children)
          a->child_streams.push_back(scenario_.find_agent(c)->stream);
        a->pay_precision.resize(cfg.children.size());
        a->rate_in_force.assign(cfg.children.size(), 0.0);
        break;
      }
      case AgentConfig::Type::Stacker:
        a->noise_rng = Rng(derive_seed(seed_, "noise", cfg.id));
        if (!cfg.helper.empty()) a->err_stream = cfg.id + ".err";
        break;
      case AgentConfig::Type::ErrorHelper:
        break;  // produced stream wired below
      case AgentConfig::Type::MatchingPursuit: {
        const std::size_t dim = stream_spec(cfg.stream).value_dim;
        if (!cfg.atoms.empty()) {
          a->dict.atoms.resize(dim, static_cast<Eigen::Index>(cfg.atoms.size()));
          for (std::size_t kcol = 0; kcol < cfg.atoms.size(); ++kcol)
            for (std::size_t i = 0; i < dim; ++i)
              a->dict.atoms(static_cast<Eigen::Index>(i),
                            static_cast<Eigen::Index>(kcol)) =
                  cfg.atoms[kcol][i];
        } else {
          Rng dict_rng(derive_seed(seed_, "dict", cfg.id));
          a->dict = Dictionary::random(static_cast<Eigen::Index>(dim),
                                       static_cast<Eigen::Index>(cfg.random_atoms),
                                       dict_rng);
        }
        a->dict.validate();
        a->approx = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        a->residual = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        break;
      }
      case AgentConfig::Type::External:
        break;
    }
    agents_[cfg.id] = std::move(a);
  }
  // Helpers produce the error stream of the stacker that references them.
  for (const auto& cfg : scenario_.agents)
    if (cfg.type == AgentConfig::Type::Stacker && !cfg.helper.empty())
      agents_[cfg.helper]->produces = cfg.id + ".err";

  for (std::size_t idx : scenario_.agent_topo_order())
    agent_order_.push_back(scenario_.agents[idx].id);

  report_.seed = seed_;
  report_.horizon = scenario_.horizon;
  report_.epoch_length = scenario_.epoch_length;
}

bool World::has_stream(const std::string& id) const {
  return stream_index_.count(id) > 0;
}

const StreamSpec& World::stream_spec(const std::string& id) const {
  auto it = stream_index_.find(id);
  if (it == stream_index_.end())
    fail(Err::UnknownStream, "unknown stream '" + id + "'");
  return streams_[it->second].spec;
}

World::SimAgent& World::agent(const std::string& id) {
  auto it = agents_.find(id);
  if (it == agents_.end()) fail(Err::InvalidSpec, "unknown agent '" + id + "'");
  return *it->second;
}

std::vector<World::ScheduledAnswer> World::begin_round(std::uint64_t k,
                                                       Timestamp now) {
  TruthLookup lookup = [this](const std::string& id) -> const Value& {
    return current_truth_.at(id);
  };
  for (std::size_t i = 0; i < streams_.size(); ++i) {
    const std::string& id = streams_[i].spec.stream_id;
    current_truth_[id] = generators_[i]
                             ? generators_[i]->draw(k, lookup)
                             : scalar(0.0);  // stacker error, set at reveal
    books_[i]->open(k, now, current_pot_.at(id));
  }

  std::vector<ScheduledAnswer> schedule;
  for (const auto& id : agent_order_) {
    SimAgent& a = agent(id);
    if (a.produces.empty() || a.cfg.type == AgentConfig::Type::External)
      continue;
    Timestamp lat;
    if (a.cfg.latency.type == LatencyConfig::Type::Constant)
      lat = static_cast<Timestamp>(std::llround(a.cfg.latency.ms));
    else
      lat = static_cast<Timestamp>(
          std::llround(a.latency_rng.next_exponential(a.cfg.latency.ms)));
    schedule.push_back({id, a.produces, now + std::max<Timestamp>(0, lat)});
  }
  return schedule;
}

Value World::compute_answer(SimAgent& a, const std::string& stream_id,
                            std::uint64_t k, Timestamp now) {
  (void)now;
  switch (a.cfg.type) {
    case AgentConfig::Type::Child:
      return scalar(a.child->respond(scalar_of(current_truth_.at(stream_id))));
    case AgentConfig::Type::Parent: {
      if (!a.parent->fitted()) return scalar(0.0);
      std::vector<std::optional<double>> xs(a.child_streams.size());
      for (std::size_t i = 0; i < a.child_streams.size(); ++i) {
        auto v = prediction_of(a.child_streams[i], k, a.cfg.children[i]);
        if (v) xs[i] = scalar_of(*v);
      }
      return scalar(a.parent->predict_with_gaps(xs));
    }
    case AgentConfig::Type::Stacker: {
      double raw = scalar_of(current_truth_.at(stream_id)) + a.cfg.bias;
      if (a.cfg.noise_stddev > 0.0)
        raw += a.cfg.noise_stddev * a.noise_rng.next_normal();
      a.raw_by_round[k] = raw;
      std::optional<double> helper_pred;
      if (!a.err_stream.empty()) {
        auto v = prediction_of(a.err_stream, k, a.cfg.helper);
        if (v) helper_pred = scalar_of(*v);
      }
      return scalar(residual_stack_respond(raw, helper_pred));
    }
    case AgentConfig::Type::ErrorHelper:
      return scalar(a.err_rounds > 0
                        ? a.err_sum / static_cast<double>(a.err_rounds)
                        : 0.0);
    case AgentConfig::Type::MatchingPursuit: {
      if (a.residual_ready && a.steps < a.cfg.depth) {
        auto step = matching_pursuit_step(a.dict, a.residual);
        a.approx += step.coefficient * a.dict.atoms.col(step.atom_index);
        a.steps += 1;
        a.residual_ready = false;
      }
      return Value(a.approx.data(), a.approx.data() + a.approx.size());
    }
    case AgentConfig::Type::External:
      break;
  }
  fail(Err::InvalidSpec, "agent '" + a.cfg.id + "' cannot answer internally");
}

void World::produce_answer(const std::string& agent_id,
                           const std::string& stream_id, std::uint64_t k,
                           Timestamp now) {
  SimAgent& a = agent(agent_id);
  auto it = stream_index_.find(stream_id);
  if (it == stream_index_.end()) return;
  StreamBook& book = *books_[it->second];
  const Round* r = book.current();
  if (!r || r->round_index != k || r->state != RoundState::Open) {
    report_.late_predictions += 1;
    return;
  }
  Value value = compute_answer(a, stream_id, k, now);
  if (a.last_reveal_seen >= r->deadline_at) {
    // An answer must never lean on truth revealed at or past this deadline.
    report_.causality_violations += 1;
  }
  try {
    book.submit(agent_id, std::move(value), now);
  } catch (const RoarError& e) {
    report_.late_predictions += 1;
    log_debug("discarded answer from " + agent_id + ": " + e.what());
  }
}

void World::inject_prediction(const std::string& agent_name,
                              const std::string& stream_id, std::uint64_t k,
                              Value value, Timestamp now) {
  auto it = stream_index_.find(stream_id);
  if (it == stream_index_.end())
    fail(Err::UnknownStream, "unknown stream '" + stream_id + "'");
  StreamBook& book = *books_[it->second];
  const Round* r = book.current();
  if (!r || r->round_index > k)
    fail(Err::LateSubmission, "round " + std::to_string(k) + " is gone");
  if (r->round_index < k)
    fail(Err::RoundNotOpen, "round " + std::to_string(k) + " not yet open");
  book.submit(agent_name, std::move(value), now);
}

void World::close_stream_round(const std::string& stream_id, Timestamp now) {
  auto it = stream_index_.find(stream_id);
  if (it == stream_index_.end())
    fail(Err::UnknownStream, "unknown stream '" + stream_id + "'");
  books_[it->second]->close(now);
}

const Round* World::current_round(const std::string& stream_id) const {
  auto it = stream_index_.find(stream_id);
  return it == stream_index_.end() ? nullptr : books_[it->second]->current();
}

std::optional<Value> World::prediction_of(const std::string& stream_id,
                                          std::uint64_t k,
                                          const std::string& agent) const {
  auto it = stream_index_.find(stream_id);
  if (it == stream_index_.end()) return std::nullopt;
  const Round* r = books_[it->second]->current();
  if (!r || r->round_index != k) {
    auto settled = last_settled_.find(stream_id);
    if (settled == last_settled_.end() ||
        settled->second.round_index != k)
      return std::nullopt;
    r = &settled->second;
  }
  auto p = r->predictions.find(agent);
  if (p == r->predictions.end()) return std::nullopt;
  return p->second;
}

void World::notify_truth(const std::string& stream_id, std::uint64_t k,
                         const Round& round, Timestamp now) {
  const double truth_scalar =
      round.value_dim == 1 ? scalar_of(*round.truth) : 0.0;

  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    switch (a.cfg.type) {
      case AgentConfig::Type::Parent: {
        bool interested = false;
        auto& row = a.pending;
        for (std::size_t i = 0; i < a.child_streams.size(); ++i) {
          if (a.child_streams[i] != stream_id) continue;
          interested = true;
          auto& obs = row[k];
          if (obs.xhat.empty()) {
            obs.xhat.resize(a.child_streams.size());
            obs.xtruth.resize(a.child_streams.size());
          }
          obs.xtruth[i] = truth_scalar;
          auto pred = round.predictions.find(a.cfg.children[i]);
          if (pred != round.predictions.end())
            obs.xhat[i] = scalar_of(pred->second);
        }
        if (a.produces == stream_id) {
          interested = true;
          auto& obs = row[k];
          if (obs.xhat.empty()) {
            obs.xhat.resize(a.child_streams.size());
            obs.xtruth.resize(a.child_streams.size());
          }
          obs.y = truth_scalar;
        }
        if (interested) {
          a.last_reveal_seen = now;
          auto done = row.find(k);
          if (done != row.end() && done->second.y.has_value()) {
            bool truths_complete = true, xhat_complete = true;
            for (std::size_t i = 0; i < a.child_streams.size(); ++i) {
              truths_complete &= done->second.xtruth[i].has_value();
              xhat_complete &= done->second.xhat[i].has_value();
            }
            if (truths_complete) {
              if (xhat_complete) {
                for (std::size_t i = 0; i < a.child_streams.size(); ++i) {
                  a.obs_xhat.push_back(*done->second.xhat[i]);
                  a.obs_xtruth.push_back(*done->second.xtruth[i]);
                }
                a.obs_y.push_back(*done->second.y);
                a.obs_rows += 1;
              } else {
                a.dropped_rows += 1;
              }
              row.erase(done);
            }
          }
        }
        break;
      }
      case AgentConfig::Type::Stacker:
        if (a.produces == stream_id && !a.err_stream.empty()) {
          auto raw = a.raw_by_round.find(k);
          const double err =
              raw != a.raw_by_round.end() ? raw->second - truth_scalar : 0.0;
          current_truth_[a.err_stream] = scalar(err);
          a.raw_by_round.erase(a.raw_by_round.begin(),
                               a.raw_by_round.upper_bound(k));
          a.last_reveal_seen = now;
        }
        break;
      case AgentConfig::Type::ErrorHelper:
        if (a.produces == stream_id) {
          a.err_sum += truth_scalar;
          a.err_rounds += 1;
          a.last_reveal_seen = now;
        }
        break;
      case AgentConfig::Type::MatchingPursuit:
        if (a.produces == stream_id) {
          Eigen::Map<const Eigen::VectorXd> truth(round.truth->data(),
                                                  round.truth->size());
          a.residual = truth - a.approx;
          a.residual_ready = true;
          a.last_reveal_seen = now;
        }
        break;
      case AgentConfig::Type::Child:
        if (a.produces == stream_id) a.last_reveal_seen = now;
        break;
      case AgentConfig::Type::External:
        break;
    }
  }
}

void World::accumulate_settle(const Round& round) {
  for (const auto& [agent_id, pred] : round.predictions) {
    const double sq = squared_error(pred, *round.truth);
    Money payout = 0.0;
    if (round.payouts) {
      auto it = round.payouts->find(agent_id);
      if (it != round.payouts->end()) payout = it->second;
    }
    report_.rounds.push_back(RoundRow{round.round_index, round.stream_id,
                                      agent_id, pred, *round.truth, payout,
                                      round.pot_charged});
    auto known = agents_.find(agent_id);
    if (known != agents_.end()) {
      known->second->epoch_sq_sum += sq;
      known->second->epoch_scored += 1;
      known->second->epoch_income += payout;
    }
  }

  auto si = stream_index_.find(round.stream_id);
  if (si != stream_index_.end() &&
      streams_[si->second].demand.type == DemandConfig::Type::MarketMaker &&
      round.value_dim == 1 && round.payouts && !round.payouts->empty()) {
    double wsum = 0.0, wpred = 0.0;
    for (const auto& [agent_id, pay] : *round.payouts) {
      wsum += pay;
      wpred += pay * scalar_of(round.predictions.at(agent_id));
    }
    if (wsum > 0.0) {
      const double d = wpred / wsum - scalar_of(*round.truth);
      demand_[round.stream_id].sq_sum += d * d;
      demand_[round.stream_id].rounds += 1;
    }
  }
}

World::SettleRecord World::reveal_and_settle(const std::string& stream_id,
                                             std::uint64_t k, Timestamp now) {
  auto it = stream_index_.find(stream_id);
  if (it == stream_index_.end())
    fail(Err::UnknownStream, "unknown stream '" + stream_id + "'");
  StreamBook& book = *books_[it->second];
  const Round* r = book.current();
  if (!r || r->round_index != k)
    fail(Err::RoundNotOpen, "no in-flight round " + std::to_string(k) +
                                " on '" + stream_id + "'");

  book.reveal(current_truth_.at(stream_id), now);
  r = book.current();
  notify_truth(stream_id, k, *r, now);

  std::map<std::string, Money> payouts;
  if (!r->predictions.empty())
    payouts = score_round(*r->truth, r->predictions, r->pot, scenario_.scoring);

  SettleRecord rec;
  rec.stream_id = stream_id;
  rec.round_index = k;
  rec.truth = *r->truth;
  rec.predictions = r->predictions;
  rec.payouts = payouts;

  Round settled = book.settle(payouts);
  ledger_.apply(stream_id, k, settled.predictions, *settled.truth, payouts);
  accumulate_settle(settled);
  last_settled_[stream_id] = std::move(settled);

  settled_in_epoch_ += 1;
  const std::uint64_t expected =
      rounds_in_epoch(epoch_) * static_cast<std::uint64_t>(streams_.size());
  if (expected > 0 && settled_in_epoch_ == expected) {
    epoch_transition();
    rec.epoch_finished = true;
  }
  return rec;
}

std::uint64_t World::rounds_in_epoch(std::uint64_t epoch) const {
  const std::uint64_t lo = epoch * scenario_.epoch_length;
  const std::uint64_t hi =
      std::min<std::uint64_t>((epoch + 1) * scenario_.epoch_length,
                              scenario_.horizon);
  return hi > lo ? hi - lo : 0;
}

void World::epoch_transition() {
  const std::uint64_t ended = epoch_;
  const std::uint64_t ended_rounds = std::max<std::uint64_t>(
      std::uint64_t{1}, settled_in_epoch_ / std::max<std::size_t>(
                                                std::size_t{1}, streams_.size()));

  // 1. refit parents on the epoch's completed observation rows
  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    if (a.cfg.type != AgentConfig::Type::Parent) continue;
    a.fresh_fit = false;
    const Eigen::Index n = static_cast<Eigen::Index>(a.child_streams.size());
    if (a.obs_rows >= static_cast<std::uint64_t>(10 * (n + 1))) {
      EpochObservations obs;
      obs.xhat = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                Eigen::Dynamic, Eigen::RowMajor>>(
          a.obs_xhat.data(), static_cast<Eigen::Index>(a.obs_rows), n);
      obs.xtruth = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                  Eigen::Dynamic, Eigen::RowMajor>>(
          a.obs_xtruth.data(), static_cast<Eigen::Index>(a.obs_rows), n);
      obs.y = Eigen::Map<const Eigen::VectorXd>(
          a.obs_y.data(), static_cast<Eigen::Index>(a.obs_rows));
      try {
        a.parent->fit_epoch(obs);
        a.fresh_fit = true;
      } catch (const RoarError& e) {
        log_warn("parent " + id + " fit failed in epoch " +
                 std::to_string(ended) + ": " + e.what());
      }
    }
    if (a.fresh_fit) {
      const auto& f = a.parent->fit();
      for (std::size_t i = 0; i < a.cfg.children.size(); ++i)
        if (f.noise_variances[static_cast<Eigen::Index>(i)] > 0.0)
          a.pay_precision[i].emplace_back(
              a.rate_in_force[i],
              1.0 / f.noise_variances[static_cast<Eigen::Index>(i)]);
    }
  }

  // 2. per-agent epoch rows: rates and errors of the epoch that just ended,
  //    coefficients of the fit computed from it
  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    EpochRow row;
    row.epoch = ended;
    row.agent = id;
    if (a.cfg.type == AgentConfig::Type::Child) row.pay_rate = a.child_pay_rate;
    if (a.epoch_scored > 0)
      row.mse = a.epoch_sq_sum / static_cast<double>(a.epoch_scored);
    if (a.cfg.type == AgentConfig::Type::Parent && a.parent->fitted()) {
      const auto& f = a.parent->fit();
      row.coeff_attenuated.assign(f.coeff_attenuated.data(),
                                  f.coeff_attenuated.data() +
                                      f.coeff_attenuated.size());
      row.coeff_deattenuated.assign(f.coeff_deattenuated.data(),
                                    f.coeff_deattenuated.data() +
                                        f.coeff_deattenuated.size());
      row.gamma.assign(f.gamma.data(), f.gamma.data() + f.gamma.size());
    }
    report_.epochs.push_back(std::move(row));
  }

  // What the parent believes about a child's pay response: the advertised
  // model by default, or one learned from past (pay, realized precision)
  // pairs when learn_rho is on and pay has varied.
  auto belief_model = [this](SimAgent& parent, std::size_t i) {
    const AgentConfig* c = scenario_.find_agent(parent.cfg.children[i]);
    PrecisionModel m;  // non-child producers get the default belief
    if (c && c->type == AgentConfig::Type::Child)
      m = c->advertised.value_or(c->precision);
    if (parent.cfg.learn_rho && parent.pay_precision[i].size() >= 2) {
      try {
        m = estimate_precision_model(parent.pay_precision[i]);
      } catch (const RoarError&) {
        // pay never varied; keep the advertised model
      }
    }
    return m;
  };

  // 3. parents decide next-epoch compensation
  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    if (a.cfg.type != AgentConfig::Type::Parent || !a.parent->fitted())
      continue;
    Money budget = 0.0;
    if (a.cfg.budget_mode == AgentConfig::BudgetMode::FixedPerRound)
      budget = a.cfg.budget_amount;
    else
      budget = a.cfg.budget_fraction * a.epoch_income /
               static_cast<double>(ended_rounds);
    std::vector<PrecisionModel> models;
    for (std::size_t i = 0; i < a.cfg.children.size(); ++i)
      models.push_back(belief_model(a, i));
    const auto allocation = a.parent->set_compensation(budget, models);
    for (std::size_t i = 0; i < a.cfg.children.size(); ++i)
      agent(a.cfg.children[i]).pending_pay += allocation[i];
  }

  // 4. apply funding: child precision responds, stream pots follow the pay
  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    a.funded_rate = a.pending_pay;
    a.pending_pay = 0.0;
    if (a.cfg.type == AgentConfig::Type::Child) {
      a.child->apply_compensation(a.funded_rate);
      a.child_pay_rate = a.funded_rate;
    }
  }
  for (auto& s : streams_) {
    Money pot = s.spec.pot;
    if (s.demand.type == DemandConfig::Type::MarketMaker) {
      auto d = demand_.find(s.spec.stream_id);
      if (d != demand_.end() && d->second.rounds > 0) {
        const double sigma =
            std::sqrt(d->second.sq_sum / static_cast<double>(d->second.rounds));
        pot = marketmaker_payoff(sigma, s.demand.scale);
      } else {
        pot = marketmaker_payoff(s.demand.initial_sigma, s.demand.scale);
      }
    }
    for (auto& [id, ap] : agents_)
      if (ap->produces == s.spec.stream_id) pot += ap->funded_rate;
    current_pot_[s.spec.stream_id] = pot;
  }
  demand_.clear();

  // 5. parents re-attenuate for the noise the children will now run at
  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    if (a.cfg.type != AgentConfig::Type::Parent || !a.parent->fitted())
      continue;
    Eigen::VectorXd sigma2(static_cast<Eigen::Index>(a.cfg.children.size()));
    for (std::size_t i = 0; i < a.cfg.children.size(); ++i) {
      SimAgent& c = agent(a.cfg.children[i]);
      a.rate_in_force[i] = c.funded_rate;
      if (c.cfg.type == AgentConfig::Type::Child) {
        sigma2[static_cast<Eigen::Index>(i)] =
            1.0 / affine_precision(belief_model(a, i), c.funded_rate);
      } else {
        // No model for this producer; keep the measured noise level.
        sigma2[static_cast<Eigen::Index>(i)] =
            a.parent->fit().noise_variances[static_cast<Eigen::Index>(i)];
      }
    }
    a.parent->set_current_noise(sigma2);
  }

  // 6. reset epoch accumulators
  for (auto& [id, ap] : agents_) {
    SimAgent& a = *ap;
    a.epoch_sq_sum = 0.0;
    a.epoch_scored = 0;
    a.epoch_income = 0.0;
    a.obs_xhat.clear();
    a.obs_xtruth.clear();
    a.obs_y.clear();
    a.obs_rows = 0;
    a.pending.clear();
  }
  epoch_ += 1;
  settled_in_epoch_ = 0;
}

std::vector<std::string> World::external_agents(
    const std::string& stream_id) const {
  std::vector<std::string> out;
  for (const auto& a : scenario_.agents)
    if (a.type == AgentConfig::Type::External && a.stream == stream_id)
      out.push_back(a.id);
  return out;
}

RunReport World::finish(bool partial) {
  for (auto& book : books_) book->void_current();
  if (settled_in_epoch_ > 0) epoch_transition();

  report_.partial = partial;
  report_.settled_rounds = 0;
  report_.pot_charged_total = 0.0;
  for (const auto& book : books_) {
    report_.settled_rounds += book->settled_count();
    report_.pot_charged_total += book->pot_charged_total();
  }
  report_.ledger = ledger_;
  return std::move(report_);
}

}  // namespace roar
