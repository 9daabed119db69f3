#include "bnras/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <thread>

#include "bnras/error.hpp"
#include "bnras/gibbs_chain.hpp"
#include "bnras/random_stream.hpp"

namespace bnras {

double PosteriorEstimate::probability(std::size_t position, Outcome v) const {
  if (samples == 0) return 0.0;
  return static_cast<double>(tallies[position][v]) / static_cast<double>(samples);
}

std::vector<double> PosteriorEstimate::of(NodeIndex node) const {
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free[i] != node) continue;
    std::vector<double> out(tallies[i].size());
    for (std::size_t v = 0; v < out.size(); ++v) out[v] = probability(i, static_cast<Outcome>(v));
    return out;
  }
  throw ValidationError("node #" + std::to_string(node) + " is not free");
}

std::vector<std::vector<double>> PosteriorEstimate::probabilities() const {
  std::vector<std::vector<double>> out;
  out.reserve(free.size());
  for (NodeIndex node : free) out.push_back(of(node));
  return out;
}

namespace {

class Stopwatch {
 public:
  Stopwatch() : cpu_(std::clock()), wall_(std::chrono::steady_clock::now()) {}
  double cpu() const { return static_cast<double>(std::clock() - cpu_) / CLOCKS_PER_SEC; }
  double wall() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_).count();
  }

 private:
  std::clock_t cpu_;
  std::chrono::steady_clock::time_point wall_;
};

PosteriorEstimate empty_estimate(const BeliefNetwork& net, const Evidence& ev) {
  PosteriorEstimate est;
  est.free = free_nodes(net, ev);
  est.tallies.resize(est.free.size());
  for (std::size_t i = 0; i < est.free.size(); ++i) {
    est.tallies[i].assign(net.node(est.free[i]).outcome_count(), 0);
  }
  return est;
}

void score(PosteriorEstimate& est, const JointState& state) {
  for (std::size_t i = 0; i < est.free.size(); ++i) ++est.tallies[i][state[est.free[i]]];
  ++est.samples;
}

void merge(PosteriorEstimate& into, const PosteriorEstimate& from) {
  for (std::size_t i = 0; i < into.tallies.size(); ++i) {
    for (std::size_t v = 0; v < into.tallies[i].size(); ++v) into.tallies[i][v] += from.tallies[i][v];
  }
  into.samples += from.samples;
}

// One block of trials drawn from its own stream.
void run_block(const BeliefNetwork& net, ChainState& cs, PosteriorEstimate& tally,
               std::uint64_t count, std::uint64_t transitions, RandomStream rng,
               const std::function<void()>& after_trial) {
  for (std::uint64_t j = 0; j < count; ++j) {
    next_trial(net, cs, transitions, rng);
    score(tally, cs.state);
    if (after_trial) after_trial();
  }
}

}  // namespace

PosteriorEstimate bnras_estimate(const BeliefNetwork& net, const Evidence& ev,
                                 std::uint64_t trials, std::uint64_t transitions,
                                 std::uint64_t seed, const EstimatorOptions& options) {
  if (trials == 0) throw DomainError("BN-RAS needs at least one trial");
  const Stopwatch clock;
  RandomStream setup(seed);
  ChainState prototype = init_random_state(net, ev, setup);
  if (prototype.free.empty() && transitions > 0) {
    throw ValidationError("every node is observed; nothing to sample");
  }

  PosteriorEstimate est = empty_estimate(net, ev);
  est.transitions_per_trial = transitions;
  const std::uint64_t blocks = (trials + kTrialsPerStream - 1) / kTrialsPerStream;
  auto block_size = [&](std::uint64_t b) {
    return std::min(kTrialsPerStream, trials - b * kTrialsPerStream);
  };

  const bool checkpoints = options.checkpoint_stride > 0 && options.on_checkpoint;
  const unsigned threads = checkpoints ? 1u : std::max(1u, options.threads);

  if (threads == 1 || blocks == 1) {
    ChainState cs = prototype;
    std::function<void()> after_trial;
    std::uint64_t next_mark = options.checkpoint_stride;
    if (checkpoints) {
      after_trial = [&] {
        est.total_transitions = est.samples * transitions;
        if (transitions > 0 && est.total_transitions >= next_mark) {
          while (next_mark <= est.total_transitions) next_mark += options.checkpoint_stride;
          options.on_checkpoint(est);
        }
      };
    }
    for (std::uint64_t b = 0; b < blocks; ++b) {
      run_block(net, cs, est, block_size(b), transitions, RandomStream::derive(seed, b),
                after_trial);
    }
  } else {
    // Worker w takes blocks w, w + threads, ...; tallies merge by addition.
    std::vector<PosteriorEstimate> partial(threads, empty_estimate(net, ev));
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        ChainState cs = prototype;
        for (std::uint64_t b = w; b < blocks; b += threads) {
          run_block(net, cs, partial[w], block_size(b), transitions, RandomStream::derive(seed, b),
                    {});
        }
      });
    }
    pool.clear();
    for (const auto& p : partial) merge(est, p);
  }

  est.total_transitions = trials * transitions;
  est.cpu_seconds = clock.cpu();
  est.wall_seconds = clock.wall();
  return est;
}

PosteriorEstimate straight_estimate(const BeliefNetwork& net, const Evidence& ev,
                                    std::uint64_t total_transitions, std::uint64_t seed,
                                    const EstimatorOptions& options) {
  if (total_transitions == 0) throw DomainError("straight simulation needs at least one transition");
  const Stopwatch clock;
  RandomStream rng(seed);
  ChainState cs = init_random_state(net, ev, rng);
  if (cs.free.empty()) throw ValidationError("every node is observed; nothing to sample");

  PosteriorEstimate est = empty_estimate(net, ev);
  est.transitions_per_trial = 1;
  for (std::uint64_t d = 0; d < options.burn_in; ++d) straight_step(net, cs, rng);
  for (std::uint64_t d = 1; d <= total_transitions; ++d) {
    straight_step(net, cs, rng);
    score(est, cs.state);
    est.total_transitions = d;
    if (options.checkpoint_stride > 0 && options.on_checkpoint &&
        d % options.checkpoint_stride == 0) {
      options.on_checkpoint(est);
    }
  }
  est.total_transitions = total_transitions + options.burn_in;
  est.cpu_seconds = clock.cpu();
  est.wall_seconds = clock.wall();
  return est;
}

ErrorReport error_metrics(const PosteriorEstimate& est, const PosteriorTable& oracle) {
  if (est.free != oracle.free || est.tallies.size() != oracle.marginals.size()) {
    throw ValidationError("estimate and oracle cover different nodes");
  }
  ErrorReport report;
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < est.free.size(); ++i) {
    if (est.tallies[i].size() != oracle.marginals[i].size()) {
      throw ValidationError("estimate and oracle disagree on outcome counts");
    }
    for (std::size_t v = 0; v < est.tallies[i].size(); ++v) {
      const double err = std::abs(est.probability(i, static_cast<Outcome>(v)) - oracle.marginals[i][v]);
      sum += err;
      ++pairs;
      if (err > report.max_error) {
        report.max_error = err;
        report.worst_node = est.free[i];
      }
    }
  }
  if (pairs > 0) {
    report.avg_error = sum / static_cast<double>(pairs);
    if (report.max_error == 0.0) report.worst_node = est.free.front();
  }
  return report;
}

std::vector<NodeIndex> rank_outcomes(const BeliefNetwork& net, const PosteriorEstimate& est,
                                     const std::string& label) {
  struct Entry {
    NodeIndex node;
    std::uint64_t tally;
  };
  std::vector<Entry> entries;
  for (std::size_t i = 0; i < est.free.size(); ++i) {
    const auto v = net.node(est.free[i]).find_outcome(label);
    if (!v) {
      throw ValidationError("node '" + net.node(est.free[i]).name + "' has no outcome '" + label + "'");
    }
    entries.push_back({est.free[i], est.tallies[i][*v]});
  }
  // Every node shares the same sample count, so comparing tallies is exact.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.tally > b.tally; });
  std::vector<NodeIndex> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.node);
  return out;
}

bool check_interval(double true_p, double est, double gamma, double alpha) {
  if (!(gamma >= 0.0) || !(alpha >= 0.0)) throw DomainError("gamma and alpha must be non-negative");
  const double lower = true_p / (1.0 + gamma) - alpha;
  const double upper = (1.0 + gamma) * true_p + alpha;
  return lower <= est && est <= upper;
}

}  // namespace bnras
