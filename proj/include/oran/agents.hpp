#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "oran/env.hpp"
#include "oran/nn.hpp"
#include "oran/rng.hpp"

namespace oran {

struct PpoConfig {
  double clip_epsilon = 0.2;
  double gae_lambda = 0.95;
  int rollout_steps = 1024;
  int epochs_per_batch = 4;
  int minibatch_size = 64;
  double entropy_coeff = 0.01;
  double value_coeff = 0.5;
  double actor_lr = 0.0003;
  double critic_lr = 0.001;
  double gamma = 0.99;
  std::vector<int> hidden_widths = {64, 64};

  void validate() const;
};

struct AcerConfig {
  size_t replay_capacity = 50'000;
  int replay_ratio = 4;          // off-policy updates per fresh on-policy episode
  size_t replay_start = 200;     // buffer size before replay updates begin
  double truncation_clip = 10.0; // c
  double trace_lambda = 1.0;
  double entropy_coeff = 0.01;
  double value_coeff = 0.5;
  double actor_lr = 0.0003;
  double critic_lr = 0.001;
  double gamma = 0.99;
  int segment_length = 16;       // max contiguous transitions per sampled segment
  int segments_per_update = 4;
  std::vector<int> hidden_widths = {64, 64};
  bool trust_region = false;     // reserved, not implemented

  void validate() const;
};

// ---- policy arithmetic ----

// Softmax over the unmasked logits; masked entries come back exactly 0.
std::vector<double> masked_softmax(std::span<const double> logits, const std::vector<bool>& mask);

int sample_categorical(const std::vector<double>& probs, Rng& rng);
int argmax_action(const std::vector<double>& probs);

double entropy(const std::vector<double>& probs);
// out += scale * d entropy / d logits
void add_entropy_logit_grad(const std::vector<double>& probs, double scale,
                            std::span<double> out);
// out += scale * coeff * d log pi(action) / d logits
void add_logprob_logit_grad(const std::vector<double>& probs, int action, double coeff,
                            double scale, std::span<double> out);
// out += scale * coeff * d pi(action) / d logits
void add_prob_logit_grad(const std::vector<double>& probs, int action, double coeff,
                         double scale, std::span<double> out);

// Clipped-surrogate objective of one sample: min(rho*A, clip(rho)*A).
double ppo_sample_objective(const std::vector<double>& probs, int action, double behavior_prob,
                            double advantage, double clip_epsilon);
// out += scale * d(objective)/d logits
void add_ppo_sample_logit_grad(const std::vector<double>& probs, int action,
                               double behavior_prob, double advantage, double clip_epsilon,
                               double scale, std::span<double> out);

// max(0, 1 - c/rho): weight of the off-policy bias-correction term.
double acer_bias_weight(double truncation_clip, double rho);

// ---- rollout collection and PPO ----

struct RolloutBatch {
  std::vector<Transition> transitions;
  std::vector<double> values;       // critic V(s_t)
  double bootstrap_value = 0.0;     // V after the last transition; 0 when terminal
  std::vector<double> advantages;
  std::vector<double> returns;
};

using StepCallback = std::function<void(const Transition&, SliceEnv&)>;

// Samples n_steps transitions from the masked-softmax policy, auto-resetting
// finished episodes. on_step fires after every transition, before any reset.
RolloutBatch collect_rollout(SliceEnv& env, const DenseNet& actor, const DenseNet& critic,
                             int n_steps, Rng& rng, const StepCallback& on_step = {});

// GAE(gamma, lambda) over the batch; fills advantages and returns.
void gae_advantages(RolloutBatch& batch, double gamma, double lambda);
// In-place mean-0 / std-1 rescale of advantages (statistics over real-action samples).
void normalize_advantages(RolloutBatch& batch);

struct LossStats {
  double surrogate_pre = 0.0;   // mean actor objective over the batch before updating
  double entropy_pre = 0.0;
  double critic_mse_pre = 0.0;
  double mean_actor_loss = 0.0;
  double mean_critic_loss = 0.0;
  int updates = 0;
};

// Clipped-surrogate PPO epoch loop; one optimizer step per minibatch, the
// batch is not reused afterwards.
LossStats ppo_update(DenseNet& actor, DenseNet& critic, Adam& actor_opt, Adam& critic_opt,
                     const RolloutBatch& batch, const PpoConfig& config, Rng& rng);

// ---- replay and ACER ----

class ReplayBuffer {
 public:
  explicit ReplayBuffer(size_t capacity);
  void push(Transition t);
  size_t size() const { return storage_.size(); }
  size_t capacity() const { return capacity_; }
  // logical index 0 is the oldest stored transition
  const Transition& at(size_t logical) const;

 private:
  size_t capacity_;
  size_t head_ = 0;  // slot holding the oldest element once full
  std::vector<Transition> storage_;
};

// Uniform sample without replacement; deterministic per seed. Throws
// StateError when the buffer holds fewer than batch_size transitions.
std::vector<Transition> replay_sample(const ReplayBuffer& buffer, size_t batch_size,
                                      uint64_t seed);

using Segment = std::vector<Transition>;

// Contiguous stored sub-trajectories (never crossing an episode end), each at
// most max_length long.
std::vector<Segment> sample_segments(const ReplayBuffer& buffer, int count, int max_length,
                                     Rng& rng);

// Recursive off-policy corrected return targets for one segment, evaluated
// with the current actor/critic. Exposed for the estimator-oracle tests.
std::vector<double> acer_critic_targets(const Segment& segment, const DenseNet& actor,
                                        const DenseNet& critic, const AcerConfig& config);

// Truncated-importance-sampling update with bias correction over sampled
// segments; one optimizer step per call.
LossStats acer_update(DenseNet& actor, DenseNet& critic, Adam& actor_opt, Adam& critic_opt,
                      const std::vector<Segment>& segments, const AcerConfig& config);

// ---- evaluation and trainers ----

struct EvalResult {
  double episode_return = 0.0;
  double energy_w = 0.0;        // pool power of the final window's assignment
  double mean_latency_s = 0.0;  // mean VSC delay of that assignment
  int violations = 0;
};

// One deterministic episode following argmax of the masked policy.
EvalResult run_argmax_episode(SliceEnv& env, const DenseNet& actor, uint64_t seed);

struct EpisodeLog {
  long episode = 0;
  long step = 0;  // global env-step count when the episode ended
  double episode_return = 0.0;
  double energy_w = 0.0;
  double mean_latency_s = 0.0;
  int violations = 0;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;
using StopPredicate = std::function<bool()>;

class PpoTrainer {
 public:
  PpoTrainer(int obs_dim, int action_count, PpoConfig config, uint64_t seed);

  // Runs until max_steps env steps; stop is polled between rollouts. The env
  // must have been reset by the caller.
  void train(SliceEnv& env, long max_steps, const EpisodeCallback& on_episode = {},
             const StopPredicate& stop = {}, const StepCallback& on_step = {});

  DenseNet& actor() { return actor_; }
  const DenseNet& actor() const { return actor_; }
  DenseNet& critic() { return critic_; }
  const DenseNet& critic() const { return critic_; }
  Adam& actor_opt() { return actor_opt_; }
  Adam& critic_opt() { return critic_opt_; }
  long total_steps() const { return total_steps_; }
  long total_episodes() const { return total_episodes_; }

 private:
  PpoConfig config_;
  DenseNet actor_, critic_;
  Adam actor_opt_, critic_opt_;
  Rng action_rng_, shuffle_rng_;
  long total_steps_ = 0;
  long total_episodes_ = 0;
  double episode_return_ = 0.0;
};

class AcerTrainer {
 public:
  AcerTrainer(int obs_dim, int action_count, AcerConfig config, uint64_t seed);

  void train(SliceEnv& env, long max_steps, const EpisodeCallback& on_episode = {},
             const StopPredicate& stop = {}, const StepCallback& on_step = {});

  DenseNet& actor() { return actor_; }
  const DenseNet& actor() const { return actor_; }
  DenseNet& critic() { return critic_; }
  const DenseNet& critic() const { return critic_; }
  Adam& actor_opt() { return actor_opt_; }
  Adam& critic_opt() { return critic_opt_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  long total_steps() const { return total_steps_; }
  long total_episodes() const { return total_episodes_; }

 private:
  AcerConfig config_;
  DenseNet actor_, critic_;
  Adam actor_opt_, critic_opt_;
  ReplayBuffer buffer_;
  Rng action_rng_, replay_rng_;
  long total_steps_ = 0;
  long total_episodes_ = 0;
};

// Final-window energy / latency metrics of the env's current assignment.
EvalResult episode_metrics(const SliceEnv& env);

}  // namespace oran
