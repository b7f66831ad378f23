#include "oran/agents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "oran/errors.hpp"

namespace oran {

void PpoConfig::validate() const {
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0))
    throw DomainError("ppo: clip_epsilon must be in (0,1)");
  if (gae_lambda < 0.0 || gae_lambda > 1.0) throw DomainError("ppo: gae_lambda must be in [0,1]");
  if (rollout_steps < 1 || epochs_per_batch < 1 || minibatch_size < 1)
    throw DomainError("ppo: rollout/epoch/minibatch sizes must be >= 1");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw DomainError("ppo: learning rates must be > 0");
  if (gamma < 0.0 || gamma > 1.0) throw DomainError("ppo: gamma must be in [0,1]");
}

void AcerConfig::validate() const {
  if (replay_capacity < 1) throw DomainError("acer: replay_capacity must be >= 1");
  if (replay_ratio < 0) throw DomainError("acer: replay_ratio must be >= 0");
  if (!(truncation_clip > 0.0)) throw DomainError("acer: truncation_clip must be > 0");
  if (trace_lambda < 0.0 || trace_lambda > 1.0)
    throw DomainError("acer: trace_lambda must be in [0,1]");
  if (!(actor_lr > 0.0) || !(critic_lr > 0.0)) throw DomainError("acer: learning rates must be > 0");
  if (segment_length < 1 || segments_per_update < 1)
    throw DomainError("acer: segment settings must be >= 1");
  if (gamma < 0.0 || gamma > 1.0) throw DomainError("acer: gamma must be in [0,1]");
  if (trust_region)
    throw DomainError("acer: the trust_region flag is reserved and not implemented");
}

// ---- policy arithmetic ----

std::vector<double> masked_softmax(std::span<const double> logits, const std::vector<bool>& mask) {
  if (logits.size() != mask.size()) throw DomainError("masked_softmax: size mismatch");
  double max_logit = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < logits.size(); ++i)
    if (mask[i]) max_logit = std::max(max_logit, logits[i]);
  if (max_logit == -std::numeric_limits<double>::infinity())
    throw DomainError("masked_softmax: every action is masked");

  std::vector<double> probs(logits.size(), 0.0);
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    if (!mask[i]) continue;
    probs[i] = std::exp(logits[i] - max_logit);
    total += probs[i];
  }
  for (size_t i = 0; i < logits.size(); ++i)
    if (mask[i]) probs[i] /= total;
  return probs;
}

int sample_categorical(const std::vector<double>& probs, Rng& rng) {
  double r = uniform_real(rng, 0.0, 1.0);
  double cum = 0.0;
  int last_positive = -1;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = static_cast<int>(i);
    cum += probs[i];
    if (r < cum) return static_cast<int>(i);
  }
  if (last_positive < 0) throw DomainError("sample_categorical: no positive probability");
  return last_positive;  // float shortfall in the cumulative sum
}

int argmax_action(const std::vector<double>& probs) {
  return static_cast<int>(
      std::distance(probs.begin(), std::max_element(probs.begin(), probs.end())));
}

double entropy(const std::vector<double>& probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}

void add_entropy_logit_grad(const std::vector<double>& probs, double scale,
                            std::span<double> out) {
  double h = entropy(probs);
  for (size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0) continue;
    out[j] += scale * (-probs[j] * (std::log(probs[j]) + h));
  }
}

void add_logprob_logit_grad(const std::vector<double>& probs, int action, double coeff,
                            double scale, std::span<double> out) {
  for (size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0 && static_cast<int>(j) != action) continue;
    double indicator = (static_cast<int>(j) == action) ? 1.0 : 0.0;
    out[j] += scale * coeff * (indicator - probs[j]);
  }
}

void add_prob_logit_grad(const std::vector<double>& probs, int action, double coeff,
                         double scale, std::span<double> out) {
  double p_a = probs[static_cast<size_t>(action)];
  for (size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] <= 0.0 && static_cast<int>(j) != action) continue;
    double indicator = (static_cast<int>(j) == action) ? 1.0 : 0.0;
    out[j] += scale * coeff * p_a * (indicator - probs[j]);
  }
}

namespace {

double importance_ratio(const std::vector<double>& probs, int action, double behavior_prob) {
  if (!(behavior_prob > 0.0))
    throw DataIntegrityError("importance ratio: behavior probability is 0 for the taken action");
  return probs[static_cast<size_t>(action)] / behavior_prob;
}

}  // namespace

double ppo_sample_objective(const std::vector<double>& probs, int action, double behavior_prob,
                            double advantage, double clip_epsilon) {
  double rho = importance_ratio(probs, action, behavior_prob);
  double clipped = std::clamp(rho, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  return std::min(rho * advantage, clipped * advantage);
}

void add_ppo_sample_logit_grad(const std::vector<double>& probs, int action,
                               double behavior_prob, double advantage, double clip_epsilon,
                               double scale, std::span<double> out) {
  double rho = importance_ratio(probs, action, behavior_prob);
  double clipped = std::clamp(rho, 1.0 - clip_epsilon, 1.0 + clip_epsilon);
  double surr1 = rho * advantage;
  double surr2 = clipped * advantage;
  // gradient flows only when the unclipped branch is the active minimum
  double dobj_drho = (surr1 <= surr2) ? advantage : 0.0;
  if (dobj_drho == 0.0) return;
  // d rho / d logit_j = p_a (1[j=a] - p_j) / b_a
  add_prob_logit_grad(probs, action, dobj_drho / behavior_prob, scale, out);
}

double acer_bias_weight(double truncation_clip, double rho) {
  if (!(rho > 0.0)) return 0.0;
  return std::max(0.0, 1.0 - truncation_clip / rho);
}

// ---- rollout collection ----

namespace {

Transition policy_step(SliceEnv& env, const DenseNet& actor, Rng& rng) {
  Observation obs = env.observe();
  std::vector<bool> mask = env.action_mask();
  bool any = std::any_of(mask.begin(), mask.end(), [](bool b) { return b; });
  if (!any) return env.step(0, std::vector<double>(mask.size(), 0.0));
  std::vector<double> probs = masked_softmax(actor.forward(obs), mask);
  int action = sample_categorical(probs, rng);
  return env.step(action, std::move(probs));
}

}  // namespace

RolloutBatch collect_rollout(SliceEnv& env, const DenseNet& actor, const DenseNet& critic,
                             int n_steps, Rng& rng, const StepCallback& on_step) {
  RolloutBatch batch;
  batch.transitions.reserve(static_cast<size_t>(n_steps));
  batch.values.reserve(static_cast<size_t>(n_steps));
  for (int i = 0; i < n_steps; ++i) {
    if (env.terminal()) env.reset_next_episode();
    batch.values.push_back(critic.forward(env.observe())[0]);
    Transition t = policy_step(env, actor, rng);
    if (on_step) on_step(t, env);
    batch.transitions.push_back(std::move(t));
  }
  if (!batch.transitions.empty() && !batch.transitions.back().terminal)
    batch.bootstrap_value = critic.forward(batch.transitions.back().next_obs)[0];
  return batch;
}

void gae_advantages(RolloutBatch& batch, double gamma, double lambda) {
  size_t n = batch.transitions.size();
  batch.advantages.assign(n, 0.0);
  batch.returns.assign(n, 0.0);
  double gae = 0.0;
  for (size_t k = n; k-- > 0;) {
    const Transition& t = batch.transitions[k];
    double nonterminal = t.terminal ? 0.0 : 1.0;
    double next_value = (k + 1 == n) ? batch.bootstrap_value : batch.values[k + 1];
    double delta = t.reward + gamma * next_value * nonterminal - batch.values[k];
    gae = delta + gamma * lambda * nonterminal * gae;
    batch.advantages[k] = gae;
    batch.returns[k] = gae + batch.values[k];
  }
}

void normalize_advantages(RolloutBatch& batch) {
  double sum = 0.0;
  size_t count = 0;
  for (size_t i = 0; i < batch.transitions.size(); ++i) {
    if (batch.transitions[i].action < 0) continue;
    sum += batch.advantages[i];
    ++count;
  }
  if (count == 0) return;
  double mean = sum / static_cast<double>(count);
  double var = 0.0;
  for (size_t i = 0; i < batch.transitions.size(); ++i) {
    if (batch.transitions[i].action < 0) continue;
    double d = batch.advantages[i] - mean;
    var += d * d;
  }
  double stddev = std::sqrt(var / static_cast<double>(count));
  for (double& a : batch.advantages) a = (a - mean) / (stddev + 1e-8);
}

// ---- PPO update ----

LossStats ppo_update(DenseNet& actor, DenseNet& critic, Adam& actor_opt, Adam& critic_opt,
                     const RolloutBatch& batch, const PpoConfig& config, Rng& rng) {
  config.validate();
  size_t n = batch.transitions.size();
  if (n == 0) throw DomainError("ppo_update: empty batch");
  if (batch.advantages.size() != n || batch.returns.size() != n)
    throw DomainError("ppo_update: advantages not computed");

  LossStats stats;
  {
    size_t valid = 0;
    for (size_t i = 0; i < n; ++i) {
      const Transition& t = batch.transitions[i];
      double v = critic.forward(t.obs)[0];
      double err = v - batch.returns[i];
      stats.critic_mse_pre += err * err;
      if (t.action < 0) continue;
      std::vector<double> probs = masked_softmax(actor.forward(t.obs), t.mask);
      stats.surrogate_pre += ppo_sample_objective(probs, t.action,
                                                  t.behavior_probs[static_cast<size_t>(t.action)],
                                                  batch.advantages[i], config.clip_epsilon);
      stats.entropy_pre += entropy(probs);
      ++valid;
    }
    stats.critic_mse_pre /= static_cast<double>(n);
    if (valid > 0) {
      stats.surrogate_pre /= static_cast<double>(valid);
      stats.entropy_pre /= static_cast<double>(valid);
    }
  }

  std::vector<double> actor_grad(actor.param_count());
  std::vector<double> critic_grad(critic.param_count());
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  double actor_loss_sum = 0.0, critic_loss_sum = 0.0;
  for (int epoch = 0; epoch < config.epochs_per_batch; ++epoch) {
    shuffle(order, rng);
    for (size_t begin = 0; begin < n; begin += static_cast<size_t>(config.minibatch_size)) {
      size_t end = std::min(n, begin + static_cast<size_t>(config.minibatch_size));
      double inv = 1.0 / static_cast<double>(end - begin);
      std::fill(actor_grad.begin(), actor_grad.end(), 0.0);
      std::fill(critic_grad.begin(), critic_grad.end(), 0.0);
      double actor_loss = 0.0, critic_loss = 0.0;

      for (size_t k = begin; k < end; ++k) {
        const Transition& t = batch.transitions[order[k]];
        double advantage = batch.advantages[order[k]];
        double ret = batch.returns[order[k]];

        DenseNet::Cache critic_cache;
        double v = critic.forward(t.obs, &critic_cache)[0];
        double err = v - ret;
        critic_loss += config.value_coeff * err * err * inv;
        double dv = config.value_coeff * 2.0 * err * inv;
        critic.backward(critic_cache, std::span<const double>(&dv, 1), critic_grad);

        if (t.action < 0) continue;
        DenseNet::Cache actor_cache;
        std::vector<double> logits = actor.forward(t.obs, &actor_cache);
        std::vector<double> probs = masked_softmax(logits, t.mask);
        double behavior = t.behavior_probs[static_cast<size_t>(t.action)];
        double objective = ppo_sample_objective(probs, t.action, behavior, advantage,
                                                config.clip_epsilon);
        double h = entropy(probs);
        actor_loss += (-objective - config.entropy_coeff * h) * inv;

        std::vector<double> logit_grad(probs.size(), 0.0);
        add_ppo_sample_logit_grad(probs, t.action, behavior, advantage, config.clip_epsilon,
                                  -inv, logit_grad);
        add_entropy_logit_grad(probs, -config.entropy_coeff * inv, logit_grad);
        actor.backward(actor_cache, logit_grad, actor_grad);
      }

      if (!std::isfinite(actor_loss) || !std::isfinite(critic_loss))
        throw NumericError("ppo_update: non-finite loss, update aborted");
      actor_opt.step(actor.params(), actor_grad);
      critic_opt.step(critic.params(), critic_grad);
      actor_loss_sum += actor_loss;
      critic_loss_sum += critic_loss;
      ++stats.updates;
    }
  }
  if (stats.updates > 0) {
    stats.mean_actor_loss = actor_loss_sum / stats.updates;
    stats.mean_critic_loss = critic_loss_sum / stats.updates;
  }
  return stats;
}

// ---- replay buffer ----

ReplayBuffer::ReplayBuffer(size_t capacity) : capacity_(capacity) {
  if (capacity < 1) throw DomainError("replay: capacity must be >= 1");
  storage_.reserve(capacity);
}

void ReplayBuffer::push(Transition t) {
  if (storage_.size() < capacity_) {
    storage_.push_back(std::move(t));
  } else {
    storage_[head_] = std::move(t);  // FIFO: overwrite the oldest
    head_ = (head_ + 1) % capacity_;
  }
}

const Transition& ReplayBuffer::at(size_t logical) const {
  if (logical >= storage_.size()) throw DomainError("replay: index out of range");
  return storage_[(head_ + logical) % storage_.size()];
}

std::vector<Transition> replay_sample(const ReplayBuffer& buffer, size_t batch_size,
                                      uint64_t seed) {
  if (batch_size > buffer.size())
    throw StateError("replay_sample: buffer holds " + std::to_string(buffer.size()) +
                     " transitions, requested " + std::to_string(batch_size));
  std::vector<size_t> indices(buffer.size());
  std::iota(indices.begin(), indices.end(), 0);
  Rng rng(seed);
  std::vector<Transition> out;
  out.reserve(batch_size);
  for (size_t i = 0; i < batch_size; ++i) {
    size_t j = i + static_cast<size_t>(uniform_index(rng, indices.size() - i));
    std::swap(indices[i], indices[j]);
    out.push_back(buffer.at(indices[i]));
  }
  return out;
}

std::vector<Segment> sample_segments(const ReplayBuffer& buffer, int count, int max_length,
                                     Rng& rng) {
  if (buffer.size() == 0) throw StateError("sample_segments: buffer is empty");
  std::vector<Segment> segments;
  segments.reserve(static_cast<size_t>(count));
  for (int s = 0; s < count; ++s) {
    size_t start = static_cast<size_t>(uniform_index(rng, buffer.size()));
    Segment seg;
    seg.push_back(buffer.at(start));
    while (static_cast<int>(seg.size()) < max_length && !seg.back().terminal &&
           start + seg.size() < buffer.size())
      seg.push_back(buffer.at(start + seg.size()));
    segments.push_back(std::move(seg));
  }
  return segments;
}

// ---- ACER ----

namespace {

double current_ratio(const Transition& t, const DenseNet& actor) {
  if (t.action < 0) return 1.0;  // forced step: behavior and target coincide
  std::vector<double> probs = masked_softmax(actor.forward(t.obs), t.mask);
  return importance_ratio(probs, t.action, t.behavior_probs[static_cast<size_t>(t.action)]);
}

}  // namespace

std::vector<double> acer_critic_targets(const Segment& segment, const DenseNet& actor,
                                        const DenseNet& critic, const AcerConfig& config) {
  size_t n = segment.size();
  if (n == 0) throw DomainError("acer_critic_targets: empty segment");
  std::vector<double> targets(n);
  std::vector<double> ratios(n);
  for (size_t t = 0; t < n; ++t) ratios[t] = current_ratio(segment[t], actor);

  for (size_t k = n; k-- > 0;) {
    const Transition& t = segment[k];
    double corrected = 0.0;
    if (!t.terminal) {
      double v_next = critic.forward(t.next_obs)[0];
      corrected = v_next;
      if (k + 1 < n) {
        double trace = config.trace_lambda * std::min(1.0, ratios[k + 1]);
        corrected = v_next + trace * (targets[k + 1] - v_next);
      }
    }
    targets[k] = t.reward + config.gamma * corrected;
  }
  return targets;
}

LossStats acer_update(DenseNet& actor, DenseNet& critic, Adam& actor_opt, Adam& critic_opt,
                      const std::vector<Segment>& segments, const AcerConfig& config) {
  config.validate();
  size_t total = 0;
  for (const auto& seg : segments) total += seg.size();
  if (total == 0) throw DomainError("acer_update: no transitions");

  std::vector<double> actor_grad(actor.param_count());
  std::vector<double> critic_grad(critic.param_count());
  double inv = 1.0 / static_cast<double>(total);

  LossStats stats;
  double actor_loss = 0.0, critic_loss = 0.0;
  size_t valid = 0;
  for (const auto& segment : segments) {
    std::vector<double> targets = acer_critic_targets(segment, actor, critic, config);
    for (size_t k = 0; k < segment.size(); ++k) {
      const Transition& t = segment[k];

      DenseNet::Cache critic_cache;
      double v = critic.forward(t.obs, &critic_cache)[0];
      double err = v - targets[k];
      stats.critic_mse_pre += err * err;
      critic_loss += config.value_coeff * err * err * inv;
      double dv = config.value_coeff * 2.0 * err * inv;
      critic.backward(critic_cache, std::span<const double>(&dv, 1), critic_grad);

      if (t.action < 0) continue;
      DenseNet::Cache actor_cache;
      std::vector<double> logits = actor.forward(t.obs, &actor_cache);
      std::vector<double> probs = masked_softmax(logits, t.mask);
      double behavior = t.behavior_probs[static_cast<size_t>(t.action)];
      double rho = importance_ratio(probs, t.action, behavior);
      double advantage = targets[k] - v;  // corrected return against the V baseline

      double truncated = std::min(config.truncation_clip, rho);
      double bias_w = acer_bias_weight(config.truncation_clip, rho);
      double p_a = probs[static_cast<size_t>(t.action)];
      double h = entropy(probs);
      double objective = truncated * advantage * std::log(p_a) + bias_w * advantage * p_a;
      stats.surrogate_pre += objective;
      stats.entropy_pre += h;
      ++valid;
      actor_loss += (-objective - config.entropy_coeff * h) * inv;

      std::vector<double> logit_grad(probs.size(), 0.0);
      // truncated importance-sampled policy-gradient term
      add_logprob_logit_grad(probs, t.action, truncated * advantage, -inv, logit_grad);
      // bias correction for the truncation; with a V-only critic the return
      // estimate of a non-sampled action equals the baseline, so only the
      // sampled action contributes
      add_prob_logit_grad(probs, t.action, bias_w * advantage, -inv, logit_grad);
      add_entropy_logit_grad(probs, -config.entropy_coeff * inv, logit_grad);
      actor.backward(actor_cache, logit_grad, actor_grad);
    }
  }
  stats.critic_mse_pre /= static_cast<double>(total);
  if (valid > 0) {
    stats.surrogate_pre /= static_cast<double>(valid);
    stats.entropy_pre /= static_cast<double>(valid);
  }

  if (!std::isfinite(actor_loss) || !std::isfinite(critic_loss))
    throw NumericError("acer_update: non-finite loss, update aborted");
  actor_opt.step(actor.params(), actor_grad);
  critic_opt.step(critic.params(), critic_grad);
  stats.updates = 1;
  stats.mean_actor_loss = actor_loss;
  stats.mean_critic_loss = critic_loss;
  return stats;
}

// ---- evaluation ----

EvalResult episode_metrics(const SliceEnv& env) {
  EvalResult result;
  result.energy_w = env.pool_power_now_w();
  result.violations = env.violation_count();
  const auto& instance = env.instance();
  const auto& assignment = env.assignment();
  double latency_sum = 0.0;
  int vsc_count = 0;
  for (size_t i = 0; i < instance.demands.size(); ++i) {
    if (!instance.demands[i].is_vsc() || assignment[i] < 0) continue;
    latency_sum +=
        delay_breakdown(instance.model, instance.demands, assignment, static_cast<int>(i)).total_s;
    ++vsc_count;
  }
  result.mean_latency_s = vsc_count > 0 ? latency_sum / vsc_count : 0.0;
  return result;
}

EvalResult run_argmax_episode(SliceEnv& env, const DenseNet& actor, uint64_t seed) {
  env.reset(seed);
  double episode_return = 0.0;
  while (!env.terminal()) {
    std::vector<bool> mask = env.action_mask();
    bool any = std::any_of(mask.begin(), mask.end(), [](bool b) { return b; });
    Transition t;
    if (!any) {
      t = env.step(0, std::vector<double>(mask.size(), 0.0));
    } else {
      std::vector<double> probs = masked_softmax(actor.forward(env.observe()), mask);
      int action = argmax_action(probs);
      t = env.step(action, std::move(probs));
    }
    episode_return += t.reward;
  }
  EvalResult result = episode_metrics(env);
  result.episode_return = episode_return;
  return result;
}

// ---- trainers ----

namespace {

std::vector<int> net_widths(int obs_dim, int out_dim, const std::vector<int>& hidden) {
  std::vector<int> widths;
  widths.push_back(obs_dim);
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(out_dim);
  return widths;
}

}  // namespace

PpoTrainer::PpoTrainer(int obs_dim, int action_count, PpoConfig config, uint64_t seed)
    : config_(std::move(config)),
      actor_(net_widths(obs_dim, action_count, config_.hidden_widths), mix_seed(seed, 1)),
      critic_(net_widths(obs_dim, 1, config_.hidden_widths), mix_seed(seed, 2)),
      actor_opt_(actor_.param_count(), config_.actor_lr),
      critic_opt_(critic_.param_count(), config_.critic_lr),
      action_rng_(mix_seed(seed, 3)),
      shuffle_rng_(mix_seed(seed, 4)) {
  config_.validate();
}

void PpoTrainer::train(SliceEnv& env, long max_steps, const EpisodeCallback& on_episode,
                       const StopPredicate& stop, const StepCallback& on_step) {
  while (total_steps_ < max_steps) {
    if (stop && stop()) return;
    int n = static_cast<int>(std::min<long>(config_.rollout_steps, max_steps - total_steps_));
    auto hook = [&](const Transition& t, SliceEnv& e) {
      ++total_steps_;
      episode_return_ += t.reward;
      if (on_step) on_step(t, e);
      if (t.terminal) {
        ++total_episodes_;
        if (on_episode) {
          EvalResult m = episode_metrics(e);
          on_episode(EpisodeLog{total_episodes_, total_steps_, episode_return_, m.energy_w,
                                m.mean_latency_s, m.violations});
        }
        episode_return_ = 0.0;
      }
    };
    RolloutBatch batch = collect_rollout(env, actor_, critic_, n, action_rng_, hook);
    gae_advantages(batch, config_.gamma, config_.gae_lambda);
    normalize_advantages(batch);
    ppo_update(actor_, critic_, actor_opt_, critic_opt_, batch, config_, shuffle_rng_);
  }
}

AcerTrainer::AcerTrainer(int obs_dim, int action_count, AcerConfig config, uint64_t seed)
    : config_(std::move(config)),
      actor_(net_widths(obs_dim, action_count, config_.hidden_widths), mix_seed(seed, 1)),
      critic_(net_widths(obs_dim, 1, config_.hidden_widths), mix_seed(seed, 2)),
      actor_opt_(actor_.param_count(), config_.actor_lr),
      critic_opt_(critic_.param_count(), config_.critic_lr),
      buffer_(config_.replay_capacity),
      action_rng_(mix_seed(seed, 3)),
      replay_rng_(mix_seed(seed, 5)) {
  config_.validate();
}

void AcerTrainer::train(SliceEnv& env, long max_steps, const EpisodeCallback& on_episode,
                        const StopPredicate& stop, const StepCallback& on_step) {
  double episode_return = 0.0;
  while (total_steps_ < max_steps) {
    if (stop && stop()) return;
    if (env.terminal()) env.reset_next_episode();

    Segment fresh;
    while (!env.terminal() && total_steps_ < max_steps) {
      Transition t = policy_step(env, actor_, action_rng_);
      ++total_steps_;
      episode_return += t.reward;
      if (on_step) on_step(t, env);
      if (t.terminal) {
        ++total_episodes_;
        if (on_episode) {
          EvalResult m = episode_metrics(env);
          on_episode(EpisodeLog{total_episodes_, total_steps_, episode_return, m.energy_w,
                                m.mean_latency_s, m.violations});
        }
        episode_return = 0.0;
      }
      buffer_.push(t);
      fresh.push_back(std::move(t));
    }

    // one on-policy update from the fresh experiences, then replayed ones
    acer_update(actor_, critic_, actor_opt_, critic_opt_, {fresh}, config_);
    if (buffer_.size() >= config_.replay_start) {
      for (int k = 0; k < config_.replay_ratio; ++k) {
        auto segments = sample_segments(buffer_, config_.segments_per_update,
                                        config_.segment_length, replay_rng_);
        acer_update(actor_, critic_, actor_opt_, critic_opt_, segments, config_);
      }
    }
  }
}

}  // namespace oran
