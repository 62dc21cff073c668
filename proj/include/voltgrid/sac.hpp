#pragma once

#include "voltgrid/mlp.hpp"
#include "voltgrid/replay_buffer.hpp"
#include "voltgrid/rng.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace voltgrid {

struct SacConfig {
    std::vector<int> hidden_dims = {16, 16};
    double learning_rate = 1e-4; // per-sample step size (batch losses are summed)
    long warmup_steps = 50;
    long train_every = 5;
    double discount = 0.9;
    int batch_size = 64;
    std::size_t buffer_capacity = 100000;
    double target_smoothing = 0.995; // fraction of the target nets kept per update
    double entropy_temperature = 0.2;
    double momentum = 0.9;       // SGD momentum, critics
    double actor_momentum = 0.0; // SGD momentum, actor (kept slower than the critics)
    // Subtracted from rewards inside the learner only; centres the critic
    // targets around zero so the bootstrap scale settles quickly. Does not
    // change the optimal policy and never leaves the learner.
    double reward_baseline = 0.0;
    double init_scale = 1.0;
    double log_std_init = -1.0;
    double log_std_min = -5.0;
    double log_std_max = 1.0;
    std::uint64_t seed = 1;
};

struct TrainMetrics {
    double critic_loss = 0.0;
    double actor_loss = 0.0;
    double mean_entropy = 0.0;
    double mean_q = 0.0;
};

// Soft actor-critic with a tanh-squashed Gaussian actor and twin critics.
// Actions live in [-1, 1]^act_dim; mapping to physical setpoints is the
// caller's job. All randomness flows through one seeded stream, so agents
// with equal configs fed equal data stay bit-identical.
class SacAgent {
public:
    SacAgent(int obs_dim, int act_dim, SacConfig config);

    int obs_dim() const { return obs_dim_; }
    int act_dim() const { return act_dim_; }
    const SacConfig& config() const { return config_; }

    // stochastic=true samples the policy (training); false returns tanh(mean).
    std::vector<double> propose(std::span<const double> obs, bool stochastic);
    std::vector<double> action_mean(std::span<const double> obs) const;

    void record(Experience exp) { buffer_.push(std::move(exp)); }
    const ReplayBuffer& buffer() const { return buffer_; }

    // One gradient update of critics, actor and target smoothing when the
    // schedule allows (global_step >= warmup, multiple of train_every,
    // buffer >= batch); otherwise a no-op returning nullopt.
    std::optional<TrainMetrics> train_step(long global_step);
    TrainMetrics update_once(); // unconditional single update

    long updates_done() const { return updates_done_; }

    void save(const std::string& path) const;
    static SacAgent load(const std::string& path);

    Mlp& actor_net() { return actor_; }
    Mlp& critic1_net() { return q1_; }

private:
    struct PolicySample {
        std::vector<double> action;
        std::vector<double> mu_grad;      // filled by the caller
        std::vector<double> log_std_grad; // pre-clamp gradient gate applied
        std::vector<double> eps;
        std::vector<double> std_dev;
        std::vector<double> log_std_raw;
        double log_prob = 0.0;
        Mlp::Trace trace;
    };

    PolicySample sample_policy(std::span<const double> obs);
    double critic_value(const Mlp& critic, std::span<const double> obs,
                        std::span<const double> act) const;

    int obs_dim_;
    int act_dim_;
    SacConfig config_;
    Mlp actor_;
    Mlp q1_, q2_;
    Mlp q1_target_, q2_target_;
    SgdMomentum actor_opt_, q1_opt_, q2_opt_;
    ReplayBuffer buffer_;
    Rng rng_;
    long updates_done_ = 0;

    std::vector<double> actor_grad_, q1_grad_, q2_grad_, scratch_grad_, input_grad_;
};

} // namespace voltgrid
