#include "voltgrid/sac.hpp"

#include "voltgrid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace voltgrid {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178; // 0.5 * log(2*pi)
constexpr double kSquashEps = 1e-6;

std::vector<int> net_dims(int in, const std::vector<int>& hidden, int out) {
    std::vector<int> dims;
    dims.push_back(in);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(out);
    return dims;
}

} // namespace

SacAgent::SacAgent(int obs_dim, int act_dim, SacConfig config)
    : obs_dim_(obs_dim),
      act_dim_(act_dim),
      config_(std::move(config)),
      actor_(net_dims(obs_dim, config_.hidden_dims, 2 * act_dim)),
      q1_(net_dims(obs_dim + act_dim, config_.hidden_dims, 1)),
      q2_(net_dims(obs_dim + act_dim, config_.hidden_dims, 1)),
      q1_target_(q1_),
      q2_target_(q2_),
      actor_opt_(actor_.param_count(), config_.learning_rate, config_.actor_momentum),
      q1_opt_(q1_.param_count(), config_.learning_rate, config_.momentum),
      q2_opt_(q2_.param_count(), config_.learning_rate, config_.momentum),
      buffer_(config_.buffer_capacity),
      rng_(config_.seed) {
    if (obs_dim < 1 || act_dim < 1) throw std::invalid_argument("SacAgent dims must be positive");
    if (config_.batch_size < 1) throw std::invalid_argument("batch_size must be positive");
    if (config_.learning_rate <= 0.0) throw std::invalid_argument("learning_rate must be positive");
    if (config_.discount <= 0.0 || config_.discount >= 1.0)
        throw std::invalid_argument("discount must lie in (0, 1)");
    if (config_.target_smoothing < 0.0 || config_.target_smoothing >= 1.0)
        throw std::invalid_argument("target_smoothing must lie in [0, 1)");
    if (config_.init_scale > 0.0) {
        actor_.init_random(rng_, config_.init_scale);
        q1_.init_random(rng_, config_.init_scale);
        q2_.init_random(rng_, config_.init_scale);
        // log-std head starts at log_std_init: bias offset on the second
        // half of the actor output (bias block of the last layer).
        const auto& dims = actor_.dims();
        const std::size_t last_in = static_cast<std::size_t>(dims[dims.size() - 2]);
        const std::size_t last_out = static_cast<std::size_t>(dims.back());
        double* last_bias = actor_.params().data() + actor_.param_count() - last_out;
        (void)last_in;
        for (int i = 0; i < act_dim_; ++i)
            last_bias[act_dim_ + i] += config_.log_std_init;
        std::copy(q1_.params().begin(), q1_.params().end(), q1_target_.params().begin());
        std::copy(q2_.params().begin(), q2_.params().end(), q2_target_.params().begin());
    }
    actor_grad_.assign(actor_.param_count(), 0.0);
    q1_grad_.assign(q1_.param_count(), 0.0);
    q2_grad_.assign(q2_.param_count(), 0.0);
    scratch_grad_.assign(std::max(q1_.param_count(), q2_.param_count()), 0.0);
    input_grad_.assign(static_cast<std::size_t>(obs_dim_ + act_dim_), 0.0);
}

SacAgent::PolicySample SacAgent::sample_policy(std::span<const double> obs) {
    PolicySample s;
    s.trace = actor_.forward_trace(obs);
    const auto out = s.trace.output();
    s.action.resize(static_cast<std::size_t>(act_dim_));
    s.eps.resize(static_cast<std::size_t>(act_dim_));
    s.std_dev.resize(static_cast<std::size_t>(act_dim_));
    s.log_std_raw.resize(static_cast<std::size_t>(act_dim_));
    s.log_prob = 0.0;
    for (int i = 0; i < act_dim_; ++i) {
        const double mu = out[static_cast<std::size_t>(i)];
        const double raw = out[static_cast<std::size_t>(act_dim_ + i)];
        const double log_std = std::clamp(raw, config_.log_std_min, config_.log_std_max);
        const double std_dev = std::exp(log_std);
        const double eps = rng_.normal();
        const double z = mu + std_dev * eps;
        const double a = std::tanh(z);
        s.action[static_cast<std::size_t>(i)] = a;
        s.eps[static_cast<std::size_t>(i)] = eps;
        s.std_dev[static_cast<std::size_t>(i)] = std_dev;
        s.log_std_raw[static_cast<std::size_t>(i)] = raw;
        s.log_prob += -0.5 * eps * eps - log_std - kHalfLog2Pi - std::log(1.0 - a * a + kSquashEps);
    }
    return s;
}

std::vector<double> SacAgent::propose(std::span<const double> obs, bool stochastic) {
    if (obs.size() != static_cast<std::size_t>(obs_dim_))
        throw std::invalid_argument("SacAgent observation dimension mismatch");
    if (!stochastic) return action_mean(obs);
    return sample_policy(obs).action;
}

std::vector<double> SacAgent::action_mean(std::span<const double> obs) const {
    if (obs.size() != static_cast<std::size_t>(obs_dim_))
        throw std::invalid_argument("SacAgent observation dimension mismatch");
    const auto out = actor_.forward(obs);
    std::vector<double> a(static_cast<std::size_t>(act_dim_));
    for (int i = 0; i < act_dim_; ++i) a[static_cast<std::size_t>(i)] = std::tanh(out[static_cast<std::size_t>(i)]);
    return a;
}

double SacAgent::critic_value(const Mlp& critic, std::span<const double> obs,
                              std::span<const double> act) const {
    std::vector<double> in;
    in.reserve(obs.size() + act.size());
    in.insert(in.end(), obs.begin(), obs.end());
    in.insert(in.end(), act.begin(), act.end());
    return critic.forward(in)[0];
}

std::optional<TrainMetrics> SacAgent::train_step(long global_step) {
    if (global_step < config_.warmup_steps) return std::nullopt;
    if (config_.train_every > 1 && global_step % config_.train_every != 0) return std::nullopt;
    if (buffer_.size() < static_cast<std::size_t>(config_.batch_size)) return std::nullopt;
    return update_once();
}

TrainMetrics SacAgent::update_once() {
    const int batch = config_.batch_size;
    if (buffer_.size() < static_cast<std::size_t>(batch))
        throw std::runtime_error("replay buffer smaller than batch size");

    std::vector<std::size_t> idx(static_cast<std::size_t>(batch));
    for (auto& k : idx) k = rng_.uniform_index(buffer_.size());

    TrainMetrics metrics;
    const double alpha = config_.entropy_temperature;
    const double gamma = config_.discount;

    // ---- critic update ----
    std::fill(q1_grad_.begin(), q1_grad_.end(), 0.0);
    std::fill(q2_grad_.begin(), q2_grad_.end(), 0.0);
    std::vector<double> joint;
    for (std::size_t k : idx) {
        const Experience& e = buffer_.at(k);
        PolicySample next = sample_policy(e.next_state);
        const double tq1 = critic_value(q1_target_, e.next_state, next.action);
        const double tq2 = critic_value(q2_target_, e.next_state, next.action);
        const double target_v = std::min(tq1, tq2) - alpha * next.log_prob;
        const double y = (e.reward - config_.reward_baseline) + gamma * (e.done ? 0.0 : 1.0) * target_v;

        joint.assign(e.state.begin(), e.state.end());
        joint.insert(joint.end(), e.action.begin(), e.action.end());

        auto tr1 = q1_.forward_trace(joint);
        auto tr2 = q2_.forward_trace(joint);
        const double v1 = tr1.output()[0];
        const double v2 = tr2.output()[0];
        metrics.critic_loss += (v1 - y) * (v1 - y) + (v2 - y) * (v2 - y);
        metrics.mean_q += 0.5 * (v1 + v2);

        const double g1 = 2.0 * (v1 - y);
        const double g2 = 2.0 * (v2 - y);
        q1_.backward(tr1, std::span<const double>(&g1, 1), q1_grad_, {});
        q2_.backward(tr2, std::span<const double>(&g2, 1), q2_grad_, {});
    }
    q1_opt_.step(q1_.params(), q1_grad_);
    q2_opt_.step(q2_.params(), q2_grad_);

    // ---- actor update ----
    std::fill(actor_grad_.begin(), actor_grad_.end(), 0.0);
    std::fill(scratch_grad_.begin(), scratch_grad_.end(), 0.0);
    for (std::size_t k : idx) {
        const Experience& e = buffer_.at(k);
        PolicySample cur = sample_policy(e.state);

        joint.assign(e.state.begin(), e.state.end());
        joint.insert(joint.end(), cur.action.begin(), cur.action.end());
        auto tr1 = q1_.forward_trace(joint);
        auto tr2 = q2_.forward_trace(joint);
        const double v1 = tr1.output()[0];
        const double v2 = tr2.output()[0];
        const bool use_q1 = v1 <= v2;
        const double qmin = use_q1 ? v1 : v2;

        metrics.actor_loss += alpha * cur.log_prob - qmin;
        metrics.mean_entropy += -cur.log_prob;

        // d(qmin)/d(action): input gradient of the smaller critic; its
        // parameter gradient goes to scratch and is discarded.
        const double one = 1.0;
        std::fill(input_grad_.begin(), input_grad_.end(), 0.0);
        if (use_q1)
            q1_.backward(tr1, std::span<const double>(&one, 1), scratch_grad_, input_grad_);
        else
            q2_.backward(tr2, std::span<const double>(&one, 1), scratch_grad_, input_grad_);

        std::vector<double> out_grad(static_cast<std::size_t>(2 * act_dim_), 0.0);
        for (int i = 0; i < act_dim_; ++i) {
            const double a = cur.action[static_cast<std::size_t>(i)];
            const double dq_da = input_grad_[static_cast<std::size_t>(obs_dim_ + i)];
            // dL/da: entropy's squash correction minus the critic pull
            const double dl_da =
                alpha * (2.0 * a * (1.0 - a * a)) / (1.0 - a * a + kSquashEps) - dq_da;
            const double g_z = dl_da * (1.0 - a * a);
            out_grad[static_cast<std::size_t>(i)] = g_z; // d z/d mu = 1
            const double raw = cur.log_std_raw[static_cast<std::size_t>(i)];
            double g_log_std =
                g_z * cur.std_dev[static_cast<std::size_t>(i)] * cur.eps[static_cast<std::size_t>(i)] - alpha;
            if (raw < config_.log_std_min || raw > config_.log_std_max) g_log_std = 0.0;
            out_grad[static_cast<std::size_t>(act_dim_ + i)] = g_log_std;
        }
        actor_.backward(cur.trace, out_grad, actor_grad_, {});
    }
    actor_opt_.step(actor_.params(), actor_grad_);

    // ---- target smoothing ----
    const double rho = config_.target_smoothing;
    auto blend = [rho](std::span<const double> src, std::span<double> dst) {
        for (std::size_t i = 0; i < src.size(); ++i) dst[i] = rho * dst[i] + (1.0 - rho) * src[i];
    };
    blend(q1_.params(), q1_target_.params());
    blend(q2_.params(), q2_target_.params());

    metrics.critic_loss /= batch;
    metrics.actor_loss /= batch;
    metrics.mean_entropy /= batch;
    metrics.mean_q /= batch;
    ++updates_done_;
    return metrics;
}

void SacAgent::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    out.precision(17);
    out << "voltgrid-sac v1\n";
    out << "obs_dim " << obs_dim_ << "\n";
    out << "act_dim " << act_dim_ << "\n";
    out << "hidden";
    for (int h : config_.hidden_dims) out << ' ' << h;
    out << "\n";
    out << "learning_rate " << config_.learning_rate << "\n";
    out << "warmup_steps " << config_.warmup_steps << "\n";
    out << "train_every " << config_.train_every << "\n";
    out << "discount " << config_.discount << "\n";
    out << "batch_size " << config_.batch_size << "\n";
    out << "buffer_capacity " << buffer_.capacity() << "\n";
    out << "target_smoothing " << config_.target_smoothing << "\n";
    out << "entropy_temperature " << config_.entropy_temperature << "\n";
    out << "momentum " << config_.momentum << "\n";
    out << "actor_momentum " << config_.actor_momentum << "\n";
    out << "log_std_min " << config_.log_std_min << "\n";
    out << "log_std_max " << config_.log_std_max << "\n";
    out << "updates_done " << updates_done_ << "\n";
    auto dump = [&out](const char* name, std::span<const double> p) {
        out << name << ' ' << p.size() << "\n";
        for (std::size_t i = 0; i < p.size(); ++i) out << p[i] << (i + 1 == p.size() ? '\n' : ' ');
    };
    dump("actor", actor_.params());
    dump("q1", q1_.params());
    dump("q2", q2_.params());
    dump("q1_target", q1_target_.params());
    dump("q2_target", q2_target_.params());
    out << "buffer " << buffer_.size() << ' ' << buffer_.capacity() << ' ' << buffer_.total_pushed() << "\n";
    out << "end\n";
    if (!out) throw std::runtime_error("checkpoint write failed: " + path);
}

SacAgent SacAgent::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    long line_no = 1;
    if (!std::getline(in, line) || line != "voltgrid-sac v1")
        throw ParseError("bad checkpoint header", line_no);

    SacConfig cfg;
    cfg.hidden_dims.clear();
    int obs_dim = 0, act_dim = 0;
    long updates = 0;
    auto next_tokens = [&in, &line_no]() {
        std::string l;
        if (!std::getline(in, l)) throw ParseError("unexpected end of checkpoint", line_no);
        ++line_no;
        std::istringstream s(l);
        std::vector<std::string> toks;
        std::string t;
        while (s >> t) toks.push_back(t);
        return toks;
    };
    auto expect_scalar = [&next_tokens, &line_no](const std::string& key) {
        auto toks = next_tokens();
        if (toks.size() != 2 || toks[0] != key) throw ParseError("expected '" + key + " <value>'", line_no);
        return toks[1];
    };

    obs_dim = std::stoi(expect_scalar("obs_dim"));
    act_dim = std::stoi(expect_scalar("act_dim"));
    {
        auto toks = next_tokens();
        if (toks.empty() || toks[0] != "hidden") throw ParseError("expected 'hidden ...'", line_no);
        for (std::size_t i = 1; i < toks.size(); ++i) cfg.hidden_dims.push_back(std::stoi(toks[i]));
    }
    cfg.learning_rate = std::stod(expect_scalar("learning_rate"));
    cfg.warmup_steps = std::stol(expect_scalar("warmup_steps"));
    cfg.train_every = std::stol(expect_scalar("train_every"));
    cfg.discount = std::stod(expect_scalar("discount"));
    cfg.batch_size = std::stoi(expect_scalar("batch_size"));
    cfg.buffer_capacity = static_cast<std::size_t>(std::stoul(expect_scalar("buffer_capacity")));
    cfg.target_smoothing = std::stod(expect_scalar("target_smoothing"));
    cfg.entropy_temperature = std::stod(expect_scalar("entropy_temperature"));
    cfg.momentum = std::stod(expect_scalar("momentum"));
    cfg.actor_momentum = std::stod(expect_scalar("actor_momentum"));
    cfg.log_std_min = std::stod(expect_scalar("log_std_min"));
    cfg.log_std_max = std::stod(expect_scalar("log_std_max"));
    updates = std::stol(expect_scalar("updates_done"));
    cfg.init_scale = 0.0; // parameters come from the file

    SacAgent agent(obs_dim, act_dim, cfg);
    agent.updates_done_ = updates;
    auto read_block = [&in, &line_no](const std::string& name, std::span<double> dst) {
        std::string key;
        std::size_t count = 0;
        if (!(in >> key >> count)) throw ParseError("expected parameter block '" + name + "'", line_no);
        if (key != name || count != dst.size())
            throw ParseError("parameter block mismatch for '" + name + "'", line_no);
        for (std::size_t i = 0; i < count; ++i)
            if (!(in >> dst[i])) throw ParseError("truncated parameter block '" + name + "'", line_no);
    };
    read_block("actor", agent.actor_.params());
    read_block("q1", agent.q1_.params());
    read_block("q2", agent.q2_.params());
    read_block("q1_target", agent.q1_target_.params());
    read_block("q2_target", agent.q2_target_.params());
    return agent;
}

} // namespace voltgrid
