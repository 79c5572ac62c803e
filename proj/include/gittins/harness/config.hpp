#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gittins/arm.hpp"
#include "gittins/deep/dgn.hpp"
#include "gittins/error.hpp"
#include "gittins/harness/csv.hpp"
#include "gittins/schedule.hpp"
#include "gittins/scheduling/jobs.hpp"
#include "gittins/scheduling/train.hpp"
#include "gittins/tabular.hpp"
#include "gittins/train.hpp"

namespace gittins::harness {

/// Flat `section.key = value` file. '#' starts a comment; blank lines are
/// ignored; a key may appear once.
class ConfigFile {
public:
    struct Entry {
        std::string value;
        std::size_t line = 0; ///< 0 for values set programmatically
    };

    static ConfigFile parse(std::istream& in, const std::string& source = "<config>")
    {
        ConfigFile cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const std::string body = trim(line);
            if (body.empty()) continue;
            const auto eq = body.find('=');
            const std::string where = source + ":" + std::to_string(lineno);
            if (eq == std::string::npos) throw ConfigError(where + ": expected 'section.key = value'");
            const std::string key = trim(body.substr(0, eq));
            const std::string value = trim(body.substr(eq + 1));
            if (key.find('.') == std::string::npos || key.front() == '.' || key.back() == '.')
                throw ConfigError(where + ": key '" + key + "' must have the form section.key");
            if (cfg.entries_.count(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
            cfg.entries_[key] = {value, lineno};
        }
        cfg.source_ = source;
        return cfg;
    }

    static ConfigFile parse_string(const std::string& text, const std::string& source = "<string>")
    {
        std::istringstream in(text);
        return parse(in, source);
    }

    static ConfigFile load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config file '" + path + "'");
        return parse(in, path);
    }

    void set(const std::string& key, const std::string& value) { entries_[key] = {value, 0}; }
    [[nodiscard]] bool has(const std::string& key) const { return entries_.count(key) != 0; }
    [[nodiscard]] const std::map<std::string, Entry>& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

    [[nodiscard]] std::string where(const std::string& key) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end() || it->second.line == 0) return "'" + key + "'";
        return source_ + ":" + std::to_string(it->second.line) + " '" + key + "'";
    }

    [[nodiscard]] std::optional<std::string> raw(const std::string& key) const
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

    static std::string trim(const std::string& s)
    {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

private:
    std::map<std::string, Entry> entries_;
    std::string source_ = "<config>";
};

enum class EnvKind { toy, dirichlet, two_state, scheduling };

inline std::string to_string(EnvKind k)
{
    switch (k) {
    case EnvKind::toy: return "toy";
    case EnvKind::dirichlet: return "dirichlet";
    case EnvKind::two_state: return "two_state";
    case EnvKind::scheduling: return "scheduling";
    }
    return "?";
}

/// Scheduling job batch description.
struct JobsConfig {
    std::string kind = "increasing"; ///< constant|increasing|decreasing|binomial|poisson|geometric|uniform|lognormal
    std::size_t count = 9;
    double lambda = 0.8;
    std::vector<double> rho;         ///< explicit rho1 per hazard job; empty means sampled
    std::optional<std::uint64_t> sample_seed; ///< seed for sampled rho1; default derives from the run seed
    int n = 10;
    double p = 0.5;
    double mean = 5.0;
    double q = 0.5;
    double lo = 0.0;
    double hi = 10.0;
    double delta = 0.1;
    double mu = 3.4011973816621555; // log(30)
    double sigma = 0.6;
    double max = 75.0;
    std::size_t hazard_states = 50;

    [[nodiscard]] bool is_hazard() const { return kind == "constant" || kind == "increasing" || kind == "decreasing"; }
};

/// Jobs for one run. Sampled hazard parameters use `sample_seed` when given,
/// otherwise a stream derived from the run seed.
inline std::vector<scheduling::JobSpec> make_jobs(const JobsConfig& jc, std::uint64_t run_seed)
{
    using namespace scheduling;
    if (jc.is_hazard()) {
        const HazardKind kind = jc.kind == "constant" ? HazardKind::constant
                                : jc.kind == "increasing" ? HazardKind::increasing
                                                          : HazardKind::decreasing;
        if (!jc.rho.empty()) {
            std::vector<JobSpec> jobs;
            for (double r : jc.rho) jobs.push_back(HazardSpec{kind, r, jc.lambda});
            return jobs;
        }
        RandomSource rng = jc.sample_seed ? RandomSource(*jc.sample_seed) : RandomSource(run_seed).derive(5);
        return sample_hazard_batch(kind, jc.count, jc.lambda, rng);
    }
    ServiceDistSpec spec;
    if (jc.kind == "binomial") spec = ServiceDistSpec::binomial(jc.n, jc.p);
    else if (jc.kind == "poisson") spec = ServiceDistSpec::poisson(jc.mean);
    else if (jc.kind == "geometric") spec = ServiceDistSpec::geometric(jc.q);
    else if (jc.kind == "uniform") spec = ServiceDistSpec::uniform(jc.lo, jc.hi, jc.delta);
    else if (jc.kind == "lognormal") spec = ServiceDistSpec::lognormal(jc.mu, jc.sigma, jc.delta, jc.max);
    else throw ConfigError("jobs.kind: unknown kind '" + jc.kind + "'");
    return std::vector<JobSpec>(jc.count, spec);
}

struct GridConfig {
    std::string x_axis = "x";
    std::string y_axis = "y";
    std::vector<double> x_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<double> y_values = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::size_t runs = 10;
    std::vector<double> deltas = {0.01, 0.025, 0.05};
    std::uint64_t seed_base = 0;
};

/// Fully resolved experiment description; `to_text` writes it back in the
/// same key = value format so a manifest re-runs exactly.
struct ExperimentConfig {
    EnvKind env = EnvKind::toy;
    Algorithm algo = Algorithm::qgi;
    std::size_t arms = 5;
    double gamma = 0.9;
    std::size_t states = 50;           ///< dirichlet only
    double concentration = 1.0;        ///< dirichlet only
    std::uint64_t env_seed = 0;        ///< dirichlet matrix seed
    bool heterogeneous = false;        ///< dirichlet: one draw per arm
    TableSharing sharing = TableSharing::automatic;
    LearningRateSchedule rates;
    EpsilonSchedule epsilon = EpsilonSchedule::fixed(1.0);
    scheduling::EpsilonUnit epsilon_unit = scheduling::EpsilonUnit::step;
    std::uint64_t steps = 20000;
    std::uint64_t episodes = 2500;
    std::vector<std::uint64_t> seeds = {0};
    std::uint64_t cadence = 1;
    std::size_t tail_window = 200;
    std::string out = "out";
    double oracle_tol = 1e-6;
    std::size_t threads = 1;
    deep::DgnConfig dgn;
    JobsConfig jobs;
    GridConfig grid;
};

/// Learning-rate defaults per setting: tuned toy schedules, constant rates
/// for scheduling.
inline LearningRateSchedule default_rates(EnvKind env, Algorithm algo, const std::string& job_kind)
{
    if (env == EnvKind::scheduling) {
        const bool distribution = job_kind != "constant" && job_kind != "increasing" && job_kind != "decreasing";
        switch (algo) {
        case Algorithm::restart: return constant_schedule(0.3, 0.0, 1);
        case Algorithm::qgi:
        case Algorithm::qwi:
        case Algorithm::dgn: return distribution ? constant_schedule(0.6, 0.3, 2) : constant_schedule(0.6, 0.4, 5);
        }
    }
    switch (algo) {
    case Algorithm::qwi: return qwi_toy_schedule();
    case Algorithm::restart: return constant_schedule(0.3, 0.0, 1);
    case Algorithm::dgn: return constant_schedule(1.0, 1.0, 5);
    case Algorithm::qgi: break;
    }
    return qgi_toy_schedule();
}

namespace detail_cfg {

inline const std::set<std::string>& known_keys()
{
    static const std::set<std::string> keys = {
        "experiment.env", "experiment.algo", "experiment.steps", "experiment.episodes", "experiment.seeds", "experiment.cadence",
        "experiment.tail_window", "experiment.out", "experiment.threads", "oracle.tol",
        "env.arms", "env.gamma", "env.states", "env.concentration", "env.seed", "env.heterogeneous", "env.sharing",
        "rates.x", "rates.y", "rates.theta", "rates.kappa", "rates.phi", "rates.alpha_form", "rates.beta_form", "rates.log_base",
        "epsilon.initial", "epsilon.decay", "epsilon.floor", "epsilon.unit",
        "dgn.batch", "dgn.tau", "dgn.sync_period", "dgn.step_size", "dgn.encoding", "dgn.replay_capacity", "dgn.hidden",
        "jobs.kind", "jobs.count", "jobs.lambda", "jobs.rho", "jobs.sample_seed", "jobs.n", "jobs.p", "jobs.mean", "jobs.q",
        "jobs.lo", "jobs.hi", "jobs.delta", "jobs.mu", "jobs.sigma", "jobs.max", "jobs.hazard_states",
        "grid.x_axis", "grid.y_axis", "grid.x_values", "grid.y_values", "grid.runs", "grid.deltas", "grid.seed_base",
    };
    return keys;
}

class Reader {
public:
    explicit Reader(const ConfigFile& cfg) : cfg_(cfg) {}

    template <class T>
    void get(const std::string& key, T& target) const
    {
        if (const auto v = cfg_.raw(key)) target = convert<T>(key, *v);
    }

    template <class T>
    void get_list(const std::string& key, std::vector<T>& target) const
    {
        const auto v = cfg_.raw(key);
        if (!v) return;
        target.clear();
        std::stringstream ss(*v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = ConfigFile::trim(item);
            if (item.empty()) fail(key, "empty list element");
            target.push_back(convert<T>(key, item));
        }
        if (target.empty()) fail(key, "list must not be empty");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw ConfigError(cfg_.where(key) + ": " + what);
    }

    template <class T>
    T convert(const std::string& key, const std::string& s) const
    {
        if constexpr (std::is_same_v<T, std::string>) {
            return s;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (s == "true" || s == "1") return true;
            if (s == "false" || s == "0") return false;
            fail(key, "expected true or false, got '" + s + "'");
        } else {
            T value{};
            const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
            if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) fail(key, "cannot parse '" + s + "'");
            return value;
        }
    }

private:
    const ConfigFile& cfg_;
};

template <class Enum>
Enum pick(const Reader& r, const std::string& key, const std::string& value, std::initializer_list<std::pair<const char*, Enum>> options)
{
    std::string names;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        names += names.empty() ? name : std::string("|") + name;
    }
    r.fail(key, "unknown value '" + value + "' (expected " + names + ")");
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_field(v[i]);
    }
    return out;
}

} // namespace detail_cfg

/// Reads, type-checks and range-checks a config. Any unknown key, bad value
/// or inconsistent combination is rejected here, before anything runs.
inline ExperimentConfig resolve(const ConfigFile& file)
{
    using detail_cfg::pick;
    for (const auto& [key, entry] : file.entries())
        if (!detail_cfg::known_keys().count(key)) throw ConfigError(file.where(key) + ": unknown key");

    const detail_cfg::Reader r(file);
    ExperimentConfig c;
    std::string s;

    if (const auto v = file.raw("experiment.env"))
        c.env = pick<EnvKind>(r, "experiment.env", *v,
                              {{"toy", EnvKind::toy}, {"dirichlet", EnvKind::dirichlet}, {"two_state", EnvKind::two_state}, {"scheduling", EnvKind::scheduling}});
    if (const auto v = file.raw("experiment.algo"))
        c.algo = pick<Algorithm>(r, "experiment.algo", *v,
                                 {{"qgi", Algorithm::qgi}, {"restart", Algorithm::restart}, {"qwi", Algorithm::qwi}, {"dgn", Algorithm::dgn}});
    r.get("experiment.steps", c.steps);
    r.get("experiment.episodes", c.episodes);
    r.get_list("experiment.seeds", c.seeds);
    r.get("experiment.cadence", c.cadence);
    r.get("experiment.tail_window", c.tail_window);
    r.get("experiment.out", c.out);
    r.get("experiment.threads", c.threads);
    r.get("oracle.tol", c.oracle_tol);

    if (c.env == EnvKind::two_state) c.arms = 2;
    r.get("env.arms", c.arms);
    r.get("env.gamma", c.gamma);
    r.get("env.states", c.states);
    r.get("env.concentration", c.concentration);
    r.get("env.seed", c.env_seed);
    r.get("env.heterogeneous", c.heterogeneous);
    if (const auto v = file.raw("env.sharing"))
        c.sharing = pick<TableSharing>(r, "env.sharing", *v,
                                       {{"auto", TableSharing::automatic}, {"shared", TableSharing::shared}, {"per_arm", TableSharing::per_arm}});

    r.get("jobs.kind", c.jobs.kind);
    r.get("jobs.count", c.jobs.count);
    r.get("jobs.lambda", c.jobs.lambda);
    r.get_list("jobs.rho", c.jobs.rho);
    if (file.has("jobs.sample_seed")) {
        std::uint64_t v = 0;
        r.get("jobs.sample_seed", v);
        c.jobs.sample_seed = v;
    }
    r.get("jobs.n", c.jobs.n);
    r.get("jobs.p", c.jobs.p);
    r.get("jobs.mean", c.jobs.mean);
    r.get("jobs.q", c.jobs.q);
    r.get("jobs.lo", c.jobs.lo);
    r.get("jobs.hi", c.jobs.hi);
    r.get("jobs.delta", c.jobs.delta);
    r.get("jobs.mu", c.jobs.mu);
    r.get("jobs.sigma", c.jobs.sigma);
    r.get("jobs.max", c.jobs.max);
    r.get("jobs.hazard_states", c.jobs.hazard_states);

    c.rates = default_rates(c.env, c.algo, c.jobs.kind);
    r.get("rates.x", c.rates.x);
    r.get("rates.y", c.rates.y);
    r.get("rates.theta", c.rates.theta);
    r.get("rates.kappa", c.rates.kappa);
    r.get("rates.phi", c.rates.phi);
    if (const auto v = file.raw("rates.alpha_form"))
        c.rates.alpha_form = pick<RateForm>(r, "rates.alpha_form", *v, {{"decaying", RateForm::decaying}, {"constant", RateForm::constant}});
    if (const auto v = file.raw("rates.beta_form"))
        c.rates.beta_form = pick<RateForm>(r, "rates.beta_form", *v, {{"decaying", RateForm::decaying}, {"constant", RateForm::constant}});
    if (const auto v = file.raw("rates.log_base"))
        c.rates.log_base = pick<LogBase>(r, "rates.log_base", *v, {{"natural", LogBase::natural}, {"2", LogBase::base2}, {"10", LogBase::base10}});

    if (c.env == EnvKind::scheduling) c.epsilon = {1.0, 0.9985, 0.0};
    r.get("epsilon.initial", c.epsilon.initial);
    r.get("epsilon.decay", c.epsilon.decay);
    r.get("epsilon.floor", c.epsilon.floor);
    if (const auto v = file.raw("epsilon.unit"))
        c.epsilon_unit = pick<scheduling::EpsilonUnit>(r, "epsilon.unit", *v,
                                                       {{"step", scheduling::EpsilonUnit::step}, {"episode", scheduling::EpsilonUnit::episode}});

    r.get("dgn.batch", c.dgn.batch);
    r.get("dgn.tau", c.dgn.tau);
    r.get("dgn.sync_period", c.dgn.sync_period);
    r.get("dgn.step_size", c.dgn.step_size);
    r.get("dgn.replay_capacity", c.dgn.replay_capacity);
    r.get_list("dgn.hidden", c.dgn.hidden);
    if (const auto v = file.raw("dgn.encoding"))
        c.dgn.encoding = pick<deep::Encoding>(r, "dgn.encoding", *v, {{"one_hot", deep::Encoding::one_hot}, {"scalar_pair", deep::Encoding::scalar_pair}});
    c.dgn.index_rate = c.rates;

    r.get("grid.x_axis", c.grid.x_axis);
    r.get("grid.y_axis", c.grid.y_axis);
    r.get_list("grid.x_values", c.grid.x_values);
    r.get_list("grid.y_values", c.grid.y_values);
    r.get("grid.runs", c.grid.runs);
    r.get_list("grid.deltas", c.grid.deltas);
    r.get("grid.seed_base", c.grid.seed_base);

    // ranges and combinations
    auto bad = [&](const std::string& key, const std::string& what) { r.fail(key, what); };
    if (!(c.gamma > 0.0 && c.gamma < 1.0)) bad("env.gamma", "must lie in (0,1)");
    if (c.arms < 1) bad("env.arms", "must be >= 1");
    if (c.env == EnvKind::two_state && c.arms != 2) bad("env.arms", "two_state has exactly 2 arms");
    if (c.env == EnvKind::dirichlet && c.states < 1) bad("env.states", "must be >= 1");
    if (!(c.concentration > 0.0)) bad("env.concentration", "must be positive");
    if (c.cadence < 1) bad("experiment.cadence", "must be >= 1");
    if (c.tail_window < 1) bad("experiment.tail_window", "must be >= 1");
    if (c.seeds.empty()) bad("experiment.seeds", "need at least one seed");
    if (c.threads < 1) bad("experiment.threads", "must be >= 1");
    if (!(c.oracle_tol > 0.0)) bad("oracle.tol", "must be positive");
    try {
        c.rates.validate();
    } catch (const InvalidInput& e) {
        bad("rates.x", e.what());
    }
    try {
        c.epsilon.validate();
    } catch (const InvalidInput& e) {
        bad("epsilon.initial", e.what());
    }
    if (c.algo == Algorithm::dgn) {
        c.dgn.validate();
        if (c.env == EnvKind::scheduling) bad("experiment.algo", "dgn is not available for scheduling");
        if (c.env == EnvKind::two_state || (c.env == EnvKind::dirichlet && c.heterogeneous))
            bad("experiment.algo", "dgn needs a homogeneous bandit");
    }
    if (c.sharing == TableSharing::shared && (c.env == EnvKind::two_state || (c.env == EnvKind::dirichlet && c.heterogeneous)))
        bad("env.sharing", "shared table requested for a heterogeneous bandit");
    if (c.env == EnvKind::scheduling) {
        static const std::set<std::string> kinds = {"constant", "increasing", "decreasing", "binomial", "poisson", "geometric", "uniform", "lognormal"};
        if (!kinds.count(c.jobs.kind)) bad("jobs.kind", "unknown kind '" + c.jobs.kind + "'");
        if (c.jobs.count < 1 && c.jobs.rho.empty()) bad("jobs.count", "must be >= 1");
        if (c.jobs.hazard_states < 2) bad("jobs.hazard_states", "must be >= 2");
        try {
            const auto jobs = make_jobs(c.jobs, c.seeds.front());
            scheduling::JobBatchEnv probe(jobs, c.jobs.hazard_states);
        } catch (const InvalidInput& e) {
            bad("jobs.kind", e.what());
        }
    }
    static const std::set<std::string> axes = {"x", "y", "theta", "kappa", "phi"};
    if (!axes.count(c.grid.x_axis)) bad("grid.x_axis", "must be one of x, y, theta, kappa, phi");
    if (!axes.count(c.grid.y_axis)) bad("grid.y_axis", "must be one of x, y, theta, kappa, phi");
    if (c.grid.x_axis == c.grid.y_axis) bad("grid.y_axis", "axes must differ");
    if (c.grid.runs < 1) bad("grid.runs", "must be >= 1");
    return c;
}

inline ExperimentConfig resolve_text(const std::string& text) { return resolve(ConfigFile::parse_string(text)); }

/// Canonical text form of a resolved config (every key, fixed order).
inline std::string to_text(const ExperimentConfig& c)
{
    using detail_cfg::join;
    std::ostringstream o;
    auto kv = [&](const char* k, const std::string& v) { o << k << " = " << v << '\n'; };
    auto num = [](double v) { return format_number(v); };
    auto form = [](RateForm f) { return f == RateForm::constant ? "constant" : "decaying"; };

    kv("experiment.env", to_string(c.env));
    kv("experiment.algo", std::string(to_string(c.algo)));
    kv("experiment.steps", std::to_string(c.steps));
    kv("experiment.episodes", std::to_string(c.episodes));
    kv("experiment.seeds", join(c.seeds));
    kv("experiment.cadence", std::to_string(c.cadence));
    kv("experiment.tail_window", std::to_string(c.tail_window));
    kv("experiment.out", c.out);
    kv("experiment.threads", std::to_string(c.threads));
    kv("oracle.tol", num(c.oracle_tol));
    kv("env.arms", std::to_string(c.arms));
    kv("env.gamma", num(c.gamma));
    kv("env.states", std::to_string(c.states));
    kv("env.concentration", num(c.concentration));
    kv("env.seed", std::to_string(c.env_seed));
    kv("env.heterogeneous", c.heterogeneous ? "true" : "false");
    kv("env.sharing", c.sharing == TableSharing::shared ? "shared" : c.sharing == TableSharing::per_arm ? "per_arm" : "auto");
    kv("rates.x", num(c.rates.x));
    kv("rates.y", num(c.rates.y));
    kv("rates.theta", std::to_string(c.rates.theta));
    kv("rates.kappa", std::to_string(c.rates.kappa));
    kv("rates.phi", std::to_string(c.rates.phi));
    kv("rates.alpha_form", form(c.rates.alpha_form));
    kv("rates.beta_form", form(c.rates.beta_form));
    kv("rates.log_base", c.rates.log_base == LogBase::base2 ? "2" : c.rates.log_base == LogBase::base10 ? "10" : "natural");
    kv("epsilon.initial", num(c.epsilon.initial));
    kv("epsilon.decay", num(c.epsilon.decay));
    kv("epsilon.floor", num(c.epsilon.floor));
    kv("epsilon.unit", c.epsilon_unit == scheduling::EpsilonUnit::episode ? "episode" : "step");
    kv("dgn.batch", std::to_string(c.dgn.batch));
    kv("dgn.tau", num(c.dgn.tau));
    kv("dgn.sync_period", std::to_string(c.dgn.sync_period));
    kv("dgn.step_size", num(c.dgn.step_size));
    kv("dgn.encoding", to_string(c.dgn.encoding));
    kv("dgn.replay_capacity", std::to_string(c.dgn.replay_capacity));
    kv("dgn.hidden", join(c.dgn.hidden));
    kv("jobs.kind", c.jobs.kind);
    kv("jobs.count", std::to_string(c.jobs.count));
    kv("jobs.lambda", num(c.jobs.lambda));
    if (!c.jobs.rho.empty()) kv("jobs.rho", join(c.jobs.rho));
    if (c.jobs.sample_seed) kv("jobs.sample_seed", std::to_string(*c.jobs.sample_seed));
    kv("jobs.n", std::to_string(c.jobs.n));
    kv("jobs.p", num(c.jobs.p));
    kv("jobs.mean", num(c.jobs.mean));
    kv("jobs.q", num(c.jobs.q));
    kv("jobs.lo", num(c.jobs.lo));
    kv("jobs.hi", num(c.jobs.hi));
    kv("jobs.delta", num(c.jobs.delta));
    kv("jobs.mu", num(c.jobs.mu));
    kv("jobs.sigma", num(c.jobs.sigma));
    kv("jobs.max", num(c.jobs.max));
    kv("jobs.hazard_states", std::to_string(c.jobs.hazard_states));
    kv("grid.x_axis", c.grid.x_axis);
    kv("grid.y_axis", c.grid.y_axis);
    kv("grid.x_values", join(c.grid.x_values));
    kv("grid.y_values", join(c.grid.y_values));
    kv("grid.runs", std::to_string(c.grid.runs));
    kv("grid.deltas", join(c.grid.deltas));
    kv("grid.seed_base", std::to_string(c.grid.seed_base));
    return o.str();
}

} // namespace gittins::harness
