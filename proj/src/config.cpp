#include "svpath/config.hpp"

#include "svpath/payoff.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace svpath::config {

namespace {

const std::set<std::string, std::less<>> kKnownKeys{
    "r", "mu", "xi", "rho", "lambda", "k", "alpha",
    "spot", "spot_log_price", "v0", "spot_log_variance",
    "kind", "strike", "maturity", "barrier",
    "n", "y0_nodes", "y0_halfwidth_sigmas",
    "variance_paths", "price_paths", "seed", "antithetic", "rule", "threads",
    "strikes", "sweep_key", "sweep_values",
    "kinds", "euler_steps", "euler_paths",
};

std::string trim(std::string_view s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& text)
{
    T value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
    return value;
}

}  // namespace

double parse_double(const std::string& key, const std::string& text)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
    }
}

Config Config::parse(std::string_view text)
{
    Config cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number) + ": expected 'key = value'");
        }
        cfg.set(trim(std::string_view(line).substr(0, eq)), trim(std::string_view(line).substr(eq + 1)));
    }
    return cfg;
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

void Config::set(const std::string& key, const std::string& value)
{
    if (!kKnownKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    if (value.empty()) throw ConfigError("key '" + key + "' has an empty value");
    values_[key] = value;
}

void Config::apply_override(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("override must look like key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

const std::string& Config::get(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const { return parse_double(key, get(key)); }

double Config::get_double(const std::string& key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key) const { return parse_integer<std::int64_t>(key, get(key)); }

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const
{
    return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const
{
    if (!has(key)) return fallback;
    const auto& v = get(key);
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::string> Config::get_list(const std::string& key) const
{
    std::vector<std::string> out;
    std::stringstream in(get(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("key '" + key + "': empty list element");
        out.push_back(item);
    }
    return out;
}

std::vector<double> Config::get_double_list(const std::string& key) const
{
    std::vector<double> out;
    for (const auto& item : get_list(key)) out.push_back(parse_double(key, item));
    return out;
}

Contract make_contract(const std::string& kind, const Config& cfg)
{
    Contract c;
    c.strike = cfg.get_double("strike", 1.0);
    c.maturity = cfg.get_double("maturity");
    if (cfg.has("barrier")) c.barrier = cfg.get_double("barrier");
    if (kind == "const1") {
        c.kind = PayoffKind::Custom;
        c.custom_payoff = payoff::constant(1.0);
    } else if (kind == "forward") {
        c.kind = PayoffKind::Custom;
        c.custom_payoff = payoff::forward(c.strike);
    } else if (auto parsed = parse_payoff_kind(kind); parsed && *parsed != PayoffKind::Custom) {
        c.kind = *parsed;
        if (!cfg.has("strike")) throw ConfigError("missing required key 'strike'");
    } else {
        throw ConfigError("unknown payoff kind '" + kind + "'");
    }
    try {
        require_valid(c);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunSpec build_run_spec(const Config& cfg)
{
    RunSpec run;
    auto& p = run.params;
    p.r = cfg.get_double("r", 0.0);
    p.mu = cfg.get_double("mu", 0.0);
    p.xi = cfg.get_double("xi");
    p.rho = cfg.get_double("rho", 0.0);
    p.lambda = cfg.get_double("lambda", 0.0);
    p.k = cfg.get_double("k", 0.0);
    p.alpha = cfg.get_double("alpha", 1.0);
    if (auto errors = validate(p); !errors.empty()) {
        std::string msg = "invalid model parameters:";
        for (const auto& e : errors) msg += " " + e;
        throw ConfigError(msg);
    }

    if (cfg.has("spot") == cfg.has("spot_log_price")) throw ConfigError("set exactly one of 'spot' or 'spot_log_price'");
    if (cfg.has("v0") == cfg.has("spot_log_variance")) throw ConfigError("set exactly one of 'v0' or 'spot_log_variance'");
    if (cfg.has("spot")) {
        const double s = cfg.get_double("spot");
        if (!(s > 0.0)) throw ConfigError("spot must be positive");
        run.state.spot_log_price = std::log(s);
    } else {
        run.state.spot_log_price = cfg.get_double("spot_log_price");
    }
    if (cfg.has("v0")) {
        const double v = cfg.get_double("v0");
        if (!(v > 0.0)) throw ConfigError("v0 must be positive");
        run.state.spot_log_variance = std::log(v);
    } else {
        run.state.spot_log_variance = cfg.get_double("spot_log_variance");
    }

    run.contract = make_contract(cfg.has("kind") ? cfg.get("kind") : std::string("european_call"), cfg);

    run.grid.n = static_cast<int>(cfg.get_int("n", run.grid.n));
    run.grid.y0_nodes = static_cast<int>(cfg.get_int("y0_nodes", run.grid.y0_nodes));
    run.grid.y0_halfwidth_sigmas = cfg.get_double("y0_halfwidth_sigmas", run.grid.y0_halfwidth_sigmas);

    run.mc.variance_paths = cfg.get_int("variance_paths", run.mc.variance_paths);
    run.mc.price_paths = cfg.get_int("price_paths", run.mc.price_paths);
    run.mc.seed = parse_integer<std::uint64_t>("seed", cfg.get("seed"));
    run.mc.antithetic = cfg.get_bool("antithetic", false);
    run.mc.threads = static_cast<int>(cfg.get_int("threads", 1));
    if (cfg.has("rule")) {
        const auto& rule = cfg.get("rule");
        if (rule == "trapezoid") {
            run.mc.rule = OuterRule::Trapezoid;
        } else if (rule == "simpson") {
            run.mc.rule = OuterRule::Simpson;
        } else {
            throw ConfigError("rule must be 'trapezoid' or 'simpson'");
        }
    }
    try {
        require_valid(run.state);
        require_valid(run.grid);
        require_valid(run.mc);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return run;
}

reference::EulerConfig build_euler_config(const Config& cfg, const RunSpec& run)
{
    reference::EulerConfig e;
    e.steps = static_cast<int>(cfg.get_int("euler_steps", 250));
    e.paths = cfg.get_int("euler_paths", 100000);
    e.seed = run.mc.seed;
    e.observation_intervals = run.grid.n + 1;
    e.threads = run.mc.threads;
    if (e.steps < 1 || e.paths < 1) throw ConfigError("euler_steps and euler_paths must be >= 1");
    return e;
}

}  // namespace svpath::config
