#pragma once

#include "svpath/model.hpp"
#include "svpath/reference.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace svpath::config {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` settings; `#` starts a comment. Later assignments win.
class Config {
public:
    static Config parse(std::string_view text);
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    /// Applies a `key=value` override.
    void apply_override(std::string_view assignment);

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
    [[nodiscard]] const std::string& get(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::int64_t get_int(const std::string& key) const;
    [[nodiscard]] std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<std::string> get_list(const std::string& key) const;
    [[nodiscard]] std::vector<double> get_double_list(const std::string& key) const;

    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

private:
    std::map<std::string, std::string> values_;
};

double parse_double(const std::string& key, const std::string& text);

/// Everything needed for one pricing run.
struct RunSpec {
    ModelParams params;
    MarketState state;
    Contract contract;
    GridSpec grid;
    McConfig mc;
};

/// Builds and validates a run. Spot, initial variance and seed are mandatory.
/// Payoff kinds additionally accept `const1` (pays 1) and `forward` (e^{x_0} - K).
RunSpec build_run_spec(const Config& cfg);

Contract make_contract(const std::string& kind, const Config& cfg);

reference::EulerConfig build_euler_config(const Config& cfg, const RunSpec& run);

}  // namespace svpath::config
