#pragma once

#include "svpath/config.hpp"
#include "svpath/model.hpp"
#include "svpath/smile.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace svpath::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

enum class Format { Text, Csv, Json };

/// "%.12g"
std::string format_number(double v);

struct PriceReport {
    config::RunSpec run;
    PriceResult result;
    double seconds = 0.0;
};

PriceReport cmd_price(const config::Config& cfg);
std::string render_price(const PriceReport& report, Format format);

struct SmileOutput {
    std::string label;  // empty for a single run, "<key>_<value>" for sweeps
    smile::Smile smile;
    bool any_invertible = false;
};

/// One smile per sweep value (or a single smile without `sweep_key`).
std::vector<SmileOutput> cmd_smile(const config::Config& cfg);
/// Header `strike,price,std_error,implied_vol,flag`.
std::string render_smile_csv(const smile::Smile& smile);
std::string render_smile_json(const smile::Smile& smile);

struct CompareEstimate {
    double price = 0.0;
    double std_error = 0.0;
};

struct CompareRow {
    std::string kind;
    CompareEstimate pathint;
    CompareEstimate sequential;
    CompareEstimate euler;
    std::optional<double> black_scholes;  // European kinds only
    bool sequential_agrees = false;
    bool euler_agrees = false;
    std::optional<bool> black_scholes_agrees;
};

/// Agreement at 3 combined standard errors.
bool agrees(double a, double se_a, double b, double se_b);

std::vector<CompareRow> cmd_compare(const config::Config& cfg);
std::string render_compare(const std::vector<CompareRow>& rows, Format format);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svpath::cli
