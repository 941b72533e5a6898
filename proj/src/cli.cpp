#include "svpath/cli.hpp"

#include "svpath/pricer.hpp"
#include "svpath/reference.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace svpath::cli {

namespace {

using config::Config;
using config::ConfigError;

bool is_european(PayoffKind kind) { return kind == PayoffKind::EuropeanCall || kind == PayoffKind::EuropeanPut; }

void write_output(const std::string& text, const std::string& path, std::ostream& out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot write output file " + path);
    file << text;
}

std::string sweep_path(const std::string& base, const std::string& label)
{
    const std::filesystem::path p(base);
    auto name = p.stem().string() + "_" + label + p.extension().string();
    return (p.parent_path() / name).string();
}

Format parse_format(const std::string& name, Format fallback)
{
    if (name.empty()) return fallback;
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw ConfigError("--format must be csv or json");
}

nlohmann::json estimate_json(const CompareEstimate& e) { return {{"price", e.price}, {"std_error", e.std_error}}; }

}  // namespace

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

PriceReport cmd_price(const Config& cfg)
{
    PriceReport report{config::build_run_spec(cfg), {}, 0.0};
    const auto& run = report.run;
    const auto start = std::chrono::steady_clock::now();
    report.result = pricer::price(run.contract, run.state, run.params, run.grid, run.mc);
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string render_price(const PriceReport& report, Format format)
{
    const auto& r = report.result;
    const auto& run = report.run;
    double mass = 0.0;
    for (const auto& d : r.diagnostics) mass += d.weight;
    std::ostringstream os;
    switch (format) {
    case Format::Json: {
        nlohmann::json j{
            {"kind", to_string(run.contract.kind)},
            {"price", r.price},
            {"std_error", r.std_error},
            {"n_evaluations", r.n_evaluations},
            {"quadrature_mass", mass},
            {"n", run.grid.n},
            {"y0_nodes", run.grid.y0_nodes},
            {"variance_paths", run.mc.variance_paths},
            {"price_paths", run.mc.price_paths},
            {"seconds", report.seconds},
        };
        for (const auto& d : r.diagnostics) {
            j["diagnostics"].push_back({{"y0", d.y0}, {"weight", d.weight}, {"chi", d.chi}, {"chi_variance", d.chi_variance}});
        }
        os << j.dump(2) << "\n";
        break;
    }
    case Format::Csv:
        os << "price,std_error,n_evaluations\n"
           << format_number(r.price) << "," << format_number(r.std_error) << "," << r.n_evaluations << "\n";
        break;
    case Format::Text:
        os << "price          " << format_number(r.price) << "\n"
           << "std_error      " << format_number(r.std_error) << "\n"
           << "evaluations    " << r.n_evaluations << "\n"
           << "budget         n=" << run.grid.n << " nodes=" << run.grid.y0_nodes
           << " variance_paths=" << run.mc.variance_paths << " price_paths=" << run.mc.price_paths << "\n"
           << "quadrature     mass=" << format_number(mass) << "\n"
           << "wall_time_s    " << format_number(report.seconds) << "\n";
        break;
    }
    return os.str();
}

std::vector<SmileOutput> cmd_smile(const Config& cfg)
{
    const auto strikes = cfg.get_double_list("strikes");
    if (strikes.empty()) throw ConfigError("'strikes' is empty");
    // The strike grid replaces the single-contract strike.
    Config base = cfg;
    if (!base.has("strike")) base.set("strike", format_number(strikes.front()));
    std::vector<std::pair<std::string, Config>> runs;
    if (base.has("sweep_key")) {
        const auto& key = base.get("sweep_key");
        for (const auto& value : base.get_list("sweep_values")) {
            Config c = base;
            c.set(key, value);
            // The mean-reversion sweep drives the log-normal variance drift.
            if (key == "k") c.set("mu", value);
            runs.emplace_back(key + "_" + value, std::move(c));
        }
    } else {
        runs.emplace_back("", base);
    }

    std::vector<SmileOutput> out;
    for (auto& [label, c] : runs) {
        const auto run = config::build_run_spec(c);
        SmileOutput s;
        s.label = label;
        s.smile = smile::compute_smile(strikes, run.contract.maturity, run.state, run.params, run.grid, run.mc);
        for (const auto& row : s.smile.rows) s.any_invertible = s.any_invertible || row.invertible;
        out.push_back(std::move(s));
    }
    return out;
}

std::string render_smile_csv(const smile::Smile& smile)
{
    std::ostringstream os;
    os << "strike,price,std_error,implied_vol,flag\n";
    for (const auto& row : smile.rows) {
        os << format_number(row.strike) << "," << format_number(row.price) << "," << format_number(row.std_error)
           << "," << (row.invertible ? format_number(row.implied_vol) : std::string()) << ","
           << (row.invertible ? "ok" : "non_invertible") << "\n";
    }
    return os.str();
}

std::string render_smile_json(const smile::Smile& smile)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : smile.rows) {
        nlohmann::json j{{"strike", row.strike}, {"price", row.price}, {"std_error", row.std_error},
                         {"flag", row.invertible ? "ok" : "non_invertible"}};
        j["implied_vol"] = row.invertible ? nlohmann::json(row.implied_vol) : nlohmann::json(nullptr);
        rows.push_back(std::move(j));
    }
    return rows.dump(2) + "\n";
}

bool agrees(double a, double se_a, double b, double se_b)
{
    return std::abs(a - b) <= 3.0 * std::sqrt(se_a * se_a + se_b * se_b);
}

std::vector<CompareRow> cmd_compare(const Config& cfg)
{
    const auto run = config::build_run_spec(cfg);
    const auto euler_cfg = config::build_euler_config(cfg, run);
    std::vector<std::string> kinds = cfg.has("kinds")
                                         ? cfg.get_list("kinds")
                                         : std::vector<std::string>{"european_call", "asian_arithmetic_call",
                                                                    "asian_geometric_call", "lookback_fixed_call",
                                                                    "up_and_out_call"};
    std::vector<Contract> contracts;
    for (const auto& kind : kinds) contracts.push_back(config::make_contract(kind, cfg));

    const auto path = pricer::price_strip(contracts, run.state, run.params, run.grid, run.mc);
    const auto seq = pricer::price_sequential_strip(contracts, run.state, run.params, run.grid, run.mc);

    std::vector<CompareRow> rows;
    for (std::size_t i = 0; i < contracts.size(); ++i) {
        const auto& c = contracts[i];
        const auto euler = reference::euler_oracle(c, run.state, run.params, euler_cfg);
        CompareRow row;
        row.kind = kinds[i];
        row.pathint = {path.results[i].price, path.results[i].std_error};
        row.sequential = {seq.results[i].price, seq.results[i].std_error};
        row.euler = {euler.price, euler.std_error};
        row.sequential_agrees = agrees(row.pathint.price, row.pathint.std_error, row.sequential.price, row.sequential.std_error);
        row.euler_agrees = agrees(row.pathint.price, row.pathint.std_error, row.euler.price, row.euler.std_error);
        if (is_european(c.kind)) {
            row.black_scholes = reference::bs_price(std::exp(run.state.spot_log_price), c.strike, run.params.r,
                                                    std::exp(0.5 * run.state.spot_log_variance), c.maturity,
                                                    c.kind == PayoffKind::EuropeanCall);
            row.black_scholes_agrees = agrees(row.pathint.price, row.pathint.std_error, *row.black_scholes, 0.0);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_compare(const std::vector<CompareRow>& rows, Format format)
{
    const auto flag = [](bool ok) { return ok ? "pass" : "fail"; };
    std::ostringstream os;
    if (format == Format::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json e{{"kind", r.kind},
                             {"pathint", estimate_json(r.pathint)},
                             {"sequential", estimate_json(r.sequential)},
                             {"euler", estimate_json(r.euler)},
                             {"sequential_agrees", r.sequential_agrees},
                             {"euler_agrees", r.euler_agrees}};
            e["black_scholes"] = r.black_scholes ? nlohmann::json(*r.black_scholes) : nlohmann::json(nullptr);
            e["black_scholes_agrees"] =
                r.black_scholes_agrees ? nlohmann::json(*r.black_scholes_agrees) : nlohmann::json(nullptr);
            j.push_back(std::move(e));
        }
        os << j.dump(2) << "\n";
        return os.str();
    }
    os << "kind,pathint,pathint_se,sequential,sequential_se,euler,euler_se,bs,sequential_agrees,euler_agrees,bs_agrees\n";
    for (const auto& r : rows) {
        os << r.kind << "," << format_number(r.pathint.price) << "," << format_number(r.pathint.std_error) << ","
           << format_number(r.sequential.price) << "," << format_number(r.sequential.std_error) << ","
           << format_number(r.euler.price) << "," << format_number(r.euler.std_error) << ","
           << (r.black_scholes ? format_number(*r.black_scholes) : "N/A") << "," << flag(r.sequential_agrees) << ","
           << flag(r.euler_agrees) << "," << (r.black_scholes_agrees ? flag(*r.black_scholes_agrees) : "N/A") << "\n";
    }
    return os.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Path-integral pricer for path-dependent options under stochastic volatility"};
    app.require_subcommand(1);

    struct Common {
        std::string config_path;
        std::vector<std::string> overrides;
        std::string out_path;
        std::string format;
        int threads = -1;
    };
    Common common;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "Key-value config file");
        sub->add_option("--set", common.overrides, "Override, key=value (repeatable)");
        sub->add_option("--out", common.out_path, "Output path (stdout if omitted)");
        sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", common.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };
    auto* price_cmd = app.add_subcommand("price", "Price one contract");
    auto* smile_cmd = app.add_subcommand("smile", "Implied-volatility smile over a strike grid");
    auto* compare_cmd = app.add_subcommand("compare", "Path integral vs sequential vs Euler vs Black-Scholes");
    add_common(price_cmd);
    add_common(smile_cmd);
    add_common(compare_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        Config cfg = common.config_path.empty() ? Config{} : Config::load(common.config_path);
        for (const auto& o : common.overrides) cfg.apply_override(o);
        if (common.threads >= 0) cfg.set("threads", std::to_string(common.threads));

        if (price_cmd->parsed()) {
            const auto report = cmd_price(cfg);
            write_output(render_price(report, parse_format(common.format, Format::Text)), common.out_path, out);
            return kOk;
        }
        if (smile_cmd->parsed()) {
            const auto format = parse_format(common.format, Format::Csv);
            const auto smiles = cmd_smile(cfg);
            if (smiles.size() > 1 && common.out_path.empty()) throw ConfigError("a sweep needs --out");
            bool failed = false;
            for (const auto& s : smiles) {
                const auto text = format == Format::Json ? render_smile_json(s.smile) : render_smile_csv(s.smile);
                write_output(text, s.label.empty() ? common.out_path : sweep_path(common.out_path, s.label), out);
                failed = failed || !s.any_invertible;
            }
            if (failed) {
                err << "error: implied volatility not invertible at any strike\n";
                return kNumericalFailure;
            }
            return kOk;
        }
        const auto rows = cmd_compare(cfg);
        write_output(render_compare(rows, parse_format(common.format, Format::Csv)), common.out_path, out);
        return kOk;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

}  // namespace svpath::cli
