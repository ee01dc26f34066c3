/*
   Copyright 2026 The recdel Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "recdel/asymptotics.hpp"
#include "recdel/equiprob.hpp"
#include "recdel/exact.hpp"
#include "recdel/process.hpp"
#include "recdel/series.hpp"

namespace recdel::cli {

namespace {

/// A flag value that failed validation; reported as a usage error.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { rational, floating };

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

bool is_json_number(const std::string& cell)
{
    if (cell.empty() || cell == "nan" || cell == "inf" || cell == "-inf") {
        return false;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    return ec == std::errc{} && ptr == cell.data() + cell.size();
}

void write_table(const Table& table, const std::string& format, std::ostream& os)
{
    if (format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t i = 0; i < table.header.size(); ++i) {
                const std::string& cell = row[i];
                if (cell.empty()) {
                    obj[table.header[i]] = nullptr;
                } else if (is_json_number(cell)) {
                    obj[table.header[i]] = nlohmann::ordered_json::parse(cell);
                } else {
                    obj[table.header[i]] = cell;
                }
            }
            rows.push_back(std::move(obj));
        }
        os << rows.dump(2) << '\n';
        return;
    }
    auto join = [&os](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            os << (i ? "," : "") << cells[i];
        }
        os << '\n';
    };
    join(table.header);
    for (const auto& row : table.rows) {
        join(row);
    }
}

struct Common {
    std::string p_text;
    std::string mode = "auto";
    std::string format = "csv";
    std::string output;
};

void add_common(CLI::App* sub, Common& c, bool needs_p = true)
{
    auto* opt = sub->add_option("--p", c.p_text, "Insertion probability, as a fraction a/b or a decimal");
    if (needs_p) {
        opt->required();
    }
    sub->add_option("--mode", c.mode, "Numeric mode")->check(CLI::IsMember({"auto", "rational", "float"}));
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--output,-o", c.output, "Write the table to this file instead of stdout");
}

Rational parse_p(const std::string& text, bool allow_one = false)
{
    Rational p;
    try {
        p = parse_rational(text);
    } catch (const std::invalid_argument& e) {
        throw usage_error(std::string("--p: ") + e.what());
    }
    if (p <= 0 || p > 1 || (!allow_one && p == 1)) {
        throw usage_error("--p: " + text + " must lie strictly between 0 and 1");
    }
    return p;
}

/// Fractions and exactly representable decimals select rational mode unless --mode says otherwise.
Mode resolve_mode(const Common& c, const Rational& p)
{
    if (c.mode == "rational") {
        return Mode::rational;
    }
    if (c.mode == "float") {
        return Mode::floating;
    }
    return is_fraction_text(c.p_text) || is_dyadic_double(p) ? Mode::rational : Mode::floating;
}

ProcessParams make_params(const Rational& p, Mode mode)
{
    return mode == Mode::rational ? ProcessParams::exact(p) : ProcessParams::floating(p);
}

std::size_t non_negative(long long value, const char* flag)
{
    if (value < 0) {
        throw usage_error(std::string(flag) + ": must be non-negative, got " + std::to_string(value));
    }
    return static_cast<std::size_t>(value);
}

std::vector<std::size_t> parse_grid(const std::string& text, const char* flag)
{
    std::vector<std::size_t> grid;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || v == 0) {
            throw usage_error(std::string(flag) + ": '" + item + "' is not a positive integer");
        }
        grid.push_back(v);
    }
    if (grid.empty()) {
        throw usage_error(std::string(flag) + ": empty grid");
    }
    return grid;
}

template <Scalar T>
std::vector<std::string> moment_cells(const MomentTable<T>& m)
{
    return {std::to_string(m.n),          format_scalar(m.mean_stratum),    format_scalar(m.second_factorial),
            format_scalar(m.variance),    format_scalar(m.harmonic),        format_scalar(m.reciprocal_size),
            format_scalar(m.harmonic_size), format_scalar(m.leaf_mean),     format_scalar(m.root_degree_mean),
            format_scalar(m.root_prob)};
}

const std::vector<std::string> kMomentHeader = {"n",        "mean_stratum",   "second_factorial", "variance",
                                                "harmonic", "reciprocal_size", "harmonic_size",   "leaf_mean",
                                                "root_degree_mean", "root_prob"};

template <Scalar T>
Table exact_table(std::size_t n, const ProcessParams& params, bool all_rows, bool distribution)
{
    Table t;
    if (distribution) {
        t.header = {"n", "k", "probability"};
        const auto d = stratum_recurrence<T>(n, params);
        for (std::size_t k = 0; k < d.probs.size(); ++k) {
            t.rows.push_back({std::to_string(n), std::to_string(k), format_scalar(d.probs[k])});
        }
        return t;
    }
    t.header = kMomentHeader;
    if (all_rows) {
        for (const auto& m : moment_history<T>(n, params)) {
            t.rows.push_back(moment_cells(m));
        }
    } else {
        t.rows.push_back(moment_cells(moments(stratum_recurrence<T>(n, params))));
    }
    return t;
}

template <Scalar T>
Table series_table(GfName name, const ProcessParams& params, std::size_t order)
{
    Table t{{"n", "coefficient"}, {}};
    const auto s = series_gf<T>(name, params, order);
    for (std::size_t n = 0; n <= s.order(); ++n) {
        t.rows.push_back({std::to_string(n), format_scalar(s[n])});
    }
    return t;
}

template <Scalar T>
nlohmann::ordered_json verify_json(const DeletionRule& rule, const ProcessParams& params, std::size_t K,
                                   std::size_t n_max, double tol, std::size_t cap)
{
    const auto report = verify_rule<T>(rule, params, K, n_max, tol, cap);
    auto value = [](const T& v) -> nlohmann::ordered_json {
        if constexpr (std::is_same_v<T, double>) {
            return v;
        } else {
            return to_string(v);
        }
    };
    nlohmann::ordered_json j;
    j["rule"] = rule.name();
    j["p"] = to_string(params.p_exact());
    j["mode"] = std::is_same_v<T, double> ? "float" : "rational";
    j["K"] = K;
    j["n_max"] = n_max;
    j["column_sum_condition"] = report.column_sum_condition;
    j["uniform"] = report.uniform;
    nlohmann::ordered_json cols = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.column_sums.size(); ++i) {
        nlohmann::ordered_json c;
        c["k_plus_1"] = i + 1;
        c["equal"] = report.column_sums[i].equal;
        nlohmann::ordered_json sums = nlohmann::ordered_json::array();
        for (const T& s : report.column_sums[i].sums) {
            sums.push_back(value(s));
        }
        c["sums"] = std::move(sums);
        cols.push_back(std::move(c));
    }
    j["column_sums"] = std::move(cols);
    nlohmann::ordered_json uni = nlohmann::ordered_json::array();
    for (const auto& e : report.uniformity) {
        uni.push_back({{"n", e.n},
                       {"k", e.k},
                       {"mass", value(e.mass)},
                       {"max_deviation", value(e.max_deviation)},
                       {"uniform", e.uniform}});
    }
    j["uniformity"] = std::move(uni);
    return j;
}

std::shared_ptr<const DeletionRule> rule_from_flag(const std::string& name)
{
    try {
        return make_rule(name);
    } catch (const std::invalid_argument& e) {
        throw usage_error(std::string("--rule: ") + e.what());
    }
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw usage_error("--output: cannot open '" + path + "' for writing");
            }
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Insert/delete random recursive tree laboratory", "recdel"};
    app.require_subcommand(1);

    Common c;
    long long n = -1;
    long long reps = 1000;
    std::uint64_t seed = 0;
    std::string rule_name = "lifo";
    std::string functionals;
    unsigned threads = 0;
    bool all_rows = false;
    bool distribution = false;
    std::string gf_name;
    long long order = 20;
    std::string asym_name;
    std::string grid_text;
    bool refined = false;
    std::optional<double> tol;
    long long K = 5;
    long long cap = static_cast<long long>(kDefaultEnumerationCap);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo replications of the process");
    add_common(simulate, c);
    simulate->add_option("--n", n, "Number of steps")->required();
    simulate->add_option("--reps", reps, "Replications");
    simulate->add_option("--seed", seed, "Master seed");
    simulate->add_option("--rule", rule_name, "Deletion rule (lifo, collapse)");
    simulate->add_option("--functionals", functionals, "Comma-separated functionals (default: all)");
    simulate->add_option("--threads", threads, "Worker threads (default: RECDEL_THREADS or hardware)");

    auto* exact = app.add_subcommand("exact", "Exact moments of the stratum number");
    add_common(exact, c);
    exact->add_option("--n", n, "Time")->required();
    exact->add_flag("--all", all_rows, "Emit every row 0..n");
    exact->add_flag("--distribution", distribution, "Emit P(S_n = k) instead of moments");

    auto* series = app.add_subcommand("series", "Coefficients of a generating function");
    add_common(series, c);
    series->add_option("--name", gf_name, "P0, P1, mu, mu2, H or h")->required();
    series->add_option("--N", order, "Truncation order");

    auto* asym = app.add_subcommand("asym", "Asymptotic estimates");
    add_common(asym, c);
    asym->add_option("--functional", asym_name, "Functional")->required();
    asym->add_option("--n", n, "Time");
    asym->add_option("--grid", grid_text, "Comma-separated times (overrides --n)");
    asym->add_flag("--refined", refined, "Second-order critical mean");

    auto* compare = app.add_subcommand("compare", "Exact against asymptotic values");
    add_common(compare, c);
    compare->add_option("--functional", asym_name, "Functional")->required();
    compare->add_option("--grid", grid_text, "Comma-separated times")->required();
    compare->add_option("--tol", tol, "Fail (exit 2) when the difference at the largest n exceeds this");
    compare->add_flag("--refined", refined, "Second-order critical mean");

    auto* verify = app.add_subcommand("verify", "Brute-force column-sum and uniformity checks");
    add_common(verify, c, false);
    verify->add_option("--rule", rule_name, "Deletion rule (lifo, collapse)");
    verify->add_option("--K", K, "Check column sums for strata 1..K");
    verify->add_option("--n", n, "Check uniformity for times 0..n");
    verify->add_option("--cap", cap, "Largest stratum that may be enumerated");
    verify->add_option("--tol", tol, "Uniformity tolerance (float mode)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "recdel: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            const Rational p = parse_p(c.p_text, true);
            const auto params = ProcessParams::floating(p);
            const auto rule = rule_from_flag(rule_name);
            MonteCarloConfig cfg;
            cfg.n = non_negative(n, "--n");
            if (reps < 1) {
                throw usage_error("--reps: must be at least 1");
            }
            cfg.reps = static_cast<std::size_t>(reps);
            cfg.master_seed = seed;
            cfg.threads = threads;
            if (!functionals.empty()) {
                cfg.functionals.clear();
                std::stringstream ss(functionals);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    try {
                        cfg.functionals.push_back(parse_functional(item));
                    } catch (const std::invalid_argument& e) {
                        throw usage_error(std::string("--functionals: ") + e.what());
                    }
                }
            }
            Table t{{"functional", "mean", "variance", "std_error", "reps"}, {}};
            for (const auto& s : monte_carlo(cfg, params, *rule)) {
                t.rows.push_back({std::string(to_string(s.functional)), format_double(s.mean),
                                  s.variance ? format_double(*s.variance) : "",
                                  s.std_error ? format_double(*s.std_error) : "", std::to_string(s.reps)});
            }
            Sink sink(c.output, out);
            write_table(t, c.format, sink.stream());
            return kExitOk;
        }
        if (exact->parsed()) {
            const Rational p = parse_p(c.p_text);
            const Mode mode = resolve_mode(c, p);
            const auto params = make_params(p, mode);
            const std::size_t steps = non_negative(n, "--n");
            const Table t = mode == Mode::rational ? exact_table<Rational>(steps, params, all_rows, distribution)
                                                   : exact_table<double>(steps, params, all_rows, distribution);
            Sink sink(c.output, out);
            write_table(t, c.format, sink.stream());
            return kExitOk;
        }
        if (series->parsed()) {
            const Rational p = parse_p(c.p_text);
            const std::size_t N = non_negative(order, "--N");
            Mode mode = resolve_mode(c, p);
            if (c.mode == "auto" && N > 200) {
                mode = Mode::floating;
            }
            const auto params = make_params(p, mode);
            GfName name;
            try {
                name = parse_gf_name(gf_name);
            } catch (const std::domain_error& e) {
                throw usage_error(std::string("--name: ") + e.what());
            }
            const Table t = mode == Mode::rational ? series_table<Rational>(name, params, N)
                                                   : series_table<double>(name, params, N);
            Sink sink(c.output, out);
            write_table(t, c.format, sink.stream());
            return kExitOk;
        }
        if (asym->parsed() || compare->parsed()) {
            const Rational p = parse_p(c.p_text);
            const auto params = make_params(p, resolve_mode(c, p));
            AsymFunctional f;
            try {
                f = parse_asym_functional(asym_name);
            } catch (const std::invalid_argument& e) {
                throw usage_error(std::string("--functional: ") + e.what());
            }
            if (asym->parsed()) {
                std::vector<std::size_t> grid;
                if (!grid_text.empty()) {
                    grid = parse_grid(grid_text, "--grid");
                } else {
                    if (n < 0) {
                        throw usage_error("--n or --grid is required");
                    }
                    const std::size_t single = static_cast<std::size_t>(n);
                    if (single == 0) {
                        throw usage_error("--n: asymptotic estimates need n >= 1");
                    }
                    grid = {single};
                }
                Table t{{"functional", "regime", "n", "value", "error_order", "bound_only"}, {}};
                for (std::size_t m : grid) {
                    const auto e = asym_estimate(f, params, m, refined);
                    t.rows.push_back({std::string(to_string(f)), std::string(to_string(e.regime)), std::to_string(m),
                                      format_double(e.value), e.error_order, e.bound_only ? "true" : "false"});
                }
                Sink sink(c.output, out);
                write_table(t, c.format, sink.stream());
                return kExitOk;
            }
            const auto rows = convergence_table(f, params, parse_grid(grid_text, "--grid"), refined);
            Table t{{"n", "exact", "asymptotic", "abs_difference"}, {}};
            for (const auto& r : rows) {
                t.rows.push_back({std::to_string(r.n), format_double(r.exact), format_double(r.asymptotic),
                                  format_double(r.abs_difference)});
            }
            Sink sink(c.output, out);
            write_table(t, c.format, sink.stream());
            if (tol && !(rows.back().abs_difference <= *tol)) {
                err << "recdel: |exact - asymptotic| = " << format_double(rows.back().abs_difference)
                    << " at n = " << rows.back().n << " exceeds --tol " << format_double(*tol) << '\n';
                return kExitCheckFailed;
            }
            return kExitOk;
        }
        if (verify->parsed()) {
            const Rational p = c.p_text.empty() ? Rational(1, 2) : parse_p(c.p_text, true);
            Mode mode = c.p_text.empty() ? Mode::rational : resolve_mode(c, p);
            if (c.mode == "rational") {
                mode = Mode::rational;
            }
            const auto params = make_params(p, mode);
            const auto rule = rule_from_flag(rule_name);
            const std::size_t k_top = non_negative(K, "--K");
            const std::size_t n_max = n < 0 ? 8 : static_cast<std::size_t>(n);
            const std::size_t limit = non_negative(cap, "--cap");
            if (std::max(k_top, n_max) > limit) {
                throw usage_error("--K/--n: strata up to " + std::to_string(std::max(k_top, n_max))
                                  + " exceed --cap " + std::to_string(limit));
            }
            const double tolerance = tol.value_or(mode == Mode::rational ? 0.0 : 1e-12);
            const auto j = mode == Mode::rational ? verify_json<Rational>(*rule, params, k_top, n_max, tolerance, limit)
                                                  : verify_json<double>(*rule, params, k_top, n_max, tolerance, limit);
            Sink sink(c.output, out);
            sink.stream() << j.dump(2) << '\n';
            err << "uniform: " << (j["uniform"].get<bool>() ? "true" : "false")
                << ", column sums equal: " << (j["column_sum_condition"].get<bool>() ? "true" : "false") << '\n';
            return j["uniform"].get<bool>() && j["column_sum_condition"].get<bool>() ? kExitOk : kExitCheckFailed;
        }
    } catch (const usage_error& e) {
        err << "recdel: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "recdel: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace recdel::cli
