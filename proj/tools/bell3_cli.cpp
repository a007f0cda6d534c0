// bell3: three-setting Bell inequality toolkit.
//
// Subcommands: tensor, bounds, window, oracle, verify, scan. All numeric
// output goes to stdout (JSON or CSV), diagnostics to stderr. Exit codes:
// 0 success, 1 verification failure, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bell3/bounds.hpp"
#include "bell3/correlation_tensor.hpp"
#include "bell3/io.hpp"
#include "bell3/lhv.hpp"
#include "bell3/statevector_oracle.hpp"

namespace {

struct IntRange {
    int lo = 0;
    int hi = 0;
};

IntRange parse_range(const std::string& s) {
    auto pos = s.find("..");
    if (pos == std::string::npos)
        throw CLI::ValidationError("range must look like a..b");
    IntRange r;
    r.lo = std::stoi(s.substr(0, pos));
    r.hi = std::stoi(s.substr(pos + 2));
    if (r.lo > r.hi)
        throw CLI::ValidationError("empty range");
    return r;
}

std::vector<double> parse_sweep(const std::string& s) {
    auto p1 = s.find(':');
    auto p2 = s.find(':', p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos)
        throw CLI::ValidationError("sweep must look like start:stop:step");
    double start = std::stod(s.substr(0, p1));
    double stop = std::stod(s.substr(p1 + 1, p2 - p1 - 1));
    double step = std::stod(s.substr(p2 + 1));
    if (step <= 0.0)
        throw CLI::ValidationError("sweep step must be positive");
    std::vector<double> vals;
    for (double v = start; v <= stop + 1e-12; v += step)
        vals.push_back(v);
    if (vals.empty())
        throw CLI::ValidationError("empty sweep");
    return vals;
}

unsigned worker_cap() {
    if (const char* env = std::getenv("BELL_THREADS")) {
        int n = std::atoi(env);
        if (n > 0)
            return unsigned(n);
    }
    return 0;  // library default: hardware concurrency
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream f(out_path);
        if (!f)
            throw std::runtime_error("cannot open " + out_path);
        f << text << '\n';
    }
}

bell3::LhvMode parse_mode(const std::string& mode) {
    if (mode == "exhaustive")
        return bell3::LhvMode::Exhaustive;
    if (mode == "alternating")
        return bell3::LhvMode::Alternating;
    throw CLI::ValidationError("mode must be exhaustive or alternating");
}

int run_verify() {
    bool ok = true;
    auto report = [&](const std::string& name, bool pass) {
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << '\n';
        ok = ok && pass;
    };

    auto trig = bell3::trig_identity_suite(3);
    report("trig identities (0, 3/2, 3/2)", trig.pass);

    // projection norms over all 8 sign triples: exactly 2 at 0, 6 at max
    const double max_norm = 2.0 * std::sqrt(2.0 / 3.0);
    int zeros = 0, maxima = 0;
    bool dichotomy = true;
    for (int p = 0; p < 8; ++p) {
        std::vector<int> signs{p & 1 ? -1 : 1, p & 2 ? -1 : 1, p & 4 ? -1 : 1};
        auto d = bell3::projection_decomposition(signs);
        if (std::abs(d.norm) <= 1e-12)
            ++zeros;
        else if (std::abs(d.norm - max_norm) <= 1e-12)
            ++maxima;
        else
            dichotomy = false;
    }
    report("projection norm dichotomy {0, 2 sqrt(2/3)} with counts (2, 6)",
           dichotomy && zeros == 2 && maxima == 6);

    // factored form equals the direct grid sum for every strategy, N = 2, 3
    bool factored_ok = true;
    for (int n = 2; n <= 3 && factored_ok; ++n) {
        auto grid = bell3::SettingGrid::uniform(n);
        auto tensor = bell3::ghz_werner_tensor(n, 1.0);
        const std::uint64_t total = std::uint64_t(1) << (3 * n);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<std::uint64_t> pats(n);
            std::uint64_t rest = idx;
            for (int j = 0; j < n; ++j) {
                pats[j] = rest & 7u;
                rest >>= 3;
            }
            auto s = bell3::DeterministicStrategy::from_patterns(pats, 3);
            double direct = bell3::lhv_inner_product(s, tensor, grid);
            double factored = bell3::factored_inner_product(s, tensor, grid);
            if (std::abs(direct - factored) > 1e-9) {
                factored_ok = false;
                break;
            }
        }
    }
    report("factored inner product matches direct sum (N = 2, 3)", factored_ok);

    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"three-setting Bell inequality toolkit"};
    app.require_subcommand(1);

    int n = 0;
    double v = 0.0;
    std::string out_path, load_path, format = "json", mode = "exhaustive";
    std::string n_range_str, v_sweep_str;
    std::vector<double> v_values;
    std::uint64_t seed = bell3::kDefaultSeed;
    bool with_oracle = false;

    auto* cmd_tensor = app.add_subcommand("tensor", "emit a GHZ-Werner correlation tensor");
    cmd_tensor->add_option("--n", n, "number of parties")->required();
    cmd_tensor->add_option("--v", v, "visibility in [0,1]")->required();
    cmd_tensor->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_bounds = app.add_subcommand("bounds", "evaluate both sides of the inequality");
    cmd_bounds->add_option("--n", n, "number of parties");
    cmd_bounds->add_option("--v", v, "visibility in [0,1]");
    cmd_bounds->add_option("--load", load_path, "load tensor JSON instead of --n/--v");
    cmd_bounds->add_flag("--oracle", with_oracle, "also run the LHV oracle (N <= 9)");
    cmd_bounds->add_option("--mode", mode, "oracle mode: exhaustive|alternating");
    cmd_bounds->add_option("--seed", seed, "seed for multistart maximizers");
    cmd_bounds->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_window = app.add_subcommand("window", "violation window over a range of N");
    cmd_window->add_option("--n-range", n_range_str, "inclusive range a..b")->required();
    cmd_window->add_option("--format", format, "json|csv");
    cmd_window->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_oracle = app.add_subcommand("oracle", "maximum LHV inner product vs the bound");
    cmd_oracle->add_option("--n", n, "number of parties")->required();
    cmd_oracle->add_option("--v", v, "visibility in [0,1]")->required();
    cmd_oracle->add_option("--mode", mode, "exhaustive|alternating");
    cmd_oracle->add_option("--seed", seed, "seed for multistart maximizers");
    cmd_oracle->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_verify = app.add_subcommand("verify", "run the built-in identity checks");

    auto* cmd_scan = app.add_subcommand("scan", "sweep GHZ-Werner classifications");
    cmd_scan->add_option("--n-range", n_range_str, "inclusive range a..b")->required();
    cmd_scan->add_option("--v-sweep", v_sweep_str, "visibility sweep start:stop:step");
    cmd_scan->add_option("--v", v_values, "explicit visibility values");
    cmd_scan->add_option("--format", format, "json|csv");
    cmd_scan->add_option("--seed", seed, "seed for multistart maximizers");
    cmd_scan->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_tensor) {
            emit(bell3::to_json(bell3::ghz_werner_tensor(n, v)).dump(2), out_path);
        } else if (*cmd_bounds) {
            bell3::CorrelationTensor t =
                load_path.empty() ? bell3::ghz_werner_tensor(n, v)
                                  : bell3::load_tensor(load_path);
            std::optional<double> lhv_max;
            if (with_oracle) {
                if (t.n_parties > 9 && parse_mode(mode) == bell3::LhvMode::Exhaustive)
                    throw std::invalid_argument("exhaustive oracle limited to N <= 9");
                auto grid = bell3::SettingGrid::uniform(t.n_parties);
                lhv_max = bell3::max_lhv_inner_product(t, grid, parse_mode(mode), seed,
                                                       worker_cap())
                              .max_value;
            }
            auto report = bell3::classify(t, lhv_max, bell3::TMaxMethod::Alternating, seed);
            emit(bell3::to_json(report).dump(2), out_path);
        } else if (*cmd_window) {
            IntRange r = parse_range(n_range_str);
            if (format == "csv") {
                std::ostringstream os;
                os.precision(17);
                os << "n,lower,upper,nonempty";
                for (int i = r.lo; i <= r.hi; ++i) {
                    auto w = bell3::violation_window(i);
                    os << '\n' << w.n_parties << ',' << w.lower << ',' << w.upper
                       << ',' << (w.nonempty ? 1 : 0);
                }
                emit(os.str(), out_path);
            } else {
                nlohmann::json rows = nlohmann::json::array();
                for (int i = r.lo; i <= r.hi; ++i)
                    rows.push_back(bell3::to_json(bell3::violation_window(i)));
                emit(rows.dump(2), out_path);
            }
        } else if (*cmd_oracle) {
            auto t = bell3::ghz_werner_tensor(n, v);
            auto grid = bell3::SettingGrid::uniform(n);
            auto res = bell3::max_lhv_inner_product(t, grid, parse_mode(mode), seed,
                                                    worker_cap());
            double bound = bell3::three_setting_bound(t, bell3::TMaxMethod::Alternating, seed);
            emit(bell3::to_json(res, bound).dump(2), out_path);
        } else if (*cmd_verify) {
            return run_verify();
        } else if (*cmd_scan) {
            IntRange r = parse_range(n_range_str);
            std::vector<double> vs = v_values;
            if (!v_sweep_str.empty()) {
                auto sweep = parse_sweep(v_sweep_str);
                vs.insert(vs.end(), sweep.begin(), sweep.end());
            }
            if (vs.empty())
                throw std::invalid_argument("scan needs --v or --v-sweep");
            std::sort(vs.begin(), vs.end());
            for (double val : vs)
                if (val < 0.0 || val > 1.0)
                    throw std::invalid_argument("visibility values must be in [0,1]");

            std::vector<bell3::BoundsReport> reports;
            for (int i = r.lo; i <= r.hi; ++i)
                for (double val : vs)
                    reports.push_back(bell3::classify(bell3::ghz_werner_tensor(i, val),
                                                      std::nullopt,
                                                      bell3::TMaxMethod::Alternating, seed));
            if (format == "csv") {
                std::ostringstream os;
                os << bell3::csv_header();
                for (const auto& rep : reports)
                    os << '\n' << bell3::csv_row(rep);
                emit(os.str(), out_path);
            } else {
                nlohmann::json rows = nlohmann::json::array();
                for (const auto& rep : reports)
                    rows.push_back(bell3::to_json(rep));
                emit(rows.dump(2), out_path);
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
