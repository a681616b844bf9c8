#include "entx/cli.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "entx/measures.hpp"

namespace entx {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

double parse_double(const std::string& text, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE || !std::isfinite(v))
        throw std::invalid_argument(what + " '" + text + "' is not a finite number");
    return v;
}

long parse_long(const std::string& text, const std::string& what) {
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || text.empty() || errno == ERANGE)
        throw std::invalid_argument(what + " '" + text + "' is not an integer");
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    const size_t c1 = text.find(':');
    const size_t c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw std::invalid_argument("grid '" + text + "' is not of the form start:stop:count");

    const double start = parse_double(text.substr(0, c1), "grid start");
    const double stop = parse_double(text.substr(c1 + 1, c2 - c1 - 1), "grid stop");
    const long count = parse_long(text.substr(c2 + 1), "grid count");
    if (count < 1) throw std::invalid_argument("grid count must be at least 1");
    if (count > 1000000) throw std::invalid_argument("grid count exceeds 1000000 points");
    if (count == 1) {
        if (start != stop)
            throw std::invalid_argument("a one-point grid needs start = stop, got '" + text + "'");
        return {start};
    }

    std::vector<double> grid(count);
    const double step = (stop - start) / static_cast<double>(count - 1);
    for (long i = 0; i < count; ++i) grid[i] = start + step * static_cast<double>(i);
    grid[count - 1] = stop;
    return grid;
}

std::string to_csv(const std::vector<SweepRecord>& records) {
    std::set<std::string> input_keys;
    std::set<std::string> aux_keys;
    for (const SweepRecord& rec : records) {
        for (const auto& [k, v] : rec.inputs) {
            (void)v;
            input_keys.insert(k);
        }
        for (const auto& [k, v] : rec.auxiliary) {
            (void)v;
            aux_keys.insert(k);
        }
    }

    std::string out;
    auto append_row = [&out](const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += '\n';
    };

    std::vector<std::string> header(input_keys.begin(), input_keys.end());
    header.push_back("concurrence");
    header.insert(header.end(), aux_keys.begin(), aux_keys.end());
    header.push_back("status");
    append_row(header);

    for (const SweepRecord& rec : records) {
        std::vector<std::string> cells;
        cells.reserve(header.size());
        for (const std::string& k : input_keys) {
            const auto it = rec.inputs.find(k);
            cells.push_back(it == rec.inputs.end() ? "" : fmt17(it->second));
        }
        cells.push_back(fmt17(rec.concurrence));
        for (const std::string& k : aux_keys) {
            const auto it = rec.auxiliary.find(k);
            cells.push_back(it == rec.auxiliary.end() ? "" : fmt17(it->second));
        }
        cells.push_back(rec.message.empty() ? rec.status : rec.status + ": " + rec.message);
        append_row(cells);
    }
    return out;
}

std::string to_json(const std::vector<SweepRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepRecord& rec : records) {
        nlohmann::json obj;
        obj["inputs"] = rec.inputs;
        obj["concurrence"] = rec.concurrence;
        obj["auxiliary"] = rec.auxiliary;
        obj["status"] = rec.status;
        obj["message"] = rec.message;
        arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
}

std::vector<SweepRecord> records_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("record stream is not valid JSON: ") + e.what());
    }
    if (!arr.is_array()) throw std::invalid_argument("record stream must be a JSON array");

    std::vector<SweepRecord> records;
    records.reserve(arr.size());
    try {
        for (const nlohmann::json& obj : arr) {
            SweepRecord rec;
            rec.inputs = obj.at("inputs").get<std::map<std::string, double>>();
            rec.concurrence = obj.at("concurrence").get<double>();
            rec.auxiliary = obj.at("auxiliary").get<std::map<std::string, double>>();
            rec.status = obj.at("status").get<std::string>();
            rec.message = obj.at("message").get<std::string>();
            records.push_back(std::move(rec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed record object: ") + e.what());
    }
    return records;
}

namespace {

int resolve_workers(int flag_value, bool flag_given) {
    if (flag_given) {
        if (flag_value < 1) throw std::invalid_argument("--workers must be at least 1");
        return flag_value;
    }
    if (const char* env = std::getenv("ENTX_WORKERS"); env && *env) {
        const long v = parse_long(env, "ENTX_WORKERS");
        if (v < 1) throw std::invalid_argument("ENTX_WORKERS must be a positive integer");
        return static_cast<int>(std::min<long>(v, 1024));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::vector<SweepRecord> cmd_collide(const RunConfig& cfg) {
    return concurrence_surface(cfg.g_grid, cfg.j_tau_grid, cfg.lambda, cfg.workers);
}

std::vector<SweepRecord> cmd_iterate(const RunConfig& cfg) {
    const double g = cfg.g_grid.front();
    const double j_tau = cfg.j_tau_grid.front();
    const DensityMatrix chain = pair_state(CorrelationPair(g, g));
    const DensityMatrix probes0 =
        to_density(probe_product_state({ProbeAngles(0.0, 0.0), ProbeAngles(0.0, 0.0)}));

    const std::vector<CollisionStep> curve =
        repeated_collisions(chain, probes0, cfg.lambda, j_tau, cfg.steps);

    std::vector<SweepRecord> records;
    records.reserve(curve.size() + 1);
    for (const CollisionStep& step : curve) {
        SweepRecord rec;
        rec.inputs = {{"g_xx", g},
                      {"g_zz", g},
                      {"j_tau", j_tau},
                      {"lambda", cfg.lambda},
                      {"n", static_cast<double>(step.step)}};
        rec.concurrence = step.concurrence;
        records.push_back(std::move(rec));
    }

    // Trailing summary row: the fitted decay rate, and with --fixed-point
    // the stationary state of the collision channel.
    if (cfg.steps >= 3) {
        SweepRecord summary;
        summary.inputs = {{"g_xx", g},
                          {"g_zz", g},
                          {"j_tau", j_tau},
                          {"lambda", cfg.lambda},
                          {"n", static_cast<double>(cfg.steps)}};
        summary.concurrence = curve.back().concurrence;
        try {
            std::vector<std::pair<int, double>> points;
            points.reserve(curve.size());
            for (const CollisionStep& step : curve) points.emplace_back(step.step, step.concurrence);
            const ExponentialFit fit = fit_exponential(points);
            summary.auxiliary["kappa"] = fit.kappa;
            summary.auxiliary["r_squared"] = fit.r_squared;
        } catch (const std::invalid_argument& e) {
            summary.status = "skipped";
            summary.message = e.what();
        }
        if (cfg.fixed_point) {
            const FixedPointReport fp = channel_fixed_point(chain, cfg.lambda, j_tau);
            summary.concurrence = fp.concurrence;
            summary.auxiliary["residual"] = fp.residual;
            summary.auxiliary["iterations"] = static_cast<double>(fp.iterations_to_converge);
        }
        records.push_back(std::move(summary));
    }
    return records;
}

std::vector<SweepRecord> cmd_spinstar(const RunConfig& cfg) {
    std::vector<SweepRecord> records;
    records.reserve(cfg.j_tau_grid.size());
    for (double tau : cfg.j_tau_grid) {
        const SpinStarResult r =
            spin_star_extraction(cfg.length, cfg.spins_per_probe, cfg.lambda, tau);
        SweepRecord rec;
        rec.inputs = {{"L", static_cast<double>(cfg.length)},
                      {"N", static_cast<double>(cfg.spins_per_probe)},
                      {"j_tau", tau},
                      {"lambda", cfg.lambda}};
        rec.concurrence = r.concurrence_numeric;
        if (r.concurrence_analytic) {
            rec.auxiliary["concurrence_analytic"] = *r.concurrence_analytic;
            const double gap = std::abs(r.concurrence_numeric - *r.concurrence_analytic);
            if (gap > 1e-9) {
                rec.status = "error";
                rec.message = "numeric and analytic concurrence differ by " + fmt17(gap);
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SweepRecord> cmd_groundstate(const RunConfig& cfg) {
    const CorrelationPair g = ground_state_correlations(cfg.lambda, cfg.length, cfg.boundary);
    SweepRecord rec;
    rec.inputs = {{"L", static_cast<double>(cfg.length)}, {"lambda", cfg.lambda}};
    rec.auxiliary = {{"g_xx", g.g_xx}, {"g_zz", g.g_zz}};
    try {
        rec.concurrence = concurrence_closed_form(g);
    } catch (const std::invalid_argument& e) {
        rec.status = "skipped";
        rec.message = e.what();
    }
    return {std::move(rec)};
}

std::vector<SweepRecord> cmd_wstate(const RunConfig& cfg) {
    const int n = cfg.spins_per_probe;
    const PureState w = w_state(n);
    std::vector<SweepRecord> records;
    records.reserve(cfg.j_tau_grid.size());
    for (double tau : cfg.j_tau_grid) {
        const DensityMatrix rho = w_extraction(n, tau);
        const int dim = rho.reg.dim();

        double w_weight = 0.0;
        {
            cplx acc = 0.0;
            for (int p = 0; p < dim; ++p)
                for (int q = 0; q < dim; ++q)
                    acc += std::conj(w.amplitudes[p]) * rho.matrix(p, q) * w.amplitudes[q];
            w_weight = acc.real();
        }
        const double vacuum_weight = rho.matrix(0, 0).real();

        double pair_concurrence = 0.0;
        if (n == 2) {
            pair_concurrence = concurrence(rho).value;
        } else {
            const DensityMatrix pair(QubitRegister(2), partial_trace(rho.matrix, n, {0, 1}));
            pair_concurrence = concurrence(pair).value;
        }

        SweepRecord rec;
        rec.inputs = {{"j_tau", tau}, {"n", static_cast<double>(n)}};
        rec.concurrence = pair_concurrence;
        rec.auxiliary = {{"support_residual", 1.0 - vacuum_weight - w_weight},
                         {"vacuum_weight", vacuum_weight},
                         {"w_weight", w_weight}};
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SweepRecord> cmd_thresholds(const RunConfig& cfg) {
    const std::vector<double> grid =
        cfg.j_tau_grid.empty() ? default_threshold_grid() : cfg.j_tau_grid;
    const ThresholdReport report = threshold_scan(cfg.lambda, grid);
    SweepRecord rec;
    rec.inputs = {{"lambda", cfg.lambda}};
    rec.auxiliary = {{"g_always", report.g_always}, {"g_boundary", report.g_boundary}};
    return {std::move(rec)};
}

// Writes the payload through a temp file so a failed run never leaves a
// partially written file at the target path.
int write_output(const std::string& payload, const std::string& out_path, std::ostream& out,
                 std::ostream& err) {
    if (out_path.empty()) {
        out << payload;
        return kExitOk;
    }
    const std::filesystem::path target(out_path);
    std::filesystem::path tmp(target);
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) {
            err << "entx: cannot open '" << tmp.string() << "' for writing\n";
            return kExitIo;
        }
        stream << payload;
        stream.flush();
        if (!stream) {
            stream.close();
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            err << "entx: failed while writing '" << tmp.string() << "'\n";
            return kExitIo;
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        std::filesystem::remove(tmp, ec2);
        err << "entx: cannot move output into place at '" << target.string()
            << "': " << ec.message() << "\n";
        return kExitIo;
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collision-model entanglement extraction from correlated spin pairs"};
    app.require_subcommand(1);

    double g = 0.0;
    double j_tau = 0.0;
    std::string g_grid_text;
    std::string j_tau_grid_text;
    RunConfig cfg;
    std::string boundary_text = "periodic";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--workers", cfg.workers, "Worker thread count (default: ENTX_WORKERS, then hardware)");
        sub->add_option("--out", cfg.out_path, "Output file path (default: stdout)");
        sub->add_option("--format", cfg.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", cfg.seed, "Seed reserved for randomized inputs");
    };
    auto add_g_choice = [&](CLI::App* sub) {
        CLI::Option_group* grp = sub->add_option_group("correlations", "Chain correlation value(s)");
        grp->add_option("--g", g, "Single correlation value g = g_xx = g_zz");
        grp->add_option("--g-grid", g_grid_text, "Correlation grid start:stop:count");
        grp->require_option(1);
    };
    auto add_tau_choice = [&](CLI::App* sub, bool required) {
        CLI::Option_group* grp = sub->add_option_group("pulse", "Pulse area value(s)");
        grp->add_option("--j-tau", j_tau, "Single pulse area J*tau");
        grp->add_option("--j-tau-grid", j_tau_grid_text, "Pulse area grid start:stop:count");
        grp->require_option(required ? 1 : 0, 1);
    };

    CLI::App* collide = app.add_subcommand(
        "collide", "Optimized one-collision extraction over a (g, J*tau) grid");
    collide->add_option("--lambda", cfg.lambda, "Interaction anisotropy")->required();
    add_g_choice(collide);
    add_tau_choice(collide, true);
    add_common(collide);

    CLI::App* iterate = app.add_subcommand(
        "iterate", "Repeated collisions with a fresh chain pair each step");
    iterate->add_option("--lambda", cfg.lambda, "Interaction anisotropy")->required();
    iterate->add_option("--g", g, "Correlation value g = g_xx = g_zz")->required();
    iterate->add_option("--j-tau", j_tau, "Pulse area J*tau")->required();
    iterate->add_option("--steps", cfg.steps, "Number of collisions")->required();
    iterate->add_flag("--fixed-point", cfg.fixed_point,
                      "Also solve for the collision channel's stationary state");
    add_common(iterate);

    CLI::App* spinstar = app.add_subcommand(
        "spinstar", "Probes coupled to disjoint blocks of a W-state chain");
    spinstar->add_option("--L", cfg.length, "Chain length")->required();
    spinstar->add_option("--N", cfg.spins_per_probe, "Spins coupled to each probe")->required();
    spinstar->add_option("--lambda", cfg.lambda, "Interaction anisotropy")->required();
    add_tau_choice(spinstar, true);
    add_common(spinstar);

    CLI::App* groundstate = app.add_subcommand(
        "groundstate", "Spin-chain ground-state correlations by exact diagonalization");
    groundstate->add_option("--lambda", cfg.lambda, "Interaction anisotropy")->required();
    groundstate->add_option("--L", cfg.length, "Chain length (even, 2 to 12)")->required();
    groundstate->add_option("--boundary", boundary_text, "Chain boundary")
        ->check(CLI::IsMember({"open", "periodic"}));
    add_common(groundstate);

    CLI::App* wstate = app.add_subcommand(
        "wstate", "Pairwise collisions copying a W state onto fresh probes");
    wstate->add_option("--N", cfg.spins_per_probe, "Probe count (2 to 5)")->required();
    add_tau_choice(wstate, true);
    add_common(wstate);

    CLI::App* thresholds = app.add_subcommand(
        "thresholds", "Bisect the correlation thresholds of optimized extraction");
    thresholds->add_option("--lambda", cfg.lambda, "Interaction anisotropy")->required();
    add_tau_choice(thresholds, false);
    add_common(thresholds);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const std::vector<CLI::App*> subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "entx: " << e.what() << "\n";
        return kExitConfig;
    }

    std::vector<SweepRecord> records;
    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        cfg.workers = resolve_workers(cfg.workers, sub->count("--workers") > 0);
        cfg.boundary = boundary_text == "open" ? Boundary::open : Boundary::periodic;
        const CLI::Option* g_opt = sub->get_option_no_throw("--g");
        if (g_opt != nullptr && g_opt->count() > 0) cfg.g_grid = {g};
        if (!g_grid_text.empty()) cfg.g_grid = parse_grid(g_grid_text);
        const CLI::Option* tau_opt = sub->get_option_no_throw("--j-tau");
        if (tau_opt != nullptr && tau_opt->count() > 0) cfg.j_tau_grid = {j_tau};
        if (!j_tau_grid_text.empty()) cfg.j_tau_grid = parse_grid(j_tau_grid_text);
        if (cfg.command == "iterate" && cfg.steps < 1)
            throw std::invalid_argument("--steps must be at least 1");

        if (cfg.command == "collide") {
            records = cmd_collide(cfg);
        } else if (cfg.command == "iterate") {
            records = cmd_iterate(cfg);
        } else if (cfg.command == "spinstar") {
            records = cmd_spinstar(cfg);
        } else if (cfg.command == "groundstate") {
            records = cmd_groundstate(cfg);
        } else if (cfg.command == "wstate") {
            records = cmd_wstate(cfg);
        } else {
            records = cmd_thresholds(cfg);
        }
    } catch (const numerical_error& e) {
        err << "entx: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "entx: " << e.what() << "\n";
        return kExitConfig;
    }

    const std::string payload = cfg.format == "csv" ? to_csv(records) : to_json(records);
    return write_output(payload, cfg.out_path, out, err);
}

}  // namespace entx
