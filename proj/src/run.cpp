#include "rydspec/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <set>
#include <sstream>

#include "rydspec/analytic.hpp"
#include "rydspec/cloud.hpp"

namespace rydspec {

namespace fs = std::filesystem;
using nlohmann::json;

std::string RunSummary::text() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries) os << k << '=' << v << '\n';
    for (const auto& w : warnings) os << "warning=" << w << '\n';
    return os.str();
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::out_of_range("no column '" + name + "'");
}

namespace {

std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string meta_line(const RunConfig& c) {
    std::ostringstream os;
    os << "# config_hash=" << config_hash(c);
    for (const auto& [k, v] : physics_params(c)) os << ' ' << k << '=' << v;
    return os.str();
}

class CsvWriter {
  public:
    CsvWriter(const fs::path& path, const std::string& meta, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << meta << '\n';
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }
    template <class... T>
    void row(const T&... v) {
        std::size_t i = 0;
        ((out_ << (i++ ? "," : "") << cell(v)), ...);
        out_ << '\n';
    }

  private:
    static std::string cell(double x) { return fmt(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I x) {
        return std::to_string(x);
    }
    std::ofstream out_;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_failures(const fs::path& dir, const RunConfig& c, const std::vector<RealizationFailure>& failures) {
    CsvWriter w(dir / "failures.csv", meta_line(c), {"index", "seed", "error"});
    for (const auto& f : failures) {
        std::string msg = f.error;
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        w.row(f.index, f.seed, msg);
    }
}

json state_to_json(const SpectrumAccumulator& acc) {
    const auto s = acc.state();
    json j;
    j["binning"] = {{"lin_lo", s.binning.lin_lo},   {"lin_hi", s.binning.lin_hi}, {"lin_bins", s.binning.lin_bins},
                    {"log_lo", s.binning.log_lo},   {"log_hi", s.binning.log_hi},
                    {"bins_per_decade", s.binning.bins_per_decade}};
    j["realizations"] = s.realizations;
    j["count"] = s.count;
    j["below"] = s.below;
    j["above"] = s.above;
    j["log_under"] = s.log_under;
    j["neg_over"] = s.neg_over;
    j["pos_over"] = s.pos_over;
    j["lin"] = s.lin;
    j["neg"] = s.neg;
    j["pos"] = s.pos;
    j["moments"] = {{"n", s.moments.n}, {"mean", s.moments.mean}, {"m2", s.moments.m2}, {"m3", s.moments.m3}};
    return j;
}

SpectrumAccumulator state_from_json(const json& j) {
    SpectrumAccumulator::State s;
    const auto& b = j.at("binning");
    s.binning.lin_lo = b.at("lin_lo");
    s.binning.lin_hi = b.at("lin_hi");
    s.binning.lin_bins = b.at("lin_bins");
    s.binning.log_lo = b.at("log_lo");
    s.binning.log_hi = b.at("log_hi");
    s.binning.bins_per_decade = b.at("bins_per_decade");
    s.realizations = j.at("realizations");
    s.count = j.at("count");
    s.below = j.at("below");
    s.above = j.at("above");
    s.log_under = j.at("log_under");
    s.neg_over = j.at("neg_over");
    s.pos_over = j.at("pos_over");
    s.lin = j.at("lin").get<std::vector<std::uint64_t>>();
    s.neg = j.at("neg").get<std::vector<std::uint64_t>>();
    s.pos = j.at("pos").get<std::vector<std::uint64_t>>();
    const auto& m = j.at("moments");
    s.moments.n = m.at("n");
    s.moments.mean = m.at("mean");
    s.moments.m2 = m.at("m2");
    s.moments.m3 = m.at("m3");
    return SpectrumAccumulator::from_state(s);
}

std::string status_name(TransitionStatus s) {
    switch (s) {
        case TransitionStatus::found: return "found";
        case TransitionStatus::none_found: return "none_found";
        case TransitionStatus::insufficient_windows: return "insufficient_windows";
    }
    return "?";
}

void write_side(RunSummary& s, const std::string& tag, const SideTransition& t) {
    s.entries["transition_" + tag + "_status"] = status_name(t.status);
    s.entries["transition_" + tag + "_energy"] = t.energy ? fmt(*t.energy) : "none";
    if (!t.dominant.empty()) s.entries["transition_" + tag + "_dominant"] = t.dominant;
    s.entries["transition_" + tag + "_windows"] = std::to_string(t.windows_used);
}

// Statistics and files for a finished ensemble run.
void publish_ensemble(const RunConfig& c, const EnsembleRun& ens, const fs::path& dir, RunSummary& s) {
    const std::string meta = meta_line(c);
    s.entries["realizations_requested"] = std::to_string(c.realizations);
    s.entries["realizations_completed"] = std::to_string(ens.size());
    s.entries["realizations_failed"] = std::to_string(ens.failures.size());
    if (c.ensemble.kind == EnsembleKind::rydberg) s.entries["sampling_scheme"] = kSamplingScheme;
    write_failures(dir, c, ens.failures);
    if (c.save_eigenvalues) write_spectra(dir / "eigenvalues.bin", ens);
    if (ens.size() == 0) throw std::runtime_error("every realization failed; see failures.csv");

    const auto acc = accumulate_dos(ens.spectra, c.dos);
    write_text(dir / "accumulators.json", state_to_json(acc).dump());
    s.entries["eigenvalues"] = std::to_string(acc.eigenvalue_count());

    const auto lin = dos_density(acc);
    const auto err = dos_standard_error(acc);
    {
        CsvWriter w(dir / "dos_linear.csv", meta, {"left", "right", "center", "density", "stderr", "count"});
        for (std::size_t i = 0; i < lin.density.size(); ++i)
            w.row(lin.left[i], lin.right[i], lin.center(i), lin.density[i], err[i], lin.count[i]);
    }
    {
        CsvWriter w(dir / "dos_log.csv", meta, {"sign", "abs_left", "abs_right", "density", "count"});
        for (int sign : {-1, +1}) {
            const auto d = dos_log_density(acc, sign);
            for (std::size_t i = 0; i < d.density.size(); ++i) w.row(sign, d.left[i], d.right[i], d.density[i], d.count[i]);
        }
    }
    const auto& m = acc.core_moments();
    s.entries["core_window"] = "[" + fmt(c.dos.lin_lo) + "," + fmt(c.dos.lin_hi) + ")";
    s.entries["core_mean"] = fmt(m.mean);
    s.entries["core_variance"] = fmt(m.variance());
    s.entries["core_skewness"] = fmt(m.skewness());
    s.entries["support_width_99"] = fmt(support_width(acc));
    s.entries["mode"] = fmt(dos_mode(acc));
    try {
        const auto t = tail_exponent(acc, c.tail_lo, c.tail_hi);
        s.entries["tail_slope_negative"] = fmt(t.negative.slope);
        s.entries["tail_slope_negative_stderr"] = fmt(t.negative.stderr_);
        s.entries["tail_slope_positive"] = fmt(t.positive.slope);
        s.entries["tail_slope_positive_stderr"] = fmt(t.positive.stderr_);
    } catch (const InsufficientTailData& e) {
        s.entries["tail_slope"] = "insufficient";
        s.warnings.push_back(e.what());
    }

    if (c.command == Command::spectra) return;

    const auto sp = analyze_spacings(ens.spectra, c.spacing);
    {
        CsvWriter w(dir / "spacing_windows.csv", meta, {"window", "center", "count", "delta_p", "delta_wd"});
        for (std::size_t i = 0; i < sp.log_stats.size(); ++i) {
            const auto& st = sp.log_stats[i];
            w.row(sp.log_windows.windows()[i].label, st.center, st.count, st.delta_p, st.delta_wd);
        }
        for (std::size_t i = 0; i < sp.literal_stats.size(); ++i) {
            const auto& st = sp.literal_stats[i];
            w.row(sp.literal_windows.windows()[i].label, st.center, st.count, st.delta_p, st.delta_wd);
        }
    }
    {
        CsvWriter w(dir / "spacing_histograms.csv", meta, {"window", "s_left", "s_right", "density", "poisson", "wigner"});
        auto dump = [&](const SpacingAccumulator& a) {
            for (std::size_t k = 0; k < a.windows().size(); ++k) {
                if (a.count(k) == 0) continue;
                const auto h = a.histogram(k);
                for (std::size_t i = 0; i < h.density.size(); ++i) {
                    const double l = i * h.width(), r = l + h.width(), mid = 0.5 * (l + r);
                    w.row(a.windows()[k].label, l, r, h.density[i], poisson_spacing(mid), wigner_spacing(mid));
                }
            }
        };
        dump(sp.literal_windows);
        dump(sp.log_windows);
    }
    for (std::size_t i = 0; i < sp.literal_stats.size(); ++i) {
        const auto& label = sp.literal_windows.windows()[i].label;
        s.entries["window_" + label + "_count"] = std::to_string(sp.literal_stats[i].count);
        s.entries["window_" + label + "_delta_p"] = fmt(sp.literal_stats[i].delta_p);
        s.entries["window_" + label + "_delta_wd"] = fmt(sp.literal_stats[i].delta_wd);
    }

    if (c.command == Command::spacing) return;

    try {
        const auto tr = transition_energies(sp.log_stats, c.spacing.transition);
        write_side(s, "minus", tr.minus);
        write_side(s, "plus", tr.plus);
        s.entries["transition_degree"] = std::to_string(tr.degree);
    } catch (const InsufficientWindows& e) {
        s.entries["transition_minus_status"] = "insufficient_windows";
        s.entries["transition_plus_status"] = "insufficient_windows";
        s.warnings.push_back(e.what());
    }
}

RunSummary run_locator(const RunConfig& c, const fs::path& dir) {
    RunSummary s;
    const double rb = c.ensemble.blockade_radius;
    const auto grid = c.locator_grid.empty() ? default_lambda_grid(rb, c.locator_half_range) : c.locator_grid;
    SolverSettings settings = c.solver;
    settings.exec = Execution::parallel;
    const auto sol = c.locator_method == "high" ? solve_high(rb, grid, settings)
                                                : solve_low(c.locator_order, rb, grid, settings);
    std::ostringstream name;
    name << "locator_" << c.locator_method;
    if (c.locator_method == "low") name << "_order" << c.locator_order;
    name << "_rb" << fmt(rb) << ".csv";
    {
        CsvWriter w(dir / name.str(), meta_line(c) + " method=" + sol.method,
                    {"lambda", "re_g", "im_g", "dos", "residual", "epsilon", "converged", "stable", "flag"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto& d = sol.diagnostics[i];
            w.row(grid[i], sol.g_values[i].real(), sol.g_values[i].imag(), sol.dos[i], d.residual, sol.epsilon,
                  int(d.converged), int(d.stable), d.flag.empty() ? std::string("-") : d.flag);
        }
    }
    std::size_t nonconv = 0, unstable = 0, multi = 0;
    for (const auto& d : sol.diagnostics) {
        nonconv += !d.converged;
        unstable += d.converged && !d.stable;
        multi += d.alternate_root.has_value();
    }
    std::vector<double> x(grid), dens = dos_from_resolvent(sol);
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return grid[a] < grid[b]; });
    for (std::size_t i = 0; i < order.size(); ++i) {
        x[i] = grid[order[i]];
        dens[i] = sol.dos[order[i]];
    }
    s.entries["curve_file"] = name.str();
    s.entries["method"] = sol.method;
    s.entries["grid_points"] = std::to_string(grid.size());
    s.entries["accepted_points"] = std::to_string(sol.accepted_count());
    s.entries["nonconverged_points"] = std::to_string(nonconv);
    s.entries["epsilon_unstable_points"] = std::to_string(unstable);
    s.entries["alternate_root_points"] = std::to_string(multi);
    s.entries["final_epsilon"] = fmt(sol.epsilon);
    s.entries["dos_integral"] = fmt(integrate_dos(sol));
    s.entries["support_width_99"] = fmt(curve_quantile(x, dens, 0.995) - curve_quantile(x, dens, 0.005));
    if (c.locator_method == "low" && c.locator_order == 2 && rb >= 0.75)
        s.warnings.push_back("second order at this blockade radius is experimental; trust only lambda < 5");
    return s;
}

RunSummary run_tabulate(const RunConfig& c, const fs::path& dir) {
    RunSummary s;
    const double rb = c.ensemble.blockade_radius;
    const auto q = c.table_quantity;
    double lo = c.table_lo, hi = c.table_hi;
    const bool defaulted = lo == hi;
    const std::string meta = meta_line(c);
    const fs::path file = dir / ("analytic_" + q + ".csv");
    auto axis = [&](std::size_t i) { return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c.table_points - 1); };

    if (q == "spacing_references") {
        if (defaulted) lo = 0.0, hi = c.spacing.binning.s_max;
        CsvWriter w(file, meta, {"s", "poisson", "wigner"});
        for (std::size_t i = 0; i < c.table_points; ++i) w.row(axis(i), poisson_spacing(axis(i)), wigner_spacing(axis(i)));
    } else {
        const auto g = GeometryParams::make(c.ensemble.n_atoms, rb);
        if (q == "coupling_pdf") {
            if (defaulted) {
                if (rb > 0.0) std::tie(lo, hi) = coupling_support(g);
                else lo = -1.0, hi = 1.0;
            }
            CsvWriter w(file, meta, {"h", "pdf"});
            for (std::size_t i = 0; i < c.table_points; ++i) w.row(axis(i), coupling_pdf(axis(i), g));
            if (rb > 0.0) s.entries["coupling_variance"] = fmt(coupling_variance(g));
        } else if (q == "pair_distance_pdf") {
            if (defaulted) lo = rb, hi = g.diameter;
            CsvWriter w(file, meta, {"r", "pdf", "cdf"});
            for (std::size_t i = 0; i < c.table_points; ++i)
                w.row(axis(i), pair_distance_pdf(axis(i), g), pair_distance_cdf(axis(i), g));
        } else {
            const double lw = lambda_w(g);
            if (defaulted) lo = -1.2 * lw, hi = 1.2 * lw;
            CsvWriter w(file, meta, {"lambda", "density"});
            for (std::size_t i = 0; i < c.table_points; ++i) w.row(axis(i), semicircle(axis(i), lw));
            s.entries["lambda_w"] = fmt(lw);
        }
    }
    s.entries["table_file"] = file.filename().string();
    s.entries["table_range"] = "[" + fmt(lo) + "," + fmt(hi) + "]";
    return s;
}

double interpolate(const std::vector<double>& x, const std::vector<double>& y, double at) {
    const auto it = std::upper_bound(x.begin(), x.end(), at);
    if (it == x.begin() || it == x.end()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t k = static_cast<std::size_t>(it - x.begin());
    const double f = (at - x[k - 1]) / (x[k] - x[k - 1]);
    return y[k - 1] + f * (y[k] - y[k - 1]);
}

std::pair<std::vector<double>, std::vector<double>> curve_of(const CsvTable& t) {
    auto pick = [&](std::initializer_list<const char*> names) {
        for (const char* n : names)
            if (std::find(t.header.begin(), t.header.end(), n) != t.header.end()) return t.column(n);
        throw std::invalid_argument("compare: no usable column in CSV");
    };
    const std::size_t cx = pick({"lambda", "center", "h", "r", "s"});
    const std::size_t cy = pick({"dos", "density", "pdf"});
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : t.rows) pts.emplace_back(r[cx], r[cy]);
    std::sort(pts.begin(), pts.end());
    std::vector<double> x, y;
    for (const auto& [a, b] : pts) x.push_back(a), y.push_back(b);
    return {x, y};
}

RunSummary run_compare(const RunConfig& c, const fs::path& dir) {
    const auto a = read_csv(c.inputs[0]);
    const auto b = read_csv(c.inputs[1]);
    for (const auto& [k, v] : a.meta) {
        if (k == "config_hash" || k == "method" || k == "ensemble") continue;
        auto it = b.meta.find(k);
        if (it != b.meta.end() && it->second != v)
            throw CompareMismatch("compare: physical parameter " + k + " differs (" + v + " vs " + it->second + ")");
    }
    const auto [xa, ya] = curve_of(a);
    const auto [xb, yb] = curve_of(b);
    RunSummary s;
    CsvWriter w(dir / "compare.csv", "# config_hash=" + config_hash(c) + " a=" + a.meta.at("config_hash") + " b=" + b.meta.at("config_hash"),
                {"x", "a", "b", "relative_difference"});
    double worst = 0.0;
    std::size_t overlap = 0;
    for (std::size_t i = 0; i < xa.size(); ++i) {
        const double yb_i = interpolate(xb, yb, xa[i]);
        const double rel = std::isnan(yb_i) ? yb_i : (ya[i] - yb_i) / std::max(std::fabs(yb_i), 1e-300);
        w.row(xa[i], ya[i], yb_i, rel);
        if (!std::isnan(rel)) {
            ++overlap;
            worst = std::max(worst, std::fabs(rel));
        }
    }
    s.entries["overlap_points"] = std::to_string(overlap);
    s.entries["max_relative_difference"] = fmt(worst);
    return s;
}

void finish(const RunConfig& c, const fs::path& dir, RunSummary& s, std::chrono::steady_clock::time_point t0) {
    s.entries["command"] = to_string(c.command);
    s.entries["config_hash"] = config_hash(c);
    s.entries["schema_version"] = std::to_string(kSchemaVersion);
    s.entries["seed"] = std::to_string(c.seed);
    s.entries["threads"] = std::to_string(max_threads());
    for (const auto& [k, v] : physics_params(c)) s.entries["param_" + k] = v;
    s.entries["wall_time_s"] = fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    write_text(dir / "config.json", dump_config(c) + "\n");
    write_text(dir / "summary.txt", s.text());
}

}  // namespace

RunSummary run(const RunConfig& config) {
    config.validate();
    if (config.command == Command::merge) return merge_runs(config.inputs, config.output_dir);
    const auto t0 = std::chrono::steady_clock::now();
    if (config.workers > 0) set_threads(config.workers);
    const fs::path dir(config.output_dir);
    fs::create_directories(dir);

    RunSummary s;
    switch (config.command) {
        case Command::spectra:
        case Command::spacing:
        case Command::transition: {
            const auto ens = run_ensemble(config.ensemble, config.realizations, config.seed, config.first_index);
            publish_ensemble(config, ens, dir, s);
            break;
        }
        case Command::locator: s = run_locator(config, dir); break;
        case Command::tabulate_analytic: s = run_tabulate(config, dir); break;
        case Command::compare: s = run_compare(config, dir); break;
        case Command::merge: break;
    }
    finish(config, dir, s, t0);
    return s;
}

RunSummary merge_runs(const std::vector<std::string>& run_dirs, const std::string& output_dir) {
    const auto t0 = std::chrono::steady_clock::now();
    if (run_dirs.empty()) throw MergeMismatch("merge: no inputs");
    std::vector<RunConfig> configs;
    for (const auto& d : run_dirs) configs.push_back(load_config((fs::path(d) / "config.json").string()));

    // Everything except the seed, shard and count must agree.
    auto schema = [](RunConfig c) {
        c.seed = 0;
        c.first_index = 0;
        c.realizations = 1;
        c.inputs.clear();
        return config_hash(c);
    };
    const RunConfig& first = configs.front();
    if (first.command != Command::spectra && first.command != Command::spacing && first.command != Command::transition)
        throw MergeMismatch("merge: " + run_dirs.front() + " is not an ensemble run");
    for (std::size_t i = 1; i < configs.size(); ++i) {
        if (!(configs[i].ensemble == first.ensemble))
            throw MergeMismatch("merge: ensemble spec of " + run_dirs[i] + " differs from " + run_dirs[0]);
        if (schema(configs[i]) != schema(first))
            throw MergeMismatch("merge: binning, window or command settings of " + run_dirs[i] + " differ from " + run_dirs[0]);
    }

    RunSummary s;
    std::set<std::uint64_t> seeds;
    std::set<std::pair<std::uint64_t, std::size_t>> seen;
    EnsembleRun all;
    all.spec = first.ensemble;
    all.seed = first.seed;
    std::size_t dropped = 0, requested = 0;
    for (std::size_t i = 0; i < run_dirs.size(); ++i) {
        if (!seeds.insert(configs[i].seed).second)
            s.warnings.push_back("duplicate seed " + std::to_string(configs[i].seed) + " in " + run_dirs[i]);
        requested += configs[i].realizations;
        EnsembleRun part = read_spectra(fs::path(run_dirs[i]) / "eigenvalues.bin");
        EnsembleRun kept;
        kept.spec = part.spec = first.ensemble;
        for (std::size_t k = 0; k < part.size(); ++k) {
            if (!seen.insert({part.seed, part.indices[k]}).second) {
                ++dropped;
                continue;
            }
            kept.indices.push_back(part.indices[k]);
            kept.seeds.push_back(part.seeds[k]);
            kept.spectra.push_back(std::move(part.spectra[k]));
        }
        all.append(std::move(kept));
    }
    if (dropped) s.warnings.push_back(std::to_string(dropped) + " duplicate realizations dropped");

    RunConfig merged = first;
    merged.realizations = requested;
    merged.inputs = run_dirs;
    merged.output_dir = output_dir;
    const fs::path dir(output_dir);
    fs::create_directories(dir);

    // Failure lines are text; carry them over verbatim.
    {
        std::ofstream out(dir / "failures.csv");
        out << meta_line(merged) << "\nindex,seed,error\n";
        for (const auto& d : run_dirs) {
            std::ifstream in(fs::path(d) / "failures.csv");
            std::string line;
            int n = 0;
            while (std::getline(in, line))
                if (++n > 2) out << line << '\n';
        }
    }
    // Re-deriving from spectra; count the recorded failures for the summary.
    std::size_t failed = 0;
    for (const auto& d : run_dirs) failed += read_csv(fs::path(d) / "failures.csv").rows.size();

    const bool save = merged.save_eigenvalues;
    merged.save_eigenvalues = true;
    publish_ensemble(merged, all, dir, s);
    merged.save_eigenvalues = save;
    s.entries["realizations_failed"] = std::to_string(failed);

    // Cross-check against the stored accumulators.
    SpectrumAccumulator combined(first.dos);
    for (const auto& d : run_dirs) {
        std::ifstream in(fs::path(d) / "accumulators.json");
        combined.merge(state_from_json(json::parse(in)));
    }
    s.entries["accumulator_check"] = dropped == 0 ? (combined.same_counts(accumulate_dos(all.spectra, first.dos)) ? "ok" : "mismatch")
                                                  : "skipped";
    s.entries["merged_inputs"] = std::to_string(run_dirs.size());
    finish(merged, dir, s, t0);
    return s;
}

namespace {
constexpr char kMagic[8] = {'R', 'Y', 'D', 'E', 'I', 'G', '0', '1'};

template <class T>
void put(std::ofstream& o, T v) {
    o.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!in) throw std::runtime_error("truncated spectra file");
    return v;
}
}  // namespace

void write_spectra(const fs::path& path, const EnsembleRun& run) {
    std::ofstream o(path, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + path.string());
    o.write(kMagic, sizeof kMagic);
    put<std::uint64_t>(o, run.seed);
    put<std::uint64_t>(o, run.size());
    for (std::size_t k = 0; k < run.size(); ++k) {
        put<std::uint64_t>(o, run.indices[k]);
        put<std::uint64_t>(o, run.seeds[k]);
        put<std::uint64_t>(o, run.spectra[k].size());
        o.write(reinterpret_cast<const char*>(run.spectra[k].data()),
                static_cast<std::streamsize>(run.spectra[k].size() * sizeof(double)));
    }
}

EnsembleRun read_spectra(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    char magic[8];
    in.read(magic, sizeof magic);
    if (!in || !std::equal(magic, magic + 8, kMagic)) throw std::runtime_error(path.string() + " is not a spectra file");
    EnsembleRun run;
    run.seed = take<std::uint64_t>(in);
    const auto n = take<std::uint64_t>(in);
    for (std::uint64_t k = 0; k < n; ++k) {
        run.indices.push_back(take<std::uint64_t>(in));
        run.seeds.push_back(take<std::uint64_t>(in));
        std::vector<double> ev(take<std::uint64_t>(in));
        in.read(reinterpret_cast<char*>(ev.data()), static_cast<std::streamsize>(ev.size() * sizeof(double)));
        if (!in) throw std::runtime_error("truncated spectra file");
        run.spectra.push_back(std::move(ev));
    }
    return run;
}

CsvTable read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    CsvTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ss(line.substr(1));
            std::string tok;
            while (ss >> tok) {
                const auto eq = tok.find('=');
                if (eq != std::string::npos) t.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
            }
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (t.header.empty()) {
            t.header = cells;
            continue;
        }
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            row.push_back(end == c.c_str() ? std::numeric_limits<double>::quiet_NaN() : v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace rydspec
