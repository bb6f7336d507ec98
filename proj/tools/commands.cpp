#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <numbers>
#include <sstream>

#include "csv.hpp"
#include "hetnet/analytic.hpp"
#include "hetnet/config_io.hpp"
#include "hetnet/mc.hpp"
#include "hetnet/units.hpp"
#include "svg.hpp"

namespace hetnet::cli {

namespace an = hetnet::analytic;

namespace {

constexpr unsigned kAssoc = 1u << 0;
constexpr unsigned kRate = 1u << 1;
constexpr unsigned kSe = 1u << 2;
constexpr unsigned kEe = 1u << 3;
constexpr unsigned kPower = 1u << 4;
constexpr unsigned kLoad = 1u << 5;
constexpr unsigned kTotalRate = 1u << 6;
constexpr unsigned kTotalSe = 1u << 7;
constexpr unsigned kTotalEe = 1u << 8;
constexpr unsigned kAll = 0x1ff;

unsigned metric_mask(const std::vector<std::string>& names) {
    if (names.empty()) return kAll;
    unsigned mask = 0;
    for (const auto& n : names) {
        if (n == "assoc") mask |= kAssoc;
        else if (n == "rate") mask |= kRate;
        else if (n == "se") mask |= kSe;
        else if (n == "ee") mask |= kEe;
        else if (n == "power") mask |= kPower;
        else if (n == "load") mask |= kLoad;
        else if (n == "total_rate") mask |= kTotalRate;
        else if (n == "total_se") mask |= kTotalSe;
        else if (n == "total_ee") mask |= kTotalEe;
        else if (n == "all") mask |= kAll;
        else throw std::invalid_argument("unknown metric '" + n + "'");
    }
    return mask;
}

bool needs_rate(unsigned mask) {
    return mask & (kRate | kEe | kTotalRate | kTotalEe);
}
bool needs_se(unsigned mask) { return mask & (kSe | kTotalSe); }
bool needs_power(unsigned mask) { return mask & (kPower | kEe | kTotalEe); }

// Everything one (config, mode) evaluation can produce; heavy members are
// only filled when the mask asks for them.
struct MetricValues {
    std::vector<double> assoc;
    std::optional<an::UeCounts> counts;
    std::vector<double> rate, se, power, ee;
    double total_rate = 0.0, total_se = 0.0, total_ee = 0.0;
};

MetricValues compute_metrics(const NetworkConfig& config, AccessMode mode,
                             unsigned mask, bool ee_include_static = false) {
    MetricValues out;
    out.assoc = an::assoc_probs(config, mode);
    // Count-derived metrics require the association vector to be a true
    // partition; the K > 2 faded product form need not sum to 1, so counts
    // are only formed (and checked) when something asks for them.
    if (mask & (kLoad | kRate | kEe | kTotalRate | kTotalEe))
        out.counts = an::ue_counts(config, out.assoc);
    const std::size_t k = config.tiers.size();

    if (needs_power(mask)) {
        out.power.resize(k);
        for (std::size_t i = 0; i < k; ++i)
            out.power[i] = an::mean_ue_power(config, i, mode);
    }
    const bool want_rate = needs_rate(mask), want_se = needs_se(mask);
    if (want_rate || want_se) {
        std::vector<std::future<std::pair<double, double>>> heavy;
        heavy.reserve(k);
        for (std::size_t i = 0; i < k; ++i)
            heavy.push_back(std::async(std::launch::async, [&, i] {
                const double r =
                    want_rate ? an::mean_rate(config, i, mode, out.assoc) : 0.0;
                const double s =
                    want_se ? an::spectrum_efficiency(config, i, mode, out.assoc) : 0.0;
                return std::make_pair(r, s);
            }));
        if (want_rate) out.rate.resize(k);
        if (want_se) out.se.resize(k);
        for (std::size_t i = 0; i < k; ++i) {
            auto [r, s] = heavy[i].get();
            if (want_rate) {
                out.rate[i] = r;
                out.total_rate += out.counts->per_tier[i] * r;
            }
            if (want_se) {
                out.se[i] = s;
                out.total_se += s;
            }
        }
    }
    if (mask & (kEe | kTotalEe)) {
        // the model's EE divides by transmit power; the static draw is an
        // opt-in sensitivity knob
        const double base_power = ee_include_static ? config.ue_static_power : 0.0;
        out.ee.resize(k);
        double power_weighted = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            out.ee[i] = out.rate[i] / (out.power[i] + base_power);
            power_weighted += (out.power[i] + base_power) * out.counts->per_tier[i];
        }
        out.total_ee = out.total_rate / power_weighted;
    }
    return out;
}

// nat -> bit conversion applies to rate-bearing quantities only
double unit_scale(bool bits) { return bits ? 1.0 / std::numbers::ln2 : 1.0; }
const char* rate_unit(bool bits) { return bits ? "bit/s" : "nat/s"; }
const char* ee_unit(bool bits) { return bits ? "bit/J" : "nat/J"; }

std::string tier_metric(const char* name, std::size_t tier) {
    return std::string(name) + "[" + std::to_string(tier) + "]";
}

std::string scenario_label(const std::string& config_path) {
    auto slash = config_path.find_last_of('/');
    std::string base =
        slash == std::string::npos ? config_path : config_path.substr(slash + 1);
    if (base.size() > 4 && base.substr(base.size() - 4) == ".cfg")
        base.resize(base.size() - 4);
    return base.empty() ? "scenario" : base;
}

void emit_rows(std::vector<ReportRow>& rows, const std::string& scenario,
               AccessMode mode, const std::string& param, const std::string& value,
               const MetricValues& m, unsigned mask, bool bits,
               std::optional<int> only_tier = std::nullopt) {
    const double scale = unit_scale(bits);
    const std::size_t k = m.assoc.size();
    auto add = [&](const std::string& metric, double v) {
        rows.push_back({scenario, to_string(mode), param, value, metric, v});
    };
    auto tier_wanted = [&](std::size_t i) {
        return !only_tier || static_cast<std::size_t>(*only_tier) == i;
    };
    if (mask & kAssoc)
        for (std::size_t i = 0; i < k; ++i)
            if (tier_wanted(i)) add(tier_metric("assoc", i), m.assoc[i]);
    if (mask & kRate)
        for (std::size_t i = 0; i < k; ++i)
            if (tier_wanted(i)) add(tier_metric("rate", i), m.rate[i] * scale);
    if (mask & kSe)
        for (std::size_t i = 0; i < k; ++i)
            if (tier_wanted(i)) add(tier_metric("se", i), m.se[i] * scale);
    if (mask & kEe)
        for (std::size_t i = 0; i < k; ++i)
            if (tier_wanted(i)) add(tier_metric("ee", i), m.ee[i] * scale);
    if (mask & kPower)
        for (std::size_t i = 0; i < k; ++i)
            if (tier_wanted(i)) add(tier_metric("power", i), m.power[i]);
    if (mask & kLoad)
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j)
                    add("load[" + std::to_string(i) + "/" + std::to_string(j) + "]",
                        m.counts->load_ratio(i, j));
    if (mask & kTotalRate) add("total_rate", m.total_rate * scale);
    if (mask & kTotalSe) add("total_se", m.total_se * scale);
    if (mask & kTotalEe) add("total_ee", m.total_ee * scale);
}

void maybe_write_csv(const std::string& out_path, const std::vector<ReportRow>& rows) {
    if (out_path.empty()) return;
    write_csv_file(out_path, rows);
}

}  // namespace

int cmd_eval(const CommonOptions& opt) {
    const NetworkConfig config = load_config_file(opt.config_path);
    const AccessMode mode = opt.mode.value_or(config.access_mode);
    const unsigned mask = metric_mask(opt.metrics);
    const MetricValues m = compute_metrics(config, mode, mask, opt.ee_include_static);
    const std::string scenario = scenario_label(opt.config_path);
    const double scale = unit_scale(opt.bits);
    const std::size_t k = config.tiers.size();

    std::printf("scenario %s, mode %s\n", scenario.c_str(), to_string(mode));
    std::printf("%-5s %-12s", "tier", "assoc");
    if (m.counts) std::printf(" %-12s %-12s", "N_i[1/m^2]", "n_i");
    if (!m.rate.empty()) std::printf(" %-13s", (std::string("rate[") + rate_unit(opt.bits) + "]").c_str());
    if (!m.se.empty()) std::printf(" %-12s", "se");
    if (!m.power.empty()) std::printf(" %-12s", "E[P][W]");
    if (!m.ee.empty()) std::printf(" %-13s", (std::string("ee[") + ee_unit(opt.bits) + "]").c_str());
    std::printf("\n");
    for (std::size_t i = 0; i < k; ++i) {
        if (opt.tier && static_cast<std::size_t>(*opt.tier) != i) continue;
        std::printf("%-5zu %-12.9g", i, m.assoc[i]);
        if (m.counts)
            std::printf(" %-12.9g %-12.9g", m.counts->per_tier[i],
                        m.counts->per_bs[i]);
        if (!m.rate.empty()) std::printf(" %-13.9g", m.rate[i] * scale);
        if (!m.se.empty()) std::printf(" %-12.9g", m.se[i] * scale);
        if (!m.power.empty()) std::printf(" %-12.9g", m.power[i]);
        if (!m.ee.empty()) std::printf(" %-13.9g", m.ee[i] * scale);
        std::printf("\n");
    }
    if (mask & (kTotalRate | kTotalSe | kTotalEe)) {
        std::printf("total:");
        if (needs_rate(mask)) std::printf(" rate=%.9g", m.total_rate * scale);
        if (needs_se(mask)) std::printf(" se=%.9g", m.total_se * scale);
        if (mask & (kEe | kTotalEe)) std::printf(" ee=%.9g", m.total_ee * scale);
        std::printf("\n");
    }
    if (mask & kLoad) {
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                std::printf("load n_%zu/n_%zu = %.9g\n", i, j,
                            m.counts->load_ratio(i, j));
    }

    std::vector<ReportRow> rows;
    emit_rows(rows, scenario, mode, "", "", m, mask, opt.bits, opt.tier);

    // The pairwise fading-loss product is only exact for two tiers; for
    // more tiers report the sampled association next to it.
    if ((mask & kAssoc) && mode == AccessMode::CudaFading && k > 2) {
        mc::McSettings settings;
        settings.seed = opt.seed;
        settings.num_drops = opt.drops;
        settings.threads = opt.threads;
        std::printf("%-5s %-14s %-14s %-12s (fading product form vs sampled, K > 2)\n",
                    "tier", "assoc_product", "assoc_mc", "mc_se");
        for (std::size_t i = 0; i < k; ++i) {
            const auto est =
                mc::estimate_metric(config, mc::McMetric::AssocProb, i, mode, settings);
            std::printf("%-5zu %-14.9g %-14.9g %-12.3g\n", i, m.assoc[i], est.mean,
                        est.std_error);
            rows.push_back({scenario, to_string(mode), "", "", tier_metric("assoc_mc", i),
                            m.assoc[i], true, est.mean, est.std_error});
        }
    }
    maybe_write_csv(opt.out_path, rows);
    return 0;
}

namespace {

void apply_param(NetworkConfig& config, const std::string& path, double value) {
    auto apply_tier = [&](const std::string& field, std::size_t i) {
        if (field == "epsilon" || field == "fpc_factor")
            config.tiers[i].fpc_factor = value;
        else if (field == "sinr_threshold_db")
            config.tiers[i].sinr_threshold = db_to_linear(value);
        else if (field == "sinr_threshold")
            config.tiers[i].sinr_threshold = value;
        else
            throw std::invalid_argument("unknown sweep field 'tier[].'" + field);
    };
    if (path == "ue_intensity") {
        config.ue_intensity = value;
    } else if (path.rfind("tier[", 0) == 0) {
        const auto close = path.find(']');
        if (close == std::string::npos || close + 1 >= path.size() ||
            path[close + 1] != '.')
            throw std::invalid_argument("bad sweep parameter path '" + path + "'");
        const std::string idx = path.substr(5, close - 5);
        const std::string field = path.substr(close + 2);
        if (idx == "*") {
            for (std::size_t i = 0; i < config.tiers.size(); ++i) apply_tier(field, i);
        } else {
            const std::size_t i = static_cast<std::size_t>(std::stoul(idx));
            if (i >= config.tiers.size())
                throw std::invalid_argument("sweep tier index out of range");
            apply_tier(field, i);
        }
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + path + "'");
    }
    config.validate();
}

}  // namespace

int cmd_sweep(const CommonOptions& opt, const SweepOptions& sweep) {
    const NetworkConfig base = load_config_file(opt.config_path);
    if (sweep.values.empty()) throw std::invalid_argument("sweep: no values given");
    const unsigned mask = metric_mask(opt.metrics);
    std::vector<AccessMode> modes = sweep.modes;
    if (modes.empty()) modes.push_back(opt.mode.value_or(base.access_mode));

    std::vector<double> values = sweep.values;
    std::sort(values.begin(), values.end());
    const std::string scenario = scenario_label(opt.config_path);

    struct Cell {
        double value;
        AccessMode mode;
        std::future<MetricValues> result;
    };
    std::vector<Cell> cells;
    for (double v : values) {
        for (AccessMode mode : modes) {
            NetworkConfig c = base;
            apply_param(c, sweep.param, v);
            cells.push_back(
                {v, mode,
                 std::async(std::launch::async,
                            [c = std::move(c), mode, mask,
                             stat = opt.ee_include_static] {
                                return compute_metrics(c, mode, mask, stat);
                            })});
        }
    }
    std::vector<ReportRow> rows;
    for (auto& cell : cells)
        emit_rows(rows, scenario, cell.mode, sweep.param, format_value(cell.value),
                  cell.result.get(), mask, opt.bits);

    if (opt.out_path.empty())
        write_csv(std::cout, rows);
    else
        write_csv_file(opt.out_path, rows);
    return 0;
}

namespace {

struct PaperCheck {
    std::string label;
    double got;
    double want;
    double tol;
    bool pass() const { return std::abs(got - want) <= tol; }
};

// table1: association probabilities and per-BS load ratios for both
// scenarios, nearest-BS and mean-power association, checked against the
// published comparison values.
int reproduce_table1(const CommonOptions& opt) {
    std::vector<PaperCheck> checks;
    std::vector<std::string> bar_labels;
    std::vector<double> bar_values;
    std::vector<ReportRow> rows;
    const struct {
        const char* name;
        double duda_macro, cuda_macro, duda_load, cuda_load;
    } published[] = {{"table2_pico", 0.20, 0.69, 1.0, 8.9},
                     {"table2_femto", 0.1111, 0.65, 1.0, 14.9}};

    for (const auto& s : published) {
        const NetworkConfig config = builtin_scenario(s.name);
        for (AccessMode mode : {AccessMode::Duda, AccessMode::CudaMeanFading}) {
            const auto assoc = an::assoc_probs(config, mode);
            const auto counts = an::ue_counts(config, assoc);
            const bool duda = mode == AccessMode::Duda;
            const double want_macro = duda ? s.duda_macro : s.cuda_macro;
            const double tol = duda ? 0.005 : 0.03;
            checks.push_back({std::string(s.name) + " " + to_string(mode) + " assoc[0]",
                              assoc[0], want_macro, tol});
            checks.push_back({std::string(s.name) + " " + to_string(mode) + " assoc[1]",
                              assoc[1], 1.0 - want_macro, tol});
            checks.push_back({std::string(s.name) + " " + to_string(mode) + " load",
                              counts.load_ratio(0, 1), duda ? s.duda_load : s.cuda_load,
                              duda ? 1e-9 : 0.3});
            for (std::size_t i = 0; i < 2; ++i) {
                rows.push_back({s.name, to_string(mode), "", "",
                                tier_metric("assoc", i), assoc[i]});
                bar_labels.push_back(std::string(s.name) + " " + to_string(mode) +
                                     " A" + std::to_string(i));
                bar_values.push_back(assoc[i]);
            }
            rows.push_back({s.name, to_string(mode), "", "", "load[0/1]",
                            counts.load_ratio(0, 1)});
        }
    }
    bool all_pass = true;
    std::printf("%-38s %-12s %-12s %-8s %s\n", "check", "computed", "published",
                "tol", "verdict");
    for (const auto& c : checks) {
        const bool ok = c.pass();
        all_pass = all_pass && ok;
        std::printf("%-38s %-12.9g %-12.9g %-8.3g %s\n", c.label.c_str(), c.got,
                    c.want, c.tol, ok ? "PASS" : "FAIL");
    }
    const std::string dir = opt.out_path.empty() ? "." : opt.out_path;
    write_csv_file(dir + "/table1.csv", rows);
    write_bar_chart(dir + "/table1.svg", "Association probability by scenario and mode",
                    bar_labels, bar_values);
    return all_pass ? 0 : 3;
}

// Shared epsilon sweep over both modes for the figure exhibits. Returns
// metric values keyed [epsilon index][mode index], modes = {duda, cuda_mean}.
std::vector<std::array<MetricValues, 2>> figure_sweep(const NetworkConfig& base,
                                                      const std::vector<double>& eps,
                                                      unsigned mask,
                                                      bool sweep_macro_only = false,
                                                      bool sweep_pico_only = false) {
    std::vector<std::future<MetricValues>> futures;
    const AccessMode modes[2] = {AccessMode::Duda, AccessMode::CudaMeanFading};
    for (double e : eps) {
        for (AccessMode mode : modes) {
            NetworkConfig c = base;
            for (std::size_t i = 0; i < c.tiers.size(); ++i) {
                const bool swept = !(sweep_macro_only && i != 0) &&
                                   !(sweep_pico_only && i != 1);
                c.tiers[i].fpc_factor = swept ? e : 0.5;
            }
            futures.push_back(std::async(std::launch::async,
                                         [c = std::move(c), mode, mask] {
                                             return compute_metrics(c, mode, mask);
                                         }));
        }
    }
    std::vector<std::array<MetricValues, 2>> out(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i)
        for (int mdx = 0; mdx < 2; ++mdx) out[i][mdx] = futures[i * 2 + mdx].get();
    return out;
}

const std::vector<double> kEpsGrid = {0.5, 0.6, 0.7, 0.8, 0.9, 1.0};

int reproduce_figure(const std::string& target, const CommonOptions& opt) {
    const NetworkConfig pico = builtin_scenario("table2_pico");
    const std::string dir = opt.out_path.empty() ? "." : opt.out_path;
    const double scale = unit_scale(opt.bits);

    std::ofstream csv(dir + "/" + target + ".csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + dir + "/" + target + ".csv");

    if (target == "fig2" || target == "fig3") {
        const bool is_se = target == "fig2";
        const auto grid =
            figure_sweep(pico, kEpsGrid, is_se ? kTotalSe : (kTotalEe | kTotalRate));
        csv << "epsilon," << (is_se ? "se_duda,se_cuda" : "ee_duda,ee_cuda") << "\n";
        Series duda{is_se ? "DUDA SE" : "DUDA EE", {}, {}};
        Series cuda{is_se ? "CUDA SE" : "CUDA EE", {}, {}};
        for (std::size_t i = 0; i < kEpsGrid.size(); ++i) {
            const double vd = (is_se ? grid[i][0].total_se : grid[i][0].total_ee) * scale;
            const double vc = (is_se ? grid[i][1].total_se : grid[i][1].total_ee) * scale;
            csv << format_value(kEpsGrid[i]) << ',' << format_value(vd) << ','
                << format_value(vc) << "\n";
            duda.x.push_back(kEpsGrid[i]);
            duda.y.push_back(vd);
            cuda.x.push_back(kEpsGrid[i]);
            cuda.y.push_back(vc);
        }
        write_line_chart(dir + "/" + target + ".svg",
                         is_se ? "Network spectrum efficiency vs FPC factor"
                               : "Network energy efficiency vs FPC factor",
                         "FPC factor (both tiers)",
                         is_se ? "total SE" : (std::string("total EE [") + ee_unit(opt.bits) + "]"),
                         {duda, cuda}, !is_se);
        return 0;
    }
    if (target == "fig4") {
        const auto grid = figure_sweep(pico, kEpsGrid, kRate);
        csv << "epsilon,rate_duda_macro,rate_duda_pico,rate_cuda_macro,rate_cuda_pico\n";
        Series s[4] = {{"DUDA macro", {}, {}},
                       {"DUDA pico", {}, {}},
                       {"CUDA macro", {}, {}},
                       {"CUDA pico", {}, {}}};
        for (std::size_t i = 0; i < kEpsGrid.size(); ++i) {
            const double v[4] = {grid[i][0].rate[0] * scale, grid[i][0].rate[1] * scale,
                                 grid[i][1].rate[0] * scale, grid[i][1].rate[1] * scale};
            csv << format_value(kEpsGrid[i]);
            for (int j = 0; j < 4; ++j) {
                csv << ',' << format_value(v[j]);
                s[j].x.push_back(kEpsGrid[i]);
                s[j].y.push_back(v[j]);
            }
            csv << "\n";
        }
        write_line_chart(dir + "/fig4.svg", "Per-tier mean UE rate vs FPC factor",
                         "FPC factor (both tiers)",
                         std::string("mean rate [") + rate_unit(opt.bits) + "]",
                         {s[0], s[1], s[2], s[3]}, true);
        return 0;
    }
    if (target == "fig5") {
        const auto macro_swept = figure_sweep(pico, kEpsGrid, kTotalRate, true, false);
        const auto pico_swept = figure_sweep(pico, kEpsGrid, kTotalRate, false, true);
        csv << "epsilon,total_rate_duda_macro_swept,total_rate_cuda_macro_swept,"
               "total_rate_duda_pico_swept,total_rate_cuda_pico_swept\n";
        Series s[4] = {{"DUDA, macro eps swept", {}, {}},
                       {"CUDA, macro eps swept", {}, {}},
                       {"DUDA, pico eps swept", {}, {}},
                       {"CUDA, pico eps swept", {}, {}}};
        for (std::size_t i = 0; i < kEpsGrid.size(); ++i) {
            const double v[4] = {
                macro_swept[i][0].total_rate * scale, macro_swept[i][1].total_rate * scale,
                pico_swept[i][0].total_rate * scale, pico_swept[i][1].total_rate * scale};
            csv << format_value(kEpsGrid[i]);
            for (int j = 0; j < 4; ++j) {
                csv << ',' << format_value(v[j]);
                s[j].x.push_back(kEpsGrid[i]);
                s[j].y.push_back(v[j]);
            }
            csv << "\n";
        }
        write_line_chart(dir + "/fig5.svg",
                         "Total network rate, one tier's FPC factor swept",
                         "swept FPC factor (other tier fixed at 0.5)",
                         std::string("total rate [") + rate_unit(opt.bits) + "/m^2]",
                         {s[0], s[1], s[2], s[3]}, true);
        return 0;
    }
    throw std::invalid_argument("unknown reproduce target '" + target + "'");
}

}  // namespace

int cmd_reproduce(const std::string& target, const CommonOptions& opt) {
    if (target == "table1") return reproduce_table1(opt);
    return reproduce_figure(target, opt);
}

namespace {

struct ValidationRow {
    std::string metric;
    std::string tier;
    double analytic;
    mc::McEstimate est;
    bool binding = true;  // realism probes are reported but never gate

    double z() const {
        if (est.std_error == 0.0) return est.mean == analytic ? 0.0 : 1e9;
        return (est.mean - analytic) / est.std_error;
    }
    bool pass() const { return !binding || std::abs(z()) < 3.0; }
};

std::vector<mc::LaplaceProbe> default_probes(const NetworkConfig& config) {
    // f_D quantiles x two thresholds, minus one duplicate: five points in
    // the informative mid-range of the transform.
    auto quantile = [&](double p) {
        return std::sqrt(-std::log1p(-p) / (std::numbers::pi * config.ue_intensity));
    };
    const double r25 = quantile(0.25), r50 = quantile(0.5), r90 = quantile(0.9);
    const double t1 = std::log(1.1), t2 = std::log(1.4);
    return {{r25, t1, 0}, {r50, t1, 0}, {r50, t2, 0}, {r90, t1, 0}, {r90, t2, 0}};
}

}  // namespace

int cmd_validate(const CommonOptions& opt) {
    const NetworkConfig config = load_config_file(opt.config_path);
    const AccessMode mode = opt.mode.value_or(config.access_mode);
    const std::size_t k = config.tiers.size();

    mc::McSettings settings;
    settings.seed = opt.seed;
    settings.num_drops = opt.drops;
    settings.threads = opt.threads;

    const auto assoc = an::assoc_probs(config, mode);
    std::vector<ValidationRow> rows;

    for (std::size_t i = 0; i < k; ++i)
        rows.push_back({"assoc_prob", std::to_string(i), assoc[i],
                        mc::estimate_metric(config, mc::McMetric::AssocProb, i, mode,
                                            settings)});
    for (std::size_t i = 0; i < k; ++i)
        rows.push_back({"mean_power", std::to_string(i),
                        an::mean_ue_power(config, i, mode),
                        mc::estimate_metric(config, mc::McMetric::MeanPower, i, mode,
                                            settings)});

    const auto probes = default_probes(config);
    const std::vector<std::vector<double>> eps_sets{[&] {
        std::vector<double> eps(k);
        for (std::size_t j = 0; j < k; ++j) eps[j] = config.tiers[j].fpc_factor;
        return eps;
    }()};
    const auto laplace_mc =
        mc::estimate_laplace_grid(config, mode, eps_sets, probes, settings);
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const double s = mc::laplace_probe_s(config, probes[p]);
        const double analytic_value = an::laplace_interference(
            {config, probes[p].tier, probes[p].r, s}, mode, assoc);
        char label[64];
        std::snprintf(label, sizeof label, "laplace(r=%.3g,t=%.3g)", probes[p].r,
                      probes[p].t);
        rows.push_back({label, "-", analytic_value, laplace_mc[0][p]});
    }

    const auto rate_mc = mc::estimate_rate_grid(config, mode, eps_sets, settings);
    std::vector<double> analytic_rate(k);
    {
        std::vector<std::future<double>> futures;
        for (std::size_t i = 0; i < k; ++i)
            futures.push_back(std::async(std::launch::async, [&, i] {
                return an::mean_rate(config, i, mode, assoc);
            }));
        for (std::size_t i = 0; i < k; ++i) analytic_rate[i] = futures[i].get();
    }
    for (std::size_t i = 0; i < k; ++i)
        rows.push_back({"rate", std::to_string(i), analytic_rate[i], rate_mc[0][i]});
    for (std::size_t i = 0; i < k; ++i) {
        // the analytic side is the t-outer double integral, so this row also
        // exercises the second integration order against the sampled field
        const double scale = assoc[i] * config.ue_intensity / config.bandwidth;
        mc::McEstimate se = rate_mc[0][i];
        se.mean *= scale;
        se.std_error *= scale;
        rows.push_back({"se", std::to_string(i),
                        an::spectrum_efficiency(config, i, mode, assoc), se});
    }
    for (std::size_t i = 0; i < k; ++i) {
        mc::McSettings power_settings = settings;
        power_settings.seed = settings.seed ^ 0xd1b54a32d192ed03ULL;
        const auto power = mc::estimate_metric(config, mc::McMetric::MeanPower, i,
                                               mode, power_settings);
        const mc::McEstimate rate = rate_mc[0][i];
        const double ee = rate.mean / power.mean;
        const double rel =
            std::sqrt((rate.std_error / rate.mean) * (rate.std_error / rate.mean) +
                      (power.std_error / power.mean) * (power.std_error / power.mean));
        rows.push_back({"ee", std::to_string(i),
                        analytic_rate[i] / an::mean_ue_power(config, i, mode),
                        {ee, std::abs(ee) * rel, rate.n}});
    }

    if (opt.one_per_bs) {
        mc::McSettings probe_settings = settings;
        probe_settings.interferer_mode = mc::InterfererMode::OnePerBs;
        probe_settings.num_drops = std::min<long>(opt.drops, 5000);
        probe_settings.region_radius = 40.0;
        const auto realized =
            mc::estimate_rate_grid(config, mode, eps_sets, probe_settings);
        for (std::size_t i = 0; i < k; ++i)
            rows.push_back({"rate(one_per_bs)", std::to_string(i), analytic_rate[i],
                            realized[0][i], false});
    }

    std::ostringstream report;
    char line[256];
    std::snprintf(line, sizeof line, "validate %s mode=%s drops=%ld seed=%llu\n",
                  scenario_label(opt.config_path).c_str(), to_string(mode), opt.drops,
                  static_cast<unsigned long long>(opt.seed));
    report << line;
    std::snprintf(line, sizeof line, "%-22s %-5s %-15s %-15s %-12s %-8s %s\n", "metric",
                  "tier", "analytic", "mc_mean", "mc_se", "z", "verdict");
    report << line;
    bool all_pass = true;
    for (const auto& row : rows) {
        const bool ok = row.pass();
        all_pass = all_pass && ok;
        std::snprintf(line, sizeof line, "%-22s %-5s %-15.9g %-15.9g %-12.4g %-8.3g %s\n",
                      row.metric.c_str(), row.tier.c_str(), row.analytic, row.est.mean,
                      row.est.std_error, row.z(),
                      row.binding ? (ok ? "PASS" : "FAIL") : "INFO");
        report << line;
    }
    report << (all_pass ? "RESULT: PASS\n" : "RESULT: FAIL\n");
    std::fputs(report.str().c_str(), stdout);
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, std::ios::binary);
        out << report.str();
    }
    return all_pass ? 0 : 3;
}

}  // namespace hetnet::cli
