#include "runners.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <random>

#include "oracle.hpp"
#include "spinchain/onebody.hpp"
#include "spinchain/parallel.hpp"

#ifndef SPINCHAIN_VERSION
#define SPINCHAIN_VERSION "dev"
#endif

namespace spinchain::cli {

namespace {

// Partition lists longer than this are streamed instead of stored.
constexpr std::uint64_t kMaxListedPartitions = 20'000'000;

constexpr double kOnebodyFloor      = -1e-10;
constexpr double kCrossCheckTol     = 1e-9;
constexpr int    kCrossCheckSamples = 20;

double alpha_cell(const ModelSpec &s) { return s.alpha ? *s.alpha : std::nan(""); }
std::int64_t nn_cell(const ModelSpec &s) { return s.nn_limit ? 1 : 0; }
std::int64_t mask_cell(Mask m) { return static_cast<std::int64_t>(m); }

int sector_of(const RunConfig &cfg) { return cfg.initial == InitialKind::Neel ? popcount(neel_mask(cfg.n_sites)) : 1; }

StateVector initial_state(const RunConfig &cfg, std::shared_ptr<const SectorBasis> basis) {
    if(cfg.initial == InitialKind::Neel) return neel_state(std::move(basis));
    return single_excitation_state(std::move(basis), cfg.excitation_site());
}

PartitionTriple single_partition(const RunConfig &cfg, Command cmd) {
    if(cfg.partitions.kind == PartitionSelection::Kind::Strategy)
        throw ConfigError(fmt::format("partitions: {} needs a single partition (quarters or triple:...), got '{}'", command_name(cmd),
                                      cfg.partitions.describe()));
    return cfg.partitions.triple;
}

/// Partitions for a scan; empty when the strategy is too large to store.
std::vector<PartitionTriple> scan_partitions(const RunConfig &cfg) {
    if(cfg.partitions.kind != PartitionSelection::Kind::Strategy) return {cfg.partitions.triple};
    if(std::holds_alternative<AllAssignments>(cfg.partitions.strategy)) {
        if(cfg.n_sites > kAllAssignmentsMaxSites)
            throw CapacityError(fmt::format("partitions: 'all' is limited to N <= {}, got N = {}; use contiguous or sizes:a,b,c",
                                            kAllAssignmentsMaxSites, cfg.n_sites));
        if(all_assignments_count(cfg.n_sites) > kMaxListedPartitions) return {};
    }
    auto list = enumerate_partitions(cfg.n_sites, cfg.partitions.strategy);
    if(list.empty()) throw ConfigError(fmt::format("partitions: '{}' yields no partitions for N = {}", cfg.partitions.describe(), cfg.n_sites));
    return list;
}

std::vector<Mask> partition_masks(std::span<const PartitionTriple> parts) {
    std::vector<Mask> masks;
    masks.reserve(parts.size() * 7);
    for(const auto &p : parts) masks.insert(masks.end(), {p.a, p.b, p.c, p.a | p.b, p.a | p.c, p.b | p.c, p.abc()});
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    return masks;
}

Dataset make_dataset(const RunConfig &cfg, Command cmd, std::string name, std::vector<std::string> columns) {
    Dataset d;
    d.name    = std::move(name);
    d.columns = std::move(columns);
    d.meta    = provenance(cfg, cmd);
    return d;
}

void record_engines(std::vector<Dataset> &ds, const RunConfig &cfg, const std::vector<EngineKind> &used) {
    Json per = Json::object();
    for(std::size_t i = 0; i < cfg.models.size(); ++i) per[cfg.models[i].alpha_label()] = engine_name(used[i]);
    for(auto &d : ds) d.meta["engine"]["used"] = per;
}

void export_table(const RunConfig &cfg, const ModelSpec &spec, std::size_t ti, const SubsetEntropyTable &table) {
    if(cfg.export_tables == "none") return;
    const auto dir = std::filesystem::path(cfg.out_dir) / "tables";
    std::filesystem::create_directories(dir);
    const auto stem = fmt::format("alpha_{}_t{:05}", spec.alpha_label(), ti);
    if(cfg.export_tables == "csv") write_entropy_table_csv(table, dir / (stem + ".csv"));
    else write_entropy_table_binary(table, dir / (stem + ".bin"));
}

/// Evolves the configured initial state for every alpha in parallel and
/// hands each (alpha index, time index, state) to observe. Returns the
/// engine used per alpha.
std::vector<EngineKind> sweep(const RunConfig &cfg, const std::function<void(std::size_t, std::size_t, const StateVector &)> &observe) {
    const auto              basis = enumerate_sector(cfg.n_sites, sector_of(cfg));
    const TimeGrid          grid  = cfg.grid();
    std::vector<EngineKind> used(cfg.models.size());
    parallel_blocks(cfg.models.size(), cfg.models.size(), [&](std::size_t k, std::size_t, std::size_t) {
        const SectorHamiltonian h(coupling_matrix(cfg.models[k]), basis);
        const StateVector       psi0 = initial_state(cfg, basis);
        used[k] = for_each_state(h, psi0, grid, cfg.engine, [&](std::size_t ti, const StateVector &psi) { observe(k, ti, psi); });
    });
    return used;
}

} // namespace

Json provenance(const RunConfig &cfg, Command cmd) {
    Json j = Json::object();
    j["tool"]        = "spinchain";
    j["version"]     = SPINCHAIN_VERSION;
    j["command"]     = command_name(cmd);
    j["config_hash"] = fmt::format("{:016x}", cfg.hash());
    j["config"]      = cfg.canonical();
    j["n_sites"]     = cfg.n_sites;
    j["j0"]          = cfg.j0;
    if(cfg.initial == InitialKind::Neel) j["initial_state"] = "neel";
    else j["initial_state"] = fmt::format("single:{}", cfg.excitation_site());
    j["time"] = {{"t_max", cfg.t_max}, {"n_points", cfg.n_points}, {"kac_rescaled", cfg.kac}};
    Json alphas = Json::array();
    for(const auto &m : cfg.models) alphas.push_back(m.alpha_label());
    j["alphas"]     = alphas;
    j["partitions"] = cfg.partitions.describe();
    j["engine"]     = {{"requested", engine_name(cfg.engine.kind)},
                       {"dense_threshold", cfg.engine.dense_threshold},
                       {"krylov_tol", cfg.engine.krylov.tol},
                       {"krylov_m_max", cfg.engine.krylov.m_max}};
    j["tolerances"] = {{"weight_clip", kWeightClip}, {"probability_snap", kProbabilitySnap}, {"tau_threshold", cfg.tau_threshold}};
    j["entropy_units"] = "bits";
    return j;
}

RunOutput run_tmi_grid(const RunConfig &cfg) {
    const auto  p     = single_partition(cfg, Command::TmiGrid);
    const auto  masks = partition_masks(std::span(&p, 1));
    const auto  grid  = cfg.grid();
    const auto &ms    = cfg.models;
    std::vector<std::vector<double>> values(ms.size(), std::vector<double>(grid.size()));

    const auto used = sweep(cfg, [&](std::size_t k, std::size_t ti, const StateVector &psi) {
        const auto table = subset_entropy_table(psi, masks);
        values[k][ti]    = tmi(table, SiteSubset{p.a}, SiteSubset{p.b}, SiteSubset{p.c});
    });

    RunOutput out;
    auto d = make_dataset(cfg, Command::TmiGrid, "tmi_grid", {"alpha", "nn_limit", "t", "t_phys", "tmi", "lightcone_onset"});
    d.meta["partition"]            = {{"a", p.a}, {"b", p.b}, {"c", p.c}};
    d.meta["lightcone_convention"] = "largest pairwise minimal site distance between A, B, C divided by 4 j0, in units of the t column";
    for(std::size_t k = 0; k < ms.size(); ++k) {
        const double kac   = coupling_matrix(ms[k]).kac;
        const double onset = lightcone_onset(ms[k], p) * (grid.kac_rescaled ? kac : 1.0);
        for(std::size_t ti = 0; ti < grid.size(); ++ti)
            d.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), grid.times[ti], grid.physical(ti, kac), values[k][ti], onset});
        const auto mn = std::min_element(values[k].begin(), values[k].end());
        const auto mx = std::max_element(values[k].begin(), values[k].end());
        out.summary.push_back(fmt::format("alpha={:<6} min tmi {} at t={}, max tmi {} at t={}", ms[k].alpha_label(), format_number(*mn),
                                          format_number(grid.times[static_cast<std::size_t>(mn - values[k].begin())]), format_number(*mx),
                                          format_number(grid.times[static_cast<std::size_t>(mx - values[k].begin())])));
    }
    out.datasets.push_back(std::move(d));
    record_engines(out.datasets, cfg, used);
    return out;
}

RunOutput run_tmi_vs_entropy(const RunConfig &cfg) {
    if(cfg.n_sites % 2 != 0) throw ConfigError("n-sites: tmi-vs-entropy needs an even chain for the half-chain cut");
    const auto p    = single_partition(cfg, Command::TmiVsEntropy);
    const Mask half = SiteSubset::range(0, cfg.n_sites / 2).bits;
    auto       masks = partition_masks(std::span(&p, 1));
    masks.push_back(half);
    const auto  grid = cfg.grid();
    const auto &ms   = cfg.models;
    std::vector<std::vector<double>> tmis(ms.size(), std::vector<double>(grid.size())), halves = tmis;

    const auto used = sweep(cfg, [&](std::size_t k, std::size_t ti, const StateVector &psi) {
        const auto table = subset_entropy_table(psi, masks);
        tmis[k][ti]      = tmi(table, SiteSubset{p.a}, SiteSubset{p.b}, SiteSubset{p.c});
        halves[k][ti]    = table(half);
    });

    RunOutput out;
    auto d = make_dataset(cfg, Command::TmiVsEntropy, "tmi_vs_entropy", {"alpha", "nn_limit", "t", "t_phys", "tmi", "s_half"});
    d.meta["partition"] = {{"a", p.a}, {"b", p.b}, {"c", p.c}};
    d.meta["half_cut"]  = half;
    for(std::size_t k = 0; k < ms.size(); ++k) {
        const double kac = coupling_matrix(ms[k]).kac;
        for(std::size_t ti = 0; ti < grid.size(); ++ti)
            d.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), grid.times[ti], grid.physical(ti, kac), tmis[k][ti], halves[k][ti]});
        out.summary.push_back(fmt::format("alpha={:<6} peak tmi {}, final s_half {}", ms[k].alpha_label(),
                                          format_number(*std::max_element(tmis[k].begin(), tmis[k].end())), format_number(halves[k].back())));
    }
    out.datasets.push_back(std::move(d));
    record_engines(out.datasets, cfg, used);
    return out;
}

RunOutput run_minmax_scan(const RunConfig &cfg) {
    const auto  parts  = scan_partitions(cfg);
    const bool  stream = parts.empty();
    const auto  grid   = cfg.grid();
    const auto &ms     = cfg.models;

    std::vector<Mask> masks;
    bool              complete = stream;
    if(!stream) {
        masks    = partition_masks(parts);
        complete = cfg.n_sites <= SubsetEntropyTable::kDefaultFullCap && masks.size() * 8 > (std::size_t{1} << cfg.n_sites);
    }

    std::vector<TmiSeries> series(ms.size());
    for(std::size_t k = 0; k < ms.size(); ++k) {
        series[k].grid          = grid;
        series[k].extrema       = std::vector<TmiExtrema>(grid.size());
        series[k].meta.alpha    = ms[k].alpha;
        series[k].meta.nn_limit = ms[k].nn_limit;
        series[k].meta.n_sites  = cfg.n_sites;
        series[k].meta.strategy = cfg.partitions.describe();
    }

    const auto used = sweep(cfg, [&](std::size_t k, std::size_t ti, const StateVector &psi) {
        const auto table = complete ? subset_entropy_table(psi) : subset_entropy_table(psi, masks);
        export_table(cfg, ms[k], ti, table);
        series[k].extrema[ti] = stream ? minmax_tmi(table, cfg.partitions.strategy) : minmax_tmi(table, parts);
    });

    RunOutput out;
    auto      d = make_dataset(cfg, Command::MinmaxScan, "minmax_scan",
                               {"alpha", "nn_limit", "t", "t_phys", "min_tmi", "max_tmi", "argmin_a", "argmin_b", "argmin_c", "argmax_a", "argmax_b",
                                "argmax_c"});
    auto      s = make_dataset(cfg, Command::MinmaxScan, "minmax_summary",
                               {"alpha", "nn_limit", "largest_max_tmi", "t_largest_max", "smallest_min_tmi", "tau", "has_tau"});
    const auto count = stream ? all_assignments_count(cfg.n_sites) : parts.size();
    for(auto *x : {&d, &s}) {
        x->meta["partition_count"] = count;
        x->meta["table"]           = complete ? "complete" : "partial";
        x->meta["mask_encoding"]   = "bit i set = site i in the subsystem";
    }
    for(std::size_t k = 0; k < ms.size(); ++k) {
        const double kac = coupling_matrix(ms[k]).kac;
        const auto  &ex  = series[k].extrema;
        std::size_t  best = 0;
        double       smallest = INFINITY;
        for(std::size_t ti = 0; ti < grid.size(); ++ti) {
            const auto &e = ex[ti];
            d.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), grid.times[ti], grid.physical(ti, kac), e.min, e.max, mask_cell(e.argmin.a),
                       mask_cell(e.argmin.b), mask_cell(e.argmin.c), mask_cell(e.argmax.a), mask_cell(e.argmax.b), mask_cell(e.argmax.c)});
            if(e.max > ex[best].max) best = ti;
            smallest = std::min(smallest, e.min);
        }
        const auto tau = tau_sign_change(series[k], cfg.tau_threshold);
        s.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), ex[best].max, grid.times[best], smallest, tau ? *tau : std::nan(""),
                   std::int64_t{tau.has_value()}});
        out.summary.push_back(fmt::format("alpha={:<6} largest max tmi {} at t={}, tau {}", ms[k].alpha_label(), format_number(ex[best].max),
                                          format_number(grid.times[best]), tau ? format_number(*tau) : std::string("none")));
    }
    out.datasets.push_back(std::move(d));
    out.datasets.push_back(std::move(s));
    record_engines(out.datasets, cfg, used);
    return out;
}

RunOutput run_onebody_scan(const RunConfig &cfg) {
    if(cfg.initial != InitialKind::SingleExcitation) throw ConfigError("initial-state: onebody-scan needs 'single'");
    const auto parts = scan_partitions(cfg);
    if(parts.empty())
        throw CapacityError(fmt::format("onebody-scan: {} partitions exceed the list limit of {}", all_assignments_count(cfg.n_sites),
                                        kMaxListedPartitions));
    const auto  grid  = cfg.grid();
    const auto &ms    = cfg.models;
    const int   site  = cfg.excitation_site();
    const auto  basis = enumerate_sector(cfg.n_sites, 1);

    std::vector<OnebodyScan> scans(ms.size());
    std::vector<double>      deviation(ms.size(), 0.0);
    parallel_blocks(ms.size(), ms.size(), [&](std::size_t k, std::size_t, std::size_t) {
        const auto coupling = coupling_matrix(ms[k]);
        scans[k]            = onebody_tmi_scan(coupling, site, grid, parts);
        // same quantity through the general Schmidt/entropy-table route
        std::mt19937_64 rng(cfg.seed + k);
        std::uniform_int_distribution<std::size_t> pick_t(0, grid.size() - 1), pick_p(0, parts.size() - 1);
        for(int s = 0; s < kCrossCheckSamples; ++s) {
            const std::size_t ti = pick_t(rng);
            const auto       &p  = parts[pick_p(rng)];
            const Eigen::VectorXcd c = onebody_propagator(coupling, grid.physical(ti, coupling.kac)).col(site);
            StateVector psi{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis->dim()))};
            for(int m = 0; m < cfg.n_sites; ++m) psi.amplitudes[static_cast<Eigen::Index>(basis->rank(Mask{1} << m))] = c[m];
            const auto   masks   = partition_masks(std::span(&p, 1));
            const double general = tmi(subset_entropy_table(psi, masks), SiteSubset{p.a}, SiteSubset{p.b}, SiteSubset{p.c});
            const double binary  = tmi_binary(occupation_weights(std::span<const cplx>(c.data(), static_cast<std::size_t>(c.size())),
                                                                 SiteSubset{p.a}, SiteSubset{p.b}, SiteSubset{p.c}));
            deviation[k] = std::max(deviation[k], std::abs(general - binary));
        }
    });

    RunOutput out;
    auto      d = make_dataset(cfg, Command::OnebodyScan, "onebody_scan",
                               {"alpha", "nn_limit", "t", "t_phys", "min_tmi", "max_tmi", "argmin_a", "argmin_b", "argmin_c", "argmax_a", "argmax_b",
                                "argmax_c"});
    auto      o = make_dataset(cfg, Command::OnebodyScan, "onebody_occupations", {"alpha", "nn_limit", "t", "site", "probability"});
    auto      s = make_dataset(cfg, Command::OnebodyScan, "onebody_summary",
                               {"alpha", "nn_limit", "global_min_tmi", "t_at_min", "min_a", "min_b", "min_c", "crosscheck_max_deviation", "pass"});
    for(auto *x : {&d, &o, &s}) {
        x->meta["engine"]["used"]   = "onebody";
        x->meta["partition_count"]  = parts.size();
        x->meta["nonnegativity_floor"] = kOnebodyFloor;
        x->meta["crosscheck"]       = {{"samples", kCrossCheckSamples}, {"tolerance", kCrossCheckTol}, {"seed", cfg.seed}};
    }
    std::vector<std::string> failures;
    for(std::size_t k = 0; k < ms.size(); ++k) {
        const double kac = coupling_matrix(ms[k]).kac;
        const auto  &sc  = scans[k];
        for(std::size_t ti = 0; ti < grid.size(); ++ti) {
            const auto &e = sc.series.extrema[ti];
            d.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), grid.times[ti], grid.physical(ti, kac), e.min, e.max, mask_cell(e.argmin.a),
                       mask_cell(e.argmin.b), mask_cell(e.argmin.c), mask_cell(e.argmax.a), mask_cell(e.argmax.b), mask_cell(e.argmax.c)});
            for(int m = 0; m < cfg.n_sites; ++m)
                o.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), grid.times[ti], std::int64_t{m}, sc.occupations[ti][static_cast<std::size_t>(m)]});
        }
        const bool nonneg = sc.global_min >= kOnebodyFloor;
        const bool agree  = deviation[k] <= kCrossCheckTol;
        const auto tmin   = grid.times[sc.min_time_index];
        s.add_row({alpha_cell(ms[k]), nn_cell(ms[k]), sc.global_min, tmin, mask_cell(sc.min_partition.a), mask_cell(sc.min_partition.b),
                   mask_cell(sc.min_partition.c), deviation[k], std::int64_t{nonneg && agree}});
        out.summary.push_back(fmt::format("alpha={:<6} min tmi {} at t={}, cross-check deviation {}", ms[k].alpha_label(),
                                          format_number(sc.global_min), format_number(tmin), format_number(deviation[k])));
        if(!nonneg)
            failures.push_back(fmt::format("alpha={}: tmi {} < {} at t={} for A={:#x} B={:#x} C={:#x}", ms[k].alpha_label(),
                                           format_number(sc.global_min), kOnebodyFloor, format_number(tmin), sc.min_partition.a,
                                           sc.min_partition.b, sc.min_partition.c));
        if(!agree)
            failures.push_back(fmt::format("alpha={}: binary-entropy and general pipelines differ by {}", ms[k].alpha_label(),
                                           format_number(deviation[k])));
    }
    if(!failures.empty()) {
        std::string msg;
        for(const auto &f : failures) msg += (msg.empty() ? "" : "; ") + f;
        out.failure = msg;
    }
    out.datasets.push_back(std::move(d));
    out.datasets.push_back(std::move(o));
    out.datasets.push_back(std::move(s));
    return out;
}

namespace {

struct Check {
    std::string suite;
    int         n_sites = 0;
    std::string alpha, initial;
    double      value = 0, tolerance = 0;
};

std::vector<ModelSpec> validation_models(int n) {
    return {ModelSpec::power_law(n, 1.0, 0.0), ModelSpec::power_law(n, 1.0, 0.5), ModelSpec::power_law(n, 1.0, 2.0),
            ModelSpec::nearest_neighbour(n, 1.0)};
}

void dynamics_checks(int n, std::vector<Check> &checks) {
    for(const auto &spec : validation_models(n)) {
        const auto               coupling = coupling_matrix(spec);
        const oracle::FullEvolver full(oracle::full_hamiltonian(coupling));
        for(const bool neel : {true, false}) {
            const auto  basis = enumerate_sector(n, neel ? popcount(neel_mask(n)) : 1);
            const auto  psi0  = neel ? neel_state(basis) : single_excitation_state(basis, n / 2);
            const auto  full0 = oracle::embed(psi0);
            const SectorHamiltonian h(coupling, basis);
            TimeGrid grid;
            for(int i = 1; i <= 10; ++i) grid.times.push_back(0.3 * i);
            for(const auto kind : {EngineKind::Dense, EngineKind::Krylov}) {
                EngineOptions opts;
                opts.kind = kind;
                double dev = 0;
                (void)for_each_state(h, psi0, grid, opts, [&](std::size_t ti, const StateVector &psi) {
                    const auto ref = oracle::restrict_to(full.evolve(full0, grid.times[ti]), *basis);
                    dev            = std::max(dev, (ref - psi.amplitudes).cwiseAbs().maxCoeff());
                });
                checks.push_back({fmt::format("dynamics-{}", engine_name(kind)), n, spec.alpha_label(), neel ? "neel" : "single", dev, 1e-9});
            }
        }
    }
}

void entropy_checks(int n, std::vector<Check> &checks) {
    for(const auto &spec : {ModelSpec::power_law(n, 1.0, 0.5), ModelSpec::nearest_neighbour(n, 1.0)}) {
        const auto              coupling = coupling_matrix(spec);
        const auto              basis    = enumerate_sector(n, popcount(neel_mask(n)));
        const SectorHamiltonian h(coupling, basis);
        TimeGrid                grid{{0.5, 1.5, 3.0}, false};
        double                  s_dev = 0, tmi_dev = 0;
        (void)for_each_state(h, neel_state(basis), grid, {}, [&](std::size_t, const StateVector &psi) {
            const auto          table = subset_entropy_table(psi);
            const auto          full  = oracle::embed(psi);
            std::vector<double> ref(std::size_t{1} << n);
            for(Mask m = 0; m < ref.size(); ++m) {
                ref[m] = oracle::entropy(full, n, m);
                s_dev  = std::max(s_dev, std::abs(ref[m] - table(m)));
            }
            for_each_partition(n, AllAssignments{}, [&](const PartitionTriple &p) {
                tmi_dev = std::max(tmi_dev, std::abs(tmi_lookup(ref, p.a, p.b, p.c) - tmi_lookup(table.entries(), p.a, p.b, p.c)));
            });
        });
        checks.push_back({"subset-entropy", n, spec.alpha_label(), "neel", s_dev, 1e-9});
        checks.push_back({"tmi", n, spec.alpha_label(), "neel", tmi_dev, 1e-9});
    }
}

void invariant_checks(int n, std::vector<Check> &checks) {
    const auto              spec  = ModelSpec::power_law(n, 1.0, 0.5);
    const auto              basis = enumerate_sector(n, popcount(neel_mask(n)));
    const SectorHamiltonian h(coupling_matrix(spec), basis);
    const auto              psi0 = neel_state(basis);
    const double            e0   = h.energy(psi0.amplitudes);
    EngineOptions           opts;
    opts.kind = EngineKind::Krylov;
    double norm_dev = 0, energy_dev = 0;
    (void)for_each_state(h, psi0, TimeGrid::uniform(5.0, 21), opts, [&](std::size_t, const StateVector &psi) {
        norm_dev   = std::max(norm_dev, std::abs(psi.norm() - 1.0));
        energy_dev = std::max(energy_dev, std::abs(h.energy(psi.amplitudes) - e0) / std::max(1.0, std::abs(e0)));
    });
    checks.push_back({"norm-drift", n, spec.alpha_label(), "neel", norm_dev, 1e-10});
    checks.push_back({"energy-drift", n, spec.alpha_label(), "neel", energy_dev, 1e-9});
}

} // namespace

RunOutput run_validate(const RunConfig &cfg) {
    std::vector<Check> checks;
    for(const int n : {6, 8, 10}) dynamics_checks(n, checks);
    for(const int n : {6, 8}) entropy_checks(n, checks);
    invariant_checks(10, checks);

    RunConfig one      = cfg;
    one.n_sites        = 8;
    one.models         = {ModelSpec::power_law(8, 1.0, 0.5), ModelSpec::nearest_neighbour(8, 1.0)};
    one.initial        = InitialKind::SingleExcitation;
    one.site           = -1;
    one.t_max          = 4.0;
    one.n_points       = 41;
    one.kac            = false;
    one.partitions     = parse_partitions("all", 8);
    const auto onebody = run_onebody_scan(one);
    for(const auto &row : onebody.datasets.back().rows) {
        const double alpha = std::get<double>(row[0]);
        const auto   label = std::isnan(alpha) ? std::string("nn") : format_number(alpha);
        checks.push_back({"onebody-min", 8, label, "single", -std::get<double>(row[2]), -kOnebodyFloor});
        checks.push_back({"onebody-crosscheck", 8, label, "single", std::get<double>(row[7]), kCrossCheckTol});
    }

    RunOutput out;
    auto      d = make_dataset(cfg, Command::Validate, "validate", {"suite", "n_sites", "alpha", "initial", "value", "tolerance", "pass"});
    d.meta["engine"]["used"] = "per-check";
    std::vector<std::string> failed;
    for(const auto &c : checks) {
        const bool pass = c.value <= c.tolerance;
        d.add_row({c.suite, std::int64_t{c.n_sites}, c.alpha, c.initial, c.value, c.tolerance, std::int64_t{pass}});
        out.summary.push_back(fmt::format("{:<4} {:<20} N={:<3} alpha={:<4} {:<7} {} (tol {})", pass ? "ok" : "FAIL", c.suite, c.n_sites, c.alpha,
                                          c.initial, format_number(c.value), format_number(c.tolerance)));
        if(!pass) failed.push_back(fmt::format("{} N={} alpha={} {}", c.suite, c.n_sites, c.alpha, c.initial));
    }
    if(!failed.empty()) {
        std::string msg = "validation failed:";
        for(const auto &f : failed) msg += " [" + f + "]";
        out.failure = msg;
    }
    out.datasets.push_back(std::move(d));
    return out;
}

RunOutput run(Command cmd, const RunConfig &cfg) {
    switch(cmd) {
        case Command::TmiGrid: return run_tmi_grid(cfg);
        case Command::TmiVsEntropy: return run_tmi_vs_entropy(cfg);
        case Command::MinmaxScan: return run_minmax_scan(cfg);
        case Command::OnebodyScan: return run_onebody_scan(cfg);
        case Command::Validate: return run_validate(cfg);
    }
    throw ArgumentError("unknown command");
}

} // namespace spinchain::cli
