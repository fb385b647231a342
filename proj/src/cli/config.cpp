#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace spinchain::cli {

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if(b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::stringstream        ss(s);
    std::string              item;
    while(std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double to_double(const std::string &key, const std::string &v) {
    try {
        std::size_t pos = 0;
        double      d   = std::stod(v, &pos);
        if(pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch(const std::exception &) { throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, v)); }
}

long long to_int(const std::string &key, const std::string &v) {
    try {
        std::size_t pos = 0;
        long long   i   = std::stoll(v, &pos);
        if(pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch(const std::exception &) { throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, v)); }
}

bool to_bool(const std::string &key, const std::string &v) {
    const auto l = lower(v);
    if(l == "true" || l == "1" || l == "yes" || l == "on") return true;
    if(l == "false" || l == "0" || l == "no" || l == "off") return false;
    throw ConfigError(fmt::format("{}: expected a boolean, got '{}'", key, v));
}

/// "3", "0-4" (inclusive) -> mask
Mask parse_site_group(const std::string &g, int n_sites) {
    Mask m = 0;
    for(const auto &part : split(g, ',')) {
        if(part.empty()) continue;
        const auto dash = part.find('-');
        long long  lo   = 0, hi = 0;
        if(dash == std::string::npos) lo = hi = to_int("partitions", part);
        else {
            lo = to_int("partitions", trim(part.substr(0, dash)));
            hi = to_int("partitions", trim(part.substr(dash + 1)));
        }
        if(lo < 0 || hi >= n_sites || lo > hi) throw ConfigError(fmt::format("partitions: site range '{}' outside [0, {})", part, n_sites));
        for(long long i = lo; i <= hi; ++i) m |= Mask{1} << i;
    }
    return m;
}

} // namespace

const std::vector<std::string> &known_keys() {
    static const std::vector<std::string> keys{"n-sites",      "j0",         "alpha",      "nn-limit",   "initial-state", "site",
                                               "t-max",        "n-points",   "kac",        "engine",     "krylov-tol",    "krylov-m-max",
                                               "dense-threshold", "partitions", "tau-threshold", "seed", "out",           "format",
                                               "paper-scale",  "paper-n-sites", "export-tables"};
    return keys;
}

KeyValues parse_config_text(const std::string &text, const std::string &origin) {
    KeyValues          kv;
    std::istringstream in(text);
    std::string        line;
    int                lineno = 0;
    const auto        &keys   = known_keys();
    while(std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if(line.empty() || line[0] == '#' || line[0] == ';') continue;
        if(line.front() == '[') {
            if(line.back() != ']') throw ConfigError(fmt::format("{}:{}: unterminated section header", origin, lineno));
            continue;
        }
        const auto eq = line.find('=');
        if(eq == std::string::npos) throw ConfigError(fmt::format("{}:{}: expected 'key = value'", origin, lineno));
        std::string key   = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if(const auto hash = value.find(" #"); hash != std::string::npos) value = trim(value.substr(0, hash));
        if(std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(fmt::format("{}:{}: unknown key '{}'", origin, lineno, key));
        if(kv.count(key)) throw ConfigError(fmt::format("{}:{}: duplicate key '{}'", origin, lineno, key));
        kv[key] = value;
    }
    return kv;
}

KeyValues load_config_file(const std::string &path) {
    std::ifstream f(path);
    if(!f) throw ConfigError(fmt::format("cannot open config file '{}'", path));
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

std::vector<std::optional<double>> parse_alpha_list(const std::string &text) {
    std::vector<std::optional<double>> out;
    for(const auto &tok : split(text, ',')) {
        if(tok.empty()) continue;
        const auto l = lower(tok);
        if(l == "nn" || l == "inf" || l == "infinity") out.push_back(std::nullopt);
        else {
            const double a = to_double("alpha", tok);
            if(!std::isfinite(a) || a < 0) throw ConfigError(fmt::format("alpha: value {} must be finite and >= 0", tok));
            out.push_back(a);
        }
    }
    return out;
}

std::string PartitionSelection::describe() const {
    switch(kind) {
        case Kind::Quarters: return "quarters";
        case Kind::Triple: return fmt::format("triple:{:#x}/{:#x}/{:#x}", triple.a, triple.b, triple.c);
        case Kind::Strategy: return spinchain::describe(strategy);
    }
    return "?";
}

PartitionSelection parse_partitions(const std::string &text, int n_sites) {
    PartitionSelection sel;
    const auto         l = lower(trim(text));
    if(l == "quarters") {
        if(n_sites % 4 != 0) throw ConfigError(fmt::format("partitions: quarters need n-sites divisible by 4, got {}", n_sites));
        sel.kind   = PartitionSelection::Kind::Quarters;
        sel.triple = contiguous_quarters(n_sites);
    } else if(l == "all") {
        sel.kind     = PartitionSelection::Kind::Strategy;
        sel.strategy = AllAssignments{};
    } else if(l == "contiguous") {
        sel.kind     = PartitionSelection::Kind::Strategy;
        sel.strategy = ContiguousBlocks{};
    } else if(l.rfind("sizes:", 0) == 0) {
        const auto parts = split(l.substr(6), ',');
        if(parts.size() != 3) throw ConfigError("partitions: sizes needs three values, e.g. sizes:3,3,3");
        FixedSizes fs{static_cast<int>(to_int("partitions", parts[0])), static_cast<int>(to_int("partitions", parts[1])),
                      static_cast<int>(to_int("partitions", parts[2]))};
        if(fs.a < 1 || fs.b < 1 || fs.c < 1 || fs.a + fs.b + fs.c > n_sites) throw ConfigError("partitions: sizes must be >= 1 and sum to <= n-sites");
        sel.kind     = PartitionSelection::Kind::Strategy;
        sel.strategy = fs;
    } else if(l.rfind("triple:", 0) == 0) {
        const auto groups = split(l.substr(7), '/');
        if(groups.size() != 3) throw ConfigError("partitions: triple needs three site groups, e.g. triple:0-4/5-9/10-14");
        try {
            sel.triple = PartitionTriple::canonical(parse_site_group(groups[0], n_sites), parse_site_group(groups[1], n_sites),
                                                    parse_site_group(groups[2], n_sites));
        } catch(const ArgumentError &e) { throw ConfigError(fmt::format("partitions: {}", e.what())); }
        sel.kind = PartitionSelection::Kind::Triple;
    } else {
        throw ConfigError(fmt::format("partitions: unknown value '{}' (quarters|all|contiguous|sizes:a,b,c|triple:A/B/C)", text));
    }
    return sel;
}

const char *command_name(Command c) noexcept {
    switch(c) {
        case Command::TmiGrid: return "tmi-grid";
        case Command::TmiVsEntropy: return "tmi-vs-entropy";
        case Command::MinmaxScan: return "minmax-scan";
        case Command::OnebodyScan: return "onebody-scan";
        case Command::Validate: return "validate";
    }
    return "?";
}

RunConfig resolve_config(const KeyValues &kv, Command cmd) {
    auto get = [&](const std::string &k) -> std::optional<std::string> {
        auto it = kv.find(k);
        if(it == kv.end()) return std::nullopt;
        return it->second;
    };
    RunConfig cfg;

    if(auto v = get("n-sites")) cfg.n_sites = static_cast<int>(to_int("n-sites", *v));
    if(get("paper-scale") && to_bool("paper-scale", *get("paper-scale"))) {
        auto v = get("paper-n-sites");
        if(!v) throw ConfigError("paper-scale: config does not define paper-n-sites");
        cfg.n_sites = static_cast<int>(to_int("paper-n-sites", *v));
    }
    if(cfg.n_sites < 4 || cfg.n_sites > kMaxSites) throw ConfigError(fmt::format("n-sites: must be in [4, {}], got {}", kMaxSites, cfg.n_sites));
    if(auto v = get("j0")) cfg.j0 = to_double("j0", *v);
    if(!(cfg.j0 > 0) || !std::isfinite(cfg.j0)) throw ConfigError("j0: must be finite and > 0");

    std::vector<std::optional<double>> alphas;
    if(auto v = get("alpha")) alphas = parse_alpha_list(*v);
    if(auto v = get("nn-limit"); v && to_bool("nn-limit", *v) && std::find(alphas.begin(), alphas.end(), std::nullopt) == alphas.end())
        alphas.push_back(std::nullopt);
    if(alphas.empty() && cmd != Command::Validate) throw ConfigError("alpha: at least one alpha (or nn-limit) is required");
    for(const auto &a : alphas)
        cfg.models.push_back(a ? ModelSpec::power_law(cfg.n_sites, cfg.j0, *a) : ModelSpec::nearest_neighbour(cfg.n_sites, cfg.j0));

    cfg.initial = cmd == Command::OnebodyScan ? InitialKind::SingleExcitation : InitialKind::Neel;
    if(auto v = get("initial-state")) {
        const auto l = lower(*v);
        if(l == "neel") cfg.initial = InitialKind::Neel;
        else if(l == "single") cfg.initial = InitialKind::SingleExcitation;
        else throw ConfigError(fmt::format("initial-state: expected neel|single, got '{}'", *v));
    }
    if(cmd == Command::OnebodyScan && cfg.initial != InitialKind::SingleExcitation) throw ConfigError("initial-state: onebody-scan needs 'single'");
    if(auto v = get("site")) cfg.site = static_cast<int>(to_int("site", *v));
    if(cfg.site >= cfg.n_sites || cfg.site < -1) throw ConfigError(fmt::format("site: {} outside [0, {})", cfg.site, cfg.n_sites));

    if(auto v = get("t-max")) cfg.t_max = to_double("t-max", *v);
    else if(cmd != Command::Validate) throw ConfigError("t-max: required");
    if(auto v = get("n-points")) cfg.n_points = static_cast<int>(to_int("n-points", *v));
    if(cmd != Command::Validate) {
        if(!(cfg.t_max > 0) || !std::isfinite(cfg.t_max)) throw ConfigError("t-max: must be finite and > 0");
        if(cfg.n_points < 2) throw ConfigError("n-points: must be >= 2");
    }
    cfg.kac = cmd == Command::TmiVsEntropy || cmd == Command::MinmaxScan;
    if(auto v = get("kac")) cfg.kac = to_bool("kac", *v);

    if(auto v = get("engine")) {
        const auto l = lower(*v);
        if(l == "auto") cfg.engine.kind = EngineKind::Auto;
        else if(l == "dense") cfg.engine.kind = EngineKind::Dense;
        else if(l == "krylov") cfg.engine.kind = EngineKind::Krylov;
        else throw ConfigError(fmt::format("engine: expected auto|dense|krylov, got '{}'", *v));
    }
    if(auto v = get("krylov-tol")) cfg.engine.krylov.tol = to_double("krylov-tol", *v);
    if(auto v = get("krylov-m-max")) cfg.engine.krylov.m_max = static_cast<int>(to_int("krylov-m-max", *v));
    if(auto v = get("dense-threshold")) cfg.engine.dense_threshold = static_cast<std::size_t>(to_int("dense-threshold", *v));
    if(!(cfg.engine.krylov.tol > 0)) throw ConfigError("krylov-tol: must be > 0");
    if(cfg.engine.krylov.m_max < 2) throw ConfigError("krylov-m-max: must be >= 2");

    const bool scan = cmd == Command::MinmaxScan || cmd == Command::OnebodyScan;
    cfg.partitions  = parse_partitions(get("partitions").value_or(scan ? "all" : "quarters"), cfg.n_sites);

    if(auto v = get("tau-threshold")) cfg.tau_threshold = to_double("tau-threshold", *v);
    if(!(cfg.tau_threshold >= 0)) throw ConfigError("tau-threshold: must be >= 0");
    if(auto v = get("export-tables")) {
        cfg.export_tables = lower(*v);
        if(cfg.export_tables != "none" && cfg.export_tables != "csv" && cfg.export_tables != "bin")
            throw ConfigError(fmt::format("export-tables: expected none|csv|bin, got '{}'", *v));
    }
    if(auto v = get("seed"))cfg.seed = static_cast<std::uint64_t>(to_int("seed", *v));
    if(auto v = get("out")) cfg.out_dir = *v;
    if(auto v = get("format")) {
        cfg.formats.clear();
        for(const auto &f : split(lower(*v), ',')) {
            if(f != "csv" && f != "json") throw ConfigError(fmt::format("format: expected csv|json, got '{}'", f));
            if(std::find(cfg.formats.begin(), cfg.formats.end(), f) == cfg.formats.end()) cfg.formats.push_back(f);
        }
        if(cfg.formats.empty()) throw ConfigError("format: empty");
    }
    return cfg;
}

std::string RunConfig::canonical() const {
    std::string alphas;
    for(const auto &m : models) alphas += (alphas.empty() ? "" : ",") + m.alpha_label();
    return fmt::format("n_sites={};j0={:.17g};alphas={};initial={};site={};t_max={:.17g};n_points={};kac={};partitions={};engine={};"
                       "dense_threshold={};krylov_tol={:.17g};krylov_m_max={};tau_threshold={:.17g};seed={};export_tables={}",
                       n_sites, j0, alphas, initial == InitialKind::Neel ? "neel" : "single", excitation_site(), t_max, n_points, kac,
                       partitions.describe(), engine_name(engine.kind), engine.dense_threshold, engine.krylov.tol, engine.krylov.m_max,
                       tau_threshold, seed, export_tables);
}

std::uint64_t RunConfig::hash() const {
    // FNV-1a
    std::uint64_t h = 1469598103934665603ull;
    for(unsigned char ch : canonical()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace spinchain::cli
