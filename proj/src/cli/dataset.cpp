#include "dataset.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fmt/format.h>
#include <fstream>

namespace spinchain::cli {

namespace {

constexpr char kTableMagic[8] = {'S', 'P', 'C', 'T', 'A', 'B', '0', '1'};

std::string csv_field(const std::string &s) {
    if(s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for(char ch : s) {
        if(ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string cell_text(const Cell &c, bool json) {
    return std::visit(
        [json](const auto &v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr(std::is_same_v<T, double>) {
                if(json && !std::isfinite(v)) return "null";
                return format_number(v);
            } else if constexpr(std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else {
                return json ? Json(v).dump() : csv_field(v);
            }
        },
        c);
}

void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if(!f) throw Error(fmt::format("cannot write '{}'", path.string()));
    f << text;
    if(!f) throw Error(fmt::format("write failed for '{}'", path.string()));
}

template <class T> void put_le(std::ostream &os, T v) {
    for(std::size_t i = 0; i < sizeof(T); ++i) os.put(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xffu));
}

template <class T> T get_le(std::istream &is) {
    std::uint64_t v = 0;
    for(std::size_t i = 0; i < sizeof(T); ++i) {
        const int ch = is.get();
        if(ch == EOF) throw Error("truncated entropy table file");
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(ch)) << (8 * i);
    }
    return static_cast<T>(v);
}

std::vector<std::pair<Mask, double>> table_entries(const SubsetEntropyTable &table) {
    std::vector<std::pair<Mask, double>> out;
    if(table.complete()) {
        const auto s = table.entries();
        out.reserve(s.size());
        for(std::size_t m = 0; m < s.size(); ++m) out.emplace_back(static_cast<Mask>(m), s[m]);
    } else {
        const auto p = table.partial_entries();
        out.assign(p.begin(), p.end());
    }
    return out;
}

} // namespace

void Dataset::add_row(std::vector<Cell> row) {
    if(row.size() != columns.size()) throw Error(fmt::format("dataset '{}': row has {} cells, expected {}", name, row.size(), columns.size()));
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if(std::isnan(v)) return "nan";
    if(std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if(v == 0.0) return "0";
    return fmt::format("{:.12g}", v);
}

std::string to_csv(const Dataset &d) {
    std::string out = "# meta: " + d.meta.dump() + "\n";
    for(std::size_t i = 0; i < d.columns.size(); ++i) out += (i ? "," : "") + csv_field(d.columns[i]);
    out += '\n';
    for(const auto &row : d.rows) {
        for(std::size_t i = 0; i < row.size(); ++i) {
            if(i) out += ',';
            out += cell_text(row[i], false);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Dataset &d) {
    std::string out = "{\n  \"name\": " + Json(d.name).dump() + ",\n  \"meta\": " + d.meta.dump() + ",\n  \"columns\": " + Json(d.columns).dump() +
                      ",\n  \"data\": [";
    for(std::size_t r = 0; r < d.rows.size(); ++r) {
        out += r ? ",\n    [" : "\n    [";
        for(std::size_t i = 0; i < d.rows[r].size(); ++i) {
            if(i) out += ", ";
            out += cell_text(d.rows[r][i], true);
        }
        out += ']';
    }
    out += d.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::vector<std::filesystem::path> write_dataset(const Dataset &d, const std::filesystem::path &dir, const std::vector<std::string> &formats) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    for(const auto &f : formats) {
        auto path = dir / (d.name + "." + f);
        if(f == "csv") write_file(path, to_csv(d));
        else if(f == "json") write_file(path, to_json(d));
        else throw ConfigError(fmt::format("unknown output format '{}'", f));
        written.push_back(std::move(path));
    }
    return written;
}

void write_entropy_table_csv(const SubsetEntropyTable &table, const std::filesystem::path &path) {
    std::string out = "mask,entropy\n";
    for(const auto &[m, s] : table_entries(table)) out += fmt::format("{},{}\n", m, format_number(s));
    write_file(path, out);
}

void write_entropy_table_binary(const SubsetEntropyTable &table, const std::filesystem::path &path) {
    const auto    entries = table_entries(table);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if(!f) throw Error(fmt::format("cannot write '{}'", path.string()));
    f.write(kTableMagic, sizeof kTableMagic);
    put_le<std::uint32_t>(f, static_cast<std::uint32_t>(table.n_sites()));
    put_le<std::uint32_t>(f, 0);
    put_le<std::uint64_t>(f, entries.size());
    for(const auto &[m, s] : entries) {
        put_le<std::uint32_t>(f, m);
        put_le<std::uint32_t>(f, 0);
        put_le<std::uint64_t>(f, std::bit_cast<std::uint64_t>(s));
    }
    if(!f) throw Error(fmt::format("write failed for '{}'", path.string()));
}

EntropyTableDump read_entropy_table_binary(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if(!f) throw Error(fmt::format("cannot open '{}'", path.string()));
    char magic[8];
    if(!f.read(magic, sizeof magic) || std::memcmp(magic, kTableMagic, sizeof magic) != 0) throw Error("not an entropy table file");
    EntropyTableDump d;
    d.n_sites = static_cast<int>(get_le<std::uint32_t>(f));
    (void)get_le<std::uint32_t>(f);
    const auto count = get_le<std::uint64_t>(f);
    d.entries.reserve(count);
    for(std::uint64_t i = 0; i < count; ++i) {
        const Mask m = get_le<std::uint32_t>(f);
        (void)get_le<std::uint32_t>(f);
        d.entries.emplace_back(m, std::bit_cast<double>(get_le<std::uint64_t>(f)));
    }
    return d;
}

} // namespace spinchain::cli
