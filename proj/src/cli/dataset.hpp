#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <variant>
#include <vector>

#include "spinchain/entropy.hpp"

namespace spinchain::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, std::int64_t, std::string>;

/// A flat table plus its provenance block.
struct Dataset {
    std::string                    name;
    std::vector<std::string>       columns;
    std::vector<std::vector<Cell>> rows;
    Json                           meta = Json::object();

    void add_row(std::vector<Cell> row);
};

/// 12 significant digits, "nan"/"inf"/"-inf" for non-finite, no "-0".
[[nodiscard]] std::string format_number(double v);

/// CSV layout:
///   # meta: {...one line of JSON...}
///   col1,col2,...
///   values...
[[nodiscard]] std::string to_csv(const Dataset &d);
/// {"name": ..., "meta": {...}, "columns": [...], "data": [[...], ...]}; non-finite numbers become null.
[[nodiscard]] std::string to_json(const Dataset &d);

/// Writes <dir>/<name>.<fmt> for each requested format. Returns the paths written.
std::vector<std::filesystem::path> write_dataset(const Dataset &d, const std::filesystem::path &dir, const std::vector<std::string> &formats);

/// Entropy table dump. CSV is "mask,entropy" rows (mask as a decimal
/// integer, bit i = site i). The binary layout is little-endian:
///   char[8] "SPCTAB01", u32 n_sites, u32 reserved (0), u64 count,
///   then count records of (u32 mask, u32 pad, f64 entropy).
/// Complete tables list all 2^N masks; partial tables list their stored masks.
void write_entropy_table_csv(const SubsetEntropyTable &table, const std::filesystem::path &path);
void write_entropy_table_binary(const SubsetEntropyTable &table, const std::filesystem::path &path);

struct EntropyTableDump {
    int                                  n_sites = 0;
    std::vector<std::pair<Mask, double>> entries;
};
[[nodiscard]] EntropyTableDump read_entropy_table_binary(const std::filesystem::path &path);

} // namespace spinchain::cli
