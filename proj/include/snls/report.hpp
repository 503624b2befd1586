#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>

#include "snls/config.hpp"
#include "snls/coupling.hpp"
#include "snls/estimators.hpp"

namespace snls {

// Column table for CSV output. Columns may have different lengths; short
// columns leave trailing cells empty. The first line carries a schema
// tag so downstream plotters can detect format drift.
struct Table {
    std::string schema;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;
};

void write_csv(const std::filesystem::path& path, const Table& table);
void write_json_file(const std::filesystem::path& path, const nlohmann::ordered_json& j);

// Run manifest: config echo plus every derived quantity needed to
// recompute the outputs (resolved kappa, sigma_d, HS norms, wraparound
// horizon bound, code version). `wall_clock_s` is provenance, not part
// of the reproducibility contract.
nlohmann::ordered_json manifest_json(const RunConfig& cfg, double kappa_resolved,
                                     const Grid& grid, double wall_clock_s,
                                     const std::vector<std::string>& outputs);

Table trajectory_table(const TrajectoryRecord& rec);
Table coupling_table(const CouplingRecord& rec);

nlohmann::ordered_json interval_json(std::size_t events, std::size_t trials);
nlohmann::ordered_json prob_rows_json(std::span<const ProbRow> rows);
nlohmann::ordered_json inequality_report_json(const struct InequalityReport& rep);

}  // namespace snls
