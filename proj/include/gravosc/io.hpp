#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gravosc/entanglement.hpp"
#include "gravosc/feasibility.hpp"
#include "gravosc/observables.hpp"

namespace gravosc {

// 17 significant digits: round-trips any double exactly, '.' separator.
std::string format_full(double x);

const char* status_name(ConstraintStatus s);

// All CSV writers: comma-separated, one header row, LF endings.
std::string curve_csv(const std::vector<CurvePoint>& rows);
std::string events_csv(const std::vector<EventSample>& rows);
std::string entanglement_csv(const std::vector<EntanglementPoint>& rows);
std::string scan_csv(const ScanGrid& grid, const std::vector<ScanRow>& rows);
std::string scan_json(const ScanGrid& grid, const std::vector<ScanRow>& rows);

std::string report_json(const FeasibilityReport& r);
std::string report_text(const FeasibilityReport& r);

struct RunManifest {
    std::string config_path;
    std::string command;
    std::vector<std::string> outputs;
    bool seeded = false;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string constants_tag;
    double duration_s = 0.0;
};

std::string manifest_json(const RunManifest& m);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace gravosc
