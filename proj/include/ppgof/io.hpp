#pragma once

#include <optional>
#include <string>

#include "ppgof/geometry.hpp"
#include "ppgof/persistence.hpp"
#include "ppgof/procedures.hpp"

namespace ppgof {

// Pattern CSV: header `x,y`, one point per line, `#` comments; the window
// may travel in a sidecar comment `# window x_min x_max y_min y_max`.
void write_pattern_csv(const std::string& path, const PointPattern& p);

struct LoadedPattern {
    std::vector<Point> points;
    std::optional<Window> window; // present when the sidecar line was found
};

LoadedPattern read_pattern_csv(const std::string& path);

// Curve CSV: columns r,value,defined
void write_curve_csv(const std::string& path, const SummaryCurve& curve);

// Persistence diagram CSV: columns dim,birth,death (death `inf` if unpaired)
void write_diagram_csv(const std::string& path, const PersistenceDiagram& pd);

// Envelope CSV: columns r,lo,hi,obs,mean
void write_envelope_csv(const std::string& path, const Envelope& env);

// Report JSON; `timestamp` is the only run-dependent field
std::string report_to_json(const TestReport& rep, bool with_timestamp = true);
void write_report_json(const std::string& path, const TestReport& rep);

// deterministic shortest round-trip formatting used in all CSV output
std::string format_double(double v);

} // namespace ppgof
