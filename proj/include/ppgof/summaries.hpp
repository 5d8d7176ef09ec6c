#pragma once

#include <string>

#include "ppgof/classical.hpp"
#include "ppgof/geometry.hpp"
#include "ppgof/persistence.hpp"

namespace ppgof {

// Functional summary statistics selectable by name in tests and the CLI.
enum class SummaryKind { K, L, Pcf, F, G, GStar, J, Betti0, Betti1, Apf0, Apf1, Nd0, Euler };

std::string summary_name(SummaryKind kind);
SummaryKind summary_from_name(const std::string& name);

struct SummaryChoice {
    SummaryKind kind = SummaryKind::L;
    EdgeCorrection correction = EdgeCorrection::Translation;
    double bandwidth = 0.0; // pcf only; 0 = intensity rule
    int test_grid_side = 128; // F and J only
};

// evaluate the chosen summary on the given grid
SummaryCurve evaluate_summary(const SummaryChoice& choice, const PointPattern& p,
                              const EvalGrid& grid);

} // namespace ppgof
