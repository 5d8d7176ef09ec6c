#include "ppgof/summaries.hpp"

#include "ppgof/errors.hpp"

namespace ppgof {

std::string summary_name(SummaryKind kind) {
    switch (kind) {
        case SummaryKind::K: return "K";
        case SummaryKind::L: return "L";
        case SummaryKind::Pcf: return "pcf";
        case SummaryKind::F: return "F";
        case SummaryKind::G: return "G";
        case SummaryKind::GStar: return "Gstar";
        case SummaryKind::J: return "J";
        case SummaryKind::Betti0: return "betti0";
        case SummaryKind::Betti1: return "betti1";
        case SummaryKind::Apf0: return "apf0";
        case SummaryKind::Apf1: return "apf1";
        case SummaryKind::Nd0: return "nd0";
        case SummaryKind::Euler: return "euler";
    }
    return "?";
}

SummaryKind summary_from_name(const std::string& name) {
    for (SummaryKind k : {SummaryKind::K, SummaryKind::L, SummaryKind::Pcf, SummaryKind::F,
                          SummaryKind::G, SummaryKind::GStar, SummaryKind::J, SummaryKind::Betti0,
                          SummaryKind::Betti1, SummaryKind::Apf0, SummaryKind::Apf1,
                          SummaryKind::Nd0, SummaryKind::Euler})
        if (summary_name(k) == name) return k;
    throw InvalidArgs("unknown summary statistic: " + name);
}

SummaryCurve evaluate_summary(const SummaryChoice& choice, const PointPattern& p,
                              const EvalGrid& grid) {
    switch (choice.kind) {
        case SummaryKind::K: return estimate_K(p, grid, choice.correction);
        case SummaryKind::L: return estimate_L(p, grid, choice.correction);
        case SummaryKind::Pcf: return estimate_pcf(p, grid, choice.correction, choice.bandwidth);
        case SummaryKind::F: return estimate_F(p, grid, choice.test_grid_side);
        case SummaryKind::G: return estimate_G(p, grid);
        case SummaryKind::GStar: return estimate_G_star(p, grid);
        case SummaryKind::J: return estimate_J(p, grid, choice.test_grid_side);
        default: break;
    }
    // TDA summaries share the filtration and diagram
    const Filtration f = alpha_filtration(p);
    if (choice.kind == SummaryKind::Euler) return euler_curve(f, grid);
    const PersistenceDiagram pd = persistence(f);
    switch (choice.kind) {
        case SummaryKind::Betti0: return betti_curve(pd, grid, 0);
        case SummaryKind::Betti1: return betti_curve(pd, grid, 1);
        case SummaryKind::Apf0: return apf(pd, grid, 0);
        case SummaryKind::Apf1: return apf(pd, grid, 1);
        case SummaryKind::Nd0: return nd0(pd, grid);
        default: break;
    }
    throw InvalidArgs("unhandled summary kind");
}

} // namespace ppgof
