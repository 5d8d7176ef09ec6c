#pragma once

#include <functional>
#include <string>
#include <variant>

#include "ppgof/geometry.hpp"
#include "ppgof/rng.hpp"

namespace ppgof {

// Null models and power-study alternatives. Rates are per unit area,
// lengths in window units.

struct BinomialModel {
    long n = 0;
};

struct PoissonModel {
    double lambda = 0.0;
};

struct MaternClusterModel {
    double kappa = 0.0; // parent intensity
    double radius = 0.0; // cluster radius R
    double mu = 0.0; // mean offspring per parent
};

struct ThomasModel {
    double kappa = 0.0;
    double sigma = 0.0; // offspring displacement sd
    double mu = 0.0;
};

struct StraussModel {
    double beta = 0.0; // activity
    double gamma = 0.0; // interaction in [0, 1]
    double radius = 0.0; // interaction range R
};

struct SSIModel {
    long n = 0; // points to place
    double r_inhibit = 0.0;
};

struct InhomPoissonModel {
    double rho_max = 0.0;
    std::function<double(Point)> intensity; // 0 <= intensity(p) <= rho_max
};

using ModelSpec = std::variant<BinomialModel, PoissonModel, MaternClusterModel, ThomasModel,
                               StraussModel, SSIModel, InhomPoissonModel>;

// throws InvalidSpec on parameter violations
void validate(const ModelSpec& spec);

std::string model_name(const ModelSpec& spec);

// One realization. Pure in (spec, window, key): bit-identical across runs
// and thread counts.
PointPattern simulate(const ModelSpec& spec, const Window& window, RngSeed key);

struct ConditionedModel {
    ModelSpec spec;
    bool conditioned = false; // false means the input was not Poisson (no-op)
};

// CSR made simple: replaces a Poisson null by the binomial process with the
// observed point count. Non-Poisson specs pass through with a warning flag.
ConditionedModel condition_on_count(const ModelSpec& spec, long observed_n);

} // namespace ppgof
