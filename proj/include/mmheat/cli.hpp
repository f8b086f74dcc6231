#pragma once

#include "mmheat/kernel.hpp"
#include "mmheat/profiles.hpp"
#include "mmheat/space.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmheat::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;

// Named analytic data family, sampled as a function of d(x, x0).
struct DataSpec {
    enum class Family { Constant, GaussianBump, PowerDecay };
    Family family = Family::Constant;
    double value = 0.0;      // constant
    double amplitude = 0.0;  // gaussian-bump: amplitude exp(-d^2 / width^2)
    double width = 1.0;
    double delta = 0.0;  // power-decay: delta / (1 + d^lambda)
    double lambda = 0.0;

    GridFunction sample(const MetricMeasureGrid& space) const;
    bool nonzero() const;
};

struct TimeSpec {
    double t_max = 1.0;
    int nodes = 101;
};

struct SolverSpec {
    double tol = 1e-8;
    int max_iter = 200;
    double blowup_cap = 0.0;
};

struct HorizonSpec {
    double ode_step = 1e-3;
    double t_max = 1e3;
    double blowup_cap = 1e6;
};

struct WitnessSpec {
    double a1 = 1.0;
    double a2 = 2.0;
    double t_max = 100.0;
    int t_count = 16;
    double t_min_ratio = 1e-2;
};

struct HarnackSpec {
    double a1 = 1.0;
    double a2 = 2.0;
    std::vector<double> t{1.0};
    int samples = 10;
};

struct IntegralsSpec {
    double lambda1 = 0.5;
    double lambda2 = 1.0;
    int samples = 16;
    // Moment check, run when lambda is given.
    std::optional<double> moment_lambda;
    std::vector<double> moment_t{0.05, 0.5, 5.0};
};

struct HolderSpec {
    double theta1 = 1.0;
    double theta2 = 1.0;
    double max_distance = 1.0;
};

struct SmallDataSpec {
    double lambda = 0.0;
    double delta_fraction = 0.5;
};

struct ExperimentConfig {
    int version = kConfigVersion;
    std::shared_ptr<const MetricMeasureGrid> space;
    // Human-readable summary of how the space was built.
    std::string space_description;
    HeatKernel kernel = HeatKernel::gauss_weierstrass(1);
    std::pair<Profile, Profile> profiles = natural_profiles(HeatKernel::gauss_weierstrass(1));
    double p = 2.0;
    DataSpec phi;
    DataSpec f;
    TimeSpec time;
    SolverSpec solver;
    HorizonSpec horizon;
    WitnessSpec witness;
    std::vector<double> scan_p;
    HarnackSpec harnack;
    IntegralsSpec integrals;
    HolderSpec holder;
    std::optional<SmallDataSpec> small_data;
};

// Relative paths inside the config resolve against base_dir.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

struct RunOptions {
    std::string subcommand;
    std::filesystem::path out_dir = ".";
    int threads = 0;
    std::uint64_t seed = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

// Runs one subcommand and writes its CSV files into options.out_dir.
int run(const ExperimentConfig& config, const RunOptions& options, std::ostream& log);

// argv entry point used by the mmheat binary.
int main_entry(int argc, char** argv);

}  // namespace mmheat::cli
