#include "mmheat/cli.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mmheat::cli {

using nlohmann::json;

namespace {

// Object reader that rejects keys nobody asked for.
class Obj {
public:
    Obj(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
    }
    Obj(const Obj&) = delete;

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }
    const json& at(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(where_ + ": missing key '" + key + "'");
        return j_.at(key);
    }
    double num(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(where_ + "." + key + ": must be finite");
        return d;
    }
    double num(const std::string& key, double fallback) { return has(key) ? num(key) : fallback; }
    int integer(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_number_integer()) throw ConfigError(where_ + "." + key + ": expected an integer");
        return v.get<int>();
    }
    int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : fallback; }
    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const auto& v = at(key);
        if (!v.is_boolean()) throw ConfigError(where_ + "." + key + ": expected true or false");
        return v.get<bool>();
    }
    std::string str(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }
    std::vector<double> nums(const std::string& key) {
        const auto& v = at(key);
        if (!v.is_array() || v.empty()) throw ConfigError(where_ + "." + key + ": expected a non-empty array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError(where_ + "." + key + ": expected numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    std::string path(const std::string& key) const { return where_ + "." + key; }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

Profile parse_profile(const json& j, const std::string& where) {
    Obj o(j, where);
    const auto type = o.str("type");
    Profile out = Profile::cauchy(1.0, 1.0);
    if (type == "gauss") {
        out = Profile::gauss(o.num("C"), o.num("c"), o.num("gamma"));
    } else if (type == "cauchy") {
        out = Profile::cauchy(o.num("C"), o.num("gamma"));
    } else if (type == "table") {
        out = Profile::table(o.nums("s"), o.nums("values"));
    } else {
        throw ConfigError(where + ".type: unknown profile type '" + type + "'");
    }
    o.finish();
    return out;
}

HeatKernel parse_kernel(const json& j) {
    Obj o(j, "kernel");
    const auto family = o.str("family");
    std::optional<HeatKernel> k;
    if (family == "gauss-weierstrass") {
        k = HeatKernel::gauss_weierstrass(o.integer("dimension", 1));
    } else if (family == "cauchy-poisson") {
        k = HeatKernel::cauchy_poisson(o.integer("dimension", 1));
    } else if (family == "profile") {
        k = HeatKernel::profile(o.num("alpha"), o.num("beta"), parse_profile(o.at("profile"), "kernel.profile"),
                                o.boolean("conservative", false));
    } else {
        throw ConfigError("kernel.family: unknown family '" + family + "'");
    }
    o.finish();
    return *k;
}

DataSpec parse_data(const json& j, const std::string& where) {
    Obj o(j, where);
    DataSpec d;
    const auto family = o.str("family");
    if (family == "constant") {
        d.family = DataSpec::Family::Constant;
        d.value = o.num("value");
        require(d.value >= 0.0, where + ".value: must be nonnegative");
    } else if (family == "gaussian-bump") {
        d.family = DataSpec::Family::GaussianBump;
        d.amplitude = o.num("amplitude");
        d.width = o.num("width", 1.0);
        require(d.amplitude >= 0.0 && d.width > 0.0, where + ": amplitude >= 0 and width > 0 required");
    } else if (family == "power-decay") {
        d.family = DataSpec::Family::PowerDecay;
        d.delta = o.num("delta");
        d.lambda = o.num("lambda");
        require(d.delta >= 0.0 && d.lambda > 0.0, where + ": delta >= 0 and lambda > 0 required");
    } else {
        throw ConfigError(where + ".family: unknown data family '" + family + "'");
    }
    o.finish();
    return d;
}

std::ifstream open_input(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open " + p.string());
    return in;
}

}  // namespace

GridFunction DataSpec::sample(const MetricMeasureGrid& space) const {
    GridFunction g(space.size());
    for (int i = 0; i < space.size(); ++i) {
        const double d = space.dist(i, space.x0());
        switch (family) {
            case Family::Constant:
                g[i] = value;
                break;
            case Family::GaussianBump:
                g[i] = amplitude * std::exp(-(d * d) / (width * width));
                break;
            case Family::PowerDecay:
                g[i] = delta / (1.0 + std::pow(d, lambda));
                break;
        }
    }
    return g;
}

bool DataSpec::nonzero() const {
    switch (family) {
        case Family::Constant:
            return value > 0.0;
        case Family::GaussianBump:
            return amplitude > 0.0;
        case Family::PowerDecay:
            return delta > 0.0;
    }
    return false;
}

ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    try {
        Obj o(root, "config");
        cfg.version = o.integer("version");
        require(cfg.version == kConfigVersion, "config.version: unsupported version " + std::to_string(cfg.version));

        cfg.kernel = parse_kernel(o.at("kernel"));
        if (o.has("time")) {
            Obj t(o.at("time"), "time");
            cfg.time.t_max = t.num("t_max", cfg.time.t_max);
            cfg.time.nodes = t.integer("nodes", cfg.time.nodes);
            t.finish();
            require(cfg.time.t_max > 0.0 && cfg.time.nodes >= 2, "time: t_max > 0 and nodes >= 2 required");
        }

        {
            Obj s(o.at("space"), "space");
            const auto type = s.str("type");
            if (type == "lattice") {
                const int dim = s.integer("dim");
                const int ppa = s.integer("points_per_axis");
                // Default half-width: twelve diffusion lengths at the final time.
                const double radius =
                    s.num("radius", 12.0 * std::pow(std::max(cfg.time.t_max, 1.0), 1.0 / cfg.kernel.beta()));
                cfg.space = std::make_shared<const MetricMeasureGrid>(build_lattice_space(dim, radius, ppa));
                cfg.space_description = "lattice dim=" + std::to_string(dim) + " ppa=" + std::to_string(ppa);
            } else if (type == "csv") {
                auto resolve = [&](const std::string& p) {
                    std::filesystem::path path(p);
                    return path.is_relative() ? base_dir / path : path;
                };
                const auto grid_path = resolve(s.str("grid"));
                const double alpha = s.num("alpha");
                const int x0 = s.integer("x0", 0);
                auto grid_in = open_input(grid_path);
                if (s.has("distances")) {
                    auto dist_in = open_input(resolve(s.str("distances")));
                    cfg.space = std::make_shared<const MetricMeasureGrid>(read_point_cloud(grid_in, dist_in, alpha, x0));
                } else {
                    cfg.space = std::make_shared<const MetricMeasureGrid>(read_grid_csv(grid_in, alpha, x0));
                }
                cfg.space_description = "csv " + grid_path.string();
            } else {
                throw ConfigError("space.type: unknown space type '" + type + "'");
            }
            s.finish();
        }

        cfg.profiles = natural_profiles(cfg.kernel);
        if (o.has("profiles")) {
            Obj pr(o.at("profiles"), "profiles");
            cfg.profiles = {parse_profile(pr.at("phi1"), "profiles.phi1"), parse_profile(pr.at("phi2"), "profiles.phi2")};
            pr.finish();
        }

        {
            Obj pb(o.at("problem"), "problem");
            cfg.p = pb.num("p");
            require(cfg.p > 1.0, "problem.p: must exceed 1");
            cfg.phi = parse_data(pb.at("phi"), "problem.phi");
            cfg.f = parse_data(pb.at("f"), "problem.f");
            pb.finish();
        }

        if (o.has("solver")) {
            Obj s(o.at("solver"), "solver");
            cfg.solver.tol = s.num("tol", cfg.solver.tol);
            cfg.solver.max_iter = s.integer("max_iter", cfg.solver.max_iter);
            cfg.solver.blowup_cap = s.num("blowup_cap", cfg.solver.blowup_cap);
            s.finish();
            require(cfg.solver.tol > 0.0 && cfg.solver.max_iter >= 1, "solver: tol > 0 and max_iter >= 1 required");
        }
        if (o.has("horizon")) {
            Obj h(o.at("horizon"), "horizon");
            cfg.horizon.ode_step = h.num("ode_step", cfg.horizon.ode_step);
            cfg.horizon.t_max = h.num("t_max", cfg.horizon.t_max);
            cfg.horizon.blowup_cap = h.num("blowup_cap", cfg.horizon.blowup_cap);
            h.finish();
            require(cfg.horizon.ode_step > 0.0 && cfg.horizon.t_max > 0.0 && cfg.horizon.blowup_cap > 1.0,
                    "horizon: ode_step > 0, t_max > 0 and blowup_cap > 1 required");
        }
        if (o.has("witness")) {
            Obj w(o.at("witness"), "witness");
            cfg.witness.a1 = w.num("a1", cfg.witness.a1);
            cfg.witness.a2 = w.num("a2", cfg.witness.a2);
            cfg.witness.t_max = w.num("t_max", cfg.witness.t_max);
            cfg.witness.t_count = w.integer("t_count", cfg.witness.t_count);
            cfg.witness.t_min_ratio = w.num("t_min_ratio", cfg.witness.t_min_ratio);
            w.finish();
            require(cfg.witness.t_max > 0.0 && cfg.witness.t_count >= 3, "witness: t_max > 0 and t_count >= 3 required");
        }
        if (o.has("scan")) {
            Obj sc(o.at("scan"), "scan");
            cfg.scan_p = sc.nums("p_values");
            sc.finish();
            for (double p : cfg.scan_p) require(p > 1.0, "scan.p_values: every p must exceed 1");
        }
        if (o.has("harnack")) {
            Obj h(o.at("harnack"), "harnack");
            cfg.harnack.a1 = h.num("a1", cfg.harnack.a1);
            cfg.harnack.a2 = h.num("a2", cfg.harnack.a2);
            if (h.has("t")) cfg.harnack.t = h.nums("t");
            cfg.harnack.samples = h.integer("samples", cfg.harnack.samples);
            h.finish();
            require(cfg.harnack.samples >= 1, "harnack.samples: must be positive");
            for (double t : cfg.harnack.t) require(t > 0.0, "harnack.t: times must be positive");
        }
        if (o.has("integrals")) {
            Obj in(o.at("integrals"), "integrals");
            cfg.integrals.lambda1 = in.num("lambda1", cfg.integrals.lambda1);
            cfg.integrals.lambda2 = in.num("lambda2", cfg.integrals.lambda2);
            cfg.integrals.samples = in.integer("samples", cfg.integrals.samples);
            if (in.has("moment_lambda")) cfg.integrals.moment_lambda = in.num("moment_lambda");
            if (in.has("moment_t")) cfg.integrals.moment_t = in.nums("moment_t");
            in.finish();
            require(cfg.integrals.samples >= 1, "integrals.samples: must be positive");
        }
        if (o.has("holder")) {
            Obj h(o.at("holder"), "holder");
            cfg.holder.theta1 = h.num("theta1", cfg.holder.theta1);
            cfg.holder.theta2 = h.num("theta2", cfg.holder.theta2);
            cfg.holder.max_distance = h.num("max_distance", cfg.holder.max_distance);
            h.finish();
            require(cfg.holder.theta1 > 0.0 && cfg.holder.theta1 <= 1.0 && cfg.holder.theta2 > 0.0 &&
                        cfg.holder.theta2 <= 1.0,
                    "holder: theta1, theta2 must lie in (0, 1]");
        }
        if (o.has("small_data")) {
            Obj sd(o.at("small_data"), "small_data");
            SmallDataSpec s;
            s.lambda = sd.num("lambda");
            s.delta_fraction = sd.num("delta_fraction", s.delta_fraction);
            sd.finish();
            require(s.delta_fraction > 0.0 && s.delta_fraction < 1.0, "small_data.delta_fraction: must lie in (0, 1)");
            cfg.small_data = s;
        }
        o.finish();
    } catch (const ConfigError&) {
        throw;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        // Constructors of the numerical types validate their own inputs.
        throw ConfigError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

}  // namespace mmheat::cli
