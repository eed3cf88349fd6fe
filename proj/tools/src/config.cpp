#include "dsdetect/app/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <json.hpp>

namespace dsdetect::app {

using nlohmann::json;

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::Analyze:
            return "analyze";
        case Mode::Asymptotic:
            return "asymptotic";
        case Mode::MonteCarlo:
            return "montecarlo";
        case Mode::Converge:
            return "converge";
        case Mode::SweepFig1a:
            return "sweep-fig1a";
        case Mode::SweepFig1b:
            return "sweep-fig1b";
    }
    return "unknown";
}

std::optional<Mode> parse_mode(std::string_view name) noexcept {
    for (Mode m : {Mode::Analyze, Mode::Asymptotic, Mode::MonteCarlo, Mode::Converge,
                   Mode::SweepFig1a, Mode::SweepFig1b}) {
        if (to_string(m) == name) return m;
    }
    return std::nullopt;
}

bool is_grid_mode(Mode mode) noexcept {
    return mode == Mode::Converge || mode == Mode::SweepFig1a || mode == Mode::SweepFig1b;
}

namespace {

std::string join_path(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

json parse_json(std::string_view text) {
    // Tracks the keys seen in every open object so duplicates are caught
    // before the DOM silently keeps the last value.
    std::vector<std::set<std::string>> seen;
    std::vector<std::string> path;
    std::string duplicate;

    json::parser_callback_t cb = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
            case json::parse_event_t::object_start:
                seen.emplace_back();
                path.emplace_back();
                break;
            case json::parse_event_t::key: {
                const auto key = parsed.get<std::string>();
                if (!seen.back().insert(key).second && duplicate.empty()) {
                    std::string full;
                    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                        full = join_path(full, path[i]);
                    }
                    duplicate = join_path(full, key);
                }
                path.back() = key;
                break;
            }
            case json::parse_event_t::object_end:
                seen.pop_back();
                path.pop_back();
                break;
            default:
                break;
        }
        return true;
    };

    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), cb);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + upto, '\n');
        throw ParseError("line " + std::to_string(line), e.what());
    }
    if (!duplicate.empty()) throw ParseError(duplicate, "duplicate key");
    return doc;
}

class Object {
public:
    Object(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ParseError(label(), "expected an object");
    }

    void allow_only(std::initializer_list<std::string_view> keys) const {
        for (const auto& [key, value] : j_.items()) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                throw ParseError(join_path(path_, key), "unknown key");
            }
        }
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& at(const std::string& key) const { return j_.at(key); }

    std::string field(const std::string& key) const { return join_path(path_, key); }

    std::int64_t integer(const std::string& key) const {
        const json& v = j_.at(key);
        if (!v.is_number_integer()) throw ParseError(field(key), "expected an integer");
        return v.get<std::int64_t>();
    }

    std::uint64_t unsigned_integer(const std::string& key) const {
        const json& v = j_.at(key);
        if (v.is_number_unsigned()) return v.get<std::uint64_t>();
        throw ParseError(field(key), "expected a non-negative integer");
    }

    double number(const std::string& key) const {
        const json& v = j_.at(key);
        if (!v.is_number()) throw ParseError(field(key), "expected a number");
        return v.get<double>();
    }

    std::string string(const std::string& key) const {
        const json& v = j_.at(key);
        if (!v.is_string()) throw ParseError(field(key), "expected a string");
        return v.get<std::string>();
    }

private:
    std::string label() const { return path_.empty() ? "document" : path_; }

    const json& j_;
    std::string path_;
};

template <typename T, typename Get>
std::vector<T> ascending_list(const Object& obj, const std::string& key, Get get) {
    const json& arr = obj.at(key);
    const std::string field = obj.field(key);
    if (!arr.is_array() || arr.empty()) throw ParseError(field, "expected a non-empty array");
    std::vector<T> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        out.push_back(get(arr[i], field + "[" + std::to_string(i) + "]"));
        if (i > 0 && !(out[i] > out[i - 1])) {
            throw ParseError(field, "values must be strictly ascending");
        }
    }
    return out;
}

void parse_params(const Object& p, ExperimentConfig& cfg) {
    p.allow_only({"N", "alpha", "Ns", "P", "m", "sigma_v2", "sigma_w2", "p0"});
    auto& spec = cfg.params;
    if (p.has("N")) spec.N = p.integer("N");
    if (p.has("alpha")) spec.alpha = p.number("alpha");
    if (p.has("Ns")) spec.Ns = p.integer("Ns");
    if (spec.alpha && spec.Ns) throw ParseError(p.field("Ns"), "give either alpha or Ns, not both");
    if (p.has("P")) spec.P = p.number("P");
    if (p.has("m")) spec.m = p.number("m");
    if (p.has("sigma_v2")) spec.sigma_v2 = p.number("sigma_v2");
    if (p.has("sigma_w2")) spec.sigma_w2 = p.number("sigma_w2");
    if (p.has("p0")) spec.p0 = p.number("p0");

    if (is_grid_mode(cfg.mode) && (spec.N || spec.alpha || spec.Ns)) {
        throw ParseError(p.field(spec.N ? "N" : spec.alpha ? "alpha" : "Ns"),
                         "grid modes take N and alpha from \"grid\"");
    }
}

void parse_detector(const Object& d, ExperimentConfig& cfg) {
    d.allow_only({"criterion", "alpha_fa", "tau_prime"});
    const std::string criterion = d.has("criterion") ? d.string("criterion") : "bayes";
    if (criterion == "bayes") {
        d.allow_only({"criterion"});
        cfg.detector = DetectorSpec::bayes();
    } else if (criterion == "np") {
        d.allow_only({"criterion", "alpha_fa"});
        if (!d.has("alpha_fa")) throw ParseError(d.field("alpha_fa"), "required for criterion np");
        try {
            cfg.detector = DetectorSpec::neyman_pearson(d.number("alpha_fa"));
        } catch (const DomainError& e) {
            throw ParseError(d.field("alpha_fa"), e.what());
        }
    } else if (criterion == "fixed") {
        d.allow_only({"criterion", "tau_prime"});
        if (!d.has("tau_prime")) {
            throw ParseError(d.field("tau_prime"), "required for criterion fixed");
        }
        cfg.detector = DetectorSpec::fixed(d.number("tau_prime"));
    } else {
        throw ParseError(d.field("criterion"), "expected \"bayes\", \"np\" or \"fixed\"");
    }
}

void parse_grid(const Object& g, ExperimentConfig& cfg) {
    g.allow_only({"N", "alpha", "replicates"});
    if (g.has("N")) {
        cfg.grid.N = ascending_list<std::int64_t>(g, "N", [](const json& v, const std::string& f) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
                throw ParseError(f, "expected a positive integer");
            }
            return v.get<std::int64_t>();
        });
    }
    if (g.has("alpha")) {
        cfg.grid.alpha = ascending_list<double>(g, "alpha", [](const json& v, const std::string& f) {
            if (!v.is_number() || !(v.get<double>() > 0.0) || !std::isfinite(v.get<double>())) {
                throw ParseError(f, "expected a positive number");
            }
            return v.get<double>();
        });
    }
    if (g.has("replicates")) {
        cfg.grid.replicates = g.unsigned_integer("replicates");
        if (cfg.grid.replicates < 1) throw ParseError(g.field("replicates"), "must be >= 1");
    }
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    const json doc = parse_json(text);
    const Object root(doc, "");
    root.allow_only({"schema", "mode", "params", "detector", "mc", "grid", "seed"});

    ExperimentConfig cfg;
    if (!root.has("schema")) throw ParseError("schema", "required");
    if (root.integer("schema") != kSchemaVersion) {
        throw ParseError("schema", "unsupported version (expected " +
                                       std::to_string(kSchemaVersion) + ")");
    }
    if (!root.has("mode")) throw ParseError("mode", "required");
    const auto mode = parse_mode(root.string("mode"));
    if (!mode) throw ParseError("mode", "unknown mode '" + root.string("mode") + "'");
    cfg.mode = *mode;

    if (root.has("params")) parse_params(Object(root.at("params"), "params"), cfg);
    if (root.has("detector")) parse_detector(Object(root.at("detector"), "detector"), cfg);

    std::optional<std::uint64_t> seed;
    if (root.has("seed")) seed = root.unsigned_integer("seed");
    if (root.has("mc")) {
        const Object mc(root.at("mc"), "mc");
        mc.allow_only({"trials", "seed"});
        if (mc.has("trials")) {
            cfg.trials = mc.unsigned_integer("trials");
            if (cfg.trials < 1) throw ParseError(mc.field("trials"), "must be >= 1");
        }
        if (mc.has("seed")) {
            const auto mc_seed = mc.unsigned_integer("seed");
            if (seed && *seed != mc_seed) throw ParseError(mc.field("seed"), "conflicts with seed");
            seed = mc_seed;
        }
    }
    if (seed) cfg.seed = *seed;

    if (root.has("grid")) {
        if (!is_grid_mode(cfg.mode)) throw ParseError("grid", "only valid for grid modes");
        parse_grid(Object(root.at("grid"), "grid"), cfg);
    }
    if (cfg.mode == Mode::Converge) {
        if (cfg.grid.N.empty()) cfg.grid.N = {8, 32, 128, 512};
        if (cfg.grid.alpha.empty()) cfg.grid.alpha = {1.0};
        if (!root.has("grid") || !root.at("grid").contains("replicates")) cfg.grid.replicates = 20;
    } else if (is_grid_mode(cfg.mode)) {
        if (cfg.grid.N.empty()) cfg.grid.N = {8, 16, 32, 64, 128};
        if (cfg.grid.alpha.empty()) cfg.grid.alpha = {0.5, 1.0, 2.0, 4.0};
    }
    return cfg;
}

namespace {

SystemParams base_params(const ParamsSpec& spec) {
    SystemParams p;
    p.P = spec.P;
    p.m = spec.m;
    p.sigma_v2 = spec.sigma_v2;
    p.sigma_w2 = spec.sigma_w2;
    p.p0 = spec.p0;
    p.p1 = 1.0 - spec.p0;
    return p;
}

std::int64_t load_for(double alpha, std::int64_t N) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidParam("alpha", alpha, "alpha > 0");
    return std::max<std::int64_t>(1, std::llround(alpha * static_cast<double>(N)));
}

}  // namespace

SystemParams system_params(const ExperimentConfig& config) {
    const auto& spec = config.params;
    if (!spec.N) throw ParseError("params.N", "required for mode " + std::string(to_string(config.mode)));
    if (!spec.alpha && !spec.Ns) {
        throw ParseError("params.alpha", "alpha or Ns required for mode " +
                                             std::string(to_string(config.mode)));
    }
    SystemParams p = base_params(spec);
    p.N = *spec.N;
    if (p.N < 1) throw InvalidParam("N", static_cast<double>(p.N), "N >= 1");
    p.Ns = spec.Ns ? *spec.Ns : load_for(*spec.alpha, p.N);
    validate(p);
    return p;
}

SystemParams system_params_at(const ExperimentConfig& config, std::int64_t N, double alpha) {
    SystemParams p = base_params(config.params);
    p.N = N;
    p.Ns = load_for(alpha, N);
    validate(p);
    return p;
}

}  // namespace dsdetect::app
