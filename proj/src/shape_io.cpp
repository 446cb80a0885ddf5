#include "scatlab/shape_io.hpp"

#include <fstream>
#include <sstream>
#include <variant>

#include "scatlab/errors.hpp"

namespace scatlab {

namespace {

std::vector<double> get_list(const json& j, const std::string& key) {
    if (!j.contains(key)) return {};
    const auto& v = j.at(key);
    if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("'" + key + "' must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

json list_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(x);
    return out;
}

}  // namespace

json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1;
        int column = 1;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                          ": malformed JSON: " + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path.string());
}

void require_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || item.key() == a;
        if (!ok) throw ConfigError("unknown key '" + item.key() + "' in " + context);
    }
}

double get_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw ConfigError("missing required number '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
    return v.get<double>();
}

double get_number(const json& j, const std::string& key, double fallback) {
    return j.contains(key) ? get_number(j, key) : fallback;
}

int get_int(const json& j, const std::string& key, int fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
    return v.get<int>();
}

Point get_point(const json& j, const std::string& key, Point fallback) {
    if (!j.contains(key)) return fallback;
    const auto v = get_list(j, key);
    if (v.size() != 2) throw ConfigError("'" + key + "' must be a pair [x, y]");
    return {v[0], v[1]};
}

json curve_to_json(const ParametricCurve& c) {
    json j;
    j["family"] = c.family_name();
    if (const auto* ci = std::get_if<Circle>(&c.family())) {
        j["radius"] = ci->radius;
    } else if (const auto* e = std::get_if<Ellipse>(&c.family())) {
        j["a"] = e->a;
        j["b"] = e->b;
    } else {
        const auto& t = std::get<TrigCurve>(c.family());
        j["x_cos"] = list_json(t.x_cos);
        j["x_sin"] = list_json(t.x_sin);
        j["y_cos"] = list_json(t.y_cos);
        j["y_sin"] = list_json(t.y_sin);
    }
    return j;
}

ParametricCurve curve_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("shape must be a JSON object");
    if (!j.contains("family") || !j.at("family").is_string()) throw ConfigError("shape needs a string 'family'");
    const auto family = j.at("family").get<std::string>();
    if (family == "circle") {
        require_keys(j, {"family", "radius", "motion", "bc"}, "circle shape");
        return ParametricCurve(Circle{get_number(j, "radius")});
    }
    if (family == "ellipse") {
        require_keys(j, {"family", "a", "b", "motion", "bc"}, "ellipse shape");
        return ParametricCurve(Ellipse{get_number(j, "a"), get_number(j, "b")});
    }
    if (family == "trig") {
        require_keys(j, {"family", "x_cos", "x_sin", "y_cos", "y_sin", "motion", "bc"}, "trig shape");
        return ParametricCurve(
            TrigCurve{get_list(j, "x_cos"), get_list(j, "x_sin"), get_list(j, "y_cos"), get_list(j, "y_sin")});
    }
    throw ConfigError("unknown shape family '" + family + "' (expected circle, ellipse or trig)");
}

json motion_to_json(const RigidMotion& m) {
    json j;
    j["theta"] = m.theta;
    j["z"] = json::array({m.z.x, m.z.y});
    return j;
}

RigidMotion motion_from_json(const json& j) {
    require_keys(j, {"theta", "z"}, "motion");
    return RigidMotion{get_number(j, "theta", 0.0), get_point(j, "z", {})};
}

json bc_to_json(const BoundaryCondition& bc) {
    json j;
    j["type"] = bc.name();
    if (bc.kind() == BcKind::impedance) j["lambda"] = json::array({bc.lambda().real(), bc.lambda().imag()});
    return j;
}

BoundaryCondition bc_from_json(const json& j) {
    require_keys(j, {"type", "lambda"}, "bc");
    if (!j.contains("type") || !j.at("type").is_string()) throw ConfigError("bc needs a string 'type'");
    const auto type = j.at("type").get<std::string>();
    if (type == "dirichlet") return BoundaryCondition::dirichlet();
    if (type == "neumann") return BoundaryCondition::neumann();
    if (type == "impedance") {
        const Point l = get_point(j, "lambda", {0.0, 0.0});
        if (!j.contains("lambda")) throw ConfigError("impedance bc needs 'lambda': [re, im]");
        return BoundaryCondition::impedance({l.x, l.y});
    }
    throw ConfigError("unknown bc type '" + type + "' (expected dirichlet, neumann or impedance)");
}

json obstacle_to_json(const Obstacle& obs) {
    json j = curve_to_json(obs.shape.base());
    j["motion"] = motion_to_json(obs.shape.motion());
    j["bc"] = bc_to_json(obs.bc);
    return j;
}

Obstacle obstacle_from_json(const json& j) {
    auto curve = curve_from_json(j);
    const RigidMotion m = j.contains("motion") ? motion_from_json(j.at("motion")) : RigidMotion{};
    const auto bc = j.contains("bc") ? bc_from_json(j.at("bc")) : BoundaryCondition::dirichlet();
    return Obstacle(std::move(curve), m, bc);
}

json mfs_config_to_json(const MfsConfig& cfg) {
    json j;
    j["n_sources"] = cfg.n_sources;
    j["oversample"] = cfg.oversample;
    j["placement"] = placement_name(cfg.placement);
    j["tau"] = cfg.tau;
    j["source_offset"] = cfg.source_offset;
    j["residual_cap"] = cfg.residual_cap;
    return j;
}

MfsConfig mfs_config_from_json(const json& j) {
    require_keys(j, {"n_sources", "oversample", "placement", "tau", "source_offset", "residual_cap"}, "solver");
    MfsConfig cfg;
    cfg.n_sources = get_int(j, "n_sources", cfg.n_sources);
    cfg.oversample = get_number(j, "oversample", cfg.oversample);
    if (j.contains("placement")) {
        if (!j.at("placement").is_string()) throw ConfigError("'placement' must be a string");
        cfg.placement = parse_placement(j.at("placement").get<std::string>());
    }
    cfg.tau = get_number(j, "tau", cfg.tau);
    cfg.source_offset = get_number(j, "source_offset", cfg.source_offset);
    cfg.residual_cap = get_number(j, "residual_cap", cfg.residual_cap);
    cfg.validate();
    return cfg;
}

}  // namespace scatlab
