#include "sphnn/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sphnn {

std::string configuration_to_json(const Configuration& config) {
    nlohmann::json j;
    j["dim"] = config.empty() ? 0 : config.begin()->second.dim();
    j["spheres"] = nlohmann::json::object();
    for (const auto& [term, sphere] : config) {
        nlohmann::json js;
        js["center"] = sphere.center;
        js["radius"] = sphere.radius();
        j["spheres"][term] = js;
    }
    return j.dump(2);
}

Configuration configuration_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Configuration config;
    for (const auto& [term, js] : j.at("spheres").items()) {
        Sphere s;
        s.center = js.at("center").get<Vec>();
        const double radius = js.at("radius").get<double>();
        if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive: " + term);
        s.log_radius = std::log(radius);
        config[term] = std::move(s);
    }
    return config;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string render_svg(const Configuration& config) {
    for (const auto& [term, s] : config)
        if (s.dim() != 2)
            throw std::invalid_argument("render_svg: sphere " + term + " is not 2-D");

    double min_x = 0.0, min_y = 0.0, max_x = 100.0, max_y = 100.0;
    bool first = true;
    for (const auto& [term, s] : config) {
        const double r = s.radius();
        if (first) {
            min_x = s.center[0] - r;
            max_x = s.center[0] + r;
            min_y = s.center[1] - r;
            max_y = s.center[1] + r;
            first = false;
        } else {
            min_x = std::min(min_x, s.center[0] - r);
            max_x = std::max(max_x, s.center[0] + r);
            min_y = std::min(min_y, s.center[1] - r);
            max_y = std::max(max_y, s.center[1] + r);
        }
    }
    const double pad = first ? 0.0 : 0.05 * std::max(max_x - min_x, max_y - min_y);
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(min_x - pad) << " "
       << fmt(min_y - pad) << " " << fmt(max_x - min_x + 2 * pad) << " "
       << fmt(max_y - min_y + 2 * pad) << "\">\n";
    for (const auto& [term, s] : config) {
        os << "  <circle cx=\"" << fmt(s.center[0]) << "\" cy=\"" << fmt(s.center[1])
           << "\" r=\"" << fmt(s.radius())
           << "\" fill=\"none\" stroke=\"black\" stroke-width=\""
           << fmt(0.01 * std::max(1e-9, max_x - min_x)) << "\"/>\n";
        os << "  <text x=\"" << fmt(s.center[0]) << "\" y=\"" << fmt(s.center[1])
           << "\" font-size=\"" << fmt(0.04 * std::max(1e-9, max_x - min_x))
           << "\" text-anchor=\"middle\">" << term << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::map<std::string, Vec> parse_embeddings(const std::string& text) {
    std::map<std::string, Vec> out;
    std::istringstream is(text);
    std::string line;
    std::size_t dim = 0;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string term;
        if (!(ls >> term)) continue;
        if (term[0] == '#') continue;
        Vec v;
        double x;
        while (ls >> x) v.push_back(x);
        if (v.empty()) throw std::invalid_argument("embedding line has no components: " + term);
        if (dim == 0) dim = v.size();
        if (v.size() != dim)
            throw std::invalid_argument("inconsistent embedding width at term: " + term);
        double norm = 0.0;
        for (double c : v) norm += c * c;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::invalid_argument("zero embedding vector: " + term);
        for (double& c : v) c /= norm;
        std::string key = term;
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!out.emplace(key, std::move(v)).second)
            throw std::invalid_argument("duplicate embedding term: " + key);
    }
    return out;
}

std::string config_hash(const OptimConfig& cfg) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    auto mix_double = [&](double d) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof d);
        std::memcpy(&bits, &d, sizeof bits);
        mix(bits);
    };
    mix(static_cast<std::uint64_t>(cfg.dim));
    mix_double(cfg.learning_rate);
    mix_double(cfg.tol.eps_strict);
    mix_double(cfg.init_center_norm);
    mix_double(cfg.init_log_radius);
    mix_double(cfg.eq_break_scale);
    mix_double(cfg.cop_min_decrease);
    mix(cfg.max_steps_per_transition);
    mix(cfg.seed);
    mix(cfg.random_init ? 1 : 0);
    mix(static_cast<std::uint64_t>(cfg.max_outer_iters));
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace sphnn
