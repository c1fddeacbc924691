#include "config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sklern/expansion.hpp"

namespace sklern::cli {

namespace {

using nlohmann::json;

int line_of_offset(const std::string& text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

int line_of_key(const std::string& text, const std::string& key)
{
    const auto pos = text.find('"' + key + '"');
    return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

std::string where(const RunConfig& cfg, const std::string& key)
{
    const auto it = cfg.origin.find(key);
    if (it == cfg.origin.end()) {
        return "--" + key;
    }
    return cfg.source + ":" + std::to_string(it->second) + " (" + key + ")";
}

template <typename T>
void read(const json& obj, const std::string& key, const std::string& path_key, const std::string& text,
          RunConfig& cfg, T& out)
{
    if (!obj.contains(key)) {
        return;
    }
    const int line = line_of_key(text, key);
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(cfg.source + ":" + std::to_string(line) + ": bad value for '" + key + "': " + e.what());
    }
    cfg.origin[path_key] = line;
}

void fail(const RunConfig& cfg, const std::string& key, const std::string& msg)
{
    throw ConfigError(where(cfg, key) + ": " + msg);
}

} // namespace

RadialProblem RunConfig::problem() const
{
    RadialProblem p;
    p.n = n;
    p.k = k;
    p.domain = domain.value_or(Domain{Annulus{}});
    p.J = grid;
    p.eps = epsilon;
    p.mu = mu;
    return p;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    RunConfig cfg;
    cfg.source = path;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ":" + std::to_string(line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0)) +
                          ": JSON syntax error: " + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError(path + ":1: config must be a JSON object");
    }
    static const std::vector<std::string> known{"command", "suite", "n",       "k",      "kappa",  "order",
                                                "mu",      "ball",  "annulus", "grid",   "epsilon", "barrier",
                                                "output",  "seed",  "draws",   "pairs"};
    for (const auto& item : root.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
            throw ConfigError(path + ":" + std::to_string(line_of_key(text, item.key())) + ": unknown key '" +
                              item.key() + "'");
        }
    }

    read(root, "command", "command", text, cfg, cfg.command);
    read(root, "suite", "suite", text, cfg, cfg.suite);
    read(root, "n", "n", text, cfg, cfg.n);
    read(root, "k", "k", text, cfg, cfg.k);
    read(root, "kappa", "kappa", text, cfg, cfg.kappa);
    read(root, "order", "order", text, cfg, cfg.order);
    read(root, "mu", "mu", text, cfg, cfg.mu);
    read(root, "grid", "grid", text, cfg, cfg.grid);
    read(root, "epsilon", "epsilon", text, cfg, cfg.epsilon);
    read(root, "seed", "seed", text, cfg, cfg.seed);
    read(root, "draws", "draws", text, cfg, cfg.draws);
    if (root.contains("ball") && root.contains("annulus")) {
        throw ConfigError(path + ":" + std::to_string(line_of_key(text, "annulus")) +
                          ": give either 'ball' or 'annulus', not both");
    }
    if (root.contains("ball")) {
        double R = 0.0;
        read(root, "ball", "ball", text, cfg, R);
        cfg.domain = Ball{R};
    }
    if (root.contains("annulus")) {
        std::vector<double> ab;
        read(root, "annulus", "annulus", text, cfg, ab);
        if (ab.size() != 2) {
            fail(cfg, "annulus", "expected [a, b]");
        }
        cfg.domain = Annulus{ab[0], ab[1]};
    }
    if (root.contains("pairs")) {
        std::vector<std::vector<int>> pairs;
        read(root, "pairs", "pairs", text, cfg, pairs);
        for (const auto& p : pairs) {
            if (p.size() != 2) {
                fail(cfg, "pairs", "each entry must be [n, k]");
            }
            cfg.pairs.emplace_back(p[0], p[1]);
        }
    }
    if (root.contains("barrier")) {
        const json& b = root.at("barrier");
        if (!b.is_object()) {
            throw ConfigError(path + ":" + std::to_string(line_of_key(text, "barrier")) +
                              ": 'barrier' must be an object");
        }
        read(b, "beta", "beta", text, cfg, cfg.beta);
        read(b, "theta", "theta", text, cfg, cfg.theta);
        read(b, "delta", "delta", text, cfg, cfg.delta);
        read(b, "samples", "samples", text, cfg, cfg.samples);
    }
    if (root.contains("output")) {
        const json& o = root.at("output");
        if (!o.is_object()) {
            throw ConfigError(path + ":" + std::to_string(line_of_key(text, "output")) +
                              ": 'output' must be an object");
        }
        read(o, "json", "json", text, cfg, cfg.json_out);
        read(o, "csv", "csv", text, cfg, cfg.csv_out);
        read(o, "spheres", "spheres", text, cfg, cfg.spheres_out);
    }
    return cfg;
}

void override_key(RunConfig& cfg, const std::string& key)
{
    cfg.origin.erase(key);
}

void validate(const RunConfig& cfg, const std::vector<std::string>& needs)
{
    auto needed = [&](const std::string& key) { return std::find(needs.begin(), needs.end(), key) != needs.end(); };
    if (cfg.n < 3) {
        fail(cfg, "n", "dimension n must be at least 3");
    }
    if (cfg.k < 1 || cfg.k > cfg.n) {
        fail(cfg, "k", "k must lie in 1..n");
    }
    if (needed("kappa")) {
        if (cfg.kappa.empty()) {
            fail(cfg, "kappa", "missing principal curvatures");
        }
        if (static_cast<int>(cfg.kappa.size()) != cfg.n - 1) {
            fail(cfg, "kappa",
                 "expected " + std::to_string(cfg.n - 1) + " values, got " + std::to_string(cfg.kappa.size()));
        }
        if (std::any_of(cfg.kappa.begin(), cfg.kappa.end(), [](double v) { return !std::isfinite(v); })) {
            fail(cfg, "kappa", "values must be finite");
        }
    }
    if (needed("order") && cfg.order < 0) {
        fail(cfg, "order", "order must be positive");
    }
    if (!std::isfinite(cfg.mu)) {
        fail(cfg, "mu", "mu must be finite");
    }
    if (needed("domain")) {
        if (!cfg.domain) {
            throw ConfigError("missing geometry: give --ball R or --annulus a,b");
        }
        if (const auto* ball = std::get_if<Ball>(&*cfg.domain)) {
            if (!(ball->R > 0.0) || !std::isfinite(ball->R)) {
                fail(cfg, "ball", "ball radius must be positive");
            }
        } else {
            const auto& ann = std::get<Annulus>(*cfg.domain);
            if (!(ann.a > 0.0 && ann.b > ann.a) || !std::isfinite(ann.b)) {
                fail(cfg, "annulus", "annulus needs 0 < a < b");
            }
        }
        if (cfg.grid < 16) {
            fail(cfg, "grid", "grid needs at least 16 intervals");
        }
        if (cfg.epsilon < 0.0 || !std::isfinite(cfg.epsilon)) {
            fail(cfg, "epsilon", "epsilon must be nonnegative (0 selects the default)");
        }
        try {
            cfg.problem().validate();
        } catch (const std::invalid_argument& e) {
            fail(cfg, "epsilon", e.what());
        }
    }
    if (needed("barrier")) {
        const double theta = cfg.theta > 0.0 ? cfg.theta : cfg.n + 0.5;
        if (!(theta > cfg.n && theta < cfg.n + 1)) {
            fail(cfg, "theta", "theta must lie in (n, n+1)");
        }
        if (!(cfg.delta > 0.0)) {
            fail(cfg, "delta", "delta must be positive");
        }
        if (!(cfg.beta >= 0.0) || cfg.beta * std::pow(cfg.delta, cfg.n) > 1.0) {
            fail(cfg, "beta", "need beta >= 0 and beta delta^n <= 1");
        }
        if (cfg.samples < 2) {
            fail(cfg, "samples", "need at least 2 samples");
        }
    }
    if (needed("draws") && cfg.draws < 1) {
        fail(cfg, "draws", "need at least one draw");
    }
    if (needed("pairs")) {
        for (const auto& [n, k] : cfg.pairs) {
            if (n < 3 || k < 1 || k > n) {
                fail(cfg, "pairs", "pair " + std::to_string(n) + ":" + std::to_string(k) + " needs n >= 3, 1 <= k <= n");
            }
        }
    }
}

std::vector<double> parse_list(const std::string& text, const std::string& what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw ConfigError("--" + what + ": cannot parse '" + item + "' as a number");
        }
    }
    return out;
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& text)
{
    std::vector<std::pair<int, int>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        try {
            if (colon == std::string::npos) {
                throw std::invalid_argument(item);
            }
            out.emplace_back(std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw ConfigError("--pairs: expected n:k entries, got '" + item + "'");
        }
    }
    return out;
}

} // namespace sklern::cli
