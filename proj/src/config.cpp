#include "impulse/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "impulse/errors.hpp"

namespace impulse {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig("config: key '" + key + "' has non-numeric value '" + value + "'");
    }
}

}  // namespace

ModelConfig parse_model_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig("config: line " + std::to_string(lineno) +
                                " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw InvalidConfig("config: empty key or value on line " + std::to_string(lineno));
        if (!kv.emplace(key, value).second)
            throw InvalidConfig("config: duplicate key '" + key + "'");
    }

    auto take = [&](const std::string& key) -> std::string {
        auto it = kv.find(key);
        if (it == kv.end()) throw InvalidConfig("config: missing key '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_number = [&](const std::string& key) { return to_number(key, take(key)); };

    ModelConfig cfg;
    cfg.params.mu = take_number("mu");
    cfg.params.sigma = take_number("sigma");
    cfg.params.beta = take_number("beta");
    cfg.params.k = take_number("k");
    cfg.params.K1 = take_number("K1");
    cfg.params.K2 = take_number("K2");
    if (kv.count("Q")) {
        cfg.params.Q = take_number("Q");
        cfg.has_q = true;
    }

    const std::string kind = take("g.kind");
    if (kind == "piecewise_linear" || kind == "pwl" || kind == "linear") {
        cfg.cost = HoldingCost::piecewise_linear(take_number("g.h"), take_number("g.p"));
    } else if (kind == "quadratic") {
        cfg.cost = HoldingCost::quadratic(take_number("g.alpha"));
    } else {
        throw InvalidConfig("config: unknown g.kind '" + kind + "'");
    }

    if (!kv.empty()) throw InvalidConfig("config: unknown key '" + kv.begin()->first + "'");
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("config: cannot open '" + path + "'");
    return parse_model_config(in);
}

std::string format_model_config(const ModelConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    os << "mu = " << cfg.params.mu << "\n";
    os << "sigma = " << cfg.params.sigma << "\n";
    os << "beta = " << cfg.params.beta << "\n";
    os << "k = " << cfg.params.k << "\n";
    os << "K1 = " << cfg.params.K1 << "\n";
    os << "K2 = " << cfg.params.K2 << "\n";
    if (cfg.has_q) os << "Q = " << cfg.params.Q << "\n";
    switch (cfg.cost.kind()) {
        case HoldingCost::Kind::PiecewiseLinear:
            os << "g.kind = piecewise_linear\n";
            os << "g.h = " << cfg.cost.h() << "\n";
            os << "g.p = " << cfg.cost.p() << "\n";
            break;
        case HoldingCost::Kind::Quadratic:
            os << "g.kind = quadratic\n";
            os << "g.alpha = " << cfg.cost.alpha() << "\n";
            break;
        case HoldingCost::Kind::Custom:
            throw InvalidConfig("config: custom cost families have no file form");
    }
    return os.str();
}

}  // namespace impulse
