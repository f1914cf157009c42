#include "kvn/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "kvn/io.hpp"

namespace kvn {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

RunConfig RunConfig::parse(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    std::string canonical;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.data_[section][key].push_back(value);
        canonical += section + "\x1f" + key + "\x1f" + value + "\n";
    }
    cfg.canonical_ = canonical;
    return cfg;
}

bool RunConfig::has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    if (s == data_.end()) return false;
    return s->second.count(key) > 0;
}

std::string RunConfig::get_string(const std::string& section, const std::string& key,
                                  std::optional<std::string> fallback) const {
    auto s = data_.find(section);
    if (s != data_.end()) {
        auto k = s->second.find(key);
        if (k != s->second.end()) return k->second.back();
    }
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required field [" + section + "]." + key);
}

double RunConfig::get_double(const std::string& section, const std::string& key,
                             std::optional<double> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing required field [" + section + "]." + key);
    }
    const std::string v = get_string(section, key);
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(origin_ + ": field [" + section + "]." + key + " is not a number: '" + v +
                      "'");
}

long RunConfig::get_long(const std::string& section, const std::string& key,
                         std::optional<long> fallback) const {
    if (!has(section, key)) {
        if (fallback) return *fallback;
        throw ConfigError(origin_ + ": missing required field [" + section + "]." + key);
    }
    const std::string v = get_string(section, key);
    try {
        std::size_t used = 0;
        const long d = std::stol(v, &used);
        if (trim(v.substr(used)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError(origin_ + ": field [" + section + "]." + key + " is not an integer: '" + v +
                      "'");
}

std::vector<std::string> RunConfig::get_all(const std::string& section,
                                            const std::string& key) const {
    auto s = data_.find(section);
    if (s == data_.end()) return {};
    auto k = s->second.find(key);
    if (k == s->second.end()) return {};
    return k->second;
}

double RunConfig::require_positive(const std::string& section, const std::string& key,
                                   double fallback) const {
    const double v = get_double(section, key, fallback);
    if (!(v > 0.0))
        throw ConfigError(origin_ + ": field [" + section + "]." + key +
                          " must be > 0 (got " + std::to_string(v) + ")");
    return v;
}

PolynomialHamiltonian RunConfig::hamiltonian() const {
    const long dof = get_long("hamiltonian", "dof", 1);
    if (dof < 1 || dof > 4)
        throw ConfigError(origin_ + ": field [hamiltonian].dof must be in [1,4]");
    const std::string preset = get_string("hamiltonian", "preset", std::string(""));
    if (!preset.empty()) {
        const double mass = get_double("hamiltonian", "mass", 1.0);
        const double omega = get_double("hamiltonian", "omega", 1.0);
        if (preset == "harmonic") return PolynomialHamiltonian::harmonic(mass, omega);
        if (preset == "free") return PolynomialHamiltonian::free_particle(mass);
        if (preset == "quartic")
            return PolynomialHamiltonian::quartic(get_double("hamiltonian", "lambda", 1.0), mass,
                                                  omega);
        throw ConfigError(origin_ + ": field [hamiltonian].preset unknown: '" + preset + "'");
    }
    const auto terms = get_all("hamiltonian", "term");
    if (terms.empty())
        throw ConfigError(origin_ + ": [hamiltonian] needs a preset or 'term' lines");
    Polynomial h(static_cast<int>(2 * dof));
    for (const auto& t : terms) {
        const std::size_t colon = t.find(':');
        if (colon == std::string::npos)
            throw ConfigError(origin_ + ": [hamiltonian].term must read 'e1 .. e2n : coeff', got '" +
                              t + "'");
        std::istringstream es(t.substr(0, colon));
        std::vector<int> exps;
        int e;
        while (es >> e) exps.push_back(e);
        if (static_cast<long>(exps.size()) != 2 * dof)
            throw ConfigError(origin_ + ": [hamiltonian].term needs exactly " +
                              std::to_string(2 * dof) + " exponents: '" + t + "'");
        double coeff;
        std::istringstream cs(t.substr(colon + 1));
        if (!(cs >> coeff))
            throw ConfigError(origin_ + ": [hamiltonian].term has a bad coefficient: '" + t + "'");
        h.add_term(exps, coeff);
    }
    return {static_cast<int>(dof), h};
}

std::uint64_t RunConfig::seed() const {
    if (seed_override_) return *seed_override_;
    return static_cast<std::uint64_t>(get_long("run", "seed", 20040528L));
}

std::uint64_t RunConfig::hash() const {
    std::string h = canonical_;
    h += "\x1eseed=" + std::to_string(seed());
    return fnv1a(h);
}

}  // namespace kvn
