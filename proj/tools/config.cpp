#include "config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cgm::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

void validate(const RunConfig& cfg) {
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ConfigError("alpha out of range (0,1): " + std::to_string(cfg.alpha));
    if (cfg.n < 16) throw ConfigError("n out of range [16, inf): " + std::to_string(cfg.n));
    if (cfg.replicas < 1)
        throw ConfigError("replicas out of range [1, inf): " + std::to_string(cfg.replicas));
    if (cfg.threads < 0)
        throw ConfigError("threads out of range [0, inf): " + std::to_string(cfg.threads));
    if (cfg.length < 100)
        throw ConfigError("length out of range [100, inf): " + std::to_string(cfg.length));
}

RunConfig apply_environment(RunConfig base) {
    if (const char* s = std::getenv("CGM_SEED")) base.seed = std::strtoull(s, nullptr, 10);
    if (const char* t = std::getenv("CGM_THREADS")) {
        const int v = std::atoi(t);
        if (v > 0) base.threads = v;
    }
    return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "alpha")
                base.alpha = std::stod(value);
            else if (key == "n")
                base.n = std::stoll(value);
            else if (key == "replicas")
                base.replicas = std::stoll(value);
            else if (key == "seed")
                base.seed = std::stoull(value);
            else if (key == "threads")
                base.threads = std::stoi(value);
            else if (key == "length")
                base.length = std::stoll(value);
            else
                throw ConfigError("unknown key: " + key);
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("bad value for " + key + ": " + value);
        }
    }
    validate(base);
    return base;
}

} // namespace cgm::cli
