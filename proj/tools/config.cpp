#include "config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tbri/errors.hpp"

namespace tbri::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
        return d;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

long long to_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
        return i;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "expected an integer, got '" + v + "'");
    }
}

std::uint64_t to_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in integer '" + v + "'");
        return i;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "expected an unsigned integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(line, "expected a boolean, got '" + v + "'");
}

} // namespace

std::string to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Both: return "both";
    }
    return "both";
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "both") return OutputFormat::Both;
    throw ConfigError("unknown format '" + s + "' (csv|json|both)");
}

void ExperimentConfig::validate() const {
    model.validate();
    if (realizations < 1) throw ConfigError("realizations must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (times.log_points < 2 || times.sat_points < 2) {
        throw ConfigError("times: need at least 2 points per grid");
    }
    if (analysis.bandwidth_factor <= 0 || analysis.tail_guard <= 0) {
        throw ConfigError("analysis: bandwidth_factor and tail_guard must be > 0");
    }
    if (analysis.dos_bins < 4 || analysis.sf_bins < 4 || analysis.coupling_bins < 1) {
        throw ConfigError("analysis: too few bins");
    }
    if (output.dir.empty()) throw ConfigError("output.dir must not be empty");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    bool have_selector = false;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) fail(line, "empty key or value");

        if (section == "model") {
            if (key == "n") c.model.n = static_cast<int>(to_int(val, line));
            else if (key == "m") c.model.m = static_cast<int>(to_int(val, line));
            else if (key == "v0") c.model.v0 = to_double(val, line);
            else if (key == "d0") c.model.d0 = to_double(val, line);
            else if (key == "seed") c.model.seed = to_u64(val, line);
            else if (key == "basis_cap") c.model.basis_cap = to_u64(val, line);
            else if (key == "spectrum") {
                if (val == "equal") {
                    c.model.spectrum = SpectrumKind::EquallySpaced;
                    c.model.jitter = 0.0;
                } else if (val.rfind("jitter:", 0) == 0) {
                    c.model.spectrum = SpectrumKind::Jittered;
                    c.model.jitter = to_double(val.substr(7), line);
                } else {
                    fail(line, "spectrum must be 'equal' or 'jitter:<amplitude>'");
                }
            } else fail(line, "unknown key '" + key + "' in [model]");
        } else if (section == "ensemble") {
            if (key == "realizations") c.realizations = static_cast<int>(to_int(val, line));
            else if (key == "threads") c.threads = static_cast<int>(to_int(val, line));
            else fail(line, "unknown key '" + key + "' in [ensemble]");
        } else if (section == "times") {
            if (key == "log_start") c.times.log_start = to_double(val, line);
            else if (key == "log_stop") c.times.log_stop = to_double(val, line);
            else if (key == "log_points") c.times.log_points = static_cast<int>(to_int(val, line));
            else if (key == "sat_start") c.times.sat_start = to_double(val, line);
            else if (key == "sat_stop") c.times.sat_stop = to_double(val, line);
            else if (key == "sat_points") c.times.sat_points = static_cast<int>(to_int(val, line));
            else fail(line, "unknown key '" + key + "' in [times]");
        } else if (section == "initial_state") {
            if (key != "selector") fail(line, "unknown key '" + key + "' in [initial_state]");
            if (have_selector) fail(line, "duplicate initial-state selector");
            have_selector = true;
            if (val == "mid") {
                c.initial.kind = SelectorKind::Mid;
            } else if (val.rfind("index:", 0) == 0) {
                c.initial.kind = SelectorKind::Index;
                c.initial.index = static_cast<Index>(to_int(val.substr(6), line));
            } else if (val.rfind("energy:", 0) == 0) {
                c.initial.kind = SelectorKind::Energy;
                c.initial.energy = to_double(val.substr(7), line);
            } else {
                fail(line, "selector must be mid, index:<k> or energy:<E>");
            }
        } else if (section == "analysis") {
            if (key == "bandwidth_factor") c.analysis.bandwidth_factor = to_double(val, line);
            else if (key == "tail_guard") c.analysis.tail_guard = to_double(val, line);
            else if (key == "dos_bins") c.analysis.dos_bins = static_cast<int>(to_int(val, line));
            else if (key == "sf_bins") c.analysis.sf_bins = static_cast<int>(to_int(val, line));
            else if (key == "coupling_bins") c.analysis.coupling_bins = static_cast<int>(to_int(val, line));
            else fail(line, "unknown key '" + key + "' in [analysis]");
        } else if (section == "output") {
            if (key == "dir") c.output.dir = val;
            else if (key == "format") {
                try {
                    c.output.format = parse_format(val);
                } catch (const ConfigError& e) {
                    fail(line, e.what());
                }
            } else if (key == "dump_hamiltonian") c.output.dump_hamiltonian = to_bool(val, line);
            else fail(line, "unknown key '" + key + "' in [output]");
        } else if (section.empty()) {
            fail(line, "key outside of any [section]");
        } else {
            fail(line, "unknown section [" + section + "]");
        }
    }
    try {
        c.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "[model]\n";
    os << "n = " << c.model.n << "\n";
    os << "m = " << c.model.m << "\n";
    os << "v0 = " << fmt(c.model.v0) << "\n";
    os << "d0 = " << fmt(c.model.d0) << "\n";
    os << "seed = " << c.model.seed << "\n";
    if (c.model.spectrum == SpectrumKind::EquallySpaced) {
        os << "spectrum = equal\n";
    } else {
        os << "spectrum = jitter:" << fmt(c.model.jitter) << "\n";
    }
    os << "basis_cap = " << c.model.basis_cap << "\n";
    os << "\n[ensemble]\n";
    os << "realizations = " << c.realizations << "\n";
    os << "threads = " << c.threads << "\n";
    os << "\n[times]\n";
    os << "log_start = " << fmt(c.times.log_start) << "\n";
    os << "log_stop = " << fmt(c.times.log_stop) << "\n";
    os << "log_points = " << c.times.log_points << "\n";
    os << "sat_start = " << fmt(c.times.sat_start) << "\n";
    os << "sat_stop = " << fmt(c.times.sat_stop) << "\n";
    os << "sat_points = " << c.times.sat_points << "\n";
    os << "\n[initial_state]\n";
    switch (c.initial.kind) {
        case SelectorKind::Mid: os << "selector = mid\n"; break;
        case SelectorKind::Index: os << "selector = index:" << c.initial.index << "\n"; break;
        case SelectorKind::Energy: os << "selector = energy:" << fmt(c.initial.energy) << "\n"; break;
    }
    os << "\n[analysis]\n";
    os << "bandwidth_factor = " << fmt(c.analysis.bandwidth_factor) << "\n";
    os << "tail_guard = " << fmt(c.analysis.tail_guard) << "\n";
    os << "dos_bins = " << c.analysis.dos_bins << "\n";
    os << "sf_bins = " << c.analysis.sf_bins << "\n";
    os << "coupling_bins = " << c.analysis.coupling_bins << "\n";
    os << "\n[output]\n";
    os << "dir = " << c.output.dir << "\n";
    os << "format = " << to_string(c.output.format) << "\n";
    os << "dump_hamiltonian = " << (c.output.dump_hamiltonian ? "true" : "false") << "\n";
    return os.str();
}

void apply_env_overrides(ExperimentConfig& c) {
    if (const char* v = std::getenv("TBRI_SEED")) c.model.seed = to_u64(v, 0);
    if (const char* v = std::getenv("TBRI_OUT")) c.output.dir = v;
    if (const char* v = std::getenv("TBRI_REALIZATIONS")) c.realizations = static_cast<int>(to_int(v, 0));
    if (const char* v = std::getenv("TBRI_THREADS")) c.threads = static_cast<int>(to_int(v, 0));
    if (const char* v = std::getenv("TBRI_FORMAT")) c.output.format = parse_format(v);
}

} // namespace tbri::cli
