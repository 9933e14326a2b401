#include "focksim/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace focksim {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(size_t line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, size_t line, const std::string& key) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    fail(line, key + ": unparsable number '" + v + "'");
}

long long parse_int(const std::string& v, size_t line, const std::string& key) {
    try {
        size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    fail(line, key + ": unparsable integer '" + v + "'");
}

std::uint64_t parse_uint(const std::string& v, size_t line, const std::string& key) {
    try {
        size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (trim(v.substr(used)).empty()) return x;
    } catch (const std::exception&) {
    }
    fail(line, key + ": unparsable unsigned integer '" + v + "'");
}

bool parse_bool(const std::string& v, size_t line, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(line, key + ": expected true/false, got '" + v + "'");
}

cplx parse_complex(const std::string& v, size_t line, const std::string& key) {
    const std::string t = trim(v);
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')') fail(line, key + ": unterminated complex literal '" + v + "'");
        const std::string inner = t.substr(1, t.size() - 2);
        const size_t comma = inner.find(',');
        if (comma == std::string::npos)
            fail(line, key + ": complex literal needs '(re,im)', got '" + v + "'");
        return {parse_double(trim(inner.substr(0, comma)), line, key),
                parse_double(trim(inner.substr(comma + 1)), line, key)};
    }
    return {parse_double(t, line, key), 0.0};
}

std::vector<double> parse_list(const std::string& v, size_t line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line, key));
    if (out.empty()) fail(line, key + ": empty list");
    return out;
}

void check(bool ok, size_t line, const std::string& key, const std::string& what) {
    if (!ok) fail(line, key + " " + what);
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig c;
    std::istringstream is(text);
    std::string raw;
    size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "missing key");
        if (value.empty()) fail(lineno, key + ": missing value");

        if (key == "squeezing") {
            c.squeezing = parse_double(value, lineno, key);
            check(c.squeezing > 0.0 && c.squeezing < 1.0, lineno, key, "must lie in (0, 1)");
        } else if (key == "herald_efficiency") {
            c.herald_detector.efficiency = parse_double(value, lineno, key);
            check(c.herald_detector.efficiency >= 0.0 && c.herald_detector.efficiency <= 1.0,
                  lineno, key, "must lie in [0, 1]");
        } else if (key == "herald_dark_prob") {
            c.herald_detector.dark_prob = parse_double(value, lineno, key);
            check(c.herald_detector.dark_prob >= 0.0 && c.herald_detector.dark_prob < 1.0, lineno,
                  key, "must lie in [0, 1)");
        } else if (key == "herald_number_resolving") {
            c.herald_detector.number_resolving = parse_bool(value, lineno, key);
        } else if (key == "tap_reflectivity") {
            c.tap_reflectivity = parse_double(value, lineno, key);
            check(c.tap_reflectivity > 0.0 && c.tap_reflectivity < 1.0, lineno, key,
                  "must lie in (0, 1)");
        } else if (key == "subtraction_efficiency") {
            c.subtraction_detector.efficiency = parse_double(value, lineno, key);
            check(c.subtraction_detector.efficiency >= 0.0 &&
                      c.subtraction_detector.efficiency <= 1.0,
                  lineno, key, "must lie in [0, 1]");
        } else if (key == "subtraction_dark_prob") {
            c.subtraction_detector.dark_prob = parse_double(value, lineno, key);
            check(c.subtraction_detector.dark_prob >= 0.0 && c.subtraction_detector.dark_prob < 1.0,
                  lineno, key, "must lie in [0, 1)");
        } else if (key == "subtraction_number_resolving") {
            c.subtraction_detector.number_resolving = parse_bool(value, lineno, key);
        } else if (key == "split_mu") {
            c.split_mu = parse_complex(value, lineno, key);
        } else if (key == "split_lambda") {
            c.split_lambda = parse_complex(value, lineno, key);
        } else if (key == "detection_efficiency") {
            c.detection_efficiency = parse_double(value, lineno, key);
            check(c.detection_efficiency > 0.0 && c.detection_efficiency <= 1.0, lineno, key,
                  "must lie in (0, 1]");
        } else if (key == "samples_per_phase") {
            const long long n = parse_int(value, lineno, key);
            check(n >= 1, lineno, key, "must be >= 1");
            c.samples_per_phase = static_cast<int>(n);
        } else if (key == "phases") {
            c.phases = parse_list(value, lineno, key);
        } else if (key == "cutoff") {
            const long long n = parse_int(value, lineno, key);
            check(n >= 1 && n <= 24, lineno, key, "must lie in [1, 24]");
            c.cutoff = static_cast<int>(n);
        } else if (key == "seed") {
            c.seed = parse_uint(value, lineno, key);
        } else {
            fail(lineno, "unknown key '" + key + "'");
        }
    }
    validate(c); // cross-field checks (splitter normalization, phase ranges)
    return c;
}

std::string serialize_config(const ExperimentConfig& c) {
    std::string out;
    auto kv = [&out](const std::string& key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    auto cpx = [](cplx v) { return "(" + g17(v.real()) + "," + g17(v.imag()) + ")"; };
    kv("squeezing", g17(c.squeezing));
    kv("herald_efficiency", g17(c.herald_detector.efficiency));
    kv("herald_dark_prob", g17(c.herald_detector.dark_prob));
    kv("herald_number_resolving", c.herald_detector.number_resolving ? "true" : "false");
    kv("tap_reflectivity", g17(c.tap_reflectivity));
    kv("subtraction_efficiency", g17(c.subtraction_detector.efficiency));
    kv("subtraction_dark_prob", g17(c.subtraction_detector.dark_prob));
    kv("subtraction_number_resolving", c.subtraction_detector.number_resolving ? "true" : "false");
    kv("split_mu", cpx(c.split_mu));
    kv("split_lambda", cpx(c.split_lambda));
    kv("detection_efficiency", g17(c.detection_efficiency));
    kv("samples_per_phase", std::to_string(c.samples_per_phase));
    std::string phases;
    for (size_t k = 0; k < c.phases.size(); ++k) {
        if (k) phases += ',';
        phases += g17(c.phases[k]);
    }
    kv("phases", phases);
    kv("cutoff", std::to_string(c.cutoff));
    kv("seed", std::to_string(c.seed));
    return out;
}

} // namespace focksim
