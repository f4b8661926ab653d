#include "mortex/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace mortex {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
    return x;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(line, "expected a boolean, got '" + v + "'");
}

std::vector<int> parse_int_list(const std::string& v, int line) {
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        fail(line, "expected a bracketed list, got '" + v + "'");
    std::vector<int> out;
    std::stringstream ss(v.substr(1, v.size() - 2));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) fail(line, "empty list entry");
        try {
            std::size_t pos = 0;
            out.push_back(std::stoi(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail(line, "expected an integer, got '" + tok + "'");
        }
    }
    return out;
}

template <typename T>
T& indexed(std::vector<T>& v, const std::string& idx, int line) {
    int i = -1;
    try {
        i = std::stoi(idx);
    } catch (const std::exception&) {
        fail(line, "expected a numeric index, got '" + idx + "'");
    }
    if (i < 0 || i > static_cast<int>(v.size()))
        fail(line, "index " + idx + " out of order");
    if (i == static_cast<int>(v.size())) v.emplace_back();
    return v[i];
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> domain_index;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) fail(line, "empty key or value");

        std::vector<std::string> parts;
        std::stringstream ks(key);
        std::string tok;
        while (std::getline(ks, tok, '.')) parts.push_back(tok);

        if (parts.size() == 3 && parts[0] == "domain") {
            const std::string& name = parts[1];
            if (!domain_index.count(name)) {
                domain_index[name] = static_cast<int>(cfg.domains.size());
                cfg.domains.push_back({name, "", 1.0, 0.0});
            }
            DomainConfig& d = cfg.domains[domain_index[name]];
            if (parts[2] == "mesh")
                d.mesh_file = val;
            else if (parts[2] == "E")
                d.E = parse_double(val, line);
            else if (parts[2] == "nu")
                d.nu = parse_double(val, line);
            else
                fail(line, "unknown key '" + key + "'");
        } else if (parts.size() == 3 && parts[0] == "tie") {
            TieConfig& t = indexed(cfg.ties, parts[1], line);
            if (parts[2] == "patch")
                t.patch = val;
            else if (parts[2] == "host")
                t.host = val;
            else if (parts[2] == "chain") {
                if (!val.empty() && val.front() == '[')
                    t.chain_nodes = parse_int_list(val, line);
                else
                    t.chain_name = val;
            } else if (parts[2] == "closed")
                t.closed = parse_bool(val, line);
            else if (parts[2] == "dual") {
                if (val != "sli-p0" && val != "sli-p1" && val != "cgi")
                    fail(line, "dual must be sli-p0, sli-p1 or cgi");
                t.dual = val;
            } else if (parts[2] == "kappa") {
                if (val != "auto") (void)parse_double(val, line);
                t.kappa = val;
            } else
                fail(line, "unknown key '" + key + "'");
        } else if (parts.size() == 3 && parts[0] == "bc") {
            BcConfig& b = indexed(cfg.bcs, parts[1], line);
            if (parts[2] == "domain")
                b.domain = val;
            else if (parts[2] == "nodeset")
                b.nodeset = val;
            else if (parts[2] == "comp") {
                if (val != "x" && val != "y" && val != "xy")
                    fail(line, "comp must be x, y or xy");
                b.comp = val;
            } else if (parts[2] == "value")
                b.value = parse_double(val, line);
            else
                fail(line, "unknown key '" + key + "'");
        } else if (parts.size() == 3 && parts[0] == "load") {
            LoadConfig& l = indexed(cfg.loads, parts[1], line);
            if (parts[2] == "domain")
                l.domain = val;
            else if (parts[2] == "polyline")
                l.polyline = val;
            else if (parts[2] == "tx")
                l.tx = parse_double(val, line);
            else if (parts[2] == "ty")
                l.ty = parse_double(val, line);
            else
                fail(line, "unknown key '" + key + "'");
        } else if (parts.size() == 2 && parts[0] == "solve") {
            if (parts[1] == "triangulate")
                cfg.triangulate = parse_bool(val, line);
            else if (parts[1] == "formulation") {
                if (val != "plane_strain" && val != "plane_stress")
                    fail(line, "formulation must be plane_strain or plane_stress");
                cfg.formulation = val;
            } else
                fail(line, "unknown key '" + key + "'");
        } else if (parts.size() == 2 && parts[0] == "output") {
            if (parts[1] == "dir")
                cfg.output_dir = val;
            else
                fail(line, "unknown key '" + key + "'");
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }

    if (cfg.domains.empty()) throw ConfigError("config defines no domains");
    for (const auto& d : cfg.domains)
        if (d.mesh_file.empty())
            throw ConfigError("domain '" + d.name + "' has no mesh");

    // tying graph must be acyclic with every reference resolvable; sort
    // domains so hosts precede their patches
    std::map<std::string, std::set<std::string>> host_of;  // patch -> hosts
    for (const auto& t : cfg.ties) {
        if (!domain_index.count(t.patch))
            throw ConfigError("tie references unknown domain '" + t.patch + "'");
        if (!domain_index.count(t.host))
            throw ConfigError("tie references unknown domain '" + t.host + "'");
        if (t.patch == t.host)
            throw ConfigError("domain '" + t.patch + "' tied to itself");
        if (t.chain_name.empty() && t.chain_nodes.empty())
            throw ConfigError("tie " + t.patch + "->" + t.host +
                              " has no chain");
        host_of[t.patch].insert(t.host);
    }
    std::vector<DomainConfig> ordered;
    std::set<std::string> placed;
    while (ordered.size() < cfg.domains.size()) {
        bool progress = false;
        for (const auto& d : cfg.domains) {
            if (placed.count(d.name)) continue;
            bool ready = true;
            for (const auto& h : host_of[d.name])
                if (!placed.count(h)) ready = false;
            if (ready) {
                ordered.push_back(d);
                placed.insert(d.name);
                progress = true;
            }
        }
        if (!progress) throw ConfigError("cyclic tying graph");
    }
    cfg.domains = std::move(ordered);

    for (const auto& b : cfg.bcs)
        if (!domain_index.count(b.domain))
            throw ConfigError("bc references unknown domain '" + b.domain + "'");
    for (const auto& l : cfg.loads)
        if (!domain_index.count(l.domain))
            throw ConfigError("load references unknown domain '" + l.domain +
                              "'");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace mortex
