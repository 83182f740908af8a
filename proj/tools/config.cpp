#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace qd::cli {

const std::vector<SchemaEntry>& config_schema() {
    static const std::vector<SchemaEntry> schema = {
        {"objective", "name", "", "benchmark objective: arm | illum (required)"},
        {"objective", "arm_joints", "8", "joint count of the planar arm"},
        {"objective", "illum_dim", "6", "genotype dimension of the illumination task"},
        {"objective", "noise_fitness", "0", "Gaussian noise scale added to fitness"},
        {"objective", "noise_descriptor", "0", "Gaussian noise scale added per descriptor dimension"},

        {"container", "kind", "grid", "container type: grid | cvt | distance | deepgrid"},
        {"container", "grid_bins", "64,64", "bins per descriptor dimension (grid, deepgrid)"},
        {"container", "cvt_cells", "1000", "number of CVT cells k"},
        {"container", "cvt_samples", "0", "CVT sample count K (0 = 100*k)"},
        {"container", "cvt_seed", "1", "seed of the CVT construction"},
        {"container", "cvt_cache_dir", "",
         "directory for cached centroids (empty = <output dir>/cvt_cache)"},
        {"container", "distance_threshold", "0.05", "minimum descriptor distance l of the archive"},
        {"container", "depth", "50", "individuals per cell D (deepgrid)"},

        {"selector", "kind", "uniform",
         "parent selection: uniform | weighted | random-genotype | cell-rank"},
        {"selector", "score", "curiosity",
         "weighting score: curiosity | novelty | fitness | inverse-count"},
        {"selector", "include_previous_batch", "false", "widen the pool with the previous batch"},

        {"variation", "sigma1", "auto", "isotropic mutation scale (auto = 1% of mean bound width)"},
        {"variation", "sigma2", "0.2", "directional variation scale"},
        {"variation", "mix_iso", "0.5", "fraction of isotropic mutations"},
        {"variation", "mix_directional", "0.5", "fraction of directional variations"},
        {"variation", "mix_blend", "0", "fraction of blend crossovers"},

        {"engine", "mode", "qd", "run mode: qd | sail"},
        {"engine", "init", "1000", "initial random evaluations G"},
        {"engine", "iterations", "500", "loop iterations I"},
        {"engine", "batch", "256", "offspring per iteration"},
        {"engine", "seed", "1", "master seed of the run"},
        {"engine", "metrics_every", "1", "iterations between metrics records"},
        {"engine", "novelty_k", "15", "neighbors used by the novelty score"},
        {"engine", "novelty_refresh_every", "1", "iterations between novelty refreshes"},
        {"engine", "knn_k", "15", "neighbors used by the knn density metric"},
        {"engine", "curiosity_reward", "1", "curiosity gain when an offspring is added"},
        {"engine", "curiosity_penalty", "0.5", "curiosity loss when an offspring is rejected"},
        {"engine", "curiosity_floor", "-10", "lowest retained curiosity score"},
        {"engine", "checkpoint_every", "0", "iterations between checkpoints (0 = off)"},
        {"engine", "threads", "1", "evaluation worker threads"},

        {"surrogate", "budget", "500", "total true evaluations (sail)"},
        {"surrogate", "init_samples", "100", "random design size before the first model fit"},
        {"surrogate", "batch_per_round", "25", "true evaluations drawn from each acquisition map"},
        {"surrogate", "beta", "1", "UCB exploration weight"},
        {"surrogate", "length_scales", "0.25", "kernel length scale(s), single value or comma list"},
        {"surrogate", "signal_variance", "1", "kernel signal variance s^2"},
        {"surrogate", "noise_variance", "1e-6", "kernel noise variance"},
        {"surrogate", "descriptor_from_gp", "false",
         "predict descriptors with per-dimension GPs instead of the true mapping"},
        {"surrogate", "inner_init", "200", "initial evaluations of each inner acquisition run"},
        {"surrogate", "inner_iterations", "100", "iterations of each inner acquisition run"},
        {"surrogate", "inner_batch", "32", "batch size of each inner acquisition run"},

        {"oracle", "lattice", "", "lattice points per genotype dimension (required for `oracle`)"},
        {"oracle", "compare", "", "run archive CSV to compare against the oracle (optional)"},

        {"output", "dir", "out", "output directory (QD_OUT_DIR overrides)"},
        {"output", "heatmap", "true", "write heatmap.ppm for 2-D grid containers"},
    };
    return schema;
}

namespace {

const SchemaEntry* find_entry(const std::string& section, const std::string& key) {
    for (const auto& e : config_schema())
        if (section == e.section && key == e.key) return &e;
    return nullptr;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ExperimentFile ExperimentFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);

    ExperimentFile file;
    file.path_ = path;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto where = path + ":" + std::to_string(line_no);
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& e : config_schema()) known = known || section == e.section;
            if (!known) throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected `key = value`");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (section.empty()) throw ConfigError(where + ": key `" + key + "` before any section");
        if (!find_entry(section, key))
            throw ConfigError(where + ": unknown key `" + key + "` in [" + section + "]");
        const auto full = section + "." + key;
        if (file.values_.count(full)) throw ConfigError(where + ": duplicate key `" + key + "`");
        file.values_[full] = value;
    }
    return file;
}

void ExperimentFile::apply_override(const std::string& spec) {
    const auto eq = spec.find('=');
    const auto dot = spec.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("override `" + spec + "`: expected section.key=value");
    const auto section = trim(spec.substr(0, dot));
    const auto key = trim(spec.substr(dot + 1, eq - dot - 1));
    const auto value = trim(spec.substr(eq + 1));
    if (!find_entry(section, key))
        throw ConfigError("override `" + spec + "`: unknown key `" + key + "` in [" + section + "]");
    values_[section + "." + key] = value;
}

bool ExperimentFile::has(const std::string& section, const std::string& key) const {
    const auto it = values_.find(section + "." + key);
    if (it != values_.end() && !it->second.empty()) return true;
    const SchemaEntry* entry = find_entry(section, key);
    return entry && entry->fallback[0] != '\0';
}

std::string ExperimentFile::lookup(const std::string& section, const std::string& key,
                                   bool required) const {
    const SchemaEntry* entry = find_entry(section, key);
    if (!entry) throw ConfigError("internal: key " + section + "." + key + " missing from schema");
    const auto it = values_.find(section + "." + key);
    if (it != values_.end()) return it->second;
    if (required && entry->fallback[0] == '\0')
        throw ConfigError(path_ + ": missing required key `" + key + "` in [" + section + "]");
    return entry->fallback;
}

std::string ExperimentFile::get_string(const std::string& section, const std::string& key) const {
    return lookup(section, key, false);
}

std::string ExperimentFile::require_string(const std::string& section, const std::string& key) const {
    const auto value = lookup(section, key, true);
    if (value.empty())
        throw ConfigError(path_ + ": missing required key `" + key + "` in [" + section + "]");
    return value;
}

namespace {

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value, const char* kind) {
    throw ConfigError("[" + section + "]." + key + ": `" + value + "` is not " + kind);
}

}  // namespace

std::int64_t ExperimentFile::get_int(const std::string& section, const std::string& key) const {
    const auto value = lookup(section, key, false);
    try {
        std::size_t used = 0;
        const auto parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        bad_value(section, key, value, "an integer");
    }
}

std::uint64_t ExperimentFile::get_uint(const std::string& section, const std::string& key) const {
    const auto parsed = get_int(section, key);
    if (parsed < 0) bad_value(section, key, lookup(section, key, false), "a non-negative integer");
    return static_cast<std::uint64_t>(parsed);
}

double ExperimentFile::get_double(const std::string& section, const std::string& key) const {
    const auto value = lookup(section, key, false);
    try {
        std::size_t used = 0;
        const auto parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        bad_value(section, key, value, "a number");
    }
}

bool ExperimentFile::get_bool(const std::string& section, const std::string& key) const {
    const auto value = lookup(section, key, false);
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(section, key, value, "a boolean (true/false)");
}

std::vector<int> ExperimentFile::get_int_list(const std::string& section,
                                              const std::string& key) const {
    const auto value = lookup(section, key, false);
    std::vector<int> out;
    std::istringstream ss(value);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stoi(trim(field)));
        } catch (const std::exception&) {
            bad_value(section, key, value, "a comma-separated integer list");
        }
    }
    if (out.empty()) bad_value(section, key, value, "a comma-separated integer list");
    return out;
}

std::vector<double> ExperimentFile::get_double_list(const std::string& section,
                                                    const std::string& key) const {
    const auto value = lookup(section, key, false);
    std::vector<double> out;
    std::istringstream ss(value);
    std::string field;
    while (std::getline(ss, field, ',')) {
        try {
            out.push_back(std::stod(trim(field)));
        } catch (const std::exception&) {
            bad_value(section, key, value, "a comma-separated number list");
        }
    }
    if (out.empty()) bad_value(section, key, value, "a comma-separated number list");
    return out;
}

void print_explain(std::ostream& out) {
    out << "Experiment file keys (INI sections), with defaults:\n";
    std::string section;
    for (const auto& e : config_schema()) {
        if (section != e.section) {
            section = e.section;
            out << "\n[" << section << "]\n";
        }
        out << "  " << e.key << " = " << (e.fallback[0] ? e.fallback : "<required>") << "\n      "
            << e.description << "\n";
    }
}

}  // namespace qd::cli
