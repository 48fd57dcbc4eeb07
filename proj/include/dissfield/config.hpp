// config.hpp — INI run configuration: schema, validation and typed section builders
//
// Every key has a schema entry; unknown sections or keys are rejected. Values that
// hold lists accept "a, b, c" or "linspace(a, b, n)".

#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dissfield/correlators.hpp"
#include "dissfield/langevin.hpp"
#include "dissfield/thermo.hpp"

namespace dissfield {

struct SchemaField {
    const char* section;
    const char* key;
    const char* default_value;  // nullptr: required when the section is used
    const char* description;
};

const std::vector<SchemaField>& config_schema();

class RunConfig {
public:
    using Section = std::map<std::string, std::string>;

    static RunConfig parse(std::istream& in, std::filesystem::path base_dir = ".");
    static RunConfig load(const std::filesystem::path& path);

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }
    const std::map<std::string, Section>& sections() const { return sections_; }
    const std::filesystem::path& base_dir() const { return base_dir_; }

    // Throw Error{ConfigInvalid} naming "section.key" on a missing or malformed value.
    std::optional<std::string> raw(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;
    void require_section(const std::string& section) const;

    // "section.key=value" lines in sorted order, defaults not materialised.
    std::string normalized() const;
    // SHA-256 of normalized(), hex encoded.
    std::string digest() const;

private:
    std::map<std::string, Section> sections_;
    std::filesystem::path base_dir_;
};

struct Constants {
    double hbar{1.0};
    double kB{1.0};
};

SusceptibilityModel build_model(const RunConfig& cfg);
ModeContext build_mode(const RunConfig& cfg);
Constants build_constants(const RunConfig& cfg);
ResponseEvaluator build_evaluator(const RunConfig& cfg);

struct KKSettings {
    std::vector<double> omega;
    double threshold;
};
KKSettings build_kk(const RunConfig& cfg);

struct GreensSettings {
    std::vector<double> omega;
    double sum_rule_tolerance;
};
GreensSettings build_greens(const RunConfig& cfg);

struct ThermoSettings {
    std::vector<double> T;
    ThermoIntegrationSpec integration;
    double consistency_threshold;
};
ThermoSettings build_thermo(const RunConfig& cfg);

struct CorrelateSettings {
    double T;  // 0 selects the vacuum
    SeparationGrid grid;
};
CorrelateSettings build_correlate(const RunConfig& cfg);
std::optional<CoherentAmplitude> build_coherent(const RunConfig& cfg);

struct LangevinSettings {
    LangevinConfig config;
    std::int64_t dump_trajectories;
};
LangevinSettings build_langevin(const RunConfig& cfg);

enum class OutputFormat { csv, json };
struct OutputSettings {
    std::filesystem::path directory;
    OutputFormat format;
};
OutputSettings build_output(const RunConfig& cfg);

// 0 selects std::thread::hardware_concurrency().
int build_threads(const RunConfig& cfg);

} // namespace dissfield
