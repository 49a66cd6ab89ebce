#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "habitsim/types.hpp"

namespace habitsim {

// Scenario plan parsed from the config file.
struct RunManifest {
    std::string config_path;
    bool no_lockdown = false;
    bool no_habits = false;
    std::vector<double> unanticipated_durations;  // [lockdown] durations
    std::vector<double> anticipated_T;            // [anticipated] T
    std::vector<double> random_delta;             // [anticipated] delta
    bool labor_shift = false;                     // [labor_shift] present
    std::optional<double> labor_shift_xi_new;     // explicit new share, else permanent a_realloc
    double dt = 0.01;
    std::optional<double> horizon;  // defaults to ten e-folds of the stable mode
    std::string out_dir = "out";

    std::vector<std::string> scenario_names() const;
};

// Raw sections of a key-value config file: [section] followed by key = value
// lines; '#' and ';' start comments.
using ConfigSections = std::map<std::string, std::map<std::string, std::string>>;

ConfigSections parse_ini(const std::string& text);

// Parse + validate a full model configuration and scenario manifest.
// [utility], [technology], [household], [initial] are mandatory, and every
// utility coefficient must be present (no defaults).  Throws ConfigError.
struct ParsedConfig {
    ModelConfig model;
    RunManifest manifest;
};

ParsedConfig load_config_text(const std::string& text, const std::string& origin = "<string>");
ParsedConfig load_config_file(const std::string& path);

}  // namespace habitsim
