#pragma once

#include <string>
#include <vector>

#include "whsim/simulation.hpp"

namespace whsim {

// Scenario files are YAML. Every key is optional and defaults to the value
// in the corresponding struct; unknown keys are rejected with their path.
Scenario parse_scenario(const std::string& text, const std::string& origin = "<text>");
Scenario load_scenario(const std::string& path);

// Emits every field, so parse_scenario(dump_scenario(s)) == s.
std::string dump_scenario(const Scenario& s);

// A bundle carries a `base` mapping and a `scenarios` list; each entry is
// deep-merged over the base (mappings merge, anything else replaces).
struct Bundle {
  std::string name;
  std::vector<Scenario> scenarios;
};
Bundle parse_bundle(const std::string& text, const std::string& origin = "<text>");

// Reads a file holding either one scenario or a bundle.
Bundle load_scenarios(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace whsim
