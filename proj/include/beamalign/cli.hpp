// SPDX-License-Identifier: Apache-2.0
//
// beamalign: beam-alignment training analysis and simulation
// Copyright (C) 2026 The beamalign authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef BEAMALIGN_CLI_HPP
#define BEAMALIGN_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace beamalign::cli
{

/// Bad flag, unreadable file, unknown key or malformed value. Maps to exit status 1.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

enum ExitStatus : int
{
    exit_ok = 0,
    exit_config_error = 1,
    exit_infeasible = 2,
};

/// Flat configuration: every value is kept in its textual form.
using KeyValues = std::map<std::string, std::string>;

struct RunConfig
{
    std::string subcommand; ///< bounds, simulate, sweep or figure
    std::string figure_id;  ///< figure subcommand only
    std::optional<std::string> config_path;
    std::vector<std::string> overrides; ///< "key=value", applied left to right
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> trials;
};

const std::vector<std::string>& known_keys();

/// Baseline keys for a subcommand (figure presets included).
KeyValues default_keys(const std::string& subcommand, const std::string& figure_id);

/*!
 * Reads "key = value" lines ('#' starts a comment) or a JSON object. A JSON
 * run manifest is accepted too: its "config" member is used.
 */
KeyValues read_config_file(const std::string& path);

/// Applies one "key=value" override; aliases are folded into canonical keys.
void apply_override(KeyValues& keys, const std::string& assignment);

/// Preset, then config file, then overrides, then --seed / --trials.
KeyValues resolve_keys(const RunConfig& cfg);

/// Runs a parsed configuration and writes its artifacts.
int run(const RunConfig& cfg, std::ostream& log);

/// Full command-line entry point.
int main_entry(int argc, char** argv);

/// Parses "1,2,5", "a:b" (inclusive) or "a:b:step", in any comma-separated mix.
std::vector<unsigned> parse_uint_list(const std::string& text, const std::string& key);

} // namespace beamalign::cli

#endif
