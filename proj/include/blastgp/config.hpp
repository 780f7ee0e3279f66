// Copyright 2026 The blastgp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace blastgp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text. `#` starts a comment; blank lines are ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& source = "<stream>");
KeyValues read_key_values_file(const std::string& path);
void write_key_values(std::ostream& out, const KeyValues& kv);

double kv_double(const KeyValues& kv, const std::string& key, double fallback);
long long kv_int(const KeyValues& kv, const std::string& key, long long fallback);
bool kv_bool(const KeyValues& kv, const std::string& key, bool fallback);
std::string kv_string(const KeyValues& kv, const std::string& key, const std::string& fallback);

}  // namespace blastgp
