// Copyright 2026 The ornn Authors.
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

#ifndef ORNN_CONFIG_H_
#define ORNN_CONFIG_H_

#include <iosfwd>
#include <map>
#include <string>

namespace ornn {

// Flat key=value configuration. '#' starts a comment; surrounding whitespace
// is trimmed; later keys override earlier ones.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap ParseConfig(std::istream& in);
ConfigMap LoadConfig(const std::string& path);

}  // namespace ornn

#endif  // ORNN_CONFIG_H_
