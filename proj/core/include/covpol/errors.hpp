// Copyright 2026 The covpol authors
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

#ifndef COVPOL_ERRORS_HPP
#define COVPOL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace covpol {

/// Invalid input data, configuration or argument values.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string &what) : std::runtime_error(what) {}
};

/// Filesystem problems: missing files, unreadable or unwritable paths.
class IoError : public std::runtime_error {
  public:
    explicit IoError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace covpol

#endif // COVPOL_ERRORS_HPP
