// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgqed {

/// Failure categories. The CLI maps every kind except `invalid_argument`
/// to exit code 3 (numerical failure).
enum class ErrorKind {
    invalid_argument,
    invalid_state,
    domain,
    degenerate_probe,
    out_of_range,
    inconsistent_data,
    no_maximum,
    zero_detuning,
    non_convergence,
    step_failure,
    norm_drift,
    low_probability,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument: return "invalid_argument";
        case ErrorKind::invalid_state: return "invalid_state";
        case ErrorKind::domain: return "domain";
        case ErrorKind::degenerate_probe: return "degenerate_probe";
        case ErrorKind::out_of_range: return "out_of_range";
        case ErrorKind::inconsistent_data: return "inconsistent_data";
        case ErrorKind::no_maximum: return "no_maximum";
        case ErrorKind::zero_detuning: return "zero_detuning";
        case ErrorKind::non_convergence: return "non_convergence";
        case ErrorKind::step_failure: return "step_failure";
        case ErrorKind::norm_drift: return "norm_drift";
        case ErrorKind::low_probability: return "low_probability";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace wgqed
