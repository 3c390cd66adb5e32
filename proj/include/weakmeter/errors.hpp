// Copyright 2026 The weakmeter authors
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

#include <stdexcept>
#include <string>

namespace weakmeter {

// Base of the library's error taxonomy. Every error carries a stable process
// exit code so the CLI can surface failure categories distinctly.
class Error : public std::runtime_error {
  public:
    Error(const std::string& what, int exit_code)
        : std::runtime_error(what), exit_code_(exit_code) {}

    int exit_code() const noexcept { return exit_code_; }

  private:
    int exit_code_;
};

// Exit codes 10..18, one per category.
struct InvalidRatio final : Error {
    explicit InvalidRatio(const std::string& what) : Error(what, 10) {}
};

struct GridTooNarrow final : Error {
    explicit GridTooNarrow(const std::string& what) : Error(what, 11) {}
};

// Pre- and post-selection admit (essentially) no accepted runs; means and
// weights are undefined.
struct BlockedTransition final : Error {
    explicit BlockedTransition(const std::string& what) : Error(what, 12) {}
};

// The (coherent) sum of route amplitudes vanishes, so weak values diverge.
struct OrthogonalSelection final : Error {
    explicit OrthogonalSelection(const std::string& what) : Error(what, 13) {}
};

struct SingularTarget final : Error {
    explicit SingularTarget(const std::string& what) : Error(what, 14) {}
};

struct WeightsNotNormalized final : Error {
    explicit WeightsNotNormalized(const std::string& what) : Error(what, 15) {}
};

struct NoPostSelectedEvents final : Error {
    explicit NoPostSelectedEvents(const std::string& what) : Error(what, 16) {}
};

struct ZeroLambda final : Error {
    explicit ZeroLambda(const std::string& what) : Error(what, 17) {}
};

struct AcceptanceTooLow final : Error {
    explicit AcceptanceTooLow(const std::string& what) : Error(what, 18) {}
};

}  // namespace weakmeter
