// clustercap: uplink throughput of clustered multicell joint decoding
// Copyright (C) 2026 clustercap developers
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

#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace clustercap {

enum class ErrorCode {
  InvalidParameter,
  IllConditionedChannel,
  PoleEncountered,
  NoPhysicalRoot,
  NonFiniteLogDet,
  UnmatchedPair,
  EmptyInput,
  Io,
  Parse,
};

/// Library exception. Every failure carries a code so the C layer can map it
/// onto a status value without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Intercluster-interference regime.
enum class SchemeKind { GlobalMJD, IA, RDMA, CI };

inline constexpr std::array<SchemeKind, 4> kAllSchemes = {
    SchemeKind::GlobalMJD, SchemeKind::IA, SchemeKind::RDMA, SchemeKind::CI};

enum class Route { Analytic, MonteCarlo };

std::string_view to_string(SchemeKind s);
std::string_view to_string(Route r);
SchemeKind parse_scheme(std::string_view text);
Route parse_route(std::string_view text);

} // namespace clustercap
