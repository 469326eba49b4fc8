/*
 * Copyright 2026 The consol Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace consol {

enum class Errc {
  NonPositiveSize,
  RequestLargerThanFile,
  OffGridValue,
  InvalidProfile,
  InvalidParams,
  NonPositiveRuntime,
  NonPositiveObservation,
  DegradationOutOfRange,
  SelfDegradation,
  DuplicateWorkload,
  UnknownWorkload,
  SearchSpaceTooLarge,
  MalformedTable,
  GridMismatch,
  InconsistentInitialState,
  UnknownSequence,
  InvalidConfig,
  Io,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// front ends can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace consol
