/*
 * Copyright 2026 The simcomb Authors
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

#include "simcomb/error.hpp"

namespace simcomb {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::Decode: return "decode error";
    case ErrorCode::Alignment: return "alignment error";
    case ErrorCode::Size: return "size error";
    case ErrorCode::Config: return "configuration error";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Malformed: return "malformed input";
    case ErrorCode::Incomplete: return "incomplete input";
    case ErrorCode::Undefined: return "undefined result";
  }
  return "unknown error";
}

}  // namespace simcomb
