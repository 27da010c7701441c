// Copyright 2026 The aiik Authors
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

#ifndef AIIK_ERRORS_HPP_
#define AIIK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace aiik {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AIIK_DEFINE_ERROR(Name)            \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

AIIK_DEFINE_ERROR(NotSkew);
AIIK_DEFINE_ERROR(AngleAtPi);
AIIK_DEFINE_ERROR(DimensionMismatch);
AIIK_DEFINE_ERROR(InvalidModel);
AIIK_DEFINE_ERROR(SingularUndamped);
AIIK_DEFINE_ERROR(RankDeficient);
AIIK_DEFINE_ERROR(NotSPD);
AIIK_DEFINE_ERROR(NotOrthonormal);
AIIK_DEFINE_ERROR(InvalidBasis);
AIIK_DEFINE_ERROR(DegeneratePerturbation);
AIIK_DEFINE_ERROR(UnsupportedOrder);
AIIK_DEFINE_ERROR(StartNotSingular);
AIIK_DEFINE_ERROR(ModelLoadError);
AIIK_DEFINE_ERROR(ConfigError);
AIIK_DEFINE_ERROR(IoError);

#undef AIIK_DEFINE_ERROR

}  // namespace aiik

#endif  // AIIK_ERRORS_HPP_
