// SPDX-License-Identifier: Apache-2.0
//
// nearfield - near-field / far-field transition distances for uniform linear arrays
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

#ifndef NEARFIELD_ERRORS_HPP
#define NEARFIELD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nearfield
{
    // Base class of every error raised by the library
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Input violates a type invariant (bad frequency, negative tolerance, unknown JSON key, ...)
    class ValidationError : public Error
    {
    public:
        using Error::Error;
    };

    // The source coincides with an array element (R_n = 0)
    class DegenerateGeometry : public Error
    {
    public:
        using Error::Error;
    };

    // A numeric argument lies outside the domain of a formula (e.g. arccos argument, eta outside [0,1])
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    // Envelope search still sees tolerance violations at the end of its scan horizon
    class HorizonExceeded : public Error
    {
    public:
        using Error::Error;
    };

    class UnknownPreset : public Error
    {
    public:
        using Error::Error;
    };
}

#endif
