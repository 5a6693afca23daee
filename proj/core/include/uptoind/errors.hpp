/*
 * Copyright 2026 The uptoind authors
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

#ifndef UPTOIND_ERRORS_HPP
#define UPTOIND_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uptoind {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed textual input. Line and column are 1-based; column 0 means
// "whole line".
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t column = 0)
        : Error(format(msg, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& msg, std::size_t line, std::size_t column) {
        std::string s = "parse error at line " + std::to_string(line);
        if (column > 0) s += ", column " + std::to_string(column);
        s += ": " + msg;
        return s;
    }

    std::size_t line_;
    std::size_t column_;
};

// A computation hit a configured resource cap. The result is "undecided at
// this scale", never a wrong answer.
class CapExceeded : public Error {
public:
    using Error::Error;
};

// A lazily generated chain of relations failed its decrease or dimension
// invariant on access.
class ChainError : public Error {
public:
    using Error::Error;
};

// A function declared monotone was caught violating monotonicity during a
// spot check.
class MonotonicityError : public Error {
public:
    using Error::Error;
};

// A name used by an up-to term has no binding in the evaluation environment,
// or the environment lacks a facility the term needs.
class EnvError : public Error {
public:
    using Error::Error;
};

}  // namespace uptoind

#endif
