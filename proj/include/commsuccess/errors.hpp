#pragma once

#include <stdexcept>
#include <string>

namespace commsuccess {

// Exit-code mapping lives in the CLI: ConfigError -> 2, DataError -> 3,
// DegenerateError -> 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace commsuccess
