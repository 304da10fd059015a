#pragma once

#include <stdexcept>
#include <string>

namespace ctrlpower {

/// Raised when input data (registry rows, series, macro files) cannot be used.
/// Precondition violations on direct API calls use std::invalid_argument.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ctrlpower
