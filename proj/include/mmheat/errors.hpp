#pragma once

#include <stdexcept>
#include <string>

namespace mmheat {

// Precondition violations throw std::invalid_argument / std::out_of_range.
// NumericalError is reserved for computations that lose finiteness or fail to
// produce a usable result on valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mmheat
