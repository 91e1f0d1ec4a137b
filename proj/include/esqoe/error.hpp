#ifndef ESQOE_ERROR_HPP_
#define ESQOE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace esqoe {

/// Raised for any rejected input: a broken type invariant, a malformed
/// file, or an operation called outside its precondition.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

} // namespace esqoe

#endif
