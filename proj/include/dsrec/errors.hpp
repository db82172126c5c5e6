#pragma once

#include <stdexcept>
#include <string>

namespace dsrec {

/// Problems with input data: unreadable files, broken formats, inconsistent
/// references. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dsrec
