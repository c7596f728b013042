#pragma once

#include <stdexcept>
#include <string>

namespace trollscope {

// Bad or insufficient input data. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public DataError {
 public:
  using DataError::DataError;
};

class EmptyCorpusError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace trollscope
