#include "bvarx/errors.hpp"

namespace bvarx {

Error::Error(ErrorKind kind, std::string module, const std::string& message)
    : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

std::string Error::code() const {
  switch (kind_) {
    case ErrorKind::Config:
      return "config";
    case ErrorKind::Data:
      return "data";
    case ErrorKind::Numerical:
      return "numerical";
  }
  return "unknown";
}

}  // namespace bvarx
