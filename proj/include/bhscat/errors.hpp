// Error taxonomy shared by the library and the command-line driver.
// Each category maps to a distinct process exit code.
#pragma once

#include <stdexcept>
#include <string>

namespace bhscat {

enum class ErrorKind {
  config = 2,       // invalid parameters / malformed configuration
  io = 3,           // unreadable or unwritable paths
  quality = 4,      // a numerical quality gate failed (tolerance exceeded)
  convergence = 5,  // an iterative scheme failed to converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& m) : Error(ErrorKind::config, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};
struct QualityError : Error {
  explicit QualityError(const std::string& m) : Error(ErrorKind::quality, m) {}
};
struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& m) : Error(ErrorKind::convergence, m) {}
};

}  // namespace bhscat
