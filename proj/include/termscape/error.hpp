#ifndef TERMSCAPE_ERROR_HPP
#define TERMSCAPE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace termscape {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind { config = 2, input = 3, stage = 4 };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct InputError : Error {
  explicit InputError(const std::string& what) : Error(ErrorKind::input, what) {}
};

struct StageError : Error {
  explicit StageError(const std::string& what) : Error(ErrorKind::stage, what) {}
};

}  // namespace termscape

#endif
