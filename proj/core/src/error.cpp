#include "samgsr/error.hpp"

namespace samgsr {

ParseError::ParseError(std::string path, std::size_t line, std::size_t column, const std::string& what)
    : Error(path + (line > 0 ? ":" + std::to_string(line) : std::string()) +
            (column > 0 ? ":" + std::to_string(column) : std::string()) + ": " + what),
      path_(std::move(path)),
      line_(line),
      column_(column) {}

}  // namespace samgsr
