#include "spiralq/error.hpp"

#include <utility>

namespace spiralq {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "invalid specification:";
    for (const auto& s : v) {
        out += "\n  - ";
        out += s;
    }
    return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

ParseError::ParseError(const std::string& what, std::size_t line, std::string source)
    : Error((source.empty() ? std::string{} : source + (line > 0 ? ":" : ": ")) +
            (line > 0 ? std::to_string(line) + ": " : std::string{}) + what),
      line_(line),
      source_(std::move(source)) {}

StabilityError::StabilityError(const std::string& what, std::vector<std::string> free_dofs)
    : Error(what), free_dofs_(std::move(free_dofs)) {}

}  // namespace spiralq
