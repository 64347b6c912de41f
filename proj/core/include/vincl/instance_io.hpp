#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "vincl/operator.hpp"

namespace vincl {

/// Malformed instance document. `field` is a JSON pointer ("/F/P/1") when the
/// problem is structural; `line`/`column` are set for syntax errors.
class ParseError : public Error {
public:
  ParseError(const std::string& message, std::string field, std::optional<std::size_t> line = {},
             std::optional<std::size_t> column = {});

  const std::string& field() const noexcept { return field_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  std::optional<std::size_t> column() const noexcept { return column_; }

private:
  std::string field_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> column_;
};

/// Instance document:
///
///   { "name": "...", "dim": 2, "q": 2, "c_q": 1, "rho": 0.35, "omega": [0, 0],
///     "A": {"matrix": 0.1}, "f": {"matrix": [[0.5, -1.3], [1.3, 0.5]], "offset": [0, 0]},
///     "F": {"P": 0.25, "Q": 0.2}, "H": "additive", "M": "f-minus-g",
///     "S": "identity",
///     "T": {"branches": [{"matrix": 0.5}]}  |  {"grid": [{"node": [..], "values": [[..], ..]}]},
///     "constants": {"mu1": 10, ...} }
///
/// A matrix is a scalar (multiple of the identity) or a dim x dim array of rows.
/// Omitted maps are zero, omitted offsets are zero, S and T default to identity.
InclusionInstance instance_from_json(const nlohmann::json& doc);
InclusionInstance parse_instance(std::string_view text);
InclusionInstance load_instance_file(const std::filesystem::path& path);

/// Throws Error(invalid_argument) for black-box constituents.
nlohmann::json instance_to_json(const InclusionInstance& inst);

}  // namespace vincl
