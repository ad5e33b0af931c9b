#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vdp::cli {

using Json = nlohmann::ordered_json;

/// Bad command line or configuration; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamKind { number, integer, text, number_list, integer_list };

struct ParamSpec {
  std::string key;
  ParamKind kind = ParamKind::number;
  Json desk;   // default value
  Json paper;  // value under --paper-scale; null keeps the desk value
  std::string help;
};

/// A named experiment together with its fully resolved parameters.
struct ExperimentConfig {
  std::string experiment;
  Json params = Json::object();

  [[nodiscard]] double number(std::string_view key) const;
  [[nodiscard]] std::uint64_t integer(std::string_view key) const;
  [[nodiscard]] std::string text(std::string_view key) const;
  [[nodiscard]] std::vector<double> numbers(std::string_view key) const;
  [[nodiscard]] std::vector<std::uint64_t> integers(std::string_view key) const;
};

/// Converts a `--set` value (lists are comma separated) to the kind of `spec`.
/// Throws UsageError naming the key when the text does not parse.
Json parse_value(const ParamSpec& spec, std::string_view text);

/// Checks a JSON value against `spec`, converting integral numbers where a
/// float is expected. Throws UsageError naming the key.
Json coerce_value(const ParamSpec& spec, const Json& value);

/// Defaults (desk or paper scale), then the file's "params", then overrides.
/// Unknown keys in either source throw UsageError.
ExperimentConfig resolve(const std::string& experiment, const std::vector<ParamSpec>& specs, bool paper_scale,
                         const Json& file_params, const std::vector<std::string>& overrides);

}  // namespace vdp::cli
