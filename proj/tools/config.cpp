#include "config.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace vdp::cli {

namespace {

const Json& lookup(const Json& params, std::string_view key) {
  const auto it = params.find(std::string(key));
  if (it == params.end()) throw UsageError("missing parameter '" + std::string(key) + "'");
  return *it;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw UsageError("parameter '" + key + "': '" + std::string(text) + "' is not a finite number");
  }
  return v;
}

std::uint64_t parse_integer(const std::string& key, std::string_view text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw UsageError("parameter '" + key + "': '" + std::string(text) + "' is not a non-negative integer");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Json coerce_scalar(const std::string& key, ParamKind kind, const Json& v) {
  if (kind == ParamKind::number) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw UsageError("parameter '" + key + "' expects a finite number");
    }
    return v.get<double>();
  }
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
  throw UsageError("parameter '" + key + "' expects a non-negative integer");
}

}  // namespace

double ExperimentConfig::number(std::string_view key) const { return lookup(params, key).get<double>(); }
std::uint64_t ExperimentConfig::integer(std::string_view key) const {
  return lookup(params, key).get<std::uint64_t>();
}
std::string ExperimentConfig::text(std::string_view key) const { return lookup(params, key).get<std::string>(); }
std::vector<double> ExperimentConfig::numbers(std::string_view key) const {
  return lookup(params, key).get<std::vector<double>>();
}
std::vector<std::uint64_t> ExperimentConfig::integers(std::string_view key) const {
  return lookup(params, key).get<std::vector<std::uint64_t>>();
}

Json parse_value(const ParamSpec& spec, std::string_view text) {
  switch (spec.kind) {
    case ParamKind::number:
      return parse_number(spec.key, text);
    case ParamKind::integer:
      return parse_integer(spec.key, text);
    case ParamKind::text:
      return trim(text);
    case ParamKind::number_list: {
      Json out = Json::array();
      for (auto item : split(text)) out.push_back(parse_number(spec.key, item));
      return out;
    }
    case ParamKind::integer_list: {
      Json out = Json::array();
      for (auto item : split(text)) out.push_back(parse_integer(spec.key, item));
      return out;
    }
  }
  throw UsageError("parameter '" + spec.key + "' has an unknown kind");
}

Json coerce_value(const ParamSpec& spec, const Json& value) {
  switch (spec.kind) {
    case ParamKind::number:
    case ParamKind::integer:
      return coerce_scalar(spec.key, spec.kind, value);
    case ParamKind::text:
      if (!value.is_string()) throw UsageError("parameter '" + spec.key + "' expects a string");
      return value;
    case ParamKind::number_list:
    case ParamKind::integer_list: {
      if (!value.is_array()) throw UsageError("parameter '" + spec.key + "' expects a list");
      const ParamKind item = spec.kind == ParamKind::number_list ? ParamKind::number : ParamKind::integer;
      Json out = Json::array();
      for (const auto& v : value) out.push_back(coerce_scalar(spec.key, item, v));
      return out;
    }
  }
  throw UsageError("parameter '" + spec.key + "' has an unknown kind");
}

ExperimentConfig resolve(const std::string& experiment, const std::vector<ParamSpec>& specs, bool paper_scale,
                         const Json& file_params, const std::vector<std::string>& overrides) {
  auto find_spec = [&](const std::string& key) -> const ParamSpec& {
    for (const auto& s : specs) {
      if (s.key == key) return s;
    }
    throw UsageError("unknown parameter '" + key + "' for experiment '" + experiment + "'");
  };

  ExperimentConfig cfg;
  cfg.experiment = experiment;
  for (const auto& s : specs) cfg.params[s.key] = paper_scale && !s.paper.is_null() ? s.paper : s.desk;

  if (!file_params.is_null()) {
    if (!file_params.is_object()) throw UsageError("config 'params' must be an object");
    for (const auto& [key, value] : file_params.items()) cfg.params[key] = coerce_value(find_spec(key), value);
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("override '" + item + "' is not of the form key=value");
    const std::string key = trim(std::string_view(item).substr(0, eq));
    cfg.params[key] = parse_value(find_spec(key), std::string_view(item).substr(eq + 1));
  }
  return cfg;
}

}  // namespace vdp::cli
