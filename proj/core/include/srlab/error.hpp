#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace srlab {

enum class Errc {
  invalid_signal,
  dimension_mismatch,
  empty_dictionary,
  size_overflow,
  rank_deficient,
  budget_exceeded,
  invalid_params,
  domain_error,
  index_out_of_range,
  schema_mismatch,
  invalid_config,
  io_error,
};

const char* to_string(Errc code) noexcept;

/// Exception carrying a machine-readable code. `index()` names the offending
/// element when one exists (e.g. the dependent atom for rank_deficient).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::size_t> index = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  Errc code_;
  std::optional<std::size_t> index_;
};

}  // namespace srlab
