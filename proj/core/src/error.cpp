#include "srlab/error.hpp"

namespace srlab {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_signal: return "InvalidSignal";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_dictionary: return "EmptyDictionary";
    case Errc::size_overflow: return "SizeOverflow";
    case Errc::rank_deficient: return "RankDeficient";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::domain_error: return "DomainError";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::io_error: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), index_(index) {}

}  // namespace srlab
