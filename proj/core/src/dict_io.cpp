#include "srlab/dict.hpp"

#include "srlab/error.hpp"

#include <json.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace srlab {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'R', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const auto bits = std::bit_cast<U>(value);
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t i = 0; i < sizeof(U); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffU);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  std::array<unsigned char, sizeof(U)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error(Errc::io_error, "truncated dictionary file");
  U bits = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
  return std::bit_cast<T>(bits);
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto out = path;
  out += ".json";
  return out;
}

void save_dictionary(const std::filesystem::path& path, const Dictionary& dict, const DictionaryInfo& info) {
  if (dict.dim() > static_cast<Index>(std::numeric_limits<std::uint32_t>::max())) {
    throw Error(Errc::size_overflow, "dimension does not fit in u32");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, "cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(dict.dim()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(dict.size()));
  const Matrix& atoms = dict.atoms();
  for (Index m = 0; m < atoms.cols(); ++m) {
    for (Index i = 0; i < atoms.rows(); ++i) put_le<double>(out, atoms(i, m));
  }
  if (!out) throw Error(Errc::io_error, "write failed for " + path.string());

  nlohmann::json meta;
  meta["format"] = "SRLD";
  meta["version"] = kVersion;
  meta["generator"] = info.generator;
  meta["n"] = dict.dim();
  meta["M"] = dict.size();
  meta["seed"] = info.seed;
  if (info.rate) meta["rate"] = *info.rate;
  std::ofstream side(sidecar_path(path), std::ios::trunc);
  if (!side) throw Error(Errc::io_error, "cannot open sidecar for " + path.string());
  side << meta.dump(2) << '\n';
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(Errc::io_error, path.string() + " is not an SRLD file");
  const auto version = get_le<std::uint32_t>(in);
  if (version != kVersion) throw Error(Errc::io_error, "unsupported SRLD version " + std::to_string(version));
  const auto n = get_le<std::uint32_t>(in);
  const auto M = get_le<std::uint64_t>(in);
  if (n == 0 || M == 0) throw Error(Errc::empty_dictionary, "empty dictionary in " + path.string());
  if (dictionary_bytes(n, M) > default_budget_bytes()) throw Error(Errc::size_overflow, "dictionary exceeds budget");

  Matrix atoms(static_cast<Index>(n), static_cast<Index>(M));
  for (Index m = 0; m < atoms.cols(); ++m) {
    for (Index i = 0; i < atoms.rows(); ++i) atoms(i, m) = get_le<double>(in);
  }
  bool unit = true;
  for (Index m = 0; m < atoms.cols() && unit; ++m) {
    unit = std::abs(atoms.col(m).squaredNorm() - 1.0) <= Dictionary::kUnitTolerance;
  }
  return Dictionary(std::move(atoms), unit ? AtomNorm::unit : AtomNorm::any);
}

DictionaryInfo load_dictionary_info(const std::filesystem::path& path) {
  std::ifstream in(sidecar_path(path));
  if (!in) throw Error(Errc::io_error, "cannot open sidecar for " + path.string());
  nlohmann::json meta;
  try {
    in >> meta;
    DictionaryInfo info;
    info.generator = meta.at("generator").get<std::string>();
    info.n = meta.at("n").get<Index>();
    info.size = meta.at("M").get<std::uint64_t>();
    info.seed = meta.at("seed").get<std::uint64_t>();
    if (meta.contains("rate")) info.rate = meta.at("rate").get<double>();
    return info;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_error, std::string("bad sidecar: ") + e.what());
  }
}

}  // namespace srlab
