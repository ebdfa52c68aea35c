#pragma once

#include <filesystem>
#include <iosfwd>

#include "accd/data/dataset.hpp"

namespace accd::data {

/// Declared element type. Storage is float64 regardless; float32 rounds each value
/// through float on load.
enum class StorageType { Float64, Float32 };

/// Comma-separated decimals with an optional single header row. A first row is a
/// header iff at least one of its cells does not parse as a number.
Dataset load_csv(const std::filesystem::path& path, StorageType type = StorageType::Float64);
Dataset parse_csv(std::istream& in, StorageType type = StorageType::Float64);

void write_csv(std::ostream& out, const Dataset& ds);

}  // namespace accd::data
