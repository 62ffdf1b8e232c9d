#pragma once

#include "snns/iterpca.hpp"
#include "snns/pcatree.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <variant>

namespace snns {

/// Index container: "SNIX", u32 version, u32 kind, u64 dataset hash,
/// u64 n, u64 d, then a kind-specific payload (all little-endian).
inline constexpr std::uint32_t kIndexFormatVersion = 1;

enum class IndexKind : std::uint32_t { warmup = 1, iterpca = 2, pcatree = 3 };

struct IndexHeader {
    IndexKind kind = IndexKind::iterpca;
    std::uint32_t version = kIndexFormatVersion;
    std::uint64_t dataset_hash = 0;
    std::uint64_t n = 0;
    std::uint64_t d = 0;
};

using AnyIndex = std::variant<IterPcaIndex, PcaTree>;

void write_index(std::ostream& out, const IterPcaIndex& index, std::uint64_t dataset_hash);
void write_index(std::ostream& out, const PcaTree& tree, std::uint64_t dataset_hash);
void write_index_file(const std::filesystem::path& path, const AnyIndex& index, std::uint64_t dataset_hash);

IndexHeader read_index_header(std::istream& in);

/// Reads an index and binds it to `points`. Throws FormatError when the
/// stored dataset hash differs from `dataset_hash` or the shape mismatches.
AnyIndex read_index(std::istream& in, DenseMatrix points, std::uint64_t dataset_hash);
AnyIndex read_index_file(const std::filesystem::path& path, DenseMatrix points, std::uint64_t dataset_hash);

}  // namespace snns
