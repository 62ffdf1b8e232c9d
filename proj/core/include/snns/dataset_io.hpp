#pragma once

#include "snns/genmodel.hpp"
#include "snns/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace snns {

/// Matrix file: "SNNS", u32 version (1), u64 n, u64 d, then n*d float64,
/// everything little-endian, row-major.
inline constexpr std::uint32_t kMatrixFormatVersion = 1;

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m);
DenseMatrix read_matrix_file(const std::filesystem::path& path);

/// 64-bit FNV-1a over the file's bytes; binds index files to their dataset.
std::uint64_t file_content_hash(const std::filesystem::path& path);

/// Contents of the JSON sidecar that accompanies a generated matrix file.
struct DatasetMeta {
    std::size_t n = 0;
    std::size_t d = 0;
    std::size_t k = 0;
    double epsilon = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    std::string geometry;
    std::string noise_mode;
    std::string adversary = "none";
    std::string sigma_rule = "explicit";
    std::size_t planted_index = 0;
    Vector q;
    Vector q_tilde;
    DenseMatrix u_basis;
};

DatasetMeta describe(const NoisyInstance& inst, std::string sigma_rule);

std::string sidecar_json(const DatasetMeta& meta);
void write_sidecar(const std::filesystem::path& path, const DatasetMeta& meta);
DatasetMeta read_sidecar(const std::filesystem::path& path);

/// `<stem>.snns` and `<stem>.json`.
std::filesystem::path matrix_path(const std::filesystem::path& stem);
std::filesystem::path sidecar_path(const std::filesystem::path& stem);

}  // namespace snns
