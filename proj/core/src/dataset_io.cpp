#include "snns/dataset_io.hpp"

#include "snns/binary_io.hpp"
#include "snns/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <vector>

namespace snns {

namespace {

using nlohmann::json;

json vector_json(const Vector& v) {
    json arr = json::array();
    for (double x : v) {
        arr.push_back(x);
    }
    return arr;
}

Vector json_vector(const json& arr, std::size_t expected, const char* what) {
    if (!arr.is_array() || arr.size() != expected) {
        throw FormatError(std::string("sidecar field '") + what + "' has the wrong length");
    }
    Vector v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    }
    return v;
}

}  // namespace

std::filesystem::path matrix_path(const std::filesystem::path& stem) {
    auto p = stem;
    if (p.extension() == ".snns" || p.extension() == ".json") {
        p.replace_extension();
    }
    p += ".snns";
    return p;
}

std::filesystem::path sidecar_path(const std::filesystem::path& stem) {
    auto p = stem;
    if (p.extension() == ".snns" || p.extension() == ".json") {
        p.replace_extension();
    }
    p += ".json";
    return p;
}

void write_matrix_file(const std::filesystem::path& path, const DenseMatrix& m) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot open " + path.string() + " for writing");
    }
    binary::put_magic(out, "SNNS");
    binary::put_u32(out, kMatrixFormatVersion);
    binary::put_u64(out, static_cast<std::uint64_t>(m.rows()));
    binary::put_u64(out, static_cast<std::uint64_t>(m.cols()));
    std::ostringstream body;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            binary::put_f64(body, m(r, c));
        }
    }
    const std::string bytes = body.str();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw FormatError("write failed for " + path.string());
    }
}

DenseMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    binary::expect_magic(in, "SNNS", path.string());
    const std::uint32_t version = binary::get_u32(in);
    if (version > kMatrixFormatVersion) {
        throw FormatError(path.string() + ": matrix format version " + std::to_string(version) +
                          " is newer than supported version " + std::to_string(kMatrixFormatVersion));
    }
    if (version == 0) {
        throw FormatError(path.string() + ": invalid matrix format version 0");
    }
    const std::uint64_t n = binary::get_u64(in);
    const std::uint64_t d = binary::get_u64(in);
    if (n == 0 || d == 0 || n > (1ULL << 32) || d > (1ULL << 24)) {
        throw FormatError(path.string() + ": implausible matrix shape");
    }
    DenseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            m(r, c) = binary::get_f64(in);
        }
    }
    require_finite(m, path.string().c_str());
    return m;
}

std::uint64_t file_content_hash(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::vector<char> buffer(1 << 16);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    while (in) {
        in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        h = binary::fnv1a(buffer.data(), static_cast<std::size_t>(in.gcount()), h);
    }
    return h;
}

DatasetMeta describe(const NoisyInstance& inst, std::string sigma_rule) {
    const auto& p = inst.base.params;
    DatasetMeta meta;
    meta.n = p.n;
    meta.d = p.d;
    meta.k = p.k;
    meta.epsilon = p.epsilon;
    meta.sigma = inst.mode == NoiseMode::adversarial_bounded ? 0.0 : inst.sigma;
    meta.seed = p.seed;
    meta.geometry = std::string(to_string(p.geometry));
    meta.noise_mode = std::string(to_string(inst.mode));
    meta.adversary = std::string(to_string(inst.adversary));
    meta.sigma_rule = std::move(sigma_rule);
    meta.planted_index = inst.base.planted_index;
    meta.q = inst.base.query;
    meta.q_tilde = inst.noisy_query;
    meta.u_basis = inst.base.subspace.basis();
    return meta;
}

std::string sidecar_json(const DatasetMeta& meta) {
    json basis = json::array();
    for (Eigen::Index r = 0; r < meta.u_basis.rows(); ++r) {
        basis.push_back(vector_json(meta.u_basis.row(r).transpose()));
    }
    json doc;
    doc["model"] = {
        {"n", meta.n},
        {"d", meta.d},
        {"k", meta.k},
        {"epsilon", meta.epsilon},
        {"sigma", meta.sigma},
        {"sigma_rule", meta.sigma_rule},
        {"seed", meta.seed},
        {"geometry", meta.geometry},
        {"noise_mode", meta.noise_mode},
        {"adversary", meta.adversary},
    };
    doc["planted_index"] = meta.planted_index;
    doc["q"] = vector_json(meta.q);
    doc["q_tilde"] = vector_json(meta.q_tilde);
    doc["U_basis"] = std::move(basis);
    return doc.dump(1) + "\n";
}

void write_sidecar(const std::filesystem::path& path, const DatasetMeta& meta) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw FormatError("cannot open " + path.string() + " for writing");
    }
    out << sidecar_json(meta);
}

DatasetMeta read_sidecar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
        DatasetMeta meta;
        const json& model = doc.at("model");
        meta.n = model.at("n").get<std::size_t>();
        meta.d = model.at("d").get<std::size_t>();
        meta.k = model.at("k").get<std::size_t>();
        meta.epsilon = model.at("epsilon").get<double>();
        meta.sigma = model.at("sigma").get<double>();
        meta.seed = model.at("seed").get<std::uint64_t>();
        meta.geometry = model.at("geometry").get<std::string>();
        meta.noise_mode = model.at("noise_mode").get<std::string>();
        meta.adversary = model.value("adversary", std::string("none"));
        meta.sigma_rule = model.value("sigma_rule", std::string("explicit"));
        meta.planted_index = doc.at("planted_index").get<std::size_t>();
        meta.q = json_vector(doc.at("q"), meta.d, "q");
        meta.q_tilde = json_vector(doc.at("q_tilde"), meta.d, "q_tilde");
        const json& basis = doc.at("U_basis");
        if (!basis.is_array() || basis.size() != meta.k) {
            throw FormatError("sidecar field 'U_basis' must have k rows");
        }
        meta.u_basis = DenseMatrix(static_cast<Eigen::Index>(meta.k), static_cast<Eigen::Index>(meta.d));
        for (std::size_t r = 0; r < meta.k; ++r) {
            meta.u_basis.row(static_cast<Eigen::Index>(r)) = json_vector(basis[r], meta.d, "U_basis").transpose();
        }
        return meta;
    } catch (const json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace snns
