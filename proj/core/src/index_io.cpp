#include "snns/index_io.hpp"

#include "snns/binary_io.hpp"
#include "snns/error.hpp"

#include <fstream>
#include <sstream>

namespace snns {

namespace {

using namespace binary;

void put_ids(std::ostream& out, const std::vector<PointId>& ids) {
    put_u64(out, ids.size());
    for (PointId id : ids) put_u64(out, id);
}

std::vector<PointId> get_ids(std::istream& in, std::uint64_t n) {
    const std::uint64_t count = get_u64(in);
    if (count > n) {
        throw FormatError("index id list longer than the dataset");
    }
    std::vector<PointId> ids(count);
    for (auto& id : ids) {
        id = get_u64(in);
        if (id >= n) throw FormatError("index id out of range");
    }
    return ids;
}

void put_header(std::ostream& out, IndexKind kind, std::uint64_t hash, const DenseMatrix& points) {
    put_magic(out, "SNIX");
    put_u32(out, kIndexFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(kind));
    put_u64(out, hash);
    put_u64(out, static_cast<std::uint64_t>(points.rows()));
    put_u64(out, static_cast<std::uint64_t>(points.cols()));
}

IterPcaIndex read_iterpca_payload(std::istream& in, const IndexHeader& h, DenseMatrix points) {
    IterPcaParams p;
    p.epsilon = get_f64(in);
    p.sigma = get_f64(in);
    p.k = get_u64(in);
    p.sample_size = get_u64(in);
    p.c_threshold = get_f64(in);
    p.c_iter = get_f64(in);
    p.seed = get_u64(in);
    p.capture_mode = get_u32(in) == 0 ? CaptureMode::threshold_psi : CaptureMode::fraction_eta;
    p.eta = get_f64(in);
    const std::uint64_t layer_count = get_u64(in);
    if (layer_count > h.n) throw FormatError("implausible layer count");
    std::vector<std::pair<Subspace, std::vector<PointId>>> layers;
    for (std::uint64_t l = 0; l < layer_count; ++l) {
        const std::uint64_t m = get_u64(in);
        if (m > h.d) throw FormatError("layer dimension exceeds ambient dimension");
        DenseMatrix basis(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(h.d));
        for (Eigen::Index r = 0; r < basis.rows(); ++r) {
            for (Eigen::Index c = 0; c < basis.cols(); ++c) basis(r, c) = get_f64(in);
        }
        Subspace s = Subspace::from_orthonormal_rows(std::move(basis));
        layers.emplace_back(std::move(s), get_ids(in, h.n));
    }
    std::vector<PointId> leftover = get_ids(in, h.n);
    const auto variant = h.kind == IndexKind::warmup ? IterPcaVariant::warmup : IterPcaVariant::sampled;
    return IterPcaIndex::assemble(variant, p, std::move(points), std::move(layers), std::move(leftover));
}

PcaTree read_tree_payload(std::istream& in, const IndexHeader& h, DenseMatrix points) {
    PcaTreeParams p;
    p.epsilon = get_f64(in);
    p.k = get_u64(in);
    p.stop_size = get_u64(in);
    get_f64(in);  // theta, recomputed from epsilon and k
    const std::uint64_t node_count = get_u64(in);
    if (node_count == 0 || node_count > 2 * h.n + 1) throw FormatError("implausible tree node count");
    std::vector<PcaTreeNode> nodes(node_count);
    for (auto& node : nodes) {
        node.depth = get_u32(in);
        const std::uint32_t has_direction = get_u32(in);
        if (has_direction != 0) {
            node.direction = Vector(static_cast<Eigen::Index>(h.d));
            for (auto& x : node.direction) x = get_f64(in);
        }
        const std::uint64_t child_count = get_u64(in);
        if (child_count > node_count) throw FormatError("implausible child count");
        node.children.resize(child_count);
        for (auto& [slab, child] : node.children) {
            slab = get_i64(in);
            const std::uint64_t c = get_u64(in);
            if (c >= node_count) throw FormatError("child index out of range");
            child = static_cast<std::uint32_t>(c);
        }
        node.leaf_ids = get_ids(in, h.n);
        node.removed_ids = get_ids(in, h.n);
    }
    return PcaTree::assemble(p, std::move(points), std::move(nodes));
}

}  // namespace

void write_index(std::ostream& out, const IterPcaIndex& index, std::uint64_t dataset_hash) {
    const auto kind = index.variant() == IterPcaVariant::warmup ? IndexKind::warmup : IndexKind::iterpca;
    put_header(out, kind, dataset_hash, index.points());
    const IterPcaParams& p = index.params();
    put_f64(out, p.epsilon);
    put_f64(out, p.sigma);
    put_u64(out, p.k);
    put_u64(out, p.sample_size);
    put_f64(out, p.c_threshold);
    put_f64(out, p.c_iter);
    put_u64(out, p.seed);
    put_u32(out, p.capture_mode == CaptureMode::threshold_psi ? 0U : 1U);
    put_f64(out, p.eta);
    put_u64(out, index.layers().size());
    for (const auto& layer : index.layers()) {
        const DenseMatrix& basis = layer.subspace.basis();
        put_u64(out, static_cast<std::uint64_t>(basis.rows()));
        for (Eigen::Index r = 0; r < basis.rows(); ++r) {
            for (Eigen::Index c = 0; c < basis.cols(); ++c) put_f64(out, basis(r, c));
        }
        put_ids(out, layer.members);
    }
    put_ids(out, index.leftover());
}

void write_index(std::ostream& out, const PcaTree& tree, std::uint64_t dataset_hash) {
    put_header(out, IndexKind::pcatree, dataset_hash, tree.points());
    put_f64(out, tree.params().epsilon);
    put_u64(out, tree.params().k);
    put_u64(out, tree.params().stop_size);
    put_f64(out, tree.theta());
    put_u64(out, tree.nodes().size());
    for (const auto& node : tree.nodes()) {
        put_u32(out, node.depth);
        put_u32(out, node.is_leaf() ? 0U : 1U);
        for (double x : node.direction) put_f64(out, x);
        put_u64(out, node.children.size());
        for (const auto& [slab, child] : node.children) {
            put_i64(out, slab);
            put_u64(out, child);
        }
        put_ids(out, node.leaf_ids);
        put_ids(out, node.removed_ids);
    }
}

void write_index_file(const std::filesystem::path& path, const AnyIndex& index, std::uint64_t dataset_hash) {
    std::ostringstream buffer;
    std::visit([&](const auto& idx) { write_index(buffer, idx, dataset_hash); }, index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot open " + path.string() + " for writing");
    }
    const std::string bytes = buffer.str();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

IndexHeader read_index_header(std::istream& in) {
    expect_magic(in, "SNIX", "index file");
    IndexHeader h;
    h.version = get_u32(in);
    if (h.version > kIndexFormatVersion) {
        throw FormatError("index format version " + std::to_string(h.version) + " is newer than supported version " +
                          std::to_string(kIndexFormatVersion));
    }
    if (h.version == 0) {
        throw FormatError("invalid index format version 0");
    }
    const std::uint32_t kind = get_u32(in);
    if (kind < 1 || kind > 3) {
        throw FormatError("unknown index kind " + std::to_string(kind));
    }
    h.kind = static_cast<IndexKind>(kind);
    h.dataset_hash = get_u64(in);
    h.n = get_u64(in);
    h.d = get_u64(in);
    return h;
}

AnyIndex read_index(std::istream& in, DenseMatrix points, std::uint64_t dataset_hash) {
    const IndexHeader h = read_index_header(in);
    if (h.dataset_hash != dataset_hash) {
        throw FormatError("index was built from a different dataset (content hash mismatch)");
    }
    if (h.n != static_cast<std::uint64_t>(points.rows()) || h.d != static_cast<std::uint64_t>(points.cols())) {
        throw FormatError("index shape does not match the dataset");
    }
    if (h.kind == IndexKind::pcatree) {
        return read_tree_payload(in, h, std::move(points));
    }
    return read_iterpca_payload(in, h, std::move(points));
}

AnyIndex read_index_file(const std::filesystem::path& path, DenseMatrix points, std::uint64_t dataset_hash) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return read_index(in, std::move(points), dataset_hash);
}

}  // namespace snns
