#include "stpca/io.hpp"

#include <cstring>
#include <fstream>

#include "json.hpp"

namespace stpca {

namespace {

constexpr std::uint32_t tensor_magic = 0x53544e31; // "STN1"
constexpr std::uint32_t vector_magic = 0x53465631; // "SFV1"
constexpr std::uint32_t matrix_magic = 0x534d5831; // "SMX1"

// entries are written little-endian; this host layout is little-endian on all
// supported targets, asserted here rather than byte-swapped
void write_u32(std::ofstream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_f64(std::ofstream& out, double v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::ifstream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

double read_f64(std::ifstream& in) {
    double v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw contract_error("cannot open for writing: " + path);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw contract_error("cannot open for reading: " + path);
    return in;
}

} // namespace

void save_tensor(const DenseTensor& t, const std::string& path) {
    std::ofstream out = open_out(path);
    write_u32(out, tensor_magic);
    write_u32(out, std::uint32_t(t.order()));
    write_u32(out, std::uint32_t(t.dim()));
    write_u32(out, t.is_real() ? 0u : 1u);
    for (const auto& z : t.data()) {
        write_f64(out, z.real());
        write_f64(out, z.imag());
    }
    if (!out) throw contract_error("write failed: " + path);
}

void save_tensor(const DenseTensor& t, const std::string& path, const Ensemble& ensemble,
                 std::uint64_t seed) {
    save_tensor(t, path);
    nlohmann::json meta;
    meta["seed"] = seed;
    meta["field"] = ensemble.field == Field::complex_ ? "complex" : "real";
    meta["symmetrized"] = ensemble.symmetrized;
    meta["order"] = t.order();
    meta["dim"] = t.dim();
    std::ofstream side(path + ".json", std::ios::trunc);
    if (!side) throw contract_error("cannot open for writing: " + path + ".json");
    side << meta.dump(2) << "\n";
}

DenseTensor load_tensor(const std::string& path) {
    std::ifstream in = open_in(path);
    if (read_u32(in) != tensor_magic) throw contract_error("bad tensor file: " + path);
    const int order = int(read_u32(in));
    const int dim = int(read_u32(in));
    const Field field = read_u32(in) == 0 ? Field::real : Field::complex_;
    DenseTensor t(order, dim, field);
    for (auto& z : t.data()) {
        const double re = read_f64(in);
        const double im = read_f64(in);
        z = {re, im};
    }
    if (!in) throw contract_error("truncated tensor file: " + path);
    return t;
}

void save_fock_vector(const FockVector& v, const std::string& path) {
    std::ofstream out = open_out(path);
    write_u32(out, vector_magic);
    write_u32(out, std::uint32_t(v.basis->modes()));
    write_u32(out, std::uint32_t(v.basis->bosons()));
    write_u32(out, std::uint32_t(v.amplitudes.size()));
    for (Eigen::Index i = 0; i < v.amplitudes.size(); ++i) {
        write_f64(out, v.amplitudes[i].real());
        write_f64(out, v.amplitudes[i].imag());
    }
    if (!out) throw contract_error("write failed: " + path);
}

FockVector load_fock_vector(const std::string& path) {
    std::ifstream in = open_in(path);
    if (read_u32(in) != vector_magic) throw contract_error("bad vector file: " + path);
    const int modes = int(read_u32(in));
    const int bosons = int(read_u32(in));
    const std::size_t n = read_u32(in);
    const BasisPtr basis = make_basis(modes, bosons);
    if (n != basis->dimension()) throw contract_error("vector length mismatch: " + path);
    FockVector v = zero_fock(basis);
    for (std::size_t i = 0; i < n; ++i) {
        const double re = read_f64(in);
        const double im = read_f64(in);
        v.amplitudes[Eigen::Index(i)] = {re, im};
    }
    if (!in) throw contract_error("truncated vector file: " + path);
    return v;
}

void save_dense_matrix(const Eigen::MatrixXcd& m, const std::string& path) {
    std::ofstream out = open_out(path);
    write_u32(out, matrix_magic);
    write_u32(out, std::uint32_t(m.rows()));
    write_u32(out, std::uint32_t(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            write_f64(out, m(r, c).real());
            write_f64(out, m(r, c).imag());
        }
    if (!out) throw contract_error("write failed: " + path);
}

Eigen::MatrixXcd load_dense_matrix(const std::string& path) {
    std::ifstream in = open_in(path);
    if (read_u32(in) != matrix_magic) throw contract_error("bad matrix file: " + path);
    const Eigen::Index rows = Eigen::Index(read_u32(in));
    const Eigen::Index cols = Eigen::Index(read_u32(in));
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double re = read_f64(in);
            const double im = read_f64(in);
            m(r, c) = {re, im};
        }
    if (!in) throw contract_error("truncated matrix file: " + path);
    return m;
}

namespace {

nlohmann::json thresholds_json(const SpectralThresholds& th) {
    nlohmann::json j;
    j["p"] = th.p;
    j["N"] = th.dim;
    j["n_bos"] = th.n_bos;
    j["lambda_bar"] = th.lambda_bar;
    j["ensemble"] = th.field == Field::complex_ ? "complex" : "real";
    j["J"] = th.coupling_j;
    j["E0"] = th.e_signal;
    j["Emax"] = th.e_max;
    j["Ecut"] = th.e_cut;
    j["xi"] = th.xi;
    return j;
}

} // namespace

std::string detection_report_json(const DetectionReport& report, std::uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    j["lambda1"] = report.lambda1;
    j["decision"] = report.planted ? "planted" : "null";
    j["iterations"] = report.iterations;
    j["residual"] = report.residual;
    j["thresholds"] = thresholds_json(report.thresholds);
    return j.dump(2);
}

std::string recovery_report_json(const RecoveryReport& report, std::uint64_t seed) {
    nlohmann::json j;
    j["seed"] = seed;
    j["detection_passed"] = report.detection_passed;
    j["lambda1"] = report.lambda1;
    j["overlap_ratio"] = report.overlap_ratio;
    j["rounded_corr"] = report.rounded_corr;
    j["boosted_corr"] = report.boosted_corr;
    j["thresholds"] = thresholds_json(report.thresholds);
    return j.dump(2);
}

} // namespace stpca
