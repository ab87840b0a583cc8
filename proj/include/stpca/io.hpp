#pragma once

#include <string>

#include "stpca/fock.hpp"
#include "stpca/spectral.hpp"
#include "stpca/tensor.hpp"

namespace stpca {

/// Flat binary tensor layout: header (magic, order, dim, field flag), then
/// each entry as two little-endian 8-byte floats, real part then imaginary.
/// An optional JSON sidecar <path>.json carries seed/ensemble metadata.
void save_tensor(const DenseTensor& t, const std::string& path);
void save_tensor(const DenseTensor& t, const std::string& path, const Ensemble& ensemble,
                 std::uint64_t seed);
DenseTensor load_tensor(const std::string& path);

/// Same float layout for occupation-space vectors; the header carries the
/// basis descriptor (modes, bosons).
void save_fock_vector(const FockVector& v, const std::string& path);
FockVector load_fock_vector(const std::string& path);

/// Dense matrix export in the shared layout (rows, cols header).
void save_dense_matrix(const Eigen::MatrixXcd& m, const std::string& path);
Eigen::MatrixXcd load_dense_matrix(const std::string& path);

/// Detection / recovery reports as JSON documents with threshold inputs,
/// seed, and the decision.
std::string detection_report_json(const DetectionReport& report, std::uint64_t seed);
std::string recovery_report_json(const RecoveryReport& report, std::uint64_t seed);

} // namespace stpca
