#pragma once

/**
 * @brief JSON encodings for complex data and frames.
 *
 * Complex numbers are [re, im] pairs. Matrices are nested rows of pairs.
 * A serialized frame is {"n": N, "u": [...], "v": [...]} where u and v are
 * flat row-major lists of N*N pairs; "v" is optional and recomputed when
 * absent. Loading always re-validates the frame invariants.
 */

#include <json.hpp>

#include "ptqm/frame.hpp"

namespace ptqm::io {

using nlohmann::json;

inline json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::InvalidArgument, "json: expected a number or an [re, im] pair");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json vector_to_json(const CVector& v) {
    json out = json::array();
    for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(complex_to_json(v(k)));
    return out;
}

inline CVector vector_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidArgument, "json: expected a non-empty array");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Eigen::Index>(k)) = complex_from_json(j[k]);
    return v;
}

inline json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::InvalidArgument, "json: expected rows of a matrix");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) throw Error(ErrorCode::InvalidArgument, "json: matrix row is not an array");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw Error(ErrorCode::DimensionMismatch, "json: ragged matrix rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

inline json flat_to_json(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(r, c)));
    }
    return out;
}

inline CMatrix flat_from_json(const json& j, Eigen::Index n) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != n * n) {
        throw Error(ErrorCode::DimensionMismatch, "json: expected " + std::to_string(n * n) + " row-major entries");
    }
    CMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(j[static_cast<std::size_t>(r * n + c)]);
    }
    return m;
}

inline json frame_to_json(const BiorthogonalFrame& frame) {
    return json{{"n", frame.dim()}, {"u", flat_to_json(frame.u())}, {"v", flat_to_json(frame.v())}};
}

inline FramePtr frame_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "frame: expected an object");
    for (const auto& item : j.items()) {
        if (item.key() != "n" && item.key() != "u" && item.key() != "v") {
            throw Error(ErrorCode::InvalidArgument, "frame: unknown key '" + item.key() + "'");
        }
    }
    if (!j.contains("n") || !j.at("n").is_number_integer() || j.at("n").get<long long>() <= 0) {
        throw Error(ErrorCode::InvalidArgument, "frame: 'n' must be a positive integer");
    }
    if (!j.contains("u")) throw Error(ErrorCode::InvalidArgument, "frame: missing 'u'");
    const auto n = static_cast<Eigen::Index>(j.at("n").get<long long>());
    const CMatrix u = flat_from_json(j.at("u"), n);
    if (!j.contains("v")) return BiorthogonalFrame::from_columns(u);
    return BiorthogonalFrame::from_pair(u, flat_from_json(j.at("v"), n));
}

}  // namespace ptqm::io
