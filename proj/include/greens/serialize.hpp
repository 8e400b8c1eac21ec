#pragma once

#include <json.hpp>

#include <cmath>
#include <string>

#include "greens/composite_kernel.hpp"
#include "greens/errors.hpp"
#include "greens/version.hpp"

namespace greens {

/// Kernel metadata: {"m","M","T","mode","labels","A","cond","version"}.
inline nlohmann::json to_json(const CompositeKernel& k) {
    nlohmann::json j;
    j["m"] = k.m();
    j["M"] = k.M();
    j["T"] = k.T();
    j["mode"] = to_string(k.mode());
    j["labels"] = k.partition().labels;
    nlohmann::json A = nlohmann::json::array();
    for (Eigen::Index r = 0; r < k.A().rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < k.A().cols(); ++c) row.push_back(k.A()(r, c));
        A.push_back(std::move(row));
    }
    j["A"] = std::move(A);
    j["cond"] = k.condition_number();
    j["version"] = kVersion;
    return j;
}

/// Rebuilds the kernel from cached metadata and checks that the stored matrix
/// matches the rebuilt one to `tol` (relative to its max norm).
inline CompositeKernel kernel_from_json(const nlohmann::json& j, double tol = 1e-10) {
    CompositeKernel k = [&] {
        try {
            return make_kernel(j.at("m").get<double>(), j.at("M").get<double>(), j.at("T").get<double>());
        } catch (const nlohmann::json::exception& e) {
            throw DomainError(std::string("kernel_from_json: ") + e.what());
        }
    }();
    if (j.contains("labels") && j["labels"].get<std::vector<int>>() != k.partition().labels)
        throw DomainError("kernel_from_json: labels do not match T");
    if (j.contains("A")) {
        const auto rows = j["A"].get<std::vector<std::vector<double>>>();
        if (static_cast<Eigen::Index>(rows.size()) != k.A().rows()) throw DomainError("kernel_from_json: A has wrong size");
        const double scale = std::max(1.0, k.A().cwiseAbs().maxCoeff());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<Eigen::Index>(rows[r].size()) != k.A().cols())
                throw DomainError("kernel_from_json: A has wrong size");
            for (std::size_t c = 0; c < rows[r].size(); ++c)
                if (std::abs(rows[r][c] - k.A()(r, c)) > tol * scale)
                    throw DomainError("kernel_from_json: stored A differs from the rebuilt matrix");
        }
    }
    return k;
}

}  // namespace greens
