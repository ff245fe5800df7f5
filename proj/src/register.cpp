// SPDX-License-Identifier: Apache-2.0
#include "daqsim/register.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace daqsim {

namespace {

constexpr double kEdgeTol = 1e-9;

void check_spacing(double spacing) {
    if (!(spacing > 0.0))
        throw InvalidSpacing("spacing must be positive");
}

} // namespace

Register::Register(std::vector<Coord> coords, std::vector<Pair> edges)
    : coords_(std::move(coords)), edges_(std::move(edges)) {
    if (coords_.empty())
        throw EmptyRegister("register needs at least one qubit");
    std::sort(edges_.begin(), edges_.end());
}

Register Register::line(int n, double spacing) {
    check_spacing(spacing);
    if (n < 1)
        throw EmptyRegister("line register needs n >= 1");
    std::vector<Coord> coords(n);
    std::vector<Pair> edges;
    for (int i = 0; i < n; ++i)
        coords[i] = {i * spacing, 0.0};
    for (int i = 0; i + 1 < n; ++i)
        edges.emplace_back(i, i + 1);
    return Register(std::move(coords), std::move(edges));
}

Register Register::circle(int n, double spacing) {
    check_spacing(spacing);
    if (n < 1)
        throw EmptyRegister("circle register needs n >= 1");
    std::vector<Coord> coords(n);
    std::vector<Pair> edges;
    if (n == 1) {
        coords[0] = {0.0, 0.0};
        return Register(std::move(coords), std::move(edges));
    }
    // Circumradius so that neighbouring points sit `spacing` apart.
    const double r = spacing / (2.0 * std::sin(std::numbers::pi / n));
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * std::numbers::pi * i / n;
        coords[i] = {r * std::cos(a), r * std::sin(a)};
    }
    for (int i = 0; i < n; ++i) {
        int j = (i + 1) % n;
        edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Register(std::move(coords), std::move(edges));
}

Register Register::triangular_lattice(int n_cells_row, int n_cells_col, double spacing) {
    check_spacing(spacing);
    if (n_cells_row < 1 || n_cells_col < 1)
        throw EmptyRegister("triangular lattice needs at least one cell per direction");
    const int rows = n_cells_row + 1;
    const int cols = n_cells_col + 1;
    std::vector<Coord> coords;
    coords.reserve(static_cast<size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            coords.push_back({(c + 0.5 * r) * spacing, r * (std::sqrt(3.0) / 2.0) * spacing});
    std::vector<Pair> edges;
    const int n = static_cast<int>(coords.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double dx = coords[i][0] - coords[j][0];
            double dy = coords[i][1] - coords[j][1];
            if (std::abs(std::hypot(dx, dy) - spacing) <= kEdgeTol)
                edges.emplace_back(i, j);
        }
    return Register(std::move(coords), std::move(edges));
}

Register Register::from_coordinates(std::vector<Coord> coords) {
    if (coords.empty())
        throw EmptyRegister("from_coordinates needs at least one qubit");
    const int n = static_cast<int>(coords.size());
    double min_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
            min_d = std::min(min_d, d);
        }
    std::vector<Pair> edges;
    if (n > 1) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                double d = std::hypot(coords[i][0] - coords[j][0], coords[i][1] - coords[j][1]);
                if (d - min_d <= kEdgeTol)
                    edges.emplace_back(i, j);
            }
    }
    return Register(std::move(coords), std::move(edges));
}

std::vector<Register::Pair> Register::all_node_pairs() const {
    std::vector<Pair> pairs;
    const int n = n_qubits();
    pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            pairs.emplace_back(i, j);
    return pairs;
}

double Register::distance(int i, int j) const {
    return std::hypot(coords_[i][0] - coords_[j][0], coords_[i][1] - coords_[j][1]);
}

Register Register::scaled(double s) const {
    if (!(s > 0.0))
        throw InvalidSpacing("scale factor must be positive");
    std::vector<Coord> coords = coords_;
    for (auto &c : coords) {
        c[0] *= s;
        c[1] *= s;
    }
    return Register(std::move(coords), edges_);
}

std::string Register::to_json() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto &c : coords_)
        j["nodes"].push_back({c[0], c[1]});
    j["edges"] = nlohmann::json::array();
    for (const auto &[a, b] : edges_)
        j["edges"].push_back({a, b});
    return j.dump();
}

Register Register::from_json(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Coord> coords;
    for (const auto &node : j.at("nodes"))
        coords.push_back({node.at(0).get<double>(), node.at(1).get<double>()});
    std::vector<Pair> edges;
    for (const auto &e : j.at("edges")) {
        int a = e.at(0).get<int>();
        int b = e.at(1).get<int>();
        if (a == b || a < 0 || b < 0 || a >= static_cast<int>(coords.size()) ||
            b >= static_cast<int>(coords.size()))
            throw Error("register json has an invalid edge");
        edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    return Register(std::move(coords), std::move(edges));
}

} // namespace daqsim
