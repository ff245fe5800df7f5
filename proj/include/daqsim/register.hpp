// SPDX-License-Identifier: Apache-2.0
/**
 * @file
 * Qubit registers: coordinate-labelled graphs with topology constructors.
 *
 * Coordinates are 2D in abstract length units (interpreted as micrometers by
 * the Rydberg Hamiltonian). Edges connect neighbouring qubits per
 * constructor; all_node_pairs/distance cover the complete graph.
 */
#pragma once

#include "daqsim/errors.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace daqsim {

class Register {
  public:
    using Coord = std::array<double, 2>;
    using Pair = std::pair<int, int>; // always i < j

    /// Collinear equally spaced qubits with edges (i, i+1).
    static Register line(int n, double spacing = 1.0);
    /// n qubits on a circle with ring edges; adjacent separation = spacing.
    static Register circle(int n, double spacing = 1.0);
    /// Rhombic patch of a triangular lattice: (rows+1) x (cols+1) sites with
    /// basis vectors (1,0) and (1/2, sqrt(3)/2) scaled by spacing, enumerated
    /// row-major; edges between sites at distance == spacing (within 1e-9).
    static Register triangular_lattice(int n_cells_row, int n_cells_col, double spacing = 1.0);
    /// Nodes as given; edges between pairs at the minimal pairwise distance
    /// (within 1e-9).
    static Register from_coordinates(std::vector<Coord> coords);

    int n_qubits() const { return static_cast<int>(coords_.size()); }
    const std::vector<Coord> &coords() const { return coords_; }
    const std::vector<Pair> &edges() const { return edges_; }

    /// All i<j pairs in lexicographic order.
    std::vector<Pair> all_node_pairs() const;
    double distance(int i, int j) const;

    /// Return a copy with every coordinate scaled by s.
    Register scaled(double s) const;

    std::string to_json() const;
    static Register from_json(const std::string &text);

  private:
    Register(std::vector<Coord> coords, std::vector<Pair> edges);
    std::vector<Coord> coords_;
    std::vector<Pair> edges_;
};

} // namespace daqsim
