#pragma once

#include <utility>
#include <vector>

namespace otoc {

// L1 x L2 square lattice on a torus. Sites are indexed row-major:
// site = row * cols + col. The bond list holds every nearest-neighbor
// pair exactly once (wrap-around duplicates on side length 2 removed).
struct Lattice {
    int rows = 0;
    int cols = 0;
    std::vector<std::pair<int, int>> bonds;  // i < j, sorted

    int n_sites() const { return rows * cols; }
    int site_index(int row, int col) const { return row * cols + col; }
};

Lattice build_lattice(int rows, int cols);

// Graph (Manhattan) distance on the torus: minimal number of
// nearest-neighbor hops between sites i and j. A diagonal neighbor is
// at distance 2.
int site_distance(const Lattice& lat, int i, int j);

}  // namespace otoc
