#include "otoc/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <string>

namespace otoc {

Lattice build_lattice(int rows, int cols) {
    if (rows < 2 || cols < 2) {
        throw std::invalid_argument("lattice: side lengths must be >= 2, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
    Lattice lat;
    lat.rows = rows;
    lat.cols = cols;

    // Each site contributes its +row and +col neighbor; a std::set removes
    // the pairs that coincide when a side has length 2.
    std::set<std::pair<int, int>> uniq;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            int i = lat.site_index(r, c);
            int down = lat.site_index((r + 1) % rows, c);
            int right = lat.site_index(r, (c + 1) % cols);
            uniq.emplace(std::min(i, down), std::max(i, down));
            uniq.emplace(std::min(i, right), std::max(i, right));
        }
    }
    lat.bonds.assign(uniq.begin(), uniq.end());
    return lat;
}

int site_distance(const Lattice& lat, int i, int j) {
    if (i < 0 || j < 0 || i >= lat.n_sites() || j >= lat.n_sites()) {
        throw std::out_of_range("lattice: site index out of range");
    }
    int dr = std::abs(i / lat.cols - j / lat.cols);
    int dc = std::abs(i % lat.cols - j % lat.cols);
    dr = std::min(dr, lat.rows - dr);
    dc = std::min(dc, lat.cols - dc);
    return dr + dc;
}

}  // namespace otoc
