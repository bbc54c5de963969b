#include "stagflow/grid.hpp"

#include <cmath>

namespace stagflow {

Grid Grid::build_cartesian(int dim, std::array<int, 2> cell_counts, Vec2 origin, Vec2 extent,
                           BoundaryTags tags) {
    if (dim != 1 && dim != 2)
        throw ConfigError("grid: dim must be 1 or 2, got " + std::to_string(dim));
    if (cell_counts[0] < 1 || (dim == 2 && cell_counts[1] < 1))
        throw ConfigError("grid: cell counts must be >= 1 per axis");
    if (extent[0] <= 0.0 || (dim == 2 && extent[1] <= 0.0))
        throw ConfigError("grid: extent must be strictly positive");

    Grid g;
    g.dim_ = dim;
    g.nx_ = cell_counts[0];
    g.ny_ = dim == 2 ? cell_counts[1] : 1;
    g.origin_ = origin;
    g.extent_ = extent;
    g.hx_ = extent[0] / g.nx_;
    g.hy_ = dim == 2 ? extent[1] / g.ny_ : 1.0;
    g.n_cells_ = g.nx_ * g.ny_;
    g.cell_measure_ = dim == 2 ? g.hx_ * g.hy_ : g.hx_;
    g.build_faces(tags);
    g.build_dual_topology();
    return g;
}

double Grid::cell_diameter() const {
    return dim_ == 2 ? std::hypot(hx_, hy_) : hx_;
}

Vec2 Grid::cell_center(int c) const {
    const int i = c % nx_;
    const int j = c / nx_;
    return {origin_[0] + (i + 0.5) * hx_, dim_ == 2 ? origin_[1] + (j + 0.5) * hy_ : 0.0};
}

std::array<int, 4> Grid::cell_faces(int c) const {
    const int i = c % nx_;
    const int j = c / nx_;
    if (dim_ == 1) return {x_face(i), x_face(i + 1), -1, -1};
    return {x_face(i, j), x_face(i + 1, j), y_face(i, j), y_face(i, j + 1)};
}

std::array<int, 4> Grid::cell_dual_faces(int c) const {
    if (dim_ == 1) return {c, -1, -1, -1};
    return {4 * c, 4 * c + 1, 4 * c + 2, 4 * c + 3};
}

std::optional<int> Grid::neighbor_cell(int c, int f) const {
    const Face& face = faces_[f];
    const int other = face.cell_neg == c ? face.cell_pos : face.cell_neg;
    if (other < 0) return std::nullopt;
    return other;
}

void Grid::build_faces(const BoundaryTags& tags) {
    n_x_faces_ = (nx_ + 1) * ny_;
    const int n_y_faces = dim_ == 2 ? nx_ * (ny_ + 1) : 0;
    faces_.resize(n_x_faces_ + n_y_faces);

    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) {
            Face f;
            f.axis = 0;
            f.measure = dim_ == 2 ? hy_ : 1.0;
            f.cell_neg = i > 0 ? cell_index(i - 1, j) : -1;
            f.cell_pos = i < nx_ ? cell_index(i, j) : -1;
            f.center = {origin_[0] + i * hx_, dim_ == 2 ? origin_[1] + (j + 0.5) * hy_ : 0.0};
            if (i == 0) f.tag = tags.x_neg;
            else if (i == nx_) f.tag = tags.x_pos;
            faces_[x_face(i, j)] = f;
        }
    }
    if (dim_ == 2) {
        for (int j = 0; j <= ny_; ++j) {
            for (int i = 0; i < nx_; ++i) {
                Face f;
                f.axis = 1;
                f.measure = hx_;
                f.cell_neg = j > 0 ? cell_index(i, j - 1) : -1;
                f.cell_pos = j < ny_ ? cell_index(i, j) : -1;
                f.center = {origin_[0] + (i + 0.5) * hx_, origin_[1] + j * hy_};
                if (j == 0) f.tag = tags.y_neg;
                else if (j == ny_) f.tag = tags.y_pos;
                faces_[y_face(i, j)] = f;
            }
        }
    }
}

void Grid::build_dual_topology() {
    face_duals_.assign(faces_.size(), {});
    if (dim_ == 1) {
        dual_faces_.resize(n_cells_);
        for (int c = 0; c < n_cells_; ++c) {
            DualFace& e = dual_faces_[c];
            e.cell = c;
            e.face_a = x_face(c);     // -x face
            e.face_b = x_face(c + 1); // +x face
            // Opposite of D_{+x face} seen from the -x face is the next face
            // upstream, and symmetrically.
            e.opp_a = c > 0 ? x_face(c - 1) : -1;
            e.opp_b = c + 1 < nx_ ? x_face(c + 2) : -1;
            face_duals_[e.face_a].push_back({c, 1.0});
            face_duals_[e.face_b].push_back({c, -1.0});
        }
        return;
    }

    dual_faces_.resize(4 * static_cast<std::size_t>(n_cells_));
    for (int c = 0; c < n_cells_; ++c) {
        const std::array<int, 4> cf = cell_faces(c); // (-x, +x, -y, +y)
        // Cyclic half-diamond pairs around the cell center.
        const std::array<std::pair<int, int>, 4> pairs = {{
            {cf[0], cf[2]}, // (-x, -y)
            {cf[2], cf[1]}, // (-y, +x)
            {cf[1], cf[3]}, // (+x, +y)
            {cf[3], cf[0]}, // (+y, -x)
        }};
        for (int k = 0; k < 4; ++k) {
            const int e = 4 * c + k;
            DualFace& df = dual_faces_[e];
            df.cell = c;
            df.face_a = pairs[k].first;
            df.face_b = pairs[k].second;
            face_duals_[df.face_a].push_back({e, 1.0});
            face_duals_[df.face_b].push_back({e, -1.0});
        }
    }
    // Opposite faces: reflect the non-upwind face of the pair through the
    // midpoint of the upwind face, i.e. take the mirrored-side face of the
    // neighbour cell across the upwind face.
    auto mirrored = [&](int cell, int through_face, int pattern_face) -> int {
        const auto nb = neighbor_cell(cell, through_face);
        if (!nb) return -1;
        const Face& pat = faces_[pattern_face];
        const std::array<int, 4> nf = cell_faces(*nb);
        const bool pat_is_pos = pat.cell_neg == cell; // pattern face on cell's +axis side
        if (pat.axis == 0) return pat_is_pos ? nf[0] : nf[1];
        return pat_is_pos ? nf[2] : nf[3];
    };
    for (auto& df : dual_faces_) {
        df.opp_a = mirrored(df.cell, df.face_a, df.face_b);
        df.opp_b = mirrored(df.cell, df.face_b, df.face_a);
    }
}

std::optional<int> Grid::opposite_face(int e, int upwind) const {
    const DualFace& df = dual_faces_[e];
    int opp = -1;
    if (upwind == df.face_a) opp = df.opp_a;
    else if (upwind == df.face_b) opp = df.opp_b;
    else throw ConfigError("opposite_face: face is not adjacent to the dual face");
    if (opp < 0) return std::nullopt;
    return opp;
}

} // namespace stagflow
