#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "stagflow/common.hpp"

namespace stagflow {

enum class BoundaryTag : std::uint8_t {
    none,            // internal face
    dirichlet,       // velocity prescribed
    neumann_outflow, // free outflow, upwind convective values, zero pressure gradient
    slip_wall,       // impermeable, perfect slip
    symmetry,        // identical treatment to slip_wall
};

/// Primal face. The stored orientation is always the +axis direction:
/// fluxes and normal velocities kept "per face" are meant along +axis,
/// and F_{K,sigma} = sign_of(K) * stored value.
struct Face {
    int axis = 0;     // normal axis (0 = x, 1 = y)
    int cell_neg = -1; // cell on the -axis side, -1 at a low boundary
    int cell_pos = -1; // cell on the +axis side, -1 at a high boundary
    double measure = 0.0; // |sigma| ((d-1)-measure; 1 in 1D)
    Vec2 center{0.0, 0.0};
    BoundaryTag tag = BoundaryTag::none;

    bool internal() const { return cell_neg >= 0 && cell_pos >= 0; }
    int owner() const { return cell_neg >= 0 ? cell_neg : cell_pos; }
    /// n_{K,sigma} . e_axis for the given adjacent cell.
    double normal_sign(int cell) const { return cell == cell_neg ? 1.0 : -1.0; }
};

/// Interior dual face: separates the half-diamonds of face_a and face_b
/// inside one primal cell. Fluxes through it are stored oriented a -> b.
/// opp_a / opp_b are the opposite faces used by the MUSCL limiter when
/// face_a (resp. face_b) is the upwind side; -1 when absent.
struct DualFace {
    int cell = -1;
    int face_a = -1;
    int face_b = -1;
    int opp_a = -1;
    int opp_b = -1;
};

/// Reference from a primal face to one incident interior dual face,
/// with the orientation sign that makes the stored dual flux outward
/// of this face's dual cell.
struct DualIncidence {
    int dual = -1;
    double sign = 0.0;
};

struct BoundaryTags {
    BoundaryTag x_neg = BoundaryTag::dirichlet;
    BoundaryTag x_pos = BoundaryTag::dirichlet;
    BoundaryTag y_neg = BoundaryTag::dirichlet;
    BoundaryTag y_pos = BoundaryTag::dirichlet;
};

/// Structured staggered mesh: primal rectangles, one velocity unknown per
/// face, half-diamond dual cells of measure |K|/(2d), and the interior dual
/// faces through which the dual mass fluxes flow. Immutable once built.
///
/// Enumeration is deterministic: cells lexicographic (x fastest), faces are
/// all x-normal faces first (lexicographic), then all y-normal faces; the
/// 2d faces of a cell are ordered (-x, +x, -y, +y); the interior dual faces
/// of a cell are ordered by the cyclic half-diamond pairs
/// (-x,-y), (-y,+x), (+x,+y), (+y,-x).
class Grid {
public:
    static Grid build_cartesian(int dim, std::array<int, 2> cell_counts, Vec2 origin,
                                Vec2 extent, BoundaryTags tags = {});

    int dim() const { return dim_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }
    Vec2 origin() const { return origin_; }
    Vec2 extent() const { return extent_; }

    int n_cells() const { return n_cells_; }
    int n_faces() const { return static_cast<int>(faces_.size()); }
    int n_dual_faces() const { return static_cast<int>(dual_faces_.size()); }
    int duals_per_cell() const { return dim_ == 1 ? 1 : 4; }

    double cell_measure() const { return cell_measure_; }
    double half_diamond_measure() const { return cell_measure_ / (2.0 * dim_); }
    /// diam(K), the h_K of the stability estimates.
    double cell_diameter() const;

    const Face& face(int f) const { return faces_[f]; }
    const std::vector<Face>& faces() const { return faces_; }
    const DualFace& dual_face(int e) const { return dual_faces_[e]; }
    const std::vector<DualFace>& dual_faces() const { return dual_faces_; }

    /// |D_sigma| (sum of the adjacent half-diamond measures).
    double dual_measure(int f) const {
        return half_diamond_measure() * (faces_[f].internal() ? 2.0 : 1.0);
    }

    int cell_index(int i, int j = 0) const { return i + nx_ * j; }
    Vec2 cell_center(int c) const;
    /// Faces of cell c in the order (-x, +x, -y, +y) (first two in 1D).
    std::array<int, 4> cell_faces(int c) const;
    /// Interior dual faces owned by cell c, in cyclic-pair order.
    std::array<int, 4> cell_dual_faces(int c) const;

    /// Interior dual faces incident to the dual cell of face f (2 at a
    /// boundary face, 2d at an internal one), with outward orientation signs.
    const std::vector<DualIncidence>& face_duals(int f) const { return face_duals_[f]; }

    /// Neighbour cell of c across its face f, if any.
    std::optional<int> neighbor_cell(int c, int f) const;

    /// The face sigma' whose dual cell shares with D_{upwind} a dual face
    /// disjoint from e; none when the required neighbour cell is missing.
    /// upwind must be one of dual_face(e)'s two faces.
    std::optional<int> opposite_face(int e, int upwind) const;

    bool is_x_face(int f) const { return faces_[f].axis == 0; }
    /// Global index of the x-normal face at column i in row j (i in [0, nx]).
    int x_face(int i, int j = 0) const { return i + (nx_ + 1) * j; }
    /// Global index of the y-normal face below row j at column i (j in [0, ny]).
    int y_face(int i, int j) const { return n_x_faces_ + i + nx_ * j; }

private:
    Grid() = default;
    void build_faces(const BoundaryTags& tags);
    void build_dual_topology();

    int dim_ = 2;
    int nx_ = 0, ny_ = 1;
    double hx_ = 0.0, hy_ = 1.0;
    Vec2 origin_{0.0, 0.0};
    Vec2 extent_{0.0, 0.0};
    int n_cells_ = 0;
    int n_x_faces_ = 0;
    double cell_measure_ = 0.0;
    std::vector<Face> faces_;
    std::vector<DualFace> dual_faces_;
    std::vector<std::vector<DualIncidence>> face_duals_;
};

} // namespace stagflow
