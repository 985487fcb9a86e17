#pragma once

#include "dwdt/mesh.hpp"
#include "dwdt/polygon.hpp"

namespace dwdt {

// Conforms a planar triangulation to a patch boundary polygon: inserts the
// polygon vertices, enforces every polygon segment as a mesh edge, and keeps
// exactly the faces inside the polygon. Interior faces not touched by an
// inserted segment are preserved; a mesh that already conforms is returned
// unchanged. Input vertices must lie inside (or on) the polygon; offenders
// are reported instead of cutting.
DiscreteMesh cut_to_boundary(const DiscreteMesh& mesh2d, const Polygon& boundary);

}  // namespace dwdt
