#pragma once

#include "blowup/mesh.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace blowup {

struct SampleMesh {
    std::string name;
    nlohmann::json document;
    std::vector<std::size_t> betti;  // simplicial Betti numbers of the underlying space
};

namespace detail {

inline nlohmann::json mesh_doc(int dim, const std::vector<std::vector<Vertex>>& cells, const std::string& manifold) {
    nlohmann::json d;
    d["dimension"] = dim;
    d["cells"] = cells;
    d["manifold"] = manifold;
    return d;
}

}  // namespace detail

inline std::vector<SampleMesh> sample_meshes() {
    using detail::mesh_doc;
    std::vector<SampleMesh> out;
    out.push_back({"interval_chain", mesh_doc(1, {{0, 1}, {1, 2}, {2, 3}}, "boundary"), {1, 0}});
    out.push_back({"circle", mesh_doc(1, {{0, 1}, {1, 2}, {0, 2}}, "closed"), {1, 1}});
    out.push_back({"single_triangle", mesh_doc(2, {{0, 1, 2}}, "boundary"), {1, 0, 0}});
    out.push_back({"two_triangles", mesh_doc(2, {{0, 1, 2}, {1, 2, 3}}, "boundary"), {1, 0, 0}});
    {
        std::vector<std::vector<Vertex>> fan;
        for (Vertex i = 1; i <= 6; ++i) fan.push_back({0, i, i % 6 + 1});
        out.push_back({"triangle_fan", mesh_doc(2, fan, "boundary"), {1, 0, 0}});
    }
    {
        std::vector<std::vector<Vertex>> torus;
        for (Vertex i = 0; i < 7; ++i) {
            torus.push_back({i, (i + 1) % 7, (i + 3) % 7});
            torus.push_back({i, (i + 2) % 7, (i + 3) % 7});
        }
        out.push_back({"torus7", mesh_doc(2, torus, "closed"), {1, 2, 1}});
    }
    out.push_back({"octahedron",
                   mesh_doc(2, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 1, 4}, {5, 1, 2}, {5, 2, 3}, {5, 3, 4}, {5, 1, 4}},
                            "closed"),
                   {1, 0, 1}});
    out.push_back({"single_tetrahedron", mesh_doc(3, {{0, 1, 2, 3}}, "boundary"), {1, 0, 0, 0}});
    out.push_back({"two_tetrahedra", mesh_doc(3, {{0, 1, 2, 3}, {1, 2, 3, 4}}, "boundary"), {1, 0, 0, 0}});
    return out;
}

inline Triangulation sample_mesh(const std::string& name) {
    for (const auto& s : sample_meshes())
        if (s.name == name) return Triangulation::from_json(s.document);
    throw MeshError("no bundled mesh named '" + name + "'");
}

}  // namespace blowup
