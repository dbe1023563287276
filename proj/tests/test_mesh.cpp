#include "blowup/mesh.hpp"
#include "blowup/mesh_samples.hpp"

#include <gtest/gtest.h>

using namespace blowup;

namespace {

const std::vector<GluingRule> kScalarRules = {GluingRule::EdgeIdentified, GluingRule::EdgeConstant,
                                              GluingRule::VertexIdentified, GluingRule::CellDiscontinuous,
                                              GluingRule::General};

}  // namespace

TEST(Mesh, SampleCountsAndEuler) {
    EXPECT_EQ(sample_mesh("torus7").f_vector(), (std::vector<std::size_t>{7, 21, 14}));
    EXPECT_EQ(sample_mesh("torus7").euler_characteristic(), 0);
    EXPECT_EQ(sample_mesh("octahedron").euler_characteristic(), 2);
    EXPECT_EQ(sample_mesh("circle").euler_characteristic(), 0);
    EXPECT_EQ(sample_mesh("two_tetrahedra").f_vector(), (std::vector<std::size_t>{5, 9, 7, 2}));
}

TEST(Mesh, SimplicialBettiOfSamples) {
    for (const auto& s : sample_meshes()) {
        SCOPED_TRACE(s.name);
        EXPECT_EQ(simplicial_cohomology(Triangulation::from_json(s.document)), s.betti);
    }
}

TEST(Mesh, CoherentOrientation) {
    Triangulation T = sample_mesh("two_triangles");
    EXPECT_TRUE(T.orientation_was_computed());
    EXPECT_EQ(T.orientations(), (std::vector<int>{1, -1}));
    // every interior facet receives opposite induced orientations
    for (const auto& s : sample_meshes()) {
        Triangulation M = Triangulation::from_json(s.document);
        if (M.dimension() == 0) continue;
        for (const auto& F : M.faces(M.dimension() - 1)) {
            const auto& inc = M.cofaces(F);
            if (inc.size() != 2) continue;
            int a = relative_sign(M, inc[0], F), b = relative_sign(M, inc[1], F);
            EXPECT_EQ(a, -b) << s.name << " facet " << F.label();
        }
    }
}

TEST(Mesh, RejectsBadInput) {
    // five-triangle Moebius band
    const char* moebius = R"({"dimension":2,"cells":[[0,1,2],[1,2,3],[2,3,4],[3,4,0],[4,0,1]]})";
    EXPECT_THROW(Triangulation::from_string(moebius), MeshError);
    EXPECT_NO_THROW(Triangulation::from_string(
        R"({"dimension":2,"cells":[[0,1,2],[1,2,3],[2,3,4],[3,4,0],[4,0,1]],"manifold":"none"})"));
    EXPECT_THROW(Triangulation::from_string(R"({"dimension":2,"cells":[[0,1,2],[0,1,3],[0,1,4]]})"), MeshError);
    EXPECT_THROW(Triangulation::from_string(R"({"dimension":2,"cells":[[0,1]]})"), MeshError);
    EXPECT_THROW(Triangulation::from_string(R"({"dimension":2,"cells":[[0,1,1]]})"), MeshError);
    EXPECT_THROW(Triangulation::from_string(R"({"dimension":2,"cells":[[0,1,2]],"orientation":[1,1]})"), MeshError);
    EXPECT_THROW(Triangulation::from_string(R"({"dimension":2,"cells":[[0,1,2]],"manifold":"closed"})"), MeshError);
    EXPECT_THROW(Triangulation::from_string("{not json"), MeshError);
    // two triangles meeting only at a vertex
    EXPECT_THROW(Triangulation::from_string(R"({"dimension":2,"cells":[[0,1,2],[0,3,4]]})"), MeshError);
}

TEST(Mesh, SingleTriangleScalarDimensions) {
    Triangulation T = sample_mesh("single_triangle");
    EXPECT_EQ(assemble(T, 0, GluingRule::General).dimension(), 6u);
    EXPECT_EQ(assemble(T, 0, GluingRule::EdgeIdentified).dimension(), 6u);
    EXPECT_EQ(assemble(T, 0, GluingRule::EdgeConstant).dimension(), 3u);
    EXPECT_EQ(assemble(T, 0, GluingRule::VertexIdentified).dimension(), 3u);
    EXPECT_EQ(assemble(T, 0, GluingRule::CellDiscontinuous).dimension(), 3u);
    EXPECT_EQ(assemble(T, 1, GluingRule::General).dimension(), 6u);
    EXPECT_EQ(assemble(T, 2, GluingRule::General).dimension(), 1u);
}

TEST(Mesh, ScalarRuleDimensionCounts) {
    for (const auto& s : sample_meshes()) {
        Triangulation T = Triangulation::from_json(s.document);
        if (T.dimension() != 2) continue;
        SCOPED_TRACE(s.name);
        EXPECT_EQ(assemble(T, 0, GluingRule::VertexIdentified).dimension(), T.faces(0).size());
        EXPECT_EQ(assemble(T, 0, GluingRule::CellDiscontinuous).dimension(), 3 * T.cells().size());
        // edge-constant: one value per edge
        EXPECT_EQ(assemble(T, 0, GluingRule::EdgeConstant).dimension(), T.faces(1).size());
        // edge-identified: six per cell, two identifications per interior edge
        std::size_t interior = 0;
        for (const auto& E : T.faces(1)) interior += T.cofaces(E).size() == 2;
        EXPECT_EQ(assemble(T, 0, GluingRule::EdgeIdentified).dimension(), 6 * T.cells().size() - 2 * interior);
    }
}

TEST(Mesh, InteriorVertexStarHasOneSumZeroConstraint) {
    Triangulation fan = sample_mesh("triangle_fan");
    GlobalSpace S = assemble(fan, 1, GluingRule::General);
    EXPECT_EQ(S.sum_zero_constraints, 1u);
    EXPECT_EQ(S.identification_constraints, 6u);  // one per interior edge
    // arcs at the centre: six local dofs, one relation
    std::size_t arcs = 0;
    for (const auto& d : S.local)
        if (d.flag.block_count() == 2 && d.flag.block(0) == VertexSet{0}) ++arcs;
    EXPECT_EQ(arcs, 6u);
    EXPECT_FALSE(S.skipped_boundary_faces.empty());
}

TEST(Mesh, GlobalComplexIsWellDefined) {
    for (const auto& s : sample_meshes()) {
        Triangulation T = Triangulation::from_json(s.document);
        for (GluingRule r : kScalarRules) {
            if (!rule_applies(r, T.dimension())) continue;
            SCOPED_TRACE(s.name + " " + to_string(r));
            GlobalComplex G = assemble_complex(T, r);
            EXPECT_TRUE(G.dd_zero);
            EXPECT_TRUE(G.well_defined);
        }
    }
}

TEST(Mesh, ZerothCohomologyCountsComponents) {
    for (const auto& s : sample_meshes()) {
        Triangulation T = Triangulation::from_json(s.document);
        for (GluingRule r : {GluingRule::EdgeIdentified, GluingRule::General}) {
            if (!rule_applies(r, T.dimension())) continue;
            SCOPED_TRACE(s.name + " " + to_string(r));
            EXPECT_EQ(assemble_complex(T, r).betti.at(0), T.connected_components());
        }
    }
    Triangulation two = Triangulation::from_string(R"({"dimension":1,"cells":[[0,1],[2,3],[3,4]]})");
    EXPECT_EQ(two.connected_components(), 2u);
    EXPECT_EQ(assemble_complex(two, GluingRule::General).betti.at(0), 2u);
}

TEST(Mesh, GeneralRuleMatchesSimplicialCohomology) {
    for (const auto& s : sample_meshes()) {
        SCOPED_TRACE(s.name);
        CohomologyReport r = global_cohomology(Triangulation::from_json(s.document), GluingRule::General);
        EXPECT_EQ(r.betti_blowup, s.betti);
        EXPECT_TRUE(r.match);
    }
}

TEST(Mesh, RuleDimensionMismatch) {
    EXPECT_THROW(assemble(sample_mesh("single_tetrahedron"), 0, GluingRule::VertexIdentified), std::invalid_argument);
    EXPECT_THROW(parse_gluing_rule("glue-everything"), std::invalid_argument);
}
