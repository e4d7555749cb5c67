#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "inramr/inr.hpp"
#include "inramr/mesh.hpp"

namespace inramr {

/// One row of the DOFs-vs-error report.
struct IterationRecord {
    int iteration = 0;
    long dofs = 0;
    long leaf_count = 0;
    double rmse = 0.0;
    double wall_time_s = 0.0;
};

/// Domain-wide sample used for the total-error metric. Drawn once per
/// campaign from a stream independent of mesh state, so every iteration is
/// scored on the identical point set.
struct GlobalSample {
    Matrix points;          // n x free_dim
    std::vector<double> f;  // INR values at the points
    double f_min = 0.0;
    double f_max = 0.0;
};

GlobalSample draw_global_sample(const Mlp& net, long n, std::uint64_t seed, int threads = 1);

/// RMSE between the cached INR values and the mesh's multilinear interpolant.
/// Pairwise reduction; bit-stable for any thread count.
double rmse_against(const GlobalSample& sample, const MeshTree& mesh, const VertexValues& values,
                    int threads = 1);

/// Convenience composition of the two steps above.
double total_error(const Mlp& net, const MeshTree& mesh, const VertexValues& values, long n_total,
                   std::uint64_t seed);

long default_total_samples(int dim);

/// Batched forward pass in fixed-size chunks; identical results for any
/// chunking because each point is evaluated independently.
std::vector<double> forward_chunked(const Mlp& net, const Matrix& points, int threads = 1);

void write_report_csv(const std::vector<IterationRecord>& report, const std::string& path);
std::vector<IterationRecord> read_report_csv(const std::string& path);

}  // namespace inramr
