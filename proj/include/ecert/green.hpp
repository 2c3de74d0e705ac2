#pragma once

#include "ecert/bounds.hpp"
#include "ecert/fem/assembly.hpp"
#include "ecert/fem/measure.hpp"
#include "ecert/fem/mesh.hpp"
#include "ecert/fem/solver.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

namespace ecert::green {

using fem::Point;

// Sign convention: the kernel satisfies int a grad E . grad v = v(x), so
// that Green kernels are nonnegative.
enum class KernelKind { green_mixed, green_dirichlet, neumann };

const char* kind_name(KernelKind k);

struct KernelColumn {
    Point source;
    fem::DiscreteField field;
    KernelKind kind;
    double rho = 0.0;        // effective mollifier radius, 0 for a nodal delta
    int source_vertex = -1;  // vertex carrying the nodal delta
};

// Mesh with the boundary tags the kind requires.
fem::Mesh kernel_mesh(const fem::Mesh& mesh, KernelKind kind);

// rho = 0 loads the vertex nearest to x; rho > 0 uses the normalised disk
// indicator with radius max(2 h_max, rho).
KernelColumn kernel_column(const fem::Mesh& mesh, const fem::Coefficient& coeff, Point x, double rho,
                           KernelKind kind, double tol = 1e-12);

// Green function of the Laplacian on the unit disk.
double disk_green_oracle(Point x, Point y);

struct DecaySample {
    Point source;
    Point y;
    double dist;
    double value;
    double bound;
    double ratio;
};

struct DecayReport {
    std::string formula_id;
    std::vector<DecaySample> samples;
    double max_ratio = 0.0;
    bool pass = true;

    std::string to_csv() const;
};

// |E(x, y)| against bound(|x - y|) at the given points.
DecayReport decay_check(const KernelColumn& column, const fem::Mesh& mesh, const KernelBound& bound,
                        const std::vector<Point>& samples);
// |grad_y E| on the cell holding each point against bound(|x - y|).
DecayReport gradient_decay_check(const KernelColumn& column, const fem::Mesh& mesh,
                                 const KernelBound& bound, const std::vector<Point>& samples);

std::vector<fem::Vec2> gradient_column(const KernelColumn& column, const fem::Mesh& mesh);

// Central difference in the source variable along axis (0 = x, 1 = y):
// columns at x -/+ h e with h = h_max, divided by 2h.
fem::DiscreteField source_derivative_column(const fem::Mesh& mesh, const fem::Coefficient& coeff,
                                            Point x, double rho, KernelKind kind, int axis,
                                            double tol = 1e-12);

// Nodal-delta columns cached by (mesh hash, coefficient hash, kind, vertex).
class KernelCache {
public:
    std::shared_ptr<const fem::DiscreteField> get_or_compute(
        const fem::Mesh& kmesh, const fem::Coefficient& coeff, KernelKind kind, int vertex,
        const fem::LinearSystem& system, double tol);
    std::size_t size() const;

private:
    using Key = std::tuple<std::uint64_t, std::uint64_t, int, int>;
    mutable std::mutex mutex_;
    std::map<Key, std::shared_ptr<const fem::DiscreteField>> columns_;
};

inline constexpr int representation_vertex_limit = 2500;

// u_rec = sum_j K_h(:, j) b_j over free vertices j, with b the assembled
// load. The kind follows the mesh tags.
fem::DiscreteField representation_reconstruct(const fem::Mesh& mesh, const fem::Coefficient& coeff,
                                              const fem::ProblemData& data, KernelCache* cache = nullptr,
                                              int threads = 1, double tol = 1e-13);

} // namespace ecert::green
