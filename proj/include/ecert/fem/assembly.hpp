#pragma once

#include "ecert/fem/mesh.hpp"
#include "ecert/problem.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace ecert::fem {

// Cellwise constant coefficient, checked against declared bounds.
class Coefficient {
public:
    Coefficient(std::vector<double> values, CoefficientBounds declared);
    static Coefficient constant(const Mesh& mesh, double a);

    const std::vector<double>& values() const { return values_; }
    double operator[](int cell) const { return values_[cell]; }
    const CoefficientBounds& bounds() const { return bounds_; }
    std::uint64_t hash() const;

private:
    std::vector<double> values_;
    CoefficientBounds bounds_;
};

// f and fvec per cell, h per boundary edge (index of Mesh::boundary_edges),
// g per vertex. h must vanish on Dirichlet edges and g off Dirichlet vertices.
struct ProblemData {
    std::vector<double> f;
    std::vector<std::array<double, 2>> fvec;
    std::vector<double> h;
    std::vector<double> g;

    static ProblemData zero(const Mesh& mesh);
    void validate(const Mesh& mesh) const;
};

struct DiscreteField {
    std::vector<double> values;

    DiscreteField() = default;
    explicit DiscreteField(std::vector<double> v) : values(std::move(v)) {}
    void check(const Mesh& mesh) const;
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

// Compressed row storage; rows sorted by column.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void multiply(std::span<const double> x, std::span<double> y) const;
    double at(int i, int j) const;
    std::vector<double> diagonal() const;
    double max_abs() const;
    double max_asymmetry() const;
};

enum class Constraint { none, zero_mean_domain, zero_mean_boundary };

struct LinearSystem {
    CsrMatrix matrix;          // Dirichlet rows and columns eliminated, diagonal kept
    std::vector<double> rhs;   // projected when a mean constraint is active
    Constraint constraint = Constraint::none;
    std::vector<double> weights;  // mean weights (integral of each basis function)
    std::vector<char> fixed;      // Dirichlet vertices
    std::vector<double> fixed_values;
    CsrMatrix stiffness;          // full stiffness before elimination
    std::vector<double> load;     // full load functional before elimination
};

struct AssemblyOptions {
    Constraint neumann_constraint = Constraint::zero_mean_domain;
    int threads = 1;
};

LinearSystem assemble(const Mesh& mesh, const Coefficient& coeff, const ProblemData& data,
                      const AssemblyOptions& options = {});

// Replaces the load of an assembled system (Dirichlet lifting and mean
// projection are re-applied).
void set_load(LinearSystem& system, std::vector<double> load);

// Element stiffness of a cell for unit coefficient.
std::array<std::array<double, 3>, 3> element_stiffness(const Mesh& mesh, int cell);

} // namespace ecert::fem
