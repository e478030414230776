#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace lavlab {

/// Strictly increasing, finite time nodes t_0 < ... < t_n with n >= 1.
/// Nodes are stored as absolute positions.
class Mesh {
public:
    explicit Mesh(std::vector<double> nodes);

    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::size_t cell_count() const noexcept { return nodes_.size() - 1; }
    [[nodiscard]] double a() const noexcept { return nodes_.front(); }
    [[nodiscard]] double b() const noexcept { return nodes_.back(); }
    [[nodiscard]] double length() const noexcept { return b() - a(); }
    [[nodiscard]] double width(std::size_t cell) const noexcept {
        return nodes_[cell + 1] - nodes_[cell];
    }

    /// Index of the cell containing t; the right endpoint belongs to the last cell.
    [[nodiscard]] std::size_t locate(double t) const;

    friend bool operator==(const Mesh&, const Mesh&) = default;

private:
    std::vector<double> nodes_;
};

/// Nodes a + (b - a) (i / n)^power; power = 1 is the uniform mesh.
[[nodiscard]] Mesh graded_mesh(double a, double b, std::size_t n, double power = 1.0);

/// Every cell split at its midpoint.
[[nodiscard]] Mesh bisected(const Mesh& mesh);

/// Continuous piecewise-linear function: the nodal interpolant on a mesh.
class Trajectory {
public:
    Trajectory(Mesh mesh, std::vector<double> values);

    [[nodiscard]] const Mesh& mesh() const noexcept { return mesh_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t cell_count() const noexcept { return mesh_.cell_count(); }

    [[nodiscard]] double front() const noexcept { return values_.front(); }
    [[nodiscard]] double back() const noexcept { return values_.back(); }

    /// Linear interpolation; exact at nodes. Throws domain error outside [a, b].
    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] double operator()(double t) const { return eval(t); }

    [[nodiscard]] double slope(std::size_t cell) const noexcept {
        return (values_[cell + 1] - values_[cell]) / mesh_.width(cell);
    }
    [[nodiscard]] std::vector<double> cell_derivatives() const;
    [[nodiscard]] double lipschitz_constant() const;
    [[nodiscard]] double total_variation() const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    Mesh mesh_;
    std::vector<double> values_;
};

using ScalarFunction = std::function<double(double)>;

/// Nodal interpolant of f. Throws when f is not finite at some node.
[[nodiscard]] Trajectory sample(const ScalarFunction& f, const Mesh& mesh);

/// Same function on a mesh with an extra node at t (no-op when t is a node).
[[nodiscard]] Trajectory with_node(const Trajectory& y, double t);

/// Same function on the bisected mesh.
[[nodiscard]] Trajectory bisected(const Trajectory& y);

/// Restriction to the nodes first..last (inclusive).
[[nodiscard]] Trajectory slice(const Trajectory& y, std::size_t first, std::size_t last);

/// Concatenates trajectories whose end and start nodes coincide.
[[nodiscard]] Trajectory join(std::span<const Trajectory> pieces);

/// Endpoint tolerance for monotone maps, relative to b - a.
inline constexpr double endpoint_tolerance = 1e-12;

/// Strictly increasing piecewise-linear time change phi with phi(a) = a and
/// constant speed phi' on each cell of the domain mesh.
class MonotoneMap {
public:
    MonotoneMap(Mesh domain, std::vector<double> speeds);

    [[nodiscard]] const Mesh& domain() const noexcept { return domain_; }
    [[nodiscard]] std::span<const double> speeds() const noexcept { return speeds_; }

    /// phi(t_i) for every domain node, accumulated left to right.
    [[nodiscard]] std::vector<double> image_nodes() const;
    [[nodiscard]] double eval(double t) const;
    [[nodiscard]] double endpoint_defect() const;
    [[nodiscard]] bool endpoint_exact() const;

private:
    Mesh domain_;
    std::vector<double> speeds_;
};

/// y composed with the inverse of phi: nodes phi(t_i), values y(t_i), cell
/// slopes d_i / v_i. The last node is pinned to b. Requires an endpoint-exact
/// map on the trajectory's own mesh.
[[nodiscard]] Trajectory push_through_inverse(const Trajectory& y, const MonotoneMap& phi);

}  // namespace lavlab
