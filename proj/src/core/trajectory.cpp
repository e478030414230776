#include "lavlab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lavlab/errors.hpp"

namespace lavlab {

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) {
        throw Error(ErrorKind::argument, "mesh needs at least two nodes");
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!std::isfinite(nodes_[i])) {
            throw Error(ErrorKind::argument, "mesh node " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "mesh nodes must be strictly increasing (t_" << i - 1 << " = " << nodes_[i - 1]
                << ", t_" << i << " = " << nodes_[i] << ")";
            throw Error(ErrorKind::argument, msg.str());
        }
    }
}

std::size_t Mesh::locate(double t) const {
    if (!(t >= a() && t <= b())) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "t = " << t << " outside [" << a() << ", " << b() << "]";
        throw Error(ErrorKind::domain, msg.str());
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const auto idx = static_cast<std::size_t>(it - nodes_.begin());
    return std::min(idx == 0 ? 0 : idx - 1, cell_count() - 1);
}

Mesh graded_mesh(double a, double b, std::size_t n, double power) {
    if (n == 0) throw Error(ErrorKind::argument, "graded_mesh needs n >= 1");
    if (!(power >= 1.0)) throw Error(ErrorKind::argument, "graded_mesh needs power >= 1");
    if (!(a < b)) throw Error(ErrorKind::argument, "graded_mesh needs a < b");
    std::vector<double> nodes(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n);
        nodes[i] = a + (b - a) * std::pow(s, power);
    }
    nodes.front() = a;
    nodes.back() = b;
    return Mesh(std::move(nodes));
}

Mesh bisected(const Mesh& mesh) {
    const auto nodes = mesh.nodes();
    std::vector<double> out;
    out.reserve(2 * nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        out.push_back(nodes[i]);
        out.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    out.push_back(nodes.back());
    return Mesh(std::move(out));
}

Trajectory::Trajectory(Mesh mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
    if (values_.size() != mesh_.node_count()) {
        throw Error(ErrorKind::argument, "trajectory has " + std::to_string(values_.size()) +
                                             " values for " + std::to_string(mesh_.node_count()) +
                                             " nodes");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::argument, "trajectory value " + std::to_string(i) + " is not finite");
        }
    }
}

double Trajectory::eval(double t) const {
    const std::size_t i = mesh_.locate(t);
    const auto nodes = mesh_.nodes();
    if (t == nodes[i]) return values_[i];
    if (t == nodes[i + 1]) return values_[i + 1];
    const double s = (t - nodes[i]) / mesh_.width(i);
    return values_[i] + s * (values_[i + 1] - values_[i]);
}

std::vector<double> Trajectory::cell_derivatives() const {
    std::vector<double> d(cell_count());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = slope(i);
    return d;
}

double Trajectory::lipschitz_constant() const {
    double lip = 0.0;
    for (std::size_t i = 0; i < cell_count(); ++i) lip = std::max(lip, std::abs(slope(i)));
    return lip;
}

double Trajectory::total_variation() const {
    double tv = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) tv += std::abs(values_[i + 1] - values_[i]);
    return tv;
}

Trajectory sample(const ScalarFunction& f, const Mesh& mesh) {
    const auto nodes = mesh.nodes();
    std::vector<double> values(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        values[i] = f(nodes[i]);
        if (!std::isfinite(values[i])) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "sampled function is not finite at t = " << nodes[i];
            throw Error(ErrorKind::domain, msg.str());
        }
    }
    return Trajectory(mesh, std::move(values));
}

Trajectory with_node(const Trajectory& y, double t) {
    const std::size_t cell = y.mesh().locate(t);
    const auto nodes = y.mesh().nodes();
    if (t == nodes[cell] || t == nodes[cell + 1]) return y;
    std::vector<double> new_nodes(nodes.begin(), nodes.end());
    std::vector<double> new_values(y.values().begin(), y.values().end());
    const double value = y.eval(t);
    new_nodes.insert(new_nodes.begin() + static_cast<std::ptrdiff_t>(cell + 1), t);
    new_values.insert(new_values.begin() + static_cast<std::ptrdiff_t>(cell + 1), value);
    return Trajectory(Mesh(std::move(new_nodes)), std::move(new_values));
}

Trajectory bisected(const Trajectory& y) {
    Mesh mesh = bisected(y.mesh());
    const auto v = y.values();
    std::vector<double> values;
    values.reserve(mesh.node_count());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        values.push_back(v[i]);
        values.push_back(0.5 * (v[i] + v[i + 1]));
    }
    values.push_back(v.back());
    return Trajectory(std::move(mesh), std::move(values));
}

Trajectory slice(const Trajectory& y, std::size_t first, std::size_t last) {
    if (!(first < last) || last >= y.mesh().node_count()) {
        throw Error(ErrorKind::argument, "slice needs first < last < node count");
    }
    const auto nodes = y.mesh().nodes();
    const auto values = y.values();
    return Trajectory(Mesh({nodes.begin() + static_cast<std::ptrdiff_t>(first),
                            nodes.begin() + static_cast<std::ptrdiff_t>(last + 1)}),
                      {values.begin() + static_cast<std::ptrdiff_t>(first),
                       values.begin() + static_cast<std::ptrdiff_t>(last + 1)});
}

Trajectory join(std::span<const Trajectory> pieces) {
    if (pieces.empty()) throw Error(ErrorKind::argument, "join needs at least one piece");
    std::vector<double> nodes;
    std::vector<double> values;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
        const auto n = pieces[p].mesh().nodes();
        const auto v = pieces[p].values();
        std::size_t start = 0;
        if (p > 0) {
            if (n.front() != nodes.back() || v.front() != values.back()) {
                throw Error(ErrorKind::argument, "joined pieces must share their junction node");
            }
            start = 1;
        }
        nodes.insert(nodes.end(), n.begin() + static_cast<std::ptrdiff_t>(start), n.end());
        values.insert(values.end(), v.begin() + static_cast<std::ptrdiff_t>(start), v.end());
    }
    return Trajectory(Mesh(std::move(nodes)), std::move(values));
}

MonotoneMap::MonotoneMap(Mesh domain, std::vector<double> speeds)
    : domain_(std::move(domain)), speeds_(std::move(speeds)) {
    if (speeds_.size() != domain_.cell_count()) {
        throw Error(ErrorKind::argument, "monotone map needs one speed per cell");
    }
    for (std::size_t i = 0; i < speeds_.size(); ++i) {
        if (!(speeds_[i] > 0.0) || !std::isfinite(speeds_[i])) {
            throw Error(ErrorKind::argument,
                        "monotone map speed " + std::to_string(i) + " must be finite and positive");
        }
    }
}

std::vector<double> MonotoneMap::image_nodes() const {
    // Accumulate the displacement phi(t_i) - t_i rather than phi itself, so
    // unit-speed stretches reproduce the domain nodes bit for bit.
    const auto nodes = domain_.nodes();
    std::vector<double> image(nodes.begin(), nodes.end());
    double shift = 0.0;
    for (std::size_t i = 0; i < speeds_.size(); ++i) {
        if (speeds_[i] != 1.0) shift += (speeds_[i] - 1.0) * domain_.width(i);
        image[i + 1] = nodes[i + 1] + shift;
    }
    return image;
}

double MonotoneMap::eval(double t) const {
    const std::size_t cell = domain_.locate(t);
    double shift = 0.0;
    for (std::size_t i = 0; i < cell; ++i) {
        if (speeds_[i] != 1.0) shift += (speeds_[i] - 1.0) * domain_.width(i);
    }
    const double start = domain_.nodes()[cell];
    return start + shift + speeds_[cell] * (t - start);
}

double MonotoneMap::endpoint_defect() const {
    double shift = 0.0;
    for (std::size_t i = 0; i < speeds_.size(); ++i) shift += (speeds_[i] - 1.0) * domain_.width(i);
    return shift;
}

bool MonotoneMap::endpoint_exact() const {
    return std::abs(endpoint_defect()) <= endpoint_tolerance * domain_.length();
}

Trajectory push_through_inverse(const Trajectory& y, const MonotoneMap& phi) {
    if (!(phi.domain() == y.mesh())) {
        throw Error(ErrorKind::contract, "time change and trajectory must share the same mesh");
    }
    if (!phi.endpoint_exact()) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "time change is not endpoint-exact: phi(b) - b = " << phi.endpoint_defect();
        throw Error(ErrorKind::contract, msg.str());
    }
    std::vector<double> nodes = phi.image_nodes();
    nodes.back() = y.mesh().b();
    std::vector<double> values(y.values().begin(), y.values().end());
    return Trajectory(Mesh(std::move(nodes)), std::move(values));
}

}  // namespace lavlab
