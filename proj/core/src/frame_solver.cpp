#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "spiralq/error.hpp"
#include "spiralq/mechanics.hpp"

namespace spiralq {

namespace {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Local axes: x along the element; z stays in the plane spanned by x and the
// global z axis, so for in-plane members local z is the wafer normal.
Eigen::Matrix3d local_axes(const Vec3& a, const Vec3& b) {
    Eigen::Vector3d ex(b.x - a.x, b.y - a.y, b.z - a.z);
    ex.normalize();
    Eigen::Vector3d ref = std::abs(ex.z()) < 0.999 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
    Eigen::Vector3d ey = ref.cross(ex).normalized();
    Eigen::Vector3d ez = ex.cross(ey);
    Eigen::Matrix3d r;
    r.row(0) = ex;
    r.row(1) = ey;
    r.row(2) = ez;
    return r;
}

// 12-DOF Euler-Bernoulli space-frame stiffness in global coordinates.
Mat12 element_stiffness(const FrameModel& model, const FrameElement& el) {
    const Vec3& pa = model.nodes[el.node_a].position;
    const Vec3& pb = model.nodes[el.node_b].position;
    const double L = (pb - pa).norm();
    const SectionRigidity s = el.section.rigidity(el.material);

    Mat12 k = Mat12::Zero();
    const double ax = s.ea / L;
    k(0, 0) = k(6, 6) = ax;
    k(0, 6) = k(6, 0) = -ax;

    const double tq = s.gj / L;
    k(3, 3) = k(9, 9) = tq;
    k(3, 9) = k(9, 3) = -tq;

    // Bending in the local x-y plane (v, rz) uses the in-plane rigidity.
    const double bz = s.ei_in;
    k(1, 1) = k(7, 7) = 12.0 * bz / (L * L * L);
    k(1, 7) = k(7, 1) = -12.0 * bz / (L * L * L);
    k(1, 5) = k(5, 1) = k(1, 11) = k(11, 1) = 6.0 * bz / (L * L);
    k(5, 7) = k(7, 5) = k(7, 11) = k(11, 7) = -6.0 * bz / (L * L);
    k(5, 5) = k(11, 11) = 4.0 * bz / L;
    k(5, 11) = k(11, 5) = 2.0 * bz / L;

    // Bending in the local x-z plane (w, ry) uses the out-of-plane rigidity.
    const double by = s.ei_out;
    k(2, 2) = k(8, 8) = 12.0 * by / (L * L * L);
    k(2, 8) = k(8, 2) = -12.0 * by / (L * L * L);
    k(2, 4) = k(4, 2) = k(2, 10) = k(10, 2) = -6.0 * by / (L * L);
    k(4, 8) = k(8, 4) = k(8, 10) = k(10, 8) = 6.0 * by / (L * L);
    k(4, 4) = k(10, 10) = 4.0 * by / L;
    k(4, 10) = k(10, 4) = 2.0 * by / L;

    const Eigen::Matrix3d r = local_axes(pa, pb);
    Mat12 t = Mat12::Zero();
    for (int b = 0; b < 4; ++b) t.block<3, 3>(3 * b, 3 * b) = r;
    return t.transpose() * k * t;
}

// u_slave = C u_master for a rigid offset d = p_slave - p_master.
Mat6 rigid_transfer(const Vec3& d) {
    Mat6 c = Mat6::Identity();
    c(0, 4) = d.z;
    c(0, 5) = -d.y;
    c(1, 3) = -d.z;
    c(1, 5) = d.x;
    c(2, 3) = d.y;
    c(2, 4) = -d.x;
    return c;
}

}  // namespace

struct StaticSolver::Impl {
    std::size_t node_count = 0;
    std::vector<std::size_t> master;  // final master per node (self when independent)
    std::vector<Mat6> transfer;       // identity for independent nodes
    std::vector<long> dof_index;      // per node*6 of independent nodes, -1 when fixed
    std::vector<bool> fully_fixed;    // per node, effective
    Eigen::SparseMatrix<double> k;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt;
    std::size_t n = 0;

    long index(std::size_t node, int d) const { return dof_index[master[node] * kDofsPerNode + d]; }
};

namespace {

std::vector<std::string> unanchored_dofs(const FrameModel& model) {
    std::vector<std::size_t> parent(model.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
    for (const auto& e : model.elements) unite(e.node_a, e.node_b);
    for (const auto& l : model.links) unite(l.master, l.slave);
    std::vector<bool> anchored(model.nodes.size(), false);
    for (auto dof : model.fixed_dofs) anchored[find(dof / kDofsPerNode)] = true;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < model.nodes.size(); ++i) {
        if (anchored[find(i)]) continue;
        for (int d = 0; d < kDofsPerNode; ++d)
            if (!model.is_fixed(i, static_cast<Dof>(d)))
                out.push_back(fmt::format("node {} {}", i, to_string(static_cast<Dof>(d))));
    }
    return out;
}

}  // namespace

namespace {

// DOFs that move in the near-zero-stiffness modes of K (mechanisms of a
// partially constrained part). Dense, so only for the error path.
std::vector<std::string> mechanism_dofs(const Eigen::SparseMatrix<double>& sparse, const std::vector<std::size_t>& master,
                                        const std::vector<long>& dof_index) {
    std::vector<std::string> out;
    if (sparse.rows() > 4000) return out;
    const Eigen::MatrixXd k(sparse);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(k);
    if (eig.info() != Eigen::Success) return out;
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    const double tol = 1e-9 * std::max(std::abs(lambda(lambda.size() - 1)), 1e-300);
    std::vector<bool> moving(static_cast<std::size_t>(k.rows()), false);
    for (Eigen::Index m = 0; m < lambda.size() && lambda(m) <= tol; ++m) {
        const Eigen::VectorXd v = eig.eigenvectors().col(m);
        const double peak = v.cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < v.size(); ++j)
            if (std::abs(v(j)) > 0.1 * peak) moving[static_cast<std::size_t>(j)] = true;
    }
    for (std::size_t i = 0; i < master.size(); ++i) {
        if (master[i] != i) continue;
        for (int d = 0; d < kDofsPerNode; ++d) {
            const long j = dof_index[i * kDofsPerNode + d];
            if (j >= 0 && moving[static_cast<std::size_t>(j)])
                out.push_back(fmt::format("node {} {}", i, to_string(static_cast<Dof>(d))));
        }
    }
    return out;
}

}  // namespace

StaticSolver::StaticSolver(const FrameModel& model) : impl_(std::make_unique<Impl>()) {
    if (auto v = model.violations(); !v.empty()) {
        if (model.fixed_dofs.empty())
            throw StabilityError("unconstrained model: no degrees of freedom are fixed", unanchored_dofs(model));
        throw ValidationError(std::move(v));
    }
    auto& im = *impl_;
    im.node_count = model.nodes.size();
    im.master.resize(im.node_count);
    std::iota(im.master.begin(), im.master.end(), 0);
    std::vector<std::size_t> direct(im.node_count);
    std::iota(direct.begin(), direct.end(), 0);
    for (const auto& l : model.links) {
        if (direct[l.slave] != l.slave && direct[l.slave] != l.master)
            throw Error(fmt::format("node {} is slaved to two masters", l.slave));
        direct[l.slave] = l.master;
    }
    for (std::size_t i = 0; i < im.node_count; ++i) {
        std::size_t m = i, hops = 0;
        while (direct[m] != m) {
            m = direct[m];
            if (++hops > im.node_count) throw Error("rigid links form a cycle");
        }
        im.master[i] = m;
    }
    im.transfer.assign(im.node_count, Mat6::Identity());
    for (std::size_t i = 0; i < im.node_count; ++i)
        if (im.master[i] != i)
            im.transfer[i] = rigid_transfer(model.nodes[i].position - model.nodes[im.master[i]].position);

    im.fully_fixed.assign(im.node_count, false);
    for (std::size_t i = 0; i < im.node_count; ++i) {
        if (im.master[i] != i) continue;
        bool all = true;
        for (int d = 0; d < kDofsPerNode; ++d) all = all && model.is_fixed(i, static_cast<Dof>(d));
        im.fully_fixed[i] = all;
    }
    for (std::size_t i = 0; i < im.node_count; ++i) {
        if (im.master[i] == i) continue;
        const bool constrained = model.fixed_dofs.lower_bound(i * kDofsPerNode) !=
                                 model.fixed_dofs.upper_bound(i * kDofsPerNode + 5);
        if (constrained && !im.fully_fixed[im.master[i]])
            throw Error(fmt::format("constraint on node {} conflicts with its rigid link", i));
        im.fully_fixed[i] = im.fully_fixed[im.master[i]];
    }

    im.dof_index.assign(im.node_count * kDofsPerNode, -1);
    long next = 0;
    for (std::size_t i = 0; i < im.node_count; ++i) {
        if (im.master[i] != i) continue;
        for (int d = 0; d < kDofsPerNode; ++d)
            if (!model.is_fixed(i, static_cast<Dof>(d))) im.dof_index[i * kDofsPerNode + d] = next++;
    }
    im.n = static_cast<std::size_t>(next);
    if (im.n == 0) throw StabilityError("every degree of freedom is fixed; nothing to solve");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(model.elements.size() * 144);
    for (const auto& el : model.elements) {
        const Mat12 ke = element_stiffness(model, el);
        Mat12 a = Mat12::Zero();
        a.block<6, 6>(0, 0) = im.transfer[el.node_a];
        a.block<6, 6>(6, 6) = im.transfer[el.node_b];
        const Mat12 kr = a.transpose() * ke * a;
        std::array<long, 12> idx{};
        for (int d = 0; d < 6; ++d) {
            idx[d] = im.index(el.node_a, d);
            idx[6 + d] = im.index(el.node_b, d);
        }
        for (int r = 0; r < 12; ++r) {
            if (idx[r] < 0) continue;
            for (int c = 0; c < 12; ++c)
                if (idx[c] >= 0 && kr(r, c) != 0.0) trip.emplace_back(idx[r], idx[c], kr(r, c));
        }
    }
    im.k.resize(static_cast<long>(im.n), static_cast<long>(im.n));
    im.k.setFromTriplets(trip.begin(), trip.end());

    im.llt.compute(im.k);
    if (im.llt.info() != Eigen::Success) {
        auto free = unanchored_dofs(model);
        if (free.empty()) free = mechanism_dofs(im.k, im.master, im.dof_index);
        std::string msg = "stiffness matrix is singular (unstable structure)";
        if (!free.empty()) {
            msg += "; unconstrained:";
            for (std::size_t i = 0; i < std::min<std::size_t>(free.size(), 12); ++i) msg += " [" + free[i] + "]";
            if (free.size() > 12) msg += fmt::format(" ... ({} total)", free.size());
        }
        throw StabilityError(msg, std::move(free));
    }
}

StaticSolver::~StaticSolver() = default;
StaticSolver::StaticSolver(StaticSolver&&) noexcept = default;
StaticSolver& StaticSolver::operator=(StaticSolver&&) noexcept = default;

const Eigen::SparseMatrix<double>& StaticSolver::stiffness() const { return impl_->k; }
std::size_t StaticSolver::reduced_dofs() const { return impl_->n; }

bool StaticSolver::immobile(std::size_t node) const { return impl_->fully_fixed.at(node); }

bool StaticSolver::is_free(std::size_t node, Dof dof) const {
    return impl_->index(node, static_cast<int>(dof)) >= 0;
}

Displacements StaticSolver::solve(const std::map<std::size_t, NodalLoad>& loads) const {
    const auto& im = *impl_;
    Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<long>(im.n));
    for (const auto& [node, load] : loads) {
        if (node >= im.node_count) throw Error(fmt::format("load on missing node {}", node));
        const Vec6 fl = im.transfer[node].transpose() * Eigen::Map<const Vec6>(load.data());
        for (int d = 0; d < 6; ++d)
            if (const long j = im.index(node, d); j >= 0) f(j) += fl(d);
    }
    Displacements out;
    out.nodal.assign(im.node_count, NodalLoad{});
    const double fn = f.norm();
    if (fn == 0.0) return out;

    const Eigen::VectorXd u = im.llt.solve(f);
    out.residual = (im.k * u - f).norm() / fn;
    if (!(out.residual < 1e-8))
        throw StabilityError(fmt::format("static solve residual {:.3e} exceeds 1e-8", out.residual));

    for (std::size_t i = 0; i < im.node_count; ++i) {
        Vec6 um = Vec6::Zero();
        for (int d = 0; d < 6; ++d)
            if (const long j = im.index(i, d); j >= 0) um(d) = u(j);
        const Vec6 ui = im.transfer[i] * um;
        for (int d = 0; d < 6; ++d) out.nodal[i][static_cast<std::size_t>(d)] = ui(d);
    }
    return out;
}

Displacements solve_static(const FrameModel& model) {
    return StaticSolver(model).solve(model.loads);
}

ImpactResult max_impact_force(const FrameModel& model, double deflection_limit) {
    if (!(deflection_limit > 0.0)) throw DomainError("deflection limit must be > 0");
    const StaticSolver solver(model);

    std::vector<std::size_t> winding;
    for (std::size_t i = 0; i < model.nodes.size(); ++i)
        if (model.nodes[i].tag == LayerTag::winding) winding.push_back(i);

    ImpactResult best;
    bool any = false;
    for (auto node : winding) {
        if (solver.immobile(node) || !solver.is_free(node, Dof::uz)) continue;
        NodalLoad unit{};
        unit[static_cast<std::size_t>(Dof::uz)] = -1.0;
        const auto disp = solver.solve({{node, unit}});
        double worst = 0.0;
        for (auto w : winding) worst = std::max(worst, std::abs(disp.uz(w)));
        any = true;
        if (worst > best.max_unit_deflection) {
            best.max_unit_deflection = worst;
            best.critical_node = node;
        }
    }
    if (!any || !(best.max_unit_deflection > 0.0))
        throw StabilityError("no free winding node to load");
    best.force = deflection_limit / best.max_unit_deflection;
    return best;
}

}  // namespace spiralq
