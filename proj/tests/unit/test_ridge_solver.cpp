#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "logitmm/data_pipeline.hpp"
#include "logitmm/ridge_solver.hpp"
#include "oracle.hpp"
#include "test_data.hpp"

using namespace logitmm;
using testing_data::normal_matrix;
using testing_data::normal_vector;
using testing_data::random_dataset;

namespace {

Vector dense_solve(const Vector& a, const Matrix& X, const Vector& w, const Vector& v)
{
    Matrix Q = X.transpose() * w.asDiagonal() * X;
    Q.diagonal() += a;
    return Q.ldlt().solve(v);
}

Vector positive_vector(std::mt19937_64& rng, Index n, double lo, double hi)
{
    std::uniform_real_distribution<double> U(lo, hi);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = U(rng);
    return v;
}

double ridge_surrogate(const TangentState& s, const Vector& b, const Dataset& d, double lambda, double eps)
{
    return surrogate_value(s, b, d) - 0.5 * eps * b[0] * b[0] - 0.5 * lambda * b.tail(b.size() - 1).squaredNorm();
}

}  // namespace

TEST_CASE("woodbury_solve")
{
    std::mt19937_64 rng(1);
    const Matrix X = normal_matrix(rng, 6, 30);
    const Vector a = positive_vector(rng, 30, 0.1, 2.0);
    const Vector v = normal_vector(rng, 30);
    CHECK((woodbury_solve(a, X, Vector::Zero(6), v) - v.cwiseQuotient(a)).lpNorm<Eigen::Infinity>() <= 1e-14);

    for (int k = 0; k < 20; ++k) {
        const Vector w = positive_vector(rng, 6, 0.0, 0.25);
        const Vector x = woodbury_solve(a, X, w, v);
        const Vector ref = dense_solve(a, X, w, v);
        CHECK((x - ref).norm() <= 1e-10 * ref.norm());
        Matrix Q = X.transpose() * w.asDiagonal() * X;
        Q.diagonal() += a;
        CHECK((Q * x - v).norm() <= 1e-10 * v.norm());
    }
    CHECK_THROWS_AS(woodbury_solve(Vector::Zero(30), X, Vector::Ones(6), v), std::invalid_argument);
    CHECK_THROWS_AS(woodbury_solve(a, X, -Vector::Ones(6), v), std::invalid_argument);
}

TEST_CASE("RidgeSystem with a nearly unpenalized intercept")
{
    std::mt19937_64 rng(2);
    Matrix X = normal_matrix(rng, 10, 50, 0.5);
    X.col(0).setOnes();
    const Vector a = ridge_diagonal(50, 0.3, 1e-8);
    RidgeSystem wood(X, a, RidgeSystem::Method::Woodbury);
    RidgeSystem dense(X, a, RidgeSystem::Method::Dense);
    CHECK(wood.uses_woodbury());
    CHECK_FALSE(dense.uses_woodbury());
    CHECK(RidgeSystem(X, a).uses_woodbury());
    for (int k = 0; k < 10; ++k) {
        const Vector w = positive_vector(rng, 10, 1e-6, 0.25);
        wood.set_weights(w);
        dense.set_weights(w);
        const Vector v = normal_vector(rng, 50);
        const Vector x = wood.solve(v);
        const Vector y = dense.solve(v);
        CHECK((x - y).norm() <= 1e-8 * y.norm());
        const Matrix H1 = wood.design_inverse_form();
        const Matrix H2 = dense.design_inverse_form();
        CHECK((H1 - H2).lpNorm<Eigen::Infinity>() <= 1e-9 * (1.0 + H2.lpNorm<Eigen::Infinity>()));
        CHECK((H1 - H1.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    }
    RidgeSystem fresh(X, a);
    CHECK_THROWS_AS(fresh.solve(Vector::Zero(50)), std::logic_error);
    CHECK_THROWS_AS(fresh.set_weights(Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("mm_step_quadratic")
{
    const Dataset one(Matrix::Ones(1, 1), Vector::Ones(1));
    const double eps = 1e-3;
    const auto s = make_tangent_state(BoundKind::PG, Vector::Zero(1), one);
    CHECK(mm_step_quadratic(s, one, 1.0, eps)[0] == doctest::Approx(0.5 / (eps + 0.25)).epsilon(1e-14));

    const Dataset d = random_dataset(3, 15, 6);
    const Vector z = Vector::Zero(6);
    const Vector bl = mm_step_quadratic(make_tangent_state(BoundKind::BL, z, d), d, 0.7, 1e-8);
    const Vector pg = mm_step_quadratic(make_tangent_state(BoundKind::PG, z, d), d, 0.7, 1e-8);
    CHECK((bl - pg).lpNorm<Eigen::Infinity>() <= 1e-12);

    std::mt19937_64 rng(4);
    for (auto kind : {BoundKind::BL, BoundKind::PG}) {
        for (int k = 0; k < 10; ++k) {
            const auto st = make_tangent_state(kind, normal_vector(rng, 6), d);
            const double lambda = 0.5, eps8 = 1e-8;
            const Vector b = mm_step_quadratic(st, d, lambda, eps8);
            const Vector resid = (st.weighted_response(d).array() - st.w.array() * (d.X() * b).array()).matrix();
            Vector grad = d.X().transpose() * resid;
            grad[0] -= eps8 * b[0];
            grad.tail(5) -= lambda * b.tail(5);
            const Vector r = d.X().transpose() * st.weighted_response(d);
            CHECK(grad.norm() <= 1e-8 * (1.0 + r.norm()));
        }
    }
    CHECK_THROWS_AS(mm_step_quadratic(make_tangent_state(BoundKind::PQ, z, d), d, 1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(mm_step_quadratic(make_tangent_state(BoundKind::PG, z, d), d, 0.0, 1e-8), std::invalid_argument);
}

TEST_CASE("mm_step_pq at the origin reduces to the quadratic step")
{
    const Dataset d = random_dataset(5, 12, 20);
    const Vector z = Vector::Zero(20);
    const auto pq = mm_step_pq(make_tangent_state(BoundKind::PQ, z, d), d, 0.4, 1e-8);
    const Vector pg = mm_step_quadratic(make_tangent_state(BoundKind::PG, z, d), d, 0.4, 1e-8);
    CHECK((pq.beta - pg).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + pg.lpNorm<Eigen::Infinity>()));
    CHECK_THROWS_AS(mm_step_pq(make_tangent_state(BoundKind::PG, z, d), d, 0.4, 1e-8), std::invalid_argument);
}

TEST_CASE("mm_step_pq satisfies the subgradient conditions and beats the PG step")
{
    std::mt19937_64 rng(6);
    for (auto [n, p] : std::vector<std::pair<Index, Index>>{{8, 4}, {10, 25}}) {
        const Dataset d = random_dataset(7 + n, n, p);
        for (int k = 0; k < 10; ++k) {
            const Vector bt = normal_vector(rng, p, 1.5);
            const auto st = make_tangent_state(BoundKind::PQ, bt, d);
            const double lambda = 0.3, eps = 1e-6;
            const auto step = mm_step_pq(st, d, lambda, eps);

            Matrix Q = d.X().transpose() * st.w.asDiagonal() * d.X();
            Q.diagonal() += ridge_diagonal(p, lambda, eps);
            const Vector r = d.X().transpose() * st.weighted_response(d);
            const Vector u = step.dual;
            CHECK(u.lpNorm<Eigen::Infinity>() <= 1.0);
            const Vector station = Q * step.beta - r + d.X().transpose() * st.nu.cwiseProduct(u);
            CHECK(station.lpNorm<Eigen::Infinity>() <= 1e-6);
            const Vector Db = st.nu.cwiseProduct(d.X() * step.beta);
            for (Index i = 0; i < n; ++i) {
                if (std::abs(Db[i]) > 1e-6) CHECK(u[i] == doctest::Approx(Db[i] > 0 ? 1.0 : -1.0).epsilon(1e-6));
            }

            const double at_step = ridge_surrogate(st, step.beta, d, lambda, eps);
            CHECK(at_step >= ridge_surrogate(st, bt, d, lambda, eps) - 1e-10);
            const Vector pg = mm_step_quadratic(make_tangent_state(BoundKind::PG, bt, d), d, lambda, eps);
            CHECK(at_step >= ridge_surrogate(st, pg, d, lambda, eps) - 1e-10);
        }
    }
}

TEST_CASE("mm_step_pq on a tiny instance matches nested golden-section search")
{
    Matrix X(3, 2);
    X << 1, 0.8, 1, -0.4, 1, 0.1;
    Vector y(3);
    y << 1, 0, 1;
    const Dataset d(X, y);
    Vector bt(2);
    bt << 1.5, -3.0;
    const auto st = make_tangent_state(BoundKind::PQ, bt, d);
    const double lambda = 0.5, eps = 0.05;
    const Vector b = mm_step_pq(st, d, lambda, eps).beta;

    auto F = [&](double b0, double b1) {
        Vector v(2);
        v << b0, b1;
        return ridge_surrogate(st, v, d, lambda, eps);
    };
    auto inner = [&](double b0) { return oracle::grid_argmax_1d([&](double b1) { return F(b0, b1); }, -20, 20, 401, 80); };
    const double b0 = oracle::grid_argmax_1d([&](double v) { return F(v, inner(v)); }, -20, 20, 401, 80);
    const double b1 = inner(b0);
    CHECK(b[0] == doctest::Approx(b0).epsilon(1e-6));
    CHECK(b[1] == doctest::Approx(b1).epsilon(1e-6));
    CHECK(F(b[0], b[1]) >= F(b0, b1) - 1e-12);
}

TEST_CASE("solve_ridge: all kinds reach the Newton optimum")
{
    const auto s = synth({20, 3, 4, 0.5, 1.0});
    const auto ref = oracle::reference_newton_ridge(s.data.X(), s.data.y(), 1.0, {1e-12});
    for (auto kind : {BoundKind::BL, BoundKind::PG, BoundKind::PQ}) {
        SolverConfig c;
        c.kind = kind;
        c.stop = StopRule::GradientNorm;
        c.tol = 1e-8;
        const auto r = solve_ridge(s.data, 1.0, c);
        CHECK(r.converged());
        CHECK((r.beta_hat - ref.beta).lpNorm<Eigen::Infinity>() <= 1e-6);
        CHECK(gradient(r.beta_hat, s.data, {1.0, 0.0}).lpNorm<Eigen::Infinity>() <= 1e-6);
        CHECK(trace_is_ascending(r.trace));
        CHECK(r.n_iter == static_cast<long>(r.trace.size()) - 1);
        for (std::size_t t = 0; t < r.trace.size(); ++t) CHECK(r.trace[t].iter == static_cast<long>(t));
    }
}

TEST_CASE("solve_ridge: gradient stopping rule, boost start and status")
{
    const Dataset d = random_dataset(11, 30, 8);
    SolverConfig c;
    c.kind = BoundKind::PQ;
    c.stop = StopRule::GradientNorm;
    c.tol = 1e-9;
    c.epsilon_intercept = 1e-12;
    const auto r = solve_ridge(d, 0.5, c);
    CHECK(r.converged());
    CHECK(gradient(r.beta_hat, d, {0.5, 0.0}).lpNorm<Eigen::Infinity>() <= 1e-9);

    SolverConfig boost = c;
    boost.init = InitPolicy::boost(10.0);
    std::vector<Vector> iterates;
    RidgeOptions opt;
    opt.on_iterate = [&](long, const Vector& b) { iterates.push_back(b); };
    const auto rb = solve_ridge(d, 0.5, boost, opt);
    REQUIRE(!iterates.empty());
    CHECK(iterates.front()[0] == 10.0);
    CHECK(iterates.front().tail(7).isZero());
    CHECK(iterates.size() == rb.trace.size());
    CHECK((rb.beta_hat - r.beta_hat).lpNorm<Eigen::Infinity>() <= 1e-8);

    SolverConfig capped;
    capped.kind = BoundKind::BL;
    capped.max_iter = 3;
    const auto rc = solve_ridge(d, 0.5, capped);
    CHECK(rc.status == MMStatus::MaxIterReached);
    CHECK(rc.n_iter == 3);

    CHECK_THROWS_AS(solve_ridge(d, 0.0, c), std::invalid_argument);
    SolverConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(solve_ridge(d, 1.0, bad), std::invalid_argument);
}

TEST_CASE("solve_ridge: the default objective rule on a small problem")
{
    const auto s = synth({20, 3, 4, 0.5, 1.0});
    const auto ref = oracle::reference_newton_ridge(s.data.X(), s.data.y(), 1.0, {1e-12});
    SolverConfig c;
    const auto r = solve_ridge(s.data, 1.0, c);
    CHECK(r.converged());
    CHECK((r.beta_hat - ref.beta).lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("solve_ridge: an optimal start barely moves")
{
    const Dataset d = random_dataset(12, 25, 6);
    const auto ref = oracle::reference_newton_ridge(d.X(), d.y(), 0.8, {1e-13});
    for (auto kind : {BoundKind::BL, BoundKind::PG, BoundKind::PQ}) {
        const auto st = make_tangent_state(kind, ref.beta, d);
        Vector next;
        if (kind == BoundKind::PQ) {
            next = mm_step_pq(st, d, 0.8, 1e-12).beta;
        } else {
            next = mm_step_quadratic(st, d, 0.8, 1e-12);
        }
        CHECK((next - ref.beta).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
}

TEST_CASE("solve_ridge: Woodbury and dense paths give the same iterates")
{
    const auto s = synth({15, 40, 3, 0.1, 1.0});
    for (auto kind : {BoundKind::PG, BoundKind::PQ}) {
        SolverConfig c;
        c.kind = kind;
        c.max_iter = 25;
        std::vector<Vector> a, b;
        RidgeOptions wood{RidgeSystem::Method::Woodbury, [&](long, const Vector& v) { a.push_back(v); }};
        RidgeOptions dense{RidgeSystem::Method::Dense, [&](long, const Vector& v) { b.push_back(v); }};
        solve_ridge(s.data, 0.2, c, wood);
        solve_ridge(s.data, 0.2, c, dense);
        REQUIRE(a.size() == b.size());
        for (std::size_t t = 0; t < a.size(); ++t) CHECK((a[t] - b[t]).lpNorm<Eigen::Infinity>() <= 1e-8);
    }
}

TEST_CASE("stopping rule names and helpers")
{
    CHECK(parse_stop_rule("gradient") == StopRule::GradientNorm);
    CHECK(parse_stop_rule("objective") == StopRule::RelativeObjective);
    CHECK(to_string(StopRule::GradientNorm) == "gradient");
    CHECK_THROWS_AS(parse_stop_rule("kkt"), std::invalid_argument);
    CHECK(objective_converged(-10.0, -10.0 + 1e-10, 1e-10));
    CHECK_FALSE(objective_converged(-10.0, -9.0, 1e-10));
    std::vector<TraceEntry> tr{{0, -5.0, 0.0}, {1, -4.0, 0.0}, {2, -4.0 - 1e-12, 0.0}};
    CHECK(trace_is_ascending(tr));
    tr.push_back({3, -4.5, 0.0});
    CHECK_FALSE(trace_is_ascending(tr));
}

TEST_CASE("init policy parsing")
{
    CHECK(parse_init_policy("zeros").mode == InitPolicy::Mode::Zeros);
    const auto b = parse_init_policy("boost=7.5");
    CHECK(b.mode == InitPolicy::Mode::Boost);
    CHECK(b.intercept == 7.5);
    CHECK(parse_init_policy("boost").intercept == 10.0);
    CHECK(format_init_policy(b) == "boost=7.5");
    CHECK(format_init_policy(InitPolicy::zeros()) == "zeros");
    CHECK_THROWS_AS(parse_init_policy("boost=x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_init_policy("ones"), std::invalid_argument);
    const auto beta = InitPolicy::boost(10).initial_beta(4);
    CHECK(beta[0] == 10.0);
    CHECK(beta.tail(3).isZero());
}
