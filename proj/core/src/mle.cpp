#include "qpol/errors.hpp"
#include "qpol/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace qpol {

namespace {

// Gaussian negative log-likelihood over raw Cholesky parameters. Works on the
// triangular factor directly; building a validated DensityMatrix per
// evaluation would dominate the optimizer's runtime.
class MleObjective {
public:
    MleObjective(const CountRecord& rec, const PovmSet& povm, double n_total)
        : d_(povm.dim()), n_total_(n_total) {
        for (const Projector& p : povm.projectors) kets_.push_back(p.ket);
        for (const auto& c : rec.counts) counts_.push_back(c.second);
    }

    double operator()(const std::vector<double>& t) const {
        cd tm[4][4] = {};
        for (int i = 0; i < d_; ++i) tm[i][i] = t[static_cast<size_t>(i)];
        size_t k = static_cast<size_t>(d_);
        for (int i = 1; i < d_; ++i)
            for (int j = 0; j < i; ++j, k += 2) tm[i][j] = cd{t[k], t[k + 1]};
        double tr = 0.0;
        for (int i = 0; i < d_; ++i)
            for (int j = 0; j <= i; ++j) tr += std::norm(tm[i][j]);
        if (tr < 1e-300) return 1e300;
        double loss = 0.0;
        for (size_t m = 0; m < kets_.size(); ++m) {
            const std::vector<cd>& ket = kets_[m];
            double nv = 0.0;
            for (int i = 0; i < d_; ++i) {
                cd v = 0.0;
                for (int j = 0; j <= i; ++j) v += tm[i][j] * ket[static_cast<size_t>(j)];
                nv += std::norm(v);
            }
            const double q = nv / tr;  // <psi| T^dag T |psi> / Tr(T^dag T)
            const double diff = n_total_ * q - counts_[m];
            loss += diff * diff / (2.0 * n_total_ * std::max(q, 1e-12));
        }
        return loss;
    }

private:
    int d_;
    double n_total_;
    std::vector<std::vector<cd>> kets_;
    std::vector<double> counts_;
};

struct NmRun {
    std::vector<double> x;
    double f = 0.0;
    long iterations = 0;
    long evaluations = 0;
    bool converged = false;
};

NmRun nelder_mead(const std::function<double(const std::vector<double>&)>& fn,
                  const std::vector<double>& x0, long max_evals, double improvement_tol,
                  int stall_iters) {
    const size_t n = x0.size();
    long evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return fn(x);
    };

    std::vector<std::vector<double>> xs(n + 1, x0);
    std::vector<double> fs(n + 1);
    for (size_t i = 0; i < n; ++i) {
        double& c = xs[i + 1][i];
        c += std::abs(c) < 1e-8 ? 0.02 : 0.05 * std::abs(c);
    }
    for (size_t i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

    std::vector<size_t> order(n + 1);
    std::iota(order.begin(), order.end(), size_t{0});
    auto sort_simplex = [&] {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
    };

    sort_simplex();
    double best = fs[order[0]];
    int stall = 0;
    long iterations = 0;
    bool converged = false;

    while (evals < max_evals) {
        ++iterations;
        const size_t worst = order[n];
        const size_t second = order[n - 1];
        std::vector<double> centroid(n, 0.0);
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) centroid[j] += xs[order[i]][j] / static_cast<double>(n);

        auto along = [&](double coef) {
            std::vector<double> p(n);
            for (size_t j = 0; j < n; ++j) p[j] = centroid[j] + coef * (centroid[j] - xs[worst][j]);
            return p;
        };

        std::vector<double> xr = along(1.0);
        const double fr = eval(xr);
        if (fr < fs[order[0]]) {
            std::vector<double> xe = along(2.0);
            const double fe = eval(xe);
            if (fe < fr) {
                xs[worst] = std::move(xe);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(xr);
                fs[worst] = fr;
            }
        } else if (fr < fs[second]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            bool shrink = false;
            if (fr < fs[worst]) {
                std::vector<double> xc = along(0.5);
                const double fc = eval(xc);
                if (fc <= fr) {
                    xs[worst] = std::move(xc);
                    fs[worst] = fc;
                } else {
                    shrink = true;
                }
            } else {
                std::vector<double> xc = along(-0.5);
                const double fc = eval(xc);
                if (fc < fs[worst]) {
                    xs[worst] = std::move(xc);
                    fs[worst] = fc;
                } else {
                    shrink = true;
                }
            }
            if (shrink) {
                const std::vector<double>& xb = xs[order[0]];
                for (size_t i = 1; i <= n; ++i) {
                    const size_t idx = order[i];
                    for (size_t j = 0; j < n; ++j) xs[idx][j] = xb[j] + 0.5 * (xs[idx][j] - xb[j]);
                    fs[idx] = eval(xs[idx]);
                }
            }
        }
        sort_simplex();
        const double now = fs[order[0]];
        if (best - now > improvement_tol)
            stall = 0;
        else
            ++stall;
        best = std::min(best, now);
        if (stall >= stall_iters) {
            converged = true;
            break;
        }
    }

    NmRun run;
    run.x = xs[order[0]];
    run.f = fs[order[0]];
    run.iterations = iterations;
    run.evaluations = evals;
    run.converged = converged;
    return run;
}

}  // namespace

MleResult mle_reconstruct(const CountRecord& rec, const PovmSet& povm, double n_total,
                          const MleOptions& options, Rng& rng) {
    validate_counts(rec, povm);
    if (n_total <= 0.0) throw std::invalid_argument("mle_reconstruct: total must be positive");
    const int d = povm.dim();
    const size_t nparams = static_cast<size_t>(d) * d;

    DensityMatrix seed = [&] {
        try {
            return physicalize(linear_inversion(rec, povm));
        } catch (const std::runtime_error&) {
            // inversion can fail on degenerate data; MLE can still proceed
            return DensityMatrix(ComplexMatrix::identity(d) * cd{1.0 / d, 0.0});
        }
    }();
    // nudge off the boundary of the state space so the triangular factor is
    // well conditioned at the start
    const double eps = 1e-6;
    const ComplexMatrix blended =
        seed.matrix() * cd{1.0 - eps, 0.0} + ComplexMatrix::identity(d) * cd{eps / d, 0.0};
    const CholeskyParams start = cholesky_of(blended);

    const MleObjective objective(rec, povm, n_total);
    NmRun bestRun =
        nelder_mead(objective, start.t, options.max_evals, options.improvement_tol, options.stall_iters);
    long iterations = bestRun.iterations;
    long evaluations = bestRun.evaluations;

    for (int r = 0; r < options.restarts && bestRun.f > options.good_enough; ++r) {
        std::vector<double> t0(nparams);
        for (double& v : t0) v = 0.4 * rng.normal();
        NmRun run = nelder_mead(objective, t0, options.max_evals, options.improvement_tol,
                                options.stall_iters);
        iterations += run.iterations;
        evaluations += run.evaluations;
        if (run.f < bestRun.f) bestRun = std::move(run);
    }

    CholeskyParams bestParams;
    bestParams.t = bestRun.x;
    MleResult result{rho_from_cholesky(bestParams), bestRun.f, iterations, evaluations,
                     bestRun.converged};
    return result;
}

}  // namespace qpol
