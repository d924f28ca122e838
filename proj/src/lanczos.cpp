#include "nrdr/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "nrdr/errors.hpp"
#include "nrdr/rng.hpp"

namespace nrdr {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kStabFactor = 0.1;   // stabilization bar, as a fraction of tol
constexpr double kCertMargin = 0.02;  // certification margin at the cutoff

struct Block {
    int start = 0;                   // first basis column of the block
    std::vector<double> alpha, beta; // tridiagonal entries; beta[j] couples j, j+1
    bool closed = false;
    int dim() const { return static_cast<int>(alpha.size()); }
};

// Lanczos basis shared across restart blocks. Full reorthogonalization
// against the whole basis makes later blocks explore the orthogonal
// complement of earlier ones, so restarts pick up eigenvalue copies that a
// single Krylov sequence cannot see.
class Engine {
public:
    Engine(const SymmetricOp& A, const LanczosOptions& opt)
        : A_(A), opt_(opt), rng_(opt.seed * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull),
          w_(A.n, 0.0) {}

    bool step() {
        Block& blk = blocks_.back();
        const int a = blk.dim();
        const double* q = Q_.col(blk.start + a);
        A_.apply(q, w_.data());
        ++applies_;
        if (a > 0) {
            simd::kernels().axpy(-blk.beta[a - 1], Q_.col(blk.start + a - 1), w_.data(),
                                 w_.size());
        }
        const double alpha = simd::kernels().dot(q, w_.data(), w_.size());
        blk.alpha.push_back(alpha);
        simd::kernels().axpy(-alpha, q, w_.data(), w_.size());
        orthogonalize(w_);
        const double beta = norm(w_);
        scale_hint_ = std::max({scale_hint_, std::abs(alpha), beta});
        if (beta <= 1e-14 * std::max(scale_hint_, 1e-300)) {
            blk.closed = true;
            return false;
        }
        blk.beta.push_back(beta);
        scale(w_, 1.0 / beta);
        Q_.push_col(w_);
        return true;
    }

    bool new_block(const Vec* start = nullptr) {
        if (exhausted()) return false;
        Vec v(A_.n);
        if (start) v = *start;
        for (int attempt = 0; attempt < 4; ++attempt) {
            if (!start || attempt > 0) {
                for (auto& x : v) x = rng_.uniform(-1.0, 1.0);
            }
            orthogonalize(v);
            const double nv = norm(v);
            if (nv > 1e-10 * std::sqrt(static_cast<double>(A_.n))) {
                scale(v, 1.0 / nv);
                const int col = Q_.cols();
                Q_.push_col(v);
                blocks_.push_back(Block{col, {}, {}, false});
                return true;
            }
        }
        return false;
    }

    bool exhausted() const { return Q_.cols() >= A_.n; }
    bool open_block() const { return !blocks_.empty() && !blocks_.back().closed; }
    int applies() const { return applies_; }
    void count_apply(int k = 1) { applies_ += k; }

    std::vector<double> ritz_values() const {
        std::vector<double> all;
        std::vector<double> vals;
        for (const Block& blk : blocks_) {
            if (blk.dim() == 0) continue;
            std::vector<double> off(blk.beta.begin(),
                                    blk.beta.begin() + (blk.dim() - 1));
            tridiag_eigen(blk.alpha, off, vals, nullptr);
            all.insert(all.end(), vals.begin(), vals.end());
        }
        std::sort(all.begin(), all.end(), std::greater<>());
        return all;
    }

    // Assembles the top `want` Ritz pairs (by value, descending).
    void ritz_pairs(int want, std::vector<double>& values, ColMat& vectors) const {
        struct Entry {
            double value;
            int block, idx;
        };
        std::vector<Entry> entries;
        std::vector<std::vector<double>> blk_values(blocks_.size());
        std::vector<ColMat> blk_vectors(blocks_.size());
        for (std::size_t b = 0; b < blocks_.size(); ++b) {
            const Block& blk = blocks_[b];
            if (blk.dim() == 0) continue;
            std::vector<double> off(blk.beta.begin(),
                                    blk.beta.begin() + (blk.dim() - 1));
            tridiag_eigen(blk.alpha, off, blk_values[b], &blk_vectors[b]);
            for (std::size_t i = 0; i < blk_values[b].size(); ++i) {
                entries.push_back({blk_values[b][i], static_cast<int>(b),
                                   static_cast<int>(i)});
            }
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const Entry& x, const Entry& y) { return x.value > y.value; });
        const int k = std::min<int>(want, static_cast<int>(entries.size()));
        values.assign(k, 0.0);
        vectors = ColMat(A_.n, k);
        for (int j = 0; j < k; ++j) {
            const Entry& en = entries[j];
            values[j] = en.value;
            const Block& blk = blocks_[en.block];
            double* y = vectors.col(j);
            const double* s = blk_vectors[en.block].col(en.idx);
            for (int i = 0; i < blk.dim(); ++i) {
                simd::kernels().axpy(s[i], Q_.col(blk.start + i), y, A_.n);
            }
        }
    }

    const SymmetricOp& op() const { return A_; }
    double scale_hint() const { return scale_hint_; }

private:
    void orthogonalize(Vec& v) const {
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < Q_.cols(); ++j) {
                const double c = simd::kernels().dot(Q_.col(j), v.data(), v.size());
                simd::kernels().axpy(-c, Q_.col(j), v.data(), v.size());
            }
        }
    }

    const SymmetricOp& A_;
    LanczosOptions opt_;
    Rng rng_;
    Vec w_;
    ColMat Q_;
    std::vector<Block> blocks_;
    int applies_ = 0;
    double scale_hint_ = 0.0;
};

bool pair_converged(double value, double residual, double tol, double norm_est, int n) {
    const double floor = 64.0 * kEps * n * std::max(norm_est, 1e-300);
    return residual <= std::max(tol * std::abs(value), floor);
}

// Exact residuals for the assembled pairs; costs one apply per pair.
std::vector<double> exact_residuals(Engine& eng, const std::vector<double>& values,
                                    const ColMat& vectors) {
    const int n = eng.op().n;
    Vec r(n);
    std::vector<double> out(values.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        eng.op().apply(vectors.col(j), r.data());
        eng.count_apply();
        simd::kernels().axpy(-values[j], vectors.col(j), r.data(), n);
        out[j] = norm(r);
    }
    return out;
}

bool stable_prefix(const std::vector<double>& cur, const std::vector<double>& prev,
                   std::size_t count, double tol_abs) {
    if (cur.size() < count || prev.size() < count) return false;
    for (std::size_t k = 0; k < count; ++k) {
        if (std::abs(cur[k] - prev[k]) > tol_abs) return false;
    }
    return true;
}

SpectrumSlice finalize_top(Engine& eng, int want, const LanczosOptions& opt, bool* ok) {
    SpectrumSlice out;
    eng.ritz_pairs(want + 1, out.values, out.vectors);
    const int have = static_cast<int>(out.values.size());
    const int keep = std::min(want, have);
    out.op_norm_est = eng.scale_hint();
    double next_value = (have > keep) ? out.values[keep] : out.values.empty() ? 0.0
                                                                              : out.values.back();
    out.values.resize(keep);
    out.vectors.truncate_cols(keep);
    out.residuals = exact_residuals(eng, out.values, out.vectors);
    out.applies = eng.applies();
    *ok = keep > 0;
    for (int j = 0; j < keep; ++j) {
        if (!pair_converged(out.values[j], out.residuals[j], opt.tol, out.op_norm_est,
                            eng.op().n)) {
            *ok = false;
        }
    }
    if (keep >= 1) {
        const double second = (keep >= 2) ? out.values[1] : next_value;
        out.degenerate_top =
            (std::abs(out.values[0] - second) < 1e-10 * std::abs(out.values[0]));
    }
    return out;
}

} // namespace

double SymmetricOp::symmetry_defect(int probes, std::uint64_t seed) const {
    Rng rng(seed);
    Vec x(n), y(n), ax(n), ay(n);
    double worst = 0.0;
    double norm_est = 0.0;
    for (int p = 0; p < probes; ++p) {
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        for (auto& v : y) v = rng.uniform(-1.0, 1.0);
        apply(x.data(), ax.data());
        apply(y.data(), ay.data());
        norm_est = std::max({norm_est, norm(ax) / norm(x), norm(ay) / norm(y)});
        const double d = std::abs(dot(x, ay) - dot(y, ax)) / (norm(x) * norm(y));
        worst = std::max(worst, d);
    }
    return worst / std::max(norm_est, 1e-300);
}

void tridiag_eigen(std::vector<double> d, std::vector<double> e,
                   std::vector<double>& values, ColMat* vectors) {
    const int m = static_cast<int>(d.size());
    values.clear();
    if (m == 0) {
        if (vectors) *vectors = ColMat();
        return;
    }
    e.resize(m, 0.0);
    ColMat Z;
    if (vectors) {
        Z = ColMat(m, m);
        for (int i = 0; i < m; ++i) Z(i, i) = 1.0;
    }
    for (int l = 0; l < m; ++l) {
        int iter = 0;
        int split;
        do {
            for (split = l; split < m - 1; ++split) {
                const double dd = std::abs(d[split]) + std::abs(d[split + 1]);
                if (std::abs(e[split]) <= kEps * dd) break;
            }
            if (split != l) {
                if (iter++ == 100) throw NumericalError("tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[split] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = split - 1;
                for (; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[split] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (vectors) {
                        for (int k = 0; k < m; ++k) {
                            f = Z(k, i + 1);
                            Z(k, i + 1) = s * Z(k, i) + c * f;
                            Z(k, i) = c * Z(k, i) - s * f;
                        }
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[split] = 0.0;
            }
        } while (split != l);
    }
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });
    values.resize(m);
    for (int j = 0; j < m; ++j) values[j] = d[order[j]];
    if (vectors) {
        *vectors = ColMat(m, m);
        for (int j = 0; j < m; ++j) {
            std::copy(Z.col(order[j]), Z.col(order[j]) + m, vectors->col(j));
        }
    }
}

SpectrumSlice lanczos_top(const SymmetricOp& A, int want, const LanczosOptions& opt) {
    if (A.n <= 0) throw ParameterError("operator dimension must be positive");
    want = std::min(want, A.n);
    Engine eng(A, opt);
    if (!eng.new_block()) throw NumericalError("could not start Lanczos iteration");
    std::vector<double> prev;
    int since_check = 0;
    bool out_of_space = false;
    while (true) {
        bool check = false;
        if (!out_of_space) {
            if (!eng.step()) {
                if (!eng.new_block()) out_of_space = true;
                check = true;
            }
            if (++since_check >= opt.check_every) check = true;
        } else {
            check = true;
        }
        if (check) {
            since_check = 0;
            const std::vector<double> vals = eng.ritz_values();
            const double scale =
                vals.empty() ? 0.0 : std::max(std::abs(vals.front()), std::abs(vals.back()));
            const double stab = kStabFactor * opt.tol * std::max(scale, 1e-300);
            const bool fully_resolved = out_of_space && !eng.open_block();
            if (fully_resolved || stable_prefix(vals, prev, want, stab)) {
                bool ok = false;
                SpectrumSlice out = finalize_top(eng, want, opt, &ok);
                if (ok) return out;
                if (fully_resolved) {
                    throw ConvergenceError(
                        "Lanczos exhausted the space without meeting the residual tolerance",
                        out.residuals.empty() ? 0.0 : out.residuals.front());
                }
            }
            prev = vals;
        }
        if (eng.applies() >= opt.max_apply) {
            bool ok = false;
            SpectrumSlice out = finalize_top(eng, want, opt, &ok);
            if (ok || opt.best_effort) return out;
            throw ConvergenceError(
                "eigensolver did not converge in " + std::to_string(opt.max_apply) +
                    " operator applications",
                out.residuals.empty() ? std::numeric_limits<double>::infinity()
                                      : out.residuals.front());
        }
    }
}

SpectrumSlice lanczos_above_cutoff(const SymmetricOp& A, double cutoff_rel,
                                   const LanczosOptions& opt) {
    if (cutoff_rel <= 0.0 || cutoff_rel >= 1.0) {
        throw ParameterError("relative cutoff must lie in (0, 1)");
    }
    Engine eng(A, opt);
    if (!eng.new_block()) throw NumericalError("could not start Lanczos iteration");
    std::vector<double> prev;
    int since_check = 0;
    bool out_of_space = false;
    while (true) {
        bool check = false;
        if (!out_of_space) {
            if (!eng.step()) {
                if (!eng.new_block()) out_of_space = true;
                check = true;
            }
            if (++since_check >= opt.check_every) check = true;
        } else {
            check = true;
        }
        if (!check) continue;
        since_check = 0;
        const std::vector<double> vals = eng.ritz_values();
        if (vals.empty()) continue;
        const double lam_max = std::max(vals.front(), 0.0);
        const double cert = cutoff_rel * lam_max * (1.0 - kCertMargin);
        std::size_t above = 0;
        while (above < vals.size() && vals[above] >= cert) ++above;
        const bool have_witness = above < vals.size() || out_of_space;
        const double stab = kStabFactor * opt.tol * std::max(lam_max, 1e-300);
        const bool fully_resolved = out_of_space && !eng.open_block();
        const std::size_t need = std::min(vals.size(), above + 1);
        if (!fully_resolved &&
            !(have_witness && stable_prefix(vals, prev, need, stab))) {
            prev = vals;
            if (eng.applies() >= opt.max_apply) {
                throw ConvergenceError("truncated eigensolve did not converge in " +
                                           std::to_string(opt.max_apply) +
                                           " operator applications",
                                       std::numeric_limits<double>::infinity());
            }
            continue;
        }
        prev = vals;

        // Assemble candidates down to the certification margin plus one witness.
        SpectrumSlice out;
        eng.ritz_pairs(static_cast<int>(above) + 1, out.values, out.vectors);
        const double lam_exact = out.values.empty() ? 0.0 : std::max(out.values[0], 0.0);
        const double cutoff = cutoff_rel * lam_exact;
        int keep = 0;
        while (keep < static_cast<int>(out.values.size()) &&
               out.values[keep] >= cutoff && out.values[keep] > 0.0) {
            ++keep;
        }
        ColMat verified = out.vectors; // all assembled pairs, for deflation
        const std::vector<double> all_res = exact_residuals(eng, out.values, out.vectors);
        bool ok = true;
        for (std::size_t j = 0; j < all_res.size(); ++j) {
            if (!pair_converged(out.values[j], all_res[j], opt.tol,
                                std::max(lam_exact, eng.scale_hint()), A.n)) {
                ok = false;
            }
        }
        if (!ok && !fully_resolved) {
            if (eng.applies() >= opt.max_apply) {
                throw ConvergenceError(
                    "truncated eigensolve residuals did not meet tolerance",
                    all_res.empty() ? std::numeric_limits<double>::infinity() : all_res[0]);
            }
            continue;
        }

        // Certification probe: no direction above the margin may hide in the
        // complement of everything assembled so far.
        if (!out_of_space) {
            SymmetricOp probe_op{A.n, [&](const double* x, double* y) {
                                     Vec t(x, x + A.n);
                                     Vec coef(verified.cols());
                                     verified.tgemv(t.data(), coef.data());
                                     for (int j = 0; j < verified.cols(); ++j) {
                                         simd::kernels().axpy(-coef[j], verified.col(j),
                                                              t.data(), t.size());
                                     }
                                     A.apply(t.data(), y);
                                     verified.tgemv(y, coef.data());
                                     for (int j = 0; j < verified.cols(); ++j) {
                                         simd::kernels().axpy(-coef[j], verified.col(j), y,
                                                              A.n);
                                     }
                                 }};
            LanczosOptions popt;
            popt.tol = 1e-6;
            popt.max_apply = 160;
            popt.seed = opt.seed + 7919 * (eng.applies() + 1);
            popt.best_effort = true;
            const SpectrumSlice probe = lanczos_top(probe_op, 1, popt);
            eng.count_apply(probe.applies);
            if (!probe.values.empty() && probe.values[0] >= cert && keep < A.n) {
                Vec missed = probe.vectors.col_vec(0);
                if (eng.new_block(&missed)) continue; // resume the main sweep
            }
        }

        out.values.resize(keep);
        out.vectors.truncate_cols(keep);
        out.residuals.assign(all_res.begin(), all_res.begin() + keep);
        out.applies = eng.applies();
        out.op_norm_est = lam_exact;
        if (keep >= 2) {
            out.degenerate_top = (out.values[0] - out.values[1]) < 1e-10 * out.values[0];
        }
        return out;
    }
}

} // namespace nrdr
