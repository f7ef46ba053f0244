#include "maslov/dynamics.hpp"

#include "maslov/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace maslov {

namespace {

using Eigen::MatrixXd;

constexpr double kPi = std::numbers::pi;

MatrixXd J_of(Eigen::Index n) { return standard_J<double>(n); }

double residual_of(const MatrixXd& m)
{
    const MatrixXd j = J_of(m.rows() / 2);
    return (m.transpose() * j * m - j).cwiseAbs().maxCoeff();
}

// M ← M(I + ½JR) with R = MᵀJM − J cancels the residual to first order.
void project(MatrixXd& m)
{
    const MatrixXd j = J_of(m.rows() / 2);
    const MatrixXd r = m.transpose() * j * m - j;
    m = m * (MatrixXd::Identity(m.rows(), m.cols()) + 0.5 * j * r);
}

std::vector<double> to_doubles(const std::vector<Scalar>& v)
{
    std::vector<double> out;
    for (const auto& s : v) out.push_back(s.to_double());
    return out;
}

// A(t) = J H''(x(t)) along the circular orbit in plane i.
struct Linearization {
    std::vector<double> alpha;
    std::size_t i;
    double a;
    double rho;
    double omega;

    MatrixXd at(double t) const
    {
        const auto n = static_cast<Eigen::Index>(alpha.size());
        MatrixXd h = MatrixXd::Zero(2 * n, 2 * n);
        for (Eigen::Index k = 0; k < n; ++k) h(k, k) = h(n + k, n + k) = alpha[static_cast<std::size_t>(k)];
        Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * n);
        const auto ii = static_cast<Eigen::Index>(i);
        g(ii) = alpha[i] * rho * std::cos(omega * t);
        g(n + ii) = alpha[i] * rho * std::sin(omega * t);
        h += (a / 2.0 - 1.0) * g * g.transpose();
        h *= a / 2.0;
        return J_of(n) * h;
    }
};

double sigma_min(const MatrixXd& m)
{
    Eigen::JacobiSVD<MatrixXd> svd(m);
    return svd.singularValues().minCoeff();
}

// Cubic Lagrange interpolation through the four samples around t.
struct Interpolant {
    const SampledPath& p;

    std::size_t window(double t) const
    {
        auto it = std::upper_bound(p.times.begin(), p.times.end(), t);
        std::size_t j = it == p.times.begin() ? 0 : static_cast<std::size_t>(it - p.times.begin()) - 1;
        j = std::min(j, p.size() - 2);
        std::size_t lo = j == 0 ? 0 : j - 1;
        return std::min(lo, p.size() >= 4 ? p.size() - 4 : 0);
    }

    MatrixXd value(double t) const
    {
        const std::size_t lo = window(t);
        const std::size_t cnt = std::min<std::size_t>(4, p.size());
        MatrixXd out = MatrixXd::Zero(p.matrices[0].rows(), p.matrices[0].cols());
        for (std::size_t a = 0; a < cnt; ++a) {
            double w = 1.0;
            for (std::size_t b = 0; b < cnt; ++b)
                if (b != a) w *= (t - p.times[lo + b]) / (p.times[lo + a] - p.times[lo + b]);
            out += w * p.matrices[lo + a];
        }
        return out;
    }

    MatrixXd derivative(double t) const
    {
        const std::size_t lo = window(t);
        const std::size_t cnt = std::min<std::size_t>(4, p.size());
        MatrixXd out = MatrixXd::Zero(p.matrices[0].rows(), p.matrices[0].cols());
        for (std::size_t a = 0; a < cnt; ++a) {
            double denom = 1.0;
            for (std::size_t b = 0; b < cnt; ++b)
                if (b != a) denom *= p.times[lo + a] - p.times[lo + b];
            double dw = 0.0;
            for (std::size_t c = 0; c < cnt; ++c) {
                if (c == a) continue;
                double prod = 1.0;
                for (std::size_t b = 0; b < cnt; ++b)
                    if (b != a && b != c) prod *= t - p.times[lo + b];
                dw += prod;
            }
            out += (dw / denom) * p.matrices[lo + a];
        }
        return out;
    }
};

// Signature of the crossing form of a path with derivative dg at g on the
// kernel spanned by the columns of k.
int crossing_signature(const MatrixXd& g, const MatrixXd& dg, const MatrixXd& k, double t)
{
    const MatrixXd j = J_of(g.rows() / 2);
    const MatrixXd s = -j * dg * g.inverse();
    const MatrixXd sym = 0.5 * (s + s.transpose());
    const MatrixXd q = k.transpose() * sym * k;
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (q + q.transpose()));
    const double scale = std::max(1.0, sym.cwiseAbs().maxCoeff());
    int sig = 0;
    for (Eigen::Index e = 0; e < eig.eigenvalues().size(); ++e) {
        const double v = eig.eigenvalues()(e);
        if (std::abs(v) < 1e-6 * scale) {
            std::ostringstream os;
            os << "tangential crossing at t = " << t << ": degenerate crossing form";
            throw Error(os.str());
        }
        sig += v > 0 ? 1 : -1;
    }
    return sig;
}

}  // namespace

bool Ellipsoid::non_resonant() const
{
    for (std::size_t i = 0; i < alphas.size(); ++i)
        for (std::size_t j = 0; j < alphas.size(); ++j)
            if (i != j && (alphas[j] / alphas[i]).is_rational()) return false;
    return true;
}

void validate_ellipsoid(const Ellipsoid& e)
{
    if (e.alphas.empty()) throw InputError("alphas: at least one weight is required");
    for (std::size_t i = 0; i < e.alphas.size(); ++i)
        if (e.alphas[i].sign() <= 0) throw InputError("alphas[" + std::to_string(i) + "]: must be positive");
}

double orbit_period(const Ellipsoid& e, std::size_t i, double gauge)
{
    return 4.0 * kPi / (gauge * e.alphas.at(i).to_double());
}

MatrixXd analytic_monodromy(const Ellipsoid& e, std::size_t i, double gauge)
{
    validate_ellipsoid(e);
    const auto n = static_cast<Eigen::Index>(e.n());
    const auto alpha = to_doubles(e.alphas);
    MatrixXd m = MatrixXd::Zero(2 * n, 2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        if (static_cast<std::size_t>(k) == i) {
            m(k, k) = m(n + k, n + k) = 1.0;
            m(n + k, k) = 2.0 * kPi * (gauge - 2.0);
            continue;
        }
        const double psi = 2.0 * kPi * alpha[static_cast<std::size_t>(k)] / alpha[i];
        m(k, k) = m(n + k, n + k) = std::cos(psi);
        m(k, n + k) = -std::sin(psi);
        m(n + k, k) = std::sin(psi);
    }
    return m;
}

void validate_path(const SampledPath& p)
{
    if (p.times.size() != p.matrices.size()) throw InputError("path: times and matrices differ in length");
    if (p.size() < 2) throw InputError("path: at least two samples are required");
    if (p.times.front() != 0.0) throw InputError("path: times[0] must be 0");
    for (std::size_t k = 1; k < p.size(); ++k)
        if (!(p.times[k] > p.times[k - 1])) throw InputError("path: times[" + std::to_string(k) + "] does not increase");
    const auto& first = p.matrices.front();
    if (first.rows() != first.cols() || first.rows() % 2 != 0) throw InputError("path: matrices must be 2n x 2n");
    if (!first.isIdentity(1e-12)) throw InputError("path: matrices[0] must be the identity");
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (p.matrices[k].rows() != first.rows() || p.matrices[k].cols() != first.cols())
            throw InputError("path: matrices[" + std::to_string(k) + "] has the wrong shape");
        const double r = residual_of(p.matrices[k]);
        if (r > kSymplecticResidualTol) {
            std::ostringstream os;
            os << "path: matrices[" << k << "] symplectic residual " << r << " exceeds " << kSymplecticResidualTol;
            throw InputError(os.str());
        }
    }
}

SampledPath linearized_path(const Ellipsoid& e, std::size_t i, long steps, double gauge)
{
    validate_ellipsoid(e);
    if (i >= e.alphas.size()) throw InputError("orbit index out of range");
    if (steps < 1) throw InputError("steps must be positive");
    if (!(gauge > 1.0 && gauge < 2.0)) throw InputError("gauge exponent must lie in (1, 2)");
    const auto alpha = to_doubles(e.alphas);
    const Linearization lin{alpha, i, gauge, std::sqrt(2.0 / alpha[i]), gauge * alpha[i] / 2.0};
    const double T = orbit_period(e, i, gauge);
    const double h = T / static_cast<double>(steps);
    const auto dim = 2 * static_cast<Eigen::Index>(e.n());

    SampledPath out;
    out.times.reserve(static_cast<std::size_t>(steps) + 1);
    out.matrices.reserve(static_cast<std::size_t>(steps) + 1);
    MatrixXd y = MatrixXd::Identity(dim, dim);
    out.times.push_back(0.0);
    out.matrices.push_back(y);
    for (long s = 1; s <= steps; ++s) {
        const double t = h * static_cast<double>(s - 1);
        const MatrixXd a0 = lin.at(t), a1 = lin.at(t + h / 2), a2 = lin.at(t + h);
        const MatrixXd k1 = a0 * y;
        const MatrixXd k2 = a1 * (y + h / 2 * k1);
        const MatrixXd k3 = a1 * (y + h / 2 * k2);
        const MatrixXd k4 = a2 * (y + h * k3);
        y += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        if (s % 100 == 0 || s == steps) {
            const double r = residual_of(y);
            if (r > kSymplecticResidualTol) {
                std::ostringstream os;
                os << "drift budget exceeded: symplectic residual " << r << " after " << s << " of " << steps << " steps";
                throw Error(os.str());
            }
            project(y);
        }
        out.times.push_back(s == steps ? T : h * static_cast<double>(s));
        out.matrices.push_back(y);
    }
    return out;
}

SymplecticMatrix linearized_monodromy(const Ellipsoid& e, std::size_t i, long steps, double gauge)
{
    return SymplecticMatrix::numeric(linearized_path(e, i, steps, gauge).end());
}

SampledPath concatenate(const SampledPath& a, const SampledPath& b)
{
    if (a.matrices.empty() || b.matrices.empty()) throw InputError("path: cannot concatenate an empty path");
    if (a.end().rows() != b.end().rows()) throw InputError("path: dimension mismatch in concatenation");
    SampledPath out = a;
    const double t0 = a.duration();
    const MatrixXd right = a.end();
    out.times.reserve(a.size() + b.size());
    out.matrices.reserve(a.size() + b.size());
    for (std::size_t k = 1; k < b.size(); ++k) {
        out.times.push_back(t0 + b.times[k]);
        out.matrices.push_back(b.matrices[k] * right);
    }
    return out;
}

SampledPath iterate_path(const SampledPath& p, int m)
{
    if (m < 1) throw InputError("iterate count must be positive");
    SampledPath out = p;
    for (int k = 1; k < m; ++k) out = concatenate(out, p);
    return out;
}

OracleResult crossing_oracle(const SampledPath& path, const OracleOptions& opts)
{
    validate_path(path);
    const auto dim = path.matrices[0].rows();
    const MatrixXd id = MatrixXd::Identity(dim, dim);
    const MatrixXd j = J_of(dim / 2);
    OracleResult out;

    {
        Eigen::JacobiSVD<MatrixXd> svd(path.end() - id);
        for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
            if (svd.singularValues()(k) < opts.nullity_tol) ++out.nu1;
    }
    out.perturbed = out.nu1 > 0;
    const MatrixXd P = out.perturbed ? MatrixXd(std::cos(opts.epsilon) * id - std::sin(opts.epsilon) * j) : id;

    // Robbin–Salamon start term: γ(0) = I, so the form lives on all of ℝ^{2n}.
    {
        const Interpolant ip{path};
        const int sig = crossing_signature(id, ip.derivative(0.0), id, 0.0);
        if (sig % 2 != 0) throw Error("tangential crossing at t = 0: odd start signature");
        out.start = sig / 2;
    }

    const std::size_t N = path.size();
    std::vector<double> f(N, 0.0);
    for (std::size_t k = 1; k < N; ++k) f[k] = sigma_min(path.matrices[k] * P - id);

    const Interpolant ip{path};
    auto g = [&](double t) { return sigma_min(ip.value(t) * P - id); };
    const double t_first = path.times[1];
    double last_t = -1.0;
    for (std::size_t k = 1; k < N; ++k) {
        const bool left = k == 1 || f[k] <= f[k - 1];
        const bool right = k + 1 == N || f[k] < f[k + 1];
        if (!(left && right) || f[k] >= opts.candidate) continue;
        double lo = path.times[std::max<std::size_t>(k - 1, 1)];
        double hi = path.times[std::min(k + 1, N - 1)];
        const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double g1 = g(x1), g2 = g(x2);
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
            if (g1 < g2) {
                hi = x2;
                x2 = x1;
                g2 = g1;
                x1 = hi - phi * (hi - lo);
                g1 = g(x1);
            } else {
                lo = x1;
                x1 = x2;
                g1 = g2;
                x2 = lo + phi * (hi - lo);
                g2 = g(x2);
            }
        }
        double ts = 0.5 * (lo + hi);
        double best = g(ts);
        for (double cand : {path.times[k], lo, hi}) {
            const double v = g(cand);
            if (v < best) {
                best = v;
                ts = cand;
            }
        }
        if (best > opts.ambiguous_tol) continue;
        if (best > opts.zero_tol) {
            std::ostringstream os;
            os << "tangential crossing near t = " << ts << ": sigma_min " << best << " is unresolved; refine sampling";
            throw Error(os.str());
        }
        if (ts < t_first) continue;
        if (last_t >= 0.0 && std::abs(ts - last_t) < 0.5 * (path.times[k] - path.times[k - 1])) continue;
        last_t = ts;

        const MatrixXd gs = ip.value(ts) * P;
        Eigen::JacobiSVD<MatrixXd> svd(gs - id, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        std::vector<Eigen::Index> cols;
        for (Eigen::Index c = 0; c < sv.size(); ++c)
            if (sv(c) < std::sqrt(opts.zero_tol)) cols.push_back(c);
        MatrixXd kernel(dim, static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) kernel.col(static_cast<Eigen::Index>(c)) = svd.matrixV().col(cols[c]);
        Crossing cr;
        cr.t = ts;
        cr.dim = static_cast<int>(cols.size());
        cr.signature = crossing_signature(gs, ip.derivative(ts) * P, kernel, ts);
        out.crossings.push_back(cr);
    }

    out.i1 = kOracleOffset + out.start;
    for (const auto& c : out.crossings) out.i1 += c.signature;
    return out;
}

int crossing_oracle_i1(const SampledPath& path, const OracleOptions& opts) { return crossing_oracle(path, opts).i1; }

int calibrate_oracle_offset(const SampledPath& path, const NormalFormDescriptor& d, int m_max, const OracleOptions& opts)
{
    std::vector<int> raw;
    for (int m = 1; m <= m_max; ++m) raw.push_back(crossing_oracle(iterate_path(path, m), opts).i1 - kOracleOffset);
    for (int c = -4 * d.n(); c <= 4 * d.n(); ++c) {
        PathRecord rec;
        try {
            rec = make_record("calibration", raw[0] + c, d);
        } catch (const Error&) {
            continue;
        }
        if (!(rec.mean_index > Scalar(2))) continue;
        bool ok = true;
        for (int m = 2; m <= m_max && ok; ++m) ok = index_iterate(rec, m) == raw[static_cast<std::size_t>(m - 1)] + c;
        if (ok) return c;
    }
    throw ConsistencyError("no additive oracle normalization reproduces iterates 1.." + std::to_string(m_max));
}

EllipsoidRun ellipsoid_characteristics(const Ellipsoid& e, const EllipsoidOptions& opts)
{
    validate_ellipsoid(e);
    const std::size_t n = e.alphas.size();
    EllipsoidRun out;
    std::vector<NormalFormDescriptor> ds(n);
    std::vector<std::vector<std::string>> warnings(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto& d = ds[i];
        d.p_minus = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const Scalar theta = floor_ops(e.alphas[j] / e.alphas[i]).frac * Scalar(2);
            if (theta.is_zero() || theta == Scalar(1)) {
                (theta.is_zero() ? d.p_zero : d.q_zero) += 1;
                warnings[i].push_back("x" + std::to_string(i + 1) + ": resonant rotation R(" +
                                      (theta.is_zero() ? std::string("0") : std::string("pi")) + ") from axis " +
                                      std::to_string(j + 1) + " placed in " + (theta.is_zero() ? "p_zero" : "q_zero"));
            } else {
                d.theta.push_back(theta);
            }
        }
    }

    std::vector<OracleResult> oracle(n);
    std::vector<std::string> errors(n);
    auto work = [&](std::size_t i) {
        try {
            oracle[i] = crossing_oracle(linearized_path(e, i, opts.steps, opts.gauge), opts.oracle);
        } catch (const std::exception& ex) {
            errors[i] = ex.what();
        }
    };
    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work, i);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!errors[i].empty()) throw Error("x" + std::to_string(i + 1) + ": " + errors[i]);

    for (std::size_t i = 0; i < n; ++i) {
        const std::string label = "x" + std::to_string(i + 1);
        const int expect = nullity_one(ds[i]);
        out.checks.add(label + ": numeric nu(x, 1) matches the descriptor", "numeric-nullity", oracle[i].nu1 == expect,
                       std::to_string(oracle[i].nu1) + " vs " + std::to_string(expect));
        if (oracle[i].nu1 != expect)
            throw ConsistencyError(label + ": numeric nullity " + std::to_string(oracle[i].nu1) +
                                   " differs from the descriptor nullity " + std::to_string(expect));
        if (oracle[i].perturbed && oracle[i].nu1 > 1)
            warnings[i].push_back(label + ": degenerate endpoint (nu = " + std::to_string(oracle[i].nu1) +
                                  ") perturbed by exp(-eps J)");
        out.records.push_back(make_record(label, oracle[i].i1, ds[i], Scalar(2) / e.alphas[i]));
        for (auto& w : warnings[i]) out.warnings.push_back(std::move(w));
    }

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Scalar lhs = out.records[i].mean_index * e.alphas[i];
            const Scalar rhs = out.records[j].mean_index * e.alphas[j];
            const bool ok = lhs == rhs;
            out.checks.add("mean index ratio x" + std::to_string(i + 1) + "/x" + std::to_string(j + 1) + " = alpha_" +
                               std::to_string(j + 1) + "/alpha_" + std::to_string(i + 1),
                           "mean-index-ratio", ok, to_string(lhs) + (ok ? " = " : " != ") + to_string(rhs));
            if (!ok && e.non_resonant())
                throw ConsistencyError("mean index ratio fails for x" + std::to_string(i + 1) + ", x" +
                                       std::to_string(j + 1) + ": oracle normalization is wrong");
        }
    return out;
}

}  // namespace maslov
