#include "potlab/hyperbolic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace potlab::hn {

namespace {

constexpr double kPi = std::numbers::pi;

double simpson(const std::function<double(double)>& g, double a, double b, int intervals = 2048) {
    if (intervals % 2) ++intervals;
    double h = (b - a) / intervals;
    double acc = g(a) + g(b);
    for (int i = 1; i < intervals; ++i) acc += g(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// ||sinh^{expo}||_{L^{p/(p-1)}([a,b])}; the p = 1 limit is the essential
// supremum, attained at the endpoint where sinh^{expo} is larger.
double dual_sinh_norm(double expo, double p, double a, double b) {
    if (p <= 1.0) return std::pow(std::sinh(expo <= 0.0 ? a : b), expo);
    double q = p / (p - 1.0);
    double integral =
        simpson([&](double t) { return std::pow(std::sinh(t), expo * q); }, a, b);
    return std::pow(integral, 1.0 / q);
}

// Trapezoid weights for the radial band [i_lo, i_hi].  Band edges that cut
// the grid interior get half weights; the global left edge keeps its full
// weight because the dropped node at r = 0 supplies the other half cell.
std::vector<double> radial_band_weights(const PolarGrid& grid, int i_lo, int i_hi) {
    std::vector<double> w(i_hi - i_lo + 1, grid.dr);
    if (i_lo == i_hi) {
        w[0] = grid.dr;
        return w;
    }
    if (i_lo > 0) w.front() = grid.dr / 2.0;
    w.back() = grid.dr / 2.0;
    return w;
}

void check_shape(const PolarGrid& grid, const PolarFunction& f) {
    std::size_t expect = static_cast<std::size_t>(grid.radial_count()) * grid.n_theta;
    if (f.values.size() != expect || f.d_r.size() != expect || f.d_s.size() != expect)
        throw GraphError("polar function shape does not match the grid");
}

std::array<double, 3> direction(const PolarGrid& grid, int j) {
    if (grid.n == 2) {
        double t = grid.theta[j];
        return {std::cos(t), std::sin(t), 0.0};
    }
    double phi = grid.colat[j / grid.n_lon];
    double lam = grid.lon[j % grid.n_lon];
    return {std::sin(phi) * std::cos(lam), std::sin(phi) * std::sin(lam), std::cos(phi)};
}

std::array<double, 3> cap_direction(const PolarGrid& grid, const Cap& cap) {
    if (grid.n == 2) return {std::cos(cap.a), std::sin(cap.a), 0.0};
    return {std::sin(cap.a) * std::cos(cap.b), std::sin(cap.a) * std::sin(cap.b),
            std::cos(cap.a)};
}

double angular_distance(const std::array<double, 3>& u, const std::array<double, 3>& v) {
    double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
    return std::acos(std::clamp(dot, -1.0, 1.0));
}

int locate_radius(const PolarGrid& grid, double r) {
    int i = static_cast<int>(std::lround(r / grid.dr)) - 1;
    return std::clamp(i, 0, grid.radial_count() - 1);
}

}  // namespace

double PolarGrid::angular_measure() const { return n == 2 ? 2.0 * kPi : 4.0 * kPi; }

PolarGrid make_polar_grid(int n, double r_max, int radial, int angular) {
    if (n != 2 && n != 3) throw GraphError("unsupported dimension (only n = 2 or 3)");
    if (r_max <= 0.0) throw GraphError("r_max must be positive");
    if (radial < 8 || angular < 8) throw GraphError("grid needs at least 8 nodes per axis");

    PolarGrid g;
    g.n = n;
    g.r_max = r_max;
    g.dr = r_max / radial;
    g.r.resize(radial);
    g.wr.assign(radial, g.dr);
    for (int i = 0; i < radial; ++i) g.r[i] = (i + 1) * g.dr;
    g.wr.back() = g.dr / 2.0;

    if (n == 2) {
        g.n_theta = angular;
        g.dtheta = 2.0 * kPi / angular;
        g.theta.resize(angular);
        g.wtheta.assign(angular, g.dtheta);
        for (int j = 0; j < angular; ++j) g.theta[j] = j * g.dtheta;
    } else {
        g.n_colat = angular;
        g.n_lon = 2 * angular;
        g.n_theta = g.n_colat * g.n_lon;
        g.dcolat = kPi / g.n_colat;
        g.dlon = 2.0 * kPi / g.n_lon;
        g.colat.resize(g.n_colat);
        g.lon.resize(g.n_lon);
        for (int ic = 0; ic < g.n_colat; ++ic) g.colat[ic] = (ic + 0.5) * g.dcolat;
        for (int il = 0; il < g.n_lon; ++il) g.lon[il] = il * g.dlon;
        g.wtheta.resize(g.n_theta);
        for (int ic = 0; ic < g.n_colat; ++ic) {
            // Exact cell integral of sin(colat); summing over all cells gives
            // (cos 0 - cos pi) * 2*pi = 4*pi with no quadrature error.
            double band = std::cos(ic * g.dcolat) - std::cos((ic + 1) * g.dcolat);
            for (int il = 0; il < g.n_lon; ++il) g.wtheta[ic * g.n_lon + il] = band * g.dlon;
        }
    }
    return g;
}

PolarFunction sample_polar(const PolarGrid& grid,
                           const std::function<double(double, double, double)>& fn) {
    int M = grid.radial_count(), N = grid.n_theta;
    PolarFunction f;
    f.values.resize(static_cast<std::size_t>(M) * N);
    f.d_r.resize(f.values.size());
    f.d_s.resize(f.values.size());

    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) {
            double a, b = 0.0;
            if (grid.n == 2) {
                a = grid.theta[j];
            } else {
                a = grid.colat[j / grid.n_lon];
                b = grid.lon[j % grid.n_lon];
            }
            f.values[static_cast<std::size_t>(i) * N + j] = fn(grid.r[i], a, b);
        }

    auto at = [&](int i, int j) { return f.values[static_cast<std::size_t>(i) * N + j]; };

    for (int i = 0; i < M; ++i)
        for (int j = 0; j < N; ++j) {
            double dr;
            if (i == 0)
                dr = (at(1, j) - at(0, j)) / grid.dr;
            else if (i == M - 1)
                dr = (at(M - 1, j) - at(M - 2, j)) / grid.dr;
            else
                dr = (at(i + 1, j) - at(i - 1, j)) / (2.0 * grid.dr);
            f.d_r[static_cast<std::size_t>(i) * N + j] = dr;

            double ds;
            if (grid.n == 2) {
                int jp = (j + 1) % N, jm = (j + N - 1) % N;
                ds = std::abs(at(i, jp) - at(i, jm)) / (2.0 * grid.dtheta);
            } else {
                int ic = j / grid.n_lon, il = j % grid.n_lon;
                double dphi;
                if (ic == 0)
                    dphi = (at(i, grid.n_lon + il) - at(i, il)) / grid.dcolat;
                else if (ic == grid.n_colat - 1)
                    dphi = (at(i, j) - at(i, j - grid.n_lon)) / grid.dcolat;
                else
                    dphi = (at(i, j + grid.n_lon) - at(i, j - grid.n_lon)) / (2.0 * grid.dcolat);
                int ilp = (il + 1) % grid.n_lon, ilm = (il + grid.n_lon - 1) % grid.n_lon;
                double dlam = (at(i, ic * grid.n_lon + ilp) - at(i, ic * grid.n_lon + ilm)) /
                              (2.0 * grid.dlon);
                double scale = 1.0 / std::sin(grid.colat[ic]);
                ds = std::hypot(dphi, dlam * scale);
            }
            f.d_s[static_cast<std::size_t>(i) * N + j] = ds;
        }
    return f;
}

HyperbolicNorms hyperbolic_norms(const PolarGrid& grid, const PolarFunction& f, double p,
                                 int i_lo, int i_hi) {
    check_shape(grid, f);
    int M = grid.radial_count(), N = grid.n_theta;
    if (i_hi < 0) i_hi = M - 1;
    if (i_lo < 0 || i_hi >= M || i_lo > i_hi) throw GraphError("radial band out of range");

    auto wr = radial_band_weights(grid, i_lo, i_hi);
    HyperbolicNorms out;
    for (int i = i_lo; i <= i_hi; ++i) {
        double sh = std::sinh(grid.r[i]);
        double jac = std::pow(sh, grid.n - 1);
        double ang_weight = std::pow(sh, grid.n - 1 - p);
        double w = wr[i - i_lo];
        double mass = 0.0, rad = 0.0, ang = 0.0, tot = 0.0;
        for (int j = 0; j < N; ++j) {
            std::size_t k = static_cast<std::size_t>(i) * N + j;
            double wt = grid.wtheta[j];
            mass += wt * std::pow(std::abs(f.values[k]), p);
            rad += wt * std::pow(std::abs(f.d_r[k]), p);
            // An exactly vanishing angular derivative contributes nothing,
            // regardless of how large sinh^{n-1-p} is near r = 0.
            if (f.d_s[k] != 0.0) ang += wt * std::pow(f.d_s[k], p);
            double grad = std::hypot(f.d_r[k], f.d_s[k] / sh);
            tot += wt * std::pow(grad, p);
        }
        out.mass_p += w * jac * mass;
        out.radial_energy += w * jac * rad;
        out.angular_energy += w * ang_weight * ang;
        out.total_energy += w * jac * tot;
    }
    return out;
}

double shell_energy(const PolarGrid& grid, const PolarFunction& f, double p, int i_lo, int i_hi,
                    const std::vector<int>* E) {
    check_shape(grid, f);
    int M = grid.radial_count(), N = grid.n_theta;
    if (i_lo < 0 || i_hi >= M || i_lo > i_hi) throw GraphError("radial band out of range");
    auto wr = radial_band_weights(grid, i_lo, i_hi);
    double acc = 0.0;
    auto add = [&](int i, int j, double jac, double sh, double w) {
        std::size_t k = static_cast<std::size_t>(i) * N + j;
        double grad = std::hypot(f.d_r[k], f.d_s[k] / sh);
        acc += w * jac * grid.wtheta[j] * std::pow(grad, p);
    };
    for (int i = i_lo; i <= i_hi; ++i) {
        double sh = std::sinh(grid.r[i]);
        double jac = std::pow(sh, grid.n - 1);
        double w = wr[i - i_lo];
        if (E) {
            for (int j : *E) add(i, j, jac, sh, w);
        } else {
            for (int j = 0; j < N; ++j) add(i, j, jac, sh, w);
        }
    }
    return acc;
}

std::vector<int> cap_indices(const PolarGrid& grid, const Cap& cap) {
    auto c = cap_direction(grid, cap);
    std::vector<int> out;
    for (int j = 0; j < grid.n_theta; ++j)
        if (angular_distance(c, direction(grid, j)) <= cap.radius + 1e-12) out.push_back(j);
    if (out.empty()) throw GraphError("cap resolves to no angular nodes");
    return out;
}

CapPair make_cap_pair(const Cap& c1, const Cap& c2) {
    if (c1.radius <= 0.0 || std::abs(c1.radius - c2.radius) > 1e-12)
        throw GraphError("cap pair must share a positive angular radius");
    CapPair pair{c1, c2, 0.0};
    PolarGrid probe;  // direction() only needs the dimension fields for n = 3
    probe.n = 3;
    probe.n_lon = 1;
    pair.sigma = angular_distance(cap_direction(probe, c1), cap_direction(probe, c2));
    if (pair.sigma <= 0.0) throw GraphError("cap centers coincide");
    return pair;
}

double cap_average(const PolarGrid& grid, const PolarFunction& f, const std::vector<int>& E,
                   int radial_index) {
    check_shape(grid, f);
    if (E.empty()) throw GraphError("empty angular set");
    if (radial_index < 0 || radial_index >= grid.radial_count())
        throw GraphError("radial index out of range");
    double num = 0.0, den = 0.0;
    for (int j : E) {
        num += grid.wtheta[j] * f.values[static_cast<std::size_t>(radial_index) * grid.n_theta + j];
        den += grid.wtheta[j];
    }
    return num / den;
}

BoundCheck cauchy_bound(const PolarGrid& grid, const PolarFunction& f, const std::vector<int>& E,
                        int i_r, int i_s, double p) {
    if (i_r >= i_s) throw GraphError("cauchy bound needs r < s");
    double vol = 0.0;
    for (int j : E) vol += grid.wtheta[j];
    BoundCheck out;
    out.lhs = std::abs(cap_average(grid, f, E, i_s) - cap_average(grid, f, E, i_r));
    out.norm_factor =
        dual_sinh_norm(-(grid.n - 1) / p, p, grid.r[i_r], grid.r[i_s]);
    out.band_energy = shell_energy(grid, f, p, i_r, i_s, &E);
    out.constant = 1.0;
    out.rhs = out.norm_factor * std::pow(out.band_energy, 1.0 / p) / std::pow(vol, 1.0 / p);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-12;
    return out;
}

double lateral_constant(double p) {
    return 2.0 * std::sqrt(2.0) * std::pow(2.0, (p - 1.0) / p);
}

BoundCheck lateral_bound(const PolarGrid& grid, const PolarFunction& f, const CapPair& caps,
                         int i_r, double p) {
    double r = grid.r.at(i_r);
    if (r <= std::asinh(1.0)) throw GraphError("lateral estimate needs r > arcsinh(1)");
    double s = r + kPi / 2.0;
    if (s > grid.r_max + grid.dr / 2.0)
        throw GraphError("lateral band [r, r + pi/2] exceeds the grid");
    int i_s = locate_radius(grid, s);

    auto e1 = cap_indices(grid, caps.c1);
    auto e2 = cap_indices(grid, caps.c2);
    double vol1 = 0.0;
    for (int j : e1) vol1 += grid.wtheta[j];

    BoundCheck out;
    out.lhs = std::abs(cap_average(grid, f, e1, i_r) - cap_average(grid, f, e2, i_r));
    out.norm_factor = dual_sinh_norm(1.0 - (grid.n - 1) / p, p, r, grid.r[i_s]);
    out.band_energy = shell_energy(grid, f, p, i_r, i_s, nullptr);
    out.constant = lateral_constant(p);
    out.rhs = out.constant * out.norm_factor * std::pow(out.band_energy, 1.0 / p) /
              std::pow(vol1, 1.0 / p);
    out.holds = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-12;
    return out;
}

TraceReport trace_report(const PolarGrid& grid, const PolarFunction& f,
                         const std::vector<std::vector<int>>& cells,
                         const std::vector<int>& schedule, double p, int last_k, double tol) {
    if (static_cast<int>(schedule.size()) < last_k)
        throw GraphError("radius schedule shorter than the fitting window");
    for (std::size_t k = 1; k < schedule.size(); ++k)
        if (schedule[k] <= schedule[k - 1]) throw GraphError("radius schedule must increase");

    TraceReport rep;
    rep.averages.resize(cells.size());
    rep.bounds.resize(cells.size());
    rep.limits.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (int idx : schedule) rep.averages[c].push_back(cap_average(grid, f, cells[c], idx));
        for (std::size_t k = 1; k < schedule.size(); ++k)
            rep.bounds[c].push_back(
                cauchy_bound(grid, f, cells[c], schedule[k - 1], schedule[k], p).rhs);
        double acc = 0.0;
        for (int k = 0; k < last_k; ++k) acc += rep.averages[c][rep.averages[c].size() - 1 - k];
        rep.limits[c] = acc / last_k;
    }
    auto [lo, hi] = std::minmax_element(rep.limits.begin(), rep.limits.end());
    rep.spread = *hi - *lo;
    rep.constant = rep.spread < tol;
    return rep;
}

std::vector<std::vector<int>> band_partition(const PolarGrid& grid, int k) {
    if (k < 1) throw GraphError("partition needs at least one cell");
    std::vector<std::vector<int>> cells(k);
    if (grid.n == 2) {
        if (k > grid.n_theta) throw GraphError("more cells than angular nodes");
        for (int j = 0; j < grid.n_theta; ++j)
            cells[std::min(static_cast<int>(grid.theta[j] / (2.0 * kPi) * k), k - 1)].push_back(j);
    } else {
        if (k > grid.n_colat) throw GraphError("more cells than colatitude rows");
        for (int ic = 0; ic < grid.n_colat; ++ic) {
            int cell = std::min(ic * k / grid.n_colat, k - 1);
            for (int il = 0; il < grid.n_lon; ++il)
                cells[cell].push_back(ic * grid.n_lon + il);
        }
    }
    return cells;
}

RayLimits limit_along_rays(const PolarGrid& grid, const PolarFunction& f,
                           const std::vector<int>& theta_indices, const std::vector<int>& schedule,
                           int last_k, double tol) {
    check_shape(grid, f);
    if (static_cast<int>(schedule.size()) < last_k)
        throw GraphError("radius schedule shorter than the fitting window");
    RayLimits out;
    for (int j : theta_indices) {
        std::vector<double> seq;
        for (int idx : schedule)
            seq.push_back(f.values[static_cast<std::size_t>(idx) * grid.n_theta + j]);
        double acc = 0.0, wobble = 0.0;
        for (int k = 0; k < last_k; ++k) acc += seq[seq.size() - 1 - k];
        for (int k = 1; k < last_k; ++k)
            wobble = std::max(wobble, std::abs(seq[seq.size() - k] - seq[seq.size() - 1 - k]));
        out.limits.push_back(acc / last_k);
        out.cauchy.push_back(wobble <= tol);
    }
    auto [lo, hi] = std::minmax_element(out.limits.begin(), out.limits.end());
    out.spread = *hi - *lo;
    out.common_limit = out.spread <= tol &&
                       std::all_of(out.cauchy.begin(), out.cauchy.end(), [](bool b) { return b; });
    return out;
}

namespace {

// Exact integral of (fa + m (t - a))^k e^{kappa t} over [x, y] by the
// integration-by-parts recursion; valid for integer k >= 0.
double poly_exp_integral(double fa, double m, double a, double x, double y, int k, double kappa) {
    if (k == 0) return (std::exp(kappa * y) - std::exp(kappa * x)) / kappa;
    auto u = [&](double t) { return fa + m * (t - a); };
    double boundary =
        (std::pow(u(y), k) * std::exp(kappa * y) - std::pow(u(x), k) * std::exp(kappa * x)) / kappa;
    return boundary - (k * m / kappa) * poly_exp_integral(fa, m, a, x, y, k - 1, kappa);
}

double abs_pow_exp_piece(double fa, double m, double a, double x, double y, double p,
                         double kappa) {
    double ip;
    if (p == std::floor(p) && p < 60.0) {
        ip = std::abs(poly_exp_integral(fa, m, a, x, y, static_cast<int>(p), kappa));
    } else {
        ip = simpson(
            [&](double t) {
                return std::pow(std::abs(fa + m * (t - a)), p) * std::exp(kappa * t);
            },
            x, y, 256);
    }
    return ip;
}

}  // namespace

SobolevCheck one_dim_sobolev_check(const std::vector<double>& t, const std::vector<double>& f,
                                   double kappa, double p) {
    if (t.size() != f.size() || t.size() < 2) throw GraphError("sample arrays mismatch");
    if (kappa <= 0.0 || p < 1.0) throw GraphError("need kappa > 0 and p >= 1");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] <= t[i - 1]) throw GraphError("sample times must increase");
    if (std::abs(f.front()) > 1e-9 || std::abs(f.back()) > 1e-9)
        throw GraphError("function must vanish at both endpoints");

    SobolevCheck out;
    out.kappa = kappa;
    out.p = p;
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        double a = t[i], b = t[i + 1];
        double fa = f[i], fb = f[i + 1];
        double m = (fb - fa) / (b - a);
        out.rhs += std::pow(std::abs(m), p) * (std::exp(kappa * b) - std::exp(kappa * a)) / kappa;
        if (fa == 0.0 && m == 0.0) continue;
        if (fa * fb < 0.0) {
            double root = a - fa / m;  // split so each piece has one sign
            out.lhs += abs_pow_exp_piece(fa, m, a, a, root, p, kappa);
            out.lhs += abs_pow_exp_piece(fa, m, a, root, b, p, kappa);
        } else {
            out.lhs += abs_pow_exp_piece(fa, m, a, a, b, p, kappa);
        }
    }
    out.rhs_weighted = std::pow(p / kappa, p) * out.rhs;
    out.pass = out.lhs <= out.rhs_weighted * (1.0 + 1e-8) + 1e-300;
    return out;
}

RadialModulusBound radial_modulus_lower_bound(double cap_measure, double rho, int n, double p) {
    if (cap_measure <= 0.0) throw GraphError("boundary set must have positive measure");
    if (rho <= 0.0 || rho >= 1.0) throw GraphError("rho must lie in (0, 1)");
    if (n < 2 || p < 1.0) throw GraphError("need n >= 2 and p >= 1");
    RadialModulusBound out;
    out.c_np = p == 1.0 ? 1.0 : std::pow((p - 1.0) / (n - 1.0), (p - 1.0) / p);
    double common = std::pow(2.0, n) * std::pow(rho, n - 1) * cap_measure /
                    std::pow(1.0 - rho, n - 1);
    out.bound_power_p = common / std::pow(out.c_np, p);
    out.bound_power_n = common / std::pow(out.c_np, n);
    return out;
}

namespace {

double ramp(double r) {
    if (r <= 0.5) return 0.0;
    if (r >= 1.0) return 1.0;
    return 0.5 * (1.0 - std::cos(2.0 * kPi * (r - 0.5)));
}

}  // namespace

PolarFunction cap_witness(const PolarGrid& grid) {
    return sample_polar(grid, [&](double r, double a, double) {
        return ramp(r) * 0.5 * (1.0 + std::cos(a));
    });
}

double truncated_deviation(const PolarGrid& grid, const PolarFunction& f, double p, double c,
                           double R) {
    check_shape(grid, f);
    double acc = 0.0;
    for (int i = 0; i < grid.radial_count() && grid.r[i] <= R + 1e-12; ++i) {
        double jac = std::pow(std::sinh(grid.r[i]), grid.n - 1);
        double inner = 0.0;
        for (int j = 0; j < grid.n_theta; ++j)
            inner += grid.wtheta[j] *
                     std::pow(std::abs(f.values[static_cast<std::size_t>(i) * grid.n_theta + j] - c),
                              p);
        acc += grid.wr[i] * jac * inner;
    }
    return acc;
}

namespace {

std::vector<int> integer_radius_schedule(const PolarGrid& grid, double lo, double hi) {
    std::vector<int> out;
    for (double r = std::ceil(lo); r <= hi + 1e-9; r += 1.0) out.push_back(locate_radius(grid, r));
    return out;
}

CapPair default_cap_pair(const PolarGrid& grid) {
    if (grid.n == 2) return make_cap_pair({0.0, 0.0, 0.5}, {kPi / 2.0, 0.0, 0.5});
    // Mirror-symmetric about the equator so the discrete cap measures agree.
    return make_cap_pair({kPi / 2.0 - 0.5, 0.0, 0.5}, {kPi / 2.0 + 0.5, 0.0, 0.5});
}

}  // namespace

ClassificationRecord hn_classification_harness(int n, double p, double r_max, int radial,
                                               int angular) {
    auto grid = make_polar_grid(n, r_max, radial, angular);
    ClassificationRecord rec;
    rec.n = n;
    rec.p = p;

    if (p > n - 1) {
        rec.side = "strict_inclusion";
        auto f = cap_witness(grid);
        auto norms = hyperbolic_norms(grid, f, p);
        bool finite = std::isfinite(norms.radial_energy) && std::isfinite(norms.angular_energy);

        auto cells = band_partition(grid, 12);
        auto schedule = integer_radius_schedule(grid, 2.0, r_max - 1.0);
        auto trace = trace_report(grid, f, cells, schedule, p);

        bool monotone = true, growth = true;
        nlohmann::json trunc = nlohmann::json::array();
        for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            double prev = -1.0;
            for (double R : {r_max / 4.0, r_max / 2.0, 3.0 * r_max / 4.0, r_max}) {
                double dev = truncated_deviation(grid, f, p, c, R);
                if (dev < prev) monotone = false;
                prev = dev;
            }
            double half = truncated_deviation(grid, f, p, c, r_max / 2.0);
            double full = truncated_deviation(grid, f, p, c, r_max);
            if (full <= 10.0 * half) growth = false;
            trunc.push_back({{"c", c}, {"half", half}, {"full", full}});
        }

        rec.consistent = finite && trace.spread >= 0.9 && monotone && growth;
        rec.details = {{"radial_energy", norms.radial_energy},
                       {"angular_energy", norms.angular_energy},
                       {"trace_spread", trace.spread},
                       {"trace_limits", trace.limits},
                       {"truncations", trunc},
                       {"monotone", monotone},
                       {"growth_exceeds_10x", growth}};
        return rec;
    }

    rec.side = "equality_consistent";
    struct Entry {
        std::string name;
        std::function<double(double, double, double)> fn;
    };
    std::vector<Entry> suite{
        {"decay_half", [](double r, double a, double) {
             return std::exp(-r / 2.0) * 0.5 * (1.0 + std::cos(a));
         }},
        {"radial_tanh", [](double r, double, double) { return std::tanh(r); }},
        {"decay_full", [](double r, double a, double) { return std::exp(-r) * (1.0 + std::cos(a)); }},
        {"inverse_cube", [](double r, double a, double) {
             return 0.5 * (1.0 + std::cos(a)) / std::pow(1.0 + r, 3.0);
         }},
        {"offset_decay", [](double r, double a, double) {
             return 0.3 + 0.5 * std::exp(-r / 2.0) * std::sin(a);
         }}};

    auto caps = default_cap_pair(grid);
    auto cells = band_partition(grid, 8);
    auto lateral_schedule = integer_radius_schedule(grid, 2.0, r_max - kPi / 2.0 - 0.1);
    auto trace_schedule = integer_radius_schedule(grid, 2.0, r_max - 1.0);

    bool all_hold = true;
    double worst_spread = 0.0;
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& entry : suite) {
        auto f = sample_polar(grid, entry.fn);
        nlohmann::json checks = nlohmann::json::array();
        bool holds = true;
        for (int idx : lateral_schedule) {
            auto b = lateral_bound(grid, f, caps, idx, p);
            holds = holds && b.holds;
            checks.push_back({{"r", grid.r[idx]}, {"lhs", b.lhs}, {"rhs", b.rhs}});
        }
        auto trace = trace_report(grid, f, cells, trace_schedule, p);
        all_hold = all_hold && holds;
        worst_spread = std::max(worst_spread, trace.spread);
        entries.push_back({{"name", entry.name},
                           {"all_lateral_bounds_hold", holds},
                           {"trace_spread", trace.spread},
                           {"lateral_checks", checks}});
    }
    rec.consistent = all_hold && worst_spread < 1e-2;
    rec.details = {{"proof_constant", lateral_constant(p)},
                   {"functions", entries},
                   {"worst_trace_spread", worst_spread}};
    return rec;
}

}  // namespace potlab::hn
