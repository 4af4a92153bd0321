#pragma once

// Direct discretization of the Cauchy wavelet transform on the Hardy space and
// of the localization operator L_F = W^* F W, used to measure operator norms
// from first principles.
//
// Hardy vectors are sampled on a Gauss-Legendre grid in frequency (w > 0),
// plane fields on a uniform x grid times a log-uniform y grid with the
// nu-weights dx dy / y^2. With these weights L_F is exactly self-adjoint for
// real F.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wavelock/core.hpp"
#include "wavelock/weight.hpp"

namespace wavelock {

using cplx = std::complex<double>;

/// c_beta = 2^beta / sqrt(2 pi Gamma(2 beta)), so that
/// 2 pi int_0^inf |psi_hat(w)|^2 dw / w = 1.
inline double cauchy_normalization(double beta) {
    return std::exp(beta * std::log(2.0) - 0.5 * std::log(2.0 * std::numbers::pi) -
                    0.5 * std::lgamma(2.0 * beta));
}

inline double cauchy_wavelet_hat(double omega, double beta) {
    if (!(omega > 0.0)) return 0.0;
    return std::exp(beta * std::log(2.0) - 0.5 * std::log(2.0 * std::numbers::pi) -
                    0.5 * std::lgamma(2.0 * beta) + beta * std::log(omega) - omega);
}

struct FrequencyGrid {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const noexcept { return nodes.size(); }

    /// n-point Gauss-Legendre rule on (0, omega_max].
    static FrequencyGrid gauss_legendre(std::size_t n, double omega_max) {
        if (n < 2 || !(omega_max > 0.0)) throw InvalidParams("frequency grid needs n >= 2, max > 0");
        const auto zeros = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
        std::vector<std::pair<double, double>> xw;
        for (double z : zeros) {
            const double dp = boost::math::legendre_p_prime(static_cast<int>(n), z);
            const double w = 2.0 / ((1.0 - z * z) * dp * dp);
            xw.emplace_back(z, w);
            if (z != 0.0) xw.emplace_back(-z, w);
        }
        std::sort(xw.begin(), xw.end());
        FrequencyGrid g;
        const double half = 0.5 * omega_max;
        for (const auto& [x, w] : xw) {
            g.nodes.push_back(half * (x + 1.0));
            g.weights.push_back(half * w);
        }
        return g;
    }
};

struct PlaneGrid {
    std::vector<double> x, y;    ///< x symmetric about 0 with odd count; y increasing
    std::vector<double> wx, wy;  ///< wx_j wy_k = nu-weight of node (x_j, y_k)

    std::size_t nx() const noexcept { return x.size(); }
    std::size_t ny() const noexcept { return y.size(); }
    std::size_t size() const noexcept { return x.size() * y.size(); }
    std::size_t index(std::size_t j, std::size_t k) const noexcept { return k * x.size() + j; }
    double nu_weight(std::size_t j, std::size_t k) const noexcept { return wx[j] * wy[k]; }

    /// Uniform trapezoid on [-half_width, half_width]; trapezoid in log y on
    /// [y_min, y_max], where dy / y^2 = d(log y) / y.
    static PlaneGrid make(double half_width, std::size_t nx, double y_min, double y_max,
                          std::size_t ny) {
        if (nx < 3 || nx % 2 == 0) throw InvalidParams("x grid needs an odd count >= 3");
        if (ny < 2 || !(y_min > 0.0) || !(y_max > y_min) || !(half_width > 0.0)) {
            throw InvalidParams("plane grid needs 0 < y_min < y_max, ny >= 2, half_width > 0");
        }
        PlaneGrid g;
        const double dx = 2.0 * half_width / static_cast<double>(nx - 1);
        for (std::size_t j = 0; j < nx; ++j) {
            g.x.push_back(-half_width + dx * static_cast<double>(j));
            g.wx.push_back(j == 0 || j + 1 == nx ? 0.5 * dx : dx);
        }
        g.x[(nx - 1) / 2] = 0.0;
        const double hl = std::log(y_max / y_min) / static_cast<double>(ny - 1);
        for (std::size_t k = 0; k < ny; ++k) {
            const double yk = y_min * std::exp(hl * static_cast<double>(k));
            g.y.push_back(yk);
            g.wy.push_back((k == 0 || k + 1 == ny ? 0.5 * hl : hl) / yk);
        }
        return g;
    }
};

struct GridSpec {
    std::size_t n_omega = 256;
    double omega_max = 40.0;
    double x_half_width = 30.0;
    std::size_t n_x = 257;
    double y_min = 1e-5;
    double y_max = 50.0;
    std::size_t n_y = 160;

    /// Every node count multiplied by `factor` (x count kept odd).
    GridSpec refined(double factor) const {
        GridSpec g = *this;
        g.n_omega = static_cast<std::size_t>(std::lround(static_cast<double>(n_omega) * factor));
        g.n_x = 2 * static_cast<std::size_t>(std::lround(static_cast<double>(n_x - 1) * factor / 2.0)) + 1;
        g.n_y = static_cast<std::size_t>(std::lround(static_cast<double>(n_y) * factor));
        return g;
    }
};

/// Coefficients of f_hat on a FrequencyGrid.
struct HardyVector {
    std::vector<cplx> coeffs;
};

/// Samples of a (possibly complex) weight on a PlaneGrid, row-major in y.
using PlaneField = std::vector<cplx>;

inline int worker_threads() {
    int n = 1;
#ifdef _OPENMP
    n = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("WAVELOCK_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return std::max(n, 1);
}

/// Pairwise summation of per-row partial results, so the reduction order does
/// not depend on the number of threads.
inline void pairwise_reduce(std::vector<std::vector<cplx>>& rows, std::vector<cplx>& out) {
    std::size_t n = rows.size();
    while (n > 1) {
        const std::size_t half = (n + 1) / 2;
        for (std::size_t i = 0; i + half < n; ++i) {
            auto& dst = rows[i];
            const auto& src = rows[i + half];
            for (std::size_t m = 0; m < dst.size(); ++m) dst[m] += src[m];
        }
        n = half;
    }
    out = rows.empty() ? std::vector<cplx>{} : rows.front();
}

/// Precomputed tables for the transform on a fixed pair of grids.
class WaveletFrame {
public:
    WaveletFrame(double beta, FrequencyGrid freq, PlaneGrid plane)
        : beta_(beta), freq_(std::move(freq)), plane_(std::move(plane)) {
        if (!(beta > 0.0)) throw InvalidParams("beta must be positive");
        const std::size_t nw = freq_.size();
        const std::size_t center = (plane_.nx() - 1) / 2;
        half_ = plane_.nx() - center;
        cos_.resize(half_ * nw);
        sin_.resize(half_ * nw);
        for (std::size_t j = 0; j < half_; ++j) {
            const double xj = plane_.x[center + j];
            for (std::size_t m = 0; m < nw; ++m) {
                cos_[j * nw + m] = std::cos(xj * freq_.nodes[m]);
                sin_[j * nw + m] = std::sin(xj * freq_.nodes[m]);
            }
        }
        psi_.resize(plane_.ny() * nw);
        for (std::size_t k = 0; k < plane_.ny(); ++k) {
            const double yk = plane_.y[k];
            for (std::size_t m = 0; m < nw; ++m) {
                psi_[k * nw + m] = std::sqrt(yk) * cauchy_wavelet_hat(yk * freq_.nodes[m], beta);
            }
        }
    }

    static WaveletFrame from_spec(double beta, const GridSpec& spec) {
        return WaveletFrame(beta, FrequencyGrid::gauss_legendre(spec.n_omega, spec.omega_max),
                            PlaneGrid::make(spec.x_half_width, spec.n_x, spec.y_min, spec.y_max,
                                            spec.n_y));
    }

    double beta() const noexcept { return beta_; }
    const FrequencyGrid& frequencies() const noexcept { return freq_; }
    const PlaneGrid& plane() const noexcept { return plane_; }

    HardyVector sample(const std::function<cplx(double)>& f_hat) const {
        HardyVector v;
        v.coeffs.reserve(freq_.size());
        for (double w : freq_.nodes) v.coeffs.push_back(f_hat(w));
        return v;
    }

    PlaneField sample_field(const std::function<cplx(const HalfPlanePoint&)>& F) const {
        PlaneField out(plane_.size());
        for (std::size_t k = 0; k < plane_.ny(); ++k) {
            for (std::size_t j = 0; j < plane_.nx(); ++j) {
                out[plane_.index(j, k)] = F({plane_.x[j], plane_.y[k]});
            }
        }
        return out;
    }

    cplx inner(const HardyVector& f, const HardyVector& g) const {
        cplx s = 0.0;
        for (std::size_t m = 0; m < freq_.size(); ++m) {
            s += freq_.weights[m] * f.coeffs[m] * std::conj(g.coeffs[m]);
        }
        return s;
    }

    double norm2(const HardyVector& f) const { return inner(f, f).real(); }

    double plane_norm2(const PlaneField& U) const {
        double s = 0.0;
        for (std::size_t k = 0; k < plane_.ny(); ++k) {
            for (std::size_t j = 0; j < plane_.nx(); ++j) {
                s += plane_.nu_weight(j, k) * std::norm(U[plane_.index(j, k)]);
            }
        }
        return s;
    }

    /// (Wf)(x, y) = sqrt(y) sum_m w_m f_m psi_hat(y w_m) e^{i x w_m}.
    PlaneField transform(const HardyVector& f) const {
        check(f);
        const std::size_t nw = freq_.size();
        const std::size_t nx = plane_.nx();
        const std::size_t center = (nx - 1) / 2;
        PlaneField out(plane_.size());
        const long ny = static_cast<long>(plane_.ny());
#pragma omp parallel for schedule(static) num_threads(worker_threads())
        for (long kk = 0; kk < ny; ++kk) {
            const auto k = static_cast<std::size_t>(kk);
            std::vector<cplx> h(nw);
            for (std::size_t m = 0; m < nw; ++m) {
                h[m] = freq_.weights[m] * f.coeffs[m] * psi_[k * nw + m];
            }
            for (std::size_t j = 0; j < half_; ++j) {
                const double* c = &cos_[j * nw];
                const double* s = &sin_[j * nw];
                double cr = 0, ci = 0, sr = 0, si = 0;
                for (std::size_t m = 0; m < nw; ++m) {
                    cr += c[m] * h[m].real();
                    ci += c[m] * h[m].imag();
                    sr += s[m] * h[m].real();
                    si += s[m] * h[m].imag();
                }
                // C + iS at +x, C - iS at -x, with C = cr + i ci, S = sr + i si.
                out[plane_.index(center + j, k)] = {cr - si, ci + sr};
                out[plane_.index(center - j, k)] = {cr + si, ci - sr};
            }
        }
        return out;
    }

    /// W^* U: (W^* U)_m = sum_{j,k} nu_jk U_jk sqrt(y_k) psi_hat(y_k w_m) e^{-i x_j w_m}.
    HardyVector adjoint(const PlaneField& U) const {
        const std::size_t nw = freq_.size();
        const std::size_t nx = plane_.nx();
        const std::size_t center = (nx - 1) / 2;
        std::vector<std::vector<cplx>> rows(plane_.ny(), std::vector<cplx>(nw));
        const long ny = static_cast<long>(plane_.ny());
#pragma omp parallel for schedule(static) num_threads(worker_threads())
        for (long kk = 0; kk < ny; ++kk) {
            const auto k = static_cast<std::size_t>(kk);
            std::vector<double> er(nw, 0.0), ei(nw, 0.0);
            for (std::size_t j = 0; j < half_; ++j) {
                const cplx vp = plane_.nu_weight(center + j, k) * U[plane_.index(center + j, k)];
                const cplx vm = j == 0 ? cplx{} : plane_.nu_weight(center - j, k) *
                                                      U[plane_.index(center - j, k)];
                // vp e^{-ixw} + vm e^{ixw} = (vp + vm) cos - i (vp - vm) sin
                const cplx sum = vp + vm;
                const cplx diff = vp - vm;
                const double* c = &cos_[j * nw];
                const double* s = &sin_[j * nw];
                for (std::size_t m = 0; m < nw; ++m) {
                    er[m] += c[m] * sum.real() + s[m] * diff.imag();
                    ei[m] += c[m] * sum.imag() - s[m] * diff.real();
                }
            }
            auto& row = rows[k];
            for (std::size_t m = 0; m < nw; ++m) row[m] = psi_[k * nw + m] * cplx{er[m], ei[m]};
        }
        HardyVector out;
        pairwise_reduce(rows, out.coeffs);
        return out;
    }

private:
    void check(const HardyVector& f) const {
        if (f.coeffs.size() != freq_.size()) {
            throw InvalidParams("Hardy vector does not match the frequency grid");
        }
    }

    double beta_;
    FrequencyGrid freq_;
    PlaneGrid plane_;
    std::size_t half_ = 0;
    std::vector<double> cos_, sin_, psi_;
};

inline PlaneField wavelet_transform(const HardyVector& f, const WaveletFrame& frame) {
    return frame.transform(f);
}

/// | ||Wf||^2 / ||f||^2 - 1 | on the grids.
inline double isometry_defect(const HardyVector& f, const WaveletFrame& frame) {
    return std::abs(frame.plane_norm2(frame.transform(f)) / frame.norm2(f) - 1.0);
}

/// Non-empty when the grids resolve f too poorly (isometry defect above 1%).
inline std::optional<std::string> resolution_diagnostic(const HardyVector& f,
                                                        const WaveletFrame& frame) {
    const double defect = isometry_defect(f, frame);
    if (defect <= 0.01) return std::nullopt;
    return "grid resolution: isometry defect " + std::to_string(defect) + " exceeds 1%";
}

/// L_F f = W^*(F . Wf).
inline HardyVector localization_apply(const PlaneField& F, const HardyVector& f,
                                      const WaveletFrame& frame) {
    if (F.size() != frame.plane().size()) throw InvalidParams("weight field does not match grid");
    PlaneField U = frame.transform(f);
    for (std::size_t i = 0; i < U.size(); ++i) U[i] *= F[i];
    return frame.adjoint(U);
}

/// Weight field of an extremal weight sampled on the plane grid.
inline PlaneField sample_weight(const ExtremalWeight& w, const WaveletFrame& frame) {
    return frame.sample_field([&w](const HalfPlanePoint& z) { return eval_weight(w, z); });
}

/// (sum nu |F|^e)^(1/e) on the plane grid.
inline double grid_lebesgue_norm(const PlaneField& F, const PlaneGrid& plane, double e) {
    double s = 0.0;
    for (std::size_t k = 0; k < plane.ny(); ++k) {
        for (std::size_t j = 0; j < plane.nx(); ++j) {
            const double m = std::abs(F[plane.index(j, k)]);
            if (m > 0.0) s += plane.nu_weight(j, k) * std::pow(m, e);
        }
    }
    return std::pow(s, 1.0 / e);
}

struct NormResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Rayleigh quotient after each iteration.
    std::vector<double> history;
};

/// Largest singular value of L_F by power iteration. For real nonnegative F
/// the operator is positive and the Rayleigh quotient of L itself is tracked;
/// otherwise the iteration runs on L^* L.
inline NormResult operator_norm(const PlaneField& F, const WaveletFrame& frame, HardyVector seed,
                                double tol = 1e-8, int max_iter = 500) {
    const bool positive = std::all_of(F.begin(), F.end(), [](const cplx& v) {
        return v.imag() == 0.0 && v.real() >= 0.0;
    });
    PlaneField F_conj;
    if (!positive) {
        F_conj.resize(F.size());
        std::transform(F.begin(), F.end(), F_conj.begin(), [](const cplx& v) { return std::conj(v); });
    }
    auto apply = [&](const HardyVector& f) {
        HardyVector g = localization_apply(F, f, frame);
        return positive ? g : localization_apply(F_conj, g, frame);
    };
    const double n0 = std::sqrt(frame.norm2(seed));
    if (!(n0 > 0.0)) throw InvalidParams("power iteration seed must be nonzero");
    for (auto& c : seed.coeffs) c /= n0;

    NormResult res;
    double prev = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        HardyVector g = apply(seed);
        const double rq = frame.inner(g, seed).real();
        const double value = positive ? rq : std::sqrt(std::max(rq, 0.0));
        res.history.push_back(value);
        res.iterations = it + 1;
        res.value = value;
        if (it > 0 && std::abs(value - prev) <= tol * std::abs(value)) {
            res.converged = true;
            break;
        }
        prev = value;
        const double ng = std::sqrt(frame.norm2(g));
        if (!(ng > 0.0)) {
            res.converged = true;
            break;
        }
        for (std::size_t m = 0; m < g.coeffs.size(); ++m) seed.coeffs[m] = g.coeffs[m] / ng;
    }
    return res;
}

}  // namespace wavelock
