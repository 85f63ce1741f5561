#include "kdhopf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <mutex>
#include <numbers>
#include <random>

#include <fftw3.h>

#include "kdhopf/errors.hpp"

namespace kdhopf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe; sweep rows may run concurrently.
std::mutex fftw_plan_mutex;

// Index of the first sample inside the post-transient window.
std::size_t window_start(const OrderParameterSeries& s, double transient_fraction, double reference_frequency) {
    if (!(transient_fraction >= 0.0 && transient_fraction < 1.0)) {
        throw DomainError("transient_fraction must lie in [0, 1)");
    }
    if (s.times.size() < 2 || s.eta1.size() != s.times.size()) throw WindowTooShort("series has fewer than two samples");
    const double t0 = s.times.front(), t1 = s.times.back();
    const double ts = t0 + transient_fraction * (t1 - t0);
    const auto i = static_cast<std::size_t>(std::lower_bound(s.times.begin(), s.times.end(), ts) - s.times.begin());
    if (s.times.size() - i < 2) throw WindowTooShort("post-transient window holds fewer than two samples");
    if (reference_frequency > 0.0) {
        const double need = 10.0 * kTwoPi / reference_frequency;
        if (t1 - s.times[i] < need * (1.0 - 1e-9)) {
            throw WindowTooShort("post-transient window spans " + std::to_string(t1 - s.times[i]) +
                                 ", fewer than 10 periods (" + std::to_string(need) + ")");
        }
    }
    return i;
}

}  // namespace

const char* to_string(SimKind k) {
    switch (k) {
        case SimKind::galerkin: return "galerkin";
        case SimKind::finite_n: return "finite_n";
        default: return "oa_oracle";
    }
}

double steady_amplitude(const OrderParameterSeries& s, double transient_fraction, double reference_frequency) {
    const std::size_t i0 = window_start(s, transient_fraction, reference_frequency);
    double m = 0.0;
    for (std::size_t i = i0; i < s.eta1.size(); ++i) m = std::max(m, std::abs(s.eta1[i]));
    return m;
}

FrequencyEstimate dominant_frequency(const OrderParameterSeries& s, double transient_fraction,
                                     double reference_frequency) {
    const std::size_t i0 = window_start(s, transient_fraction, reference_frequency);
    const std::size_t n = s.times.size() - i0;
    const double dt = s.times[i0 + 1] - s.times[i0];
    for (std::size_t i = i0 + 1; i < s.times.size(); ++i) {
        if (std::abs((s.times[i] - s.times[i - 1]) - dt) > 1e-6 * dt) {
            throw DomainError("dominant_frequency needs uniformly sampled data");
        }
    }
    std::size_t nfft = 1;
    while (nfft < 4 * n) nfft <<= 1;
    std::vector<std::complex<double>> buf(nfft, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = n > 1 ? 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n - 1))) : 1.0;
        buf[i] = w * s.eta1[i0 + i];
    }
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        plan = fftw_plan_dft_1d(static_cast<int>(nfft), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex);
        fftw_destroy_plan(plan);
    }

    std::size_t best = 0;
    double bmag = -1.0;
    for (std::size_t k = 0; k < nfft; ++k) {
        const double m = std::abs(buf[k]);
        if (m > bmag) {
            bmag = m;
            best = k;
        }
    }
    FrequencyEstimate out;
    if (best == 0 || bmag <= 0.0) {
        out.no_peak = true;
        return out;
    }
    const double a = std::abs(buf[(best + nfft - 1) % nfft]);
    const double b = bmag;
    const double c = std::abs(buf[(best + 1) % nfft]);
    const double den = a - 2.0 * b + c;
    const double shift = den != 0.0 ? 0.5 * (a - c) / den : 0.0;
    double k = static_cast<double>(best) + shift;
    if (best >= nfft / 2) k -= static_cast<double>(nfft);
    out.frequency = std::abs(kTwoPi * k / (static_cast<double>(nfft) * dt));
    return out;
}

DecayFit fit_decay_rate(const OrderParameterSeries& s, double t0, double t1, bool require_decay) {
    if (!(t1 > t0)) throw DomainError("fit window needs t1 > t0");
    std::vector<double> t;
    std::vector<cplx> z;
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        if (s.times[i] >= t0 && s.times[i] <= t1) {
            t.push_back(s.times[i]);
            z.push_back(s.eta1[i]);
        }
    }
    if (t.size() < 8) throw WindowTooShort("fit window holds fewer than 8 samples");
    // Project onto the principal axis of the samples, so standing and travelling waves both
    // give an oscillating real signal.
    double sxx = 0, syy = 0, sxy = 0;
    for (const auto& v : z) {
        sxx += v.real() * v.real();
        syy += v.imag() * v.imag();
        sxy += v.real() * v.imag();
    }
    const double phi = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
    const cplx rot = std::polar(1.0, -phi);
    std::vector<double> x(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) x[i] = (rot * z[i]).real();

    std::vector<double> crossings;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if ((x[i - 1] < 0.0) != (x[i] < 0.0)) {
            const double f = x[i - 1] / (x[i - 1] - x[i]);
            crossings.push_back(t[i - 1] + f * (t[i] - t[i - 1]));
        }
    }
    if (crossings.size() < 4) throw WindowTooShort("fewer than four zero crossings in the fit window");

    // One envelope sample per half-period: the extremum between successive crossings.
    std::vector<double> pt, pl;
    std::size_t i = 0;
    for (std::size_t c = 0; c + 1 < crossings.size(); ++c) {
        while (i < t.size() && t[i] < crossings[c]) ++i;
        std::size_t best = i;
        for (std::size_t j = i; j < t.size() && t[j] < crossings[c + 1]; ++j) {
            if (std::abs(x[j]) > std::abs(x[best])) best = j;
        }
        if (best == 0 || best + 1 >= t.size() || x[best] == 0.0) continue;
        // Parabola through the three samples around the extremum.
        const double a = std::abs(x[best - 1]), b = std::abs(x[best]), cc = std::abs(x[best + 1]);
        const double den = a - 2.0 * b + cc;
        const double d = den != 0.0 ? 0.5 * (a - cc) / den : 0.0;
        const double h = t[best + 1] - t[best];
        pt.push_back(t[best] + d * h);
        pl.push_back(std::log(b - 0.25 * (a - cc) * d));
    }
    if (pt.size() < 3) throw WindowTooShort("fewer than three envelope peaks in the fit window");
    const double n = static_cast<double>(pt.size());
    double mt = 0, ml = 0;
    for (std::size_t k = 0; k < pt.size(); ++k) {
        mt += pt[k];
        ml += pl[k];
    }
    mt /= n;
    ml /= n;
    double num = 0, den = 0;
    for (std::size_t k = 0; k < pt.size(); ++k) {
        num += (pt[k] - mt) * (pl[k] - ml);
        den += (pt[k] - mt) * (pt[k] - mt);
    }
    DecayFit fit;
    fit.rate = num / den;
    fit.peaks = static_cast<int>(pt.size());
    fit.frequency = std::numbers::pi * static_cast<double>(crossings.size() - 1) / (crossings.back() - crossings.front());
    if (require_decay && !(fit.rate < 0.0)) {
        throw NonDecaying("envelope slope " + std::to_string(fit.rate) + " is not negative");
    }
    return fit;
}

std::optional<double> log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] > 0.0 && y[i] > 0.0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(y[i]));
        }
    }
    if (lx.size() < 2) return std::nullopt;
    const double n = static_cast<double>(lx.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) return std::nullopt;
    return num / den;
}

std::vector<double> random_phases(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> th(n);
    for (auto& t : th) t = kTwoPi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    return th;
}

OrderParameterSeries run_simulation(const AnalyticDistribution& dist, const ModelParams& p, SimKind kind,
                                    const SweepSettings& st) {
    switch (kind) {
        case SimKind::galerkin:
            return simulate_galerkin(p, dist, st.M, st.J, st.initial_amplitude, st.t_end, st.dt, st.record_stride,
                                     st.galerkin);
        case SimKind::finite_n: {
            const auto omegas = sample_frequencies(dist, st.N, SampleMode::quantile);
            const auto theta = random_phases(st.N, st.seed);
            return simulate_finite_n(p, omegas, theta, st.t_end, st.dt, st.record_stride);
        }
        case SimKind::oa_oracle: {
            if (dist.family() != Family::bimodal_lorentzian || p.h != 0.0) {
                throw DomainError("the reduced oracle needs the bimodal Lorentzian with h = 0");
            }
            const cplx a = st.initial_amplitude;
            return ott_antonsen_oracle(dist.omega0(), p.K, {a, a}, st.t_end, st.dt, st.record_stride);
        }
    }
    throw DomainError("unknown simulation kind");
}

SweepResult bifurcation_sweep(const AnalyticDistribution& dist, double h, const std::vector<double>& K_list,
                              SimKind kind, const SweepSettings& st) {
    if (K_list.empty()) throw DomainError("sweep needs at least one coupling value");
    const CmCoefficients coeffs = h == 0.0 ? coefficients_sine(dist) : coefficients_second_harmonic(dist, h);
    SweepResult res;
    res.K_c = coeffs.K_c;
    res.y_c = coeffs.y_c;

    auto one = [&](double K) {
        SweepRow row;
        row.K = K;
        row.epsilon = K - coeffs.K_c;
        const OrbitPrediction pred = predict_orbit(coeffs, row.epsilon);
        row.predicted_amplitude = pred.stable ? pred.amplitude : 0.0;
        row.predicted_frequency = pred.frequency;
        const OrderParameterSeries s = run_simulation(dist, ModelParams{K, h}, kind, st);
        row.source = s.source;
        row.truncation_warning = s.truncation_warning;
        row.measured_amplitude = steady_amplitude(s, st.transient_fraction, coeffs.y_c);
        const FrequencyEstimate f = dominant_frequency(s, st.transient_fraction, coeffs.y_c);
        row.measured_frequency = f.no_peak ? 0.0 : f.frequency;
        return row;
    };

    res.rows.resize(K_list.size());
    const int threads = std::max(1, st.threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < K_list.size(); ++i) res.rows[i] = one(K_list[i]);
    } else {
        // Rows are independent; each lands in its own slot, so output order is fixed.
        for (std::size_t base = 0; base < K_list.size(); base += threads) {
            std::vector<std::future<SweepRow>> jobs;
            for (std::size_t i = base; i < std::min(K_list.size(), base + threads); ++i) {
                jobs.push_back(std::async(std::launch::async, one, K_list[i]));
            }
            for (std::size_t i = 0; i < jobs.size(); ++i) res.rows[base + i] = jobs[i].get();
        }
    }

    std::vector<double> eps, amp;
    for (const auto& r : res.rows) {
        if (r.epsilon > 0.0) {
            eps.push_back(r.epsilon);
            amp.push_back(r.measured_amplitude);
        }
    }
    res.exponent = log_log_slope(eps, amp);
    return res;
}

}  // namespace kdhopf
