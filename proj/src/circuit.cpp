#include "kljn/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "kljn/kernels.hpp"
#include "kljn/noise.hpp"

namespace kljn {

namespace {

constexpr std::size_t kChunk = 4096;

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] double value() const { return sum + comp; }
};

struct CompensatedMoments {
    CompensatedSum a2, b2, i2, p;

    void add(const kernels::MomentSums& s) {
        a2.add(s.sum_a2);
        b2.add(s.sum_b2);
        i2.add(s.sum_i2);
        p.add(s.sum_p);
    }
    [[nodiscard]] kernels::MomentSums value() const { return {a2.value(), b2.value(), i2.value(), p.value()}; }
};

TraceStats make_stats(const kernels::MomentSums& s, std::size_t n) {
    const double inv = 1.0 / static_cast<double>(n);
    TraceStats t;
    t.n = n;
    t.msv_a = s.sum_a2 * inv;
    t.msv_b = s.sum_b2 * inv;
    t.msv_i = s.sum_i2 * inv;
    t.power_stat = s.sum_p * inv;
    t.msv_diff = t.msv_a - t.msv_b;
    return t;
}

double standard_error(const std::vector<double>& means) {
    const std::size_t b = means.size();
    if (b < 2) return std::numeric_limits<double>::quiet_NaN();
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (double m : means) ss += (m - mean) * (m - mean);
    return std::sqrt(ss / static_cast<double>(b - 1) / static_cast<double>(b));
}

BatchErrors batch_errors(const std::vector<TraceStats>& batches) {
    BatchErrors e;
    e.batches = batches.size();
    std::vector<double> v(batches.size());
    auto field = [&](auto member) {
        std::transform(batches.begin(), batches.end(), v.begin(), [&](const TraceStats& s) { return s.*member; });
        return standard_error(v);
    };
    e.msv_a = field(&TraceStats::msv_a);
    e.msv_b = field(&TraceStats::msv_b);
    e.msv_i = field(&TraceStats::msv_i);
    e.power_stat = field(&TraceStats::power_stat);
    e.msv_diff = field(&TraceStats::msv_diff);
    return e;
}

/// Supplies consecutive source samples either from live streams or from
/// pre-generated (band-limited) buffers.
class SourceBlock {
public:
    SourceBlock(const Arrangement& arr, const NoiseSpec& noise, std::size_t total, const SourceSeeds& seeds)
        : sa_(seeds.a, std::sqrt(johnson_msv(arr.r_a, arr.t_a, noise))),
          sb_(seeds.b, std::sqrt(johnson_msv(arr.r_b, arr.t_b, noise))),
          sw_(seeds.w, std::sqrt(johnson_msv(arr.cable.r_c, arr.cable.temperature, noise))),
          oversample_(noise.oversample) {
        if (oversample_ > 1) {
            full_a_ = bandlimited_stream(seeds.a, total, sa_.sigma(), oversample_);
            full_b_ = bandlimited_stream(seeds.b, total, sb_.sigma(), oversample_);
            full_w_ = bandlimited_stream(seeds.w, total, sw_.sigma(), oversample_);
        }
    }

    void next(std::span<double> a, std::span<double> b, std::span<double> w) {
        if (oversample_ > 1) {
            std::copy_n(full_a_.begin() + static_cast<std::ptrdiff_t>(offset_), a.size(), a.begin());
            std::copy_n(full_b_.begin() + static_cast<std::ptrdiff_t>(offset_), b.size(), b.begin());
            std::copy_n(full_w_.begin() + static_cast<std::ptrdiff_t>(offset_), w.size(), w.begin());
            offset_ += a.size();
            return;
        }
        sa_.fill(a);
        sb_.fill(b);
        sw_.fill(w);
    }

private:
    NoiseStream sa_, sb_, sw_;
    int oversample_;
    std::vector<double> full_a_, full_b_, full_w_;
    std::size_t offset_ = 0;
};

}  // namespace

void Arrangement::validate() const {
    auto ok = [](double x) { return std::isfinite(x) && x >= 0.0; };
    if (!ok(r_a) || !ok(r_b) || !ok(cable.r_c)) throw std::invalid_argument("arrangement resistances must be >= 0");
    if (!ok(t_a) || !ok(t_b) || !ok(cable.temperature)) {
        throw std::invalid_argument("arrangement temperatures must be >= 0");
    }
    if (!(loop_sum() > 0.0)) throw std::invalid_argument("loop_sum() > 0 violated");
}

LoopSample solve_loop_sample(double u_a, double u_b, double u_w, const Arrangement& arr) noexcept {
    LoopSample s{u_a, u_b, u_w, 0.0, 0.0, 0.0};
    s.i_c = (u_a - u_b + u_w) / arr.loop_sum();
    s.u_ca = u_a - s.i_c * arr.r_a;
    s.u_cb = u_b + s.i_c * arr.r_b;
    return s;
}

SourceSeeds source_seeds(std::uint64_t trace_seed) noexcept {
    return {hash64(trace_seed, 0), hash64(trace_seed, 1), hash64(trace_seed, 2)};
}

TraceResult simulate_trace(const Arrangement& arr, const NoiseSpec& noise, std::size_t n_samples,
                           const SourceSeeds& seeds, const TraceOptions& options) {
    if (n_samples == 0) throw EmptyTraceError();
    arr.validate();
    if (auto v = noise_violations(noise); !v.empty()) throw ConfigError(std::move(v));

    const std::size_t total = n_samples * static_cast<std::size_t>(noise.oversample);
    const std::size_t n_batches = std::clamp<std::size_t>(options.batches, 1, total);
    const kernels::LoopCoefficients coef{arr.r_a, arr.r_b, 1.0 / arr.loop_sum()};
    const auto& kern = kernels::active();

    SourceBlock source(arr, noise, total, seeds);
    std::vector<double> ua(kChunk), ub(kChunk), uw(kChunk);

    TraceResult result;
    if (options.keep_samples) result.samples.reserve(total);
    std::vector<TraceStats> batch_stats;
    batch_stats.reserve(n_batches);
    CompensatedMoments grand;

    for (std::size_t b = 0; b < n_batches; ++b) {
        const std::size_t begin = b * total / n_batches;
        const std::size_t end = (b + 1) * total / n_batches;
        CompensatedMoments batch;
        for (std::size_t pos = begin; pos < end; pos += kChunk) {
            const std::size_t len = std::min(kChunk, end - pos);
            source.next({ua.data(), len}, {ub.data(), len}, {uw.data(), len});
            batch.add(kern.accumulate(ua.data(), ub.data(), uw.data(), len, coef));
            if (options.keep_samples) {
                for (std::size_t k = 0; k < len; ++k) result.samples.push_back(solve_loop_sample(ua[k], ub[k], uw[k], arr));
            }
        }
        const auto sums = batch.value();
        grand.add(sums);
        batch_stats.push_back(make_stats(sums, end - begin));
    }

    result.stats = make_stats(grand.value(), total);
    result.errors = batch_errors(batch_stats);
    return result;
}

TraceStats simulate_trace(const Arrangement& arr, const NoiseSpec& noise, std::size_t n_samples, std::uint64_t seed) {
    return simulate_trace(arr, noise, n_samples, source_seeds(seed)).stats;
}

TraceStats trace_statistics(std::span<const LoopSample> samples) {
    if (samples.empty()) throw EmptyTraceError();
    CompensatedSum a2, b2, i2, p;
    for (const auto& s : samples) {
        a2.add(s.u_ca * s.u_ca);
        b2.add(s.u_cb * s.u_cb);
        i2.add(s.i_c * s.i_c);
        p.add((s.u_ca + s.u_cb) * s.i_c);
    }
    return make_stats({a2.value(), b2.value(), i2.value(), p.value()}, samples.size());
}

void write_trace_dump(std::ostream& os, std::span<const LoopSample> samples) {
    os << "u_ca,u_cb,i_c\n";
    for (const auto& s : samples) {
        os << format_double(s.u_ca) << ',' << format_double(s.u_cb) << ',' << format_double(s.i_c) << '\n';
    }
}

}  // namespace kljn
