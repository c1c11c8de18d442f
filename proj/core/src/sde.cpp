#include "solvdyn/sde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "solvdyn/rng.hpp"

namespace solvdyn {

namespace {

constexpr std::int64_t kBlockSize = 4096; // fixed partition, independent of worker count

struct BlockSums {
    std::vector<double> s1, s2, s3, s4; // running powers of eps per record time
    std::vector<std::int64_t> tail;

    explicit BlockSums(size_t n_rec)
        : s1(n_rec, 0.0), s2(n_rec, 0.0), s3(n_rec, 0.0), s4(n_rec, 0.0), tail(n_rec, 0) {}
};

// Draws normals sequentially from a per-trajectory counter-based stream.
class SequentialNormals {
public:
    SequentialNormals(std::uint64_t seed, std::uint64_t trajectory)
        : stream_(seed, trajectory) {}

    double next() {
        if (index_ % 2 == 0)
            cached_ = stream_.normal_pair(index_ / 2);
        return cached_[index_++ % 2];
    }

private:
    NormalStream stream_;
    std::array<double, 2> cached_{};
    std::uint64_t index_ = 0;
};

} // namespace

void EnsembleConfig::validate() const {
    if (n_traj < 2)
        throw ConfigError("ensemble needs at least two trajectories");
    if (!(dt_sde > 0.0))
        throw ConfigError("SDE step size must be > 0");
    if (!(t_end > 0.0))
        throw ConfigError("SDE horizon must be > 0");
    if (record_times.empty())
        throw ConfigError("ensemble record schedule is empty");
    for (size_t i = 0; i < record_times.size(); ++i) {
        if (record_times[i] < 0.0)
            throw ConfigError("record times must be >= 0");
        if (i > 0 && !(record_times[i] > record_times[i - 1]))
            throw ConfigError("record times must be strictly increasing");
    }
    if (record_times.back() > t_end * (1.0 + 1e-12) + 1e-12)
        throw ConfigError("record times exceed the SDE horizon");
    if (path_resolution != 0.0) {
        if (!(path_resolution > 0.0) || path_resolution > dt_sde * (1.0 + 1e-12))
            throw ConfigError("path resolution must lie in (0, dt_sde]");
        const double ratio = dt_sde / path_resolution;
        if (std::abs(ratio - std::round(ratio)) > 1e-9)
            throw ConfigError("dt_sde must be an integer multiple of the path resolution");
    }
}

const MomentEstimate& EnsembleResult::at(int record_index, int order) const {
    return moments.at(static_cast<size_t>(record_index) * 2 + static_cast<size_t>(order - 1));
}

EnsembleResult simulate_ensemble(const DiffusionProfile& profile, const HarmonicPotential& potential,
                                 const GaussianWavepacket& packet, const EnsembleConfig& config) {
    profile.validate();
    potential.validate();
    packet.validate();
    config.validate();

    // record schedule as integer step indices
    const size_t n_rec = config.record_times.size();
    std::vector<std::int64_t> record_steps(n_rec);
    for (size_t r = 0; r < n_rec; ++r) {
        const double t = config.record_times[r];
        const std::int64_t s = std::llround(t / config.dt_sde);
        if (std::abs(static_cast<double>(s) * config.dt_sde - t) > 1e-9 * std::max(1.0, t))
            throw ConfigError("record time is not a multiple of dt_sde");
        if (r > 0 && s <= record_steps[r - 1])
            throw ConfigError("record times collapse onto the same dt_sde step");
        record_steps[r] = s;
    }
    const std::int64_t last_step = record_steps.back();

    const double d0 = profile.d0;
    const double alpha = profile.alpha;
    const double k = potential.k;
    const double dt = config.dt_sde;
    const double init_std = packet.sigma / std::sqrt(2.0);
    const double spurious_sign = config.flip_spurious_drift ? -1.0 : 1.0;
    const std::int64_t fine_per_step =
        config.path_resolution > 0.0 ? std::llround(dt / config.path_resolution) : 1;
    const double sqrt_fine_dt = std::sqrt(dt / static_cast<double>(fine_per_step));

    const std::int64_t n_blocks = (config.n_traj + kBlockSize - 1) / kBlockSize;
    std::vector<BlockSums> partials(n_blocks, BlockSums(n_rec));

    auto run_block = [&](std::int64_t block) {
        BlockSums& sums = partials[block];
        const std::int64_t begin = block * kBlockSize;
        const std::int64_t end = std::min(begin + kBlockSize, config.n_traj);
        for (std::int64_t traj = begin; traj < end; ++traj) {
            SequentialNormals noise(config.seed, static_cast<std::uint64_t>(traj));
            double eps = packet.epsilon0 + init_std * noise.next();
            size_t rec = 0;
            for (std::int64_t s = 0;; ++s) {
                if (rec < n_rec && record_steps[rec] == s) {
                    const double e2 = eps * eps;
                    sums.s1[rec] += eps;
                    sums.s2[rec] += e2;
                    sums.s3[rec] += e2 * eps;
                    sums.s4[rec] += e2 * e2;
                    if (std::abs(eps) > config.tail_bound)
                        ++sums.tail[rec];
                    ++rec;
                }
                if (s == last_step)
                    break;
                const double diffusion = d0 * (1.0 + alpha * eps * eps);
                const double drift = spurious_sign * 2.0 * d0 * alpha * eps - diffusion * k * eps;
                double brownian = noise.next();
                for (std::int64_t q = 1; q < fine_per_step; ++q)
                    brownian += noise.next();
                eps += drift * dt + std::sqrt(2.0 * diffusion) * sqrt_fine_dt * brownian;
            }
        }
    };

    int workers = config.workers > 0 ? config.workers
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1)
        workers = 1;
    if (workers == 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b)
            run_block(b);
    } else {
        std::atomic<std::int64_t> next{0};
        auto worker = [&] {
            for (std::int64_t b = next.fetch_add(1); b < n_blocks; b = next.fetch_add(1))
                run_block(b);
        };
        std::vector<std::thread> pool;
        const int n_threads = static_cast<int>(std::min<std::int64_t>(workers, n_blocks));
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (std::thread& t : pool)
            t.join();
    }

    // reduce in fixed block order so the result does not depend on scheduling
    BlockSums total(n_rec);
    for (const BlockSums& sums : partials) {
        for (size_t r = 0; r < n_rec; ++r) {
            total.s1[r] += sums.s1[r];
            total.s2[r] += sums.s2[r];
            total.s3[r] += sums.s3[r];
            total.s4[r] += sums.s4[r];
            total.tail[r] += sums.tail[r];
        }
    }

    const double n = static_cast<double>(config.n_traj);
    EnsembleResult result;
    result.record_times = config.record_times;
    result.tail_fraction.resize(n_rec);
    result.moments.reserve(n_rec * 2);
    for (size_t r = 0; r < n_rec; ++r) {
        const double mean1 = total.s1[r] / n;
        const double mean2 = total.s2[r] / n;
        const double mean4 = total.s4[r] / n;
        const double var1 = std::max(0.0, mean2 - mean1 * mean1);
        const double var2 = std::max(0.0, mean4 - mean2 * mean2);
        result.moments.push_back({config.record_times[r], 1, mean1, std::sqrt(var1 / (n - 1.0))});
        result.moments.push_back({config.record_times[r], 2, mean2, std::sqrt(var2 / (n - 1.0))});
        result.tail_fraction[r] = static_cast<double>(total.tail[r]) / n;
    }
    return result;
}

ComparisonReport compare_with_pde(const std::vector<ObservableSeries>& pde_moments,
                                  const EnsembleResult& mc) {
    const ObservableSeries* first = nullptr;
    const ObservableSeries* second = nullptr;
    for (const ObservableSeries& s : pde_moments) {
        if (s.kind != ObservableSeries::Kind::RawMoment)
            continue;
        if (s.order == 1)
            first = &s;
        if (s.order == 2)
            second = &s;
    }
    if (first == nullptr || second == nullptr)
        throw ScheduleMismatch("PDE moment series of orders 1 and 2 are required");

    const size_t n_rec = mc.record_times.size();
    if (first->times.size() != n_rec || second->times.size() != n_rec)
        throw ScheduleMismatch("PDE and ensemble record counts differ");
    for (size_t r = 0; r < n_rec; ++r) {
        const double t = mc.record_times[r];
        if (std::abs(first->times[r] - t) > 1e-9 || std::abs(second->times[r] - t) > 1e-9)
            throw ScheduleMismatch("PDE and ensemble record times differ");
    }

    ComparisonReport report;
    report.times = mc.record_times;
    report.z_order1.resize(n_rec);
    report.z_order2.resize(n_rec);
    long within = 0;
    auto z_score = [](double pde, const MomentEstimate& est) {
        const double diff = pde - est.mean;
        if (est.std_error == 0.0)
            return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return diff / est.std_error;
    };
    for (size_t r = 0; r < n_rec; ++r) {
        report.z_order1[r] = z_score(first->values[r], mc.at(static_cast<int>(r), 1));
        report.z_order2[r] = z_score(second->values[r], mc.at(static_cast<int>(r), 2));
        for (double z : {report.z_order1[r], report.z_order2[r]}) {
            report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
            if (std::abs(z) <= 3.0)
                ++within;
        }
    }
    report.fraction_within = static_cast<double>(within) / static_cast<double>(2 * n_rec);
    report.pass = report.fraction_within >= 0.99;
    return report;
}

} // namespace solvdyn
