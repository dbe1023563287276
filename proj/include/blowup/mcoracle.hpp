#pragma once

#include "blowup/errors.hpp"
#include "blowup/flag.hpp"
#include "blowup/form.hpp"
#include "blowup/parallel.hpp"
#include "blowup/rational.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace blowup {

inline constexpr const char* kGeneratorName = "mt19937_64, per-chunk std::seed_seq{seed_lo, seed_hi, chunk}";

struct SimulationConfig {
    std::map<Vertex, Rational> rates;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
};

struct Estimate {
    double mean = 0;
    double standard_error = 0;
    std::uint64_t samples = 0;

    // |mean - exact| within k standard errors; the floor keeps exact 0/1 estimands testable
    bool agrees(double exact, double k = 3.0, double floor = 1e-6) const {
        return std::abs(mean - exact) <= k * std::max(standard_error, floor);
    }
};

namespace mc {

inline constexpr std::uint64_t kChunk = 1 << 14;

using blowup::thread_count;

inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

// Per-chunk sums of each channel and its square, reduced in chunk order so the
// result does not depend on scheduling.
inline std::vector<double> run_chunks(std::uint64_t samples, std::uint64_t seed, std::size_t channels,
                                      const std::function<void(std::mt19937_64&, double*)>& draw) {
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(2 * channels, 0.0));
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(thread_count(), chunks));
    auto work = [&](unsigned w) {
        std::vector<double> x(channels);
        for (std::uint64_t c = w; c < chunks; c += workers) {
            auto eng = chunk_engine(seed, c);
            const std::uint64_t count = std::min(kChunk, samples - c * kChunk);
            auto& acc = partial[c];
            for (std::uint64_t i = 0; i < count; ++i) {
                draw(eng, x.data());
                for (std::size_t q = 0; q < channels; ++q) {
                    acc[2 * q] += x[q];
                    acc[2 * q + 1] += x[q] * x[q];
                }
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    std::vector<double> total(2 * channels, 0.0);
    for (const auto& p : partial)
        for (std::size_t q = 0; q < total.size(); ++q) total[q] += p[q];
    return total;
}

inline Estimate summarize(double sum, double sumsq, std::uint64_t samples) {
    const double N = static_cast<double>(samples);
    Estimate est;
    est.samples = samples;
    est.mean = sum / N;
    double var = samples > 1 ? std::max(0.0, (sumsq - sum * sum / N) / (N - 1)) : 0.0;
    est.standard_error = std::sqrt(var / N);
    return est;
}

inline Estimate indicator_estimate(std::uint64_t samples, std::uint64_t seed,
                                   const std::function<bool(std::mt19937_64&)>& trial) {
    if (samples == 0) throw std::invalid_argument("Monte Carlo: samples must be positive");
    auto sums = run_chunks(samples, seed, 1, [&](std::mt19937_64& e, double* x) { x[0] = trial(e) ? 1.0 : 0.0; });
    Estimate est;
    est.samples = samples;
    est.mean = sums[0] / static_cast<double>(samples);
    est.standard_error = std::sqrt(est.mean * (1 - est.mean) / static_cast<double>(samples));
    return est;
}

inline double exponential(std::mt19937_64& e, double rate) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return -std::log1p(-u(e)) / rate;
}

inline std::vector<double> dense_rates(const SimulationConfig& cfg, const VertexSet& V) {
    if (V.empty()) return {};
    std::vector<double> r(V.back() + 1, 0.0);
    for (Vertex v : V) {
        auto it = cfg.rates.find(v);
        if (it == cfg.rates.end()) throw std::invalid_argument("Monte Carlo: no rate for vertex " + std::to_string(v));
        if (sgn(it->second) <= 0) throw std::invalid_argument("Monte Carlo: rates must be positive");
        r[v] = to_double(it->second);
    }
    return r;
}

}  // namespace mc

enum class GammaMethod { SumOfExponentials, GammaVariate };

// Chain of |V_j|-th arrival times of the block processes.
inline Estimate estimate_pF(const Flag& F, const SimulationConfig& cfg,
                            GammaMethod method = GammaMethod::SumOfExponentials) {
    const auto r = mc::dense_rates(cfg, F.parent());
    std::vector<double> rho;
    std::vector<int> size;
    for (const auto& b : F.blocks()) {
        double s = 0;
        for (Vertex v : b) s += r[v];
        rho.push_back(s);
        size.push_back(static_cast<int>(b.size()));
    }
    return mc::indicator_estimate(cfg.samples, cfg.seed, [&](std::mt19937_64& e) {
        double prev = -1;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            double t = 0;
            if (method == GammaMethod::SumOfExponentials) {
                for (int i = 0; i < size[j]; ++i) t += mc::exponential(e, rho[j]);
            } else {
                std::gamma_distribution<double> g(size[j], 1.0 / rho[j]);
                t = g(e);
            }
            if (t < prev) return false;
            prev = t;
        }
        return true;
    });
}

// Literal experiment: competing exponential clocks, r arrivals per round.
inline Estimate estimate_higher(const VertexSet& V, const ArrivalSequence& seq, const SimulationConfig& cfg) {
    const auto r = mc::dense_rates(cfg, V);
    return mc::indicator_estimate(cfg.samples, cfg.seed, [&](std::mt19937_64& e) {
        std::vector<Vertex> active(V.begin(), V.end());
        for (std::size_t round = 0; !active.empty(); ++round) {
            if (round >= seq.rounds.size()) return false;
            std::map<Vertex, unsigned> counts;
            for (unsigned a = 0; a < seq.degree; ++a) {
                Vertex best = active.front();
                double tbest = std::numeric_limits<double>::infinity();
                for (Vertex v : active) {
                    double t = mc::exponential(e, r[v]);
                    if (t < tbest) {
                        tbest = t;
                        best = v;
                    }
                }
                ++counts[best];
            }
            if (counts != seq.rounds[round]) return false;
            std::erase_if(active, [&](Vertex v) { return counts.count(v) > 0; });
        }
        return true;
    });
}

// Two-sample agreement between the exponential-sum and Gamma-variate samplers.
inline bool gamma_sum_consistent(const Flag& F, const SimulationConfig& cfg, double k = 3.0) {
    Estimate a = estimate_pF(F, cfg, GammaMethod::SumOfExponentials);
    SimulationConfig other = cfg;
    other.seed = cfg.seed ^ 0x9e3779b97f4a7c15ull;
    Estimate b = estimate_pF(F, other, GammaMethod::GammaVariate);
    double se = std::sqrt(a.standard_error * a.standard_error + b.standard_error * b.standard_error);
    return std::abs(a.mean - b.mean) <= k * std::max(se, 1e-6);
}

struct FaceIntegralOptions {
    double eps_coarse = 1e-8;
    double eps_fine = 1e-9;
    double eps_check = 1e-10;  // second extrapolation from (fine, check) must agree
    double tolerance = 1e-2;   // relative, against max(1, |estimate|)
};

struct FaceIntegralEstimate {
    Estimate extrapolated;
    double coarse = 0;
    double fine = 0;
    double check = 0;  // extrapolation from the two finest scales
};

// Sample Theta_F uniformly block by block, place block j at scale eps^j and
// integrate the pulled-back form; two scales give a Richardson estimate and
// a third, finer pair confirms it. Linear-in-eps tails cancel, 1/eps ones do not.
inline FaceIntegralEstimate estimate_face_integral(const Flag& F, const RationalForm& form, const SimulationConfig& cfg,
                                                   const FaceIntegralOptions& opt = {}) {
    if (form.degree() != F.k()) throw std::invalid_argument("estimate_face_integral: degree does not match flag");
    const VertexSet V = F.parent();
    const std::size_t m = F.block_count();
    struct Term {
        std::function<double(std::span<const double>)> coef;
        double sign;
        std::vector<int> power;  // per block: |W cap V_j|
    };
    std::vector<Term> terms;
    for (const auto& [w, c] : form.terms()) {
        std::vector<IndexSet> parts(m);
        bool ok = true;
        for (Vertex v : w) {
            int j = F.block_of(v);
            if (j < 0) {
                ok = false;
                break;
            }
            parts[static_cast<std::size_t>(j)].push_back(v);
        }
        if (!ok) continue;
        double sign = 1;
        std::vector<int> power(m);
        for (std::size_t j = 0; j < m && ok; ++j) {
            const auto& b = F.block(j);
            if (parts[j].size() + 1 != b.size()) ok = false;
            else {
                // the missing vertex at position p of V_j contributes (-1)^p
                std::size_t p = 0;
                while (p < parts[j].size() && parts[j][p] == b[p]) ++p;
                if (p % 2) sign = -sign;
                power[j] = static_cast<int>(parts[j].size());
            }
        }
        if (!ok) continue;
        IndexSet grouped;
        for (const auto& p : parts) grouped.insert(grouped.end(), p.begin(), p.end());
        if (detail::sort_with_sign(grouped) < 0) sign = -sign;
        RationalFn fn = c;
        terms.push_back({[fn](std::span<const double> x) { return fn.evaluate(x); }, sign, power});
    }
    double volume = 1;
    for (const auto& b : F.blocks()) volume /= to_double(Rational(factorial(static_cast<unsigned>(b.size() - 1))));

    const double e1 = opt.eps_coarse, e2 = opt.eps_fine, e3 = opt.eps_check;
    auto integrand = [&](const std::vector<double>& mu, double eps) {
        std::vector<double> lam(V.back() + 1, 0.0);
        for (std::size_t j = 0; j < m; ++j)
            for (Vertex v : F.block(j)) lam[v] = std::pow(eps, static_cast<double>(j)) * mu[v];
        double g = 0;
        for (const auto& t : terms) {
            double scale = 1;
            for (std::size_t j = 0; j < m; ++j) scale *= std::pow(eps, static_cast<double>(j) * t.power[j]);
            g += t.sign * scale * t.coef(lam);
        }
        return g * volume;
    };
    if (cfg.samples == 0) throw std::invalid_argument("Monte Carlo: samples must be positive");
    // channels: extrapolated, coarse, fine, check
    auto sums = mc::run_chunks(cfg.samples, cfg.seed, 4, [&](std::mt19937_64& e, double* x) {
        std::vector<double> mu(V.back() + 1, 0.0);
        for (const auto& b : F.blocks()) {
            double s = 0;
            for (Vertex v : b) s += (mu[v] = mc::exponential(e, 1.0));
            for (Vertex v : b) mu[v] /= s;
        }
        double g1 = integrand(mu, e1), g2 = integrand(mu, e2), g3 = integrand(mu, e3);
        x[0] = (e1 * g2 - e2 * g1) / (e1 - e2);
        x[1] = g1;
        x[2] = g2;
        x[3] = (e2 * g3 - e3 * g2) / (e2 - e3);
    });
    FaceIntegralEstimate out;
    out.extrapolated = mc::summarize(sums[0], sums[1], cfg.samples);
    out.coarse = sums[2] / static_cast<double>(cfg.samples);
    out.fine = sums[4] / static_cast<double>(cfg.samples);
    out.check = sums[6] / static_cast<double>(cfg.samples);
    const double r = out.extrapolated.mean;
    double scale = std::max({1.0, std::abs(r), std::abs(out.check)});
    if (!std::isfinite(r) || !std::isfinite(out.check) || std::abs(r - out.check) > opt.tolerance * scale)
        throw ExtrapolationUnstable("face integral on " + F.shorthand() + " does not settle as eps shrinks (" +
                                    std::to_string(r) + " vs " + std::to_string(out.check) + ")");
    return out;
}

// Escalate once to ten times the samples when the first run misses the exact value.
template <class Fn>
Estimate escalate(const SimulationConfig& cfg, double exact, Fn&& run, bool* escalated = nullptr) {
    Estimate est = run(cfg);
    if (escalated) *escalated = false;
    if (est.agrees(exact)) return est;
    SimulationConfig big = cfg;
    big.samples = cfg.samples * 10;
    big.seed = cfg.seed + 0x5851f42d4c957f2dull;
    if (escalated) *escalated = true;
    return run(big);
}

// Random positive rational rates with denominators up to 10.
inline std::map<Vertex, Rational> random_rates(const VertexSet& V, std::uint64_t seed) {
    std::mt19937_64 e(seed);
    std::uniform_int_distribution<int> num(1, 9);
    std::map<Vertex, Rational> r;
    for (Vertex v : V) r[v] = make_rational(num(e), 10);
    return r;
}

}  // namespace blowup
