#include "kinetic_harris/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/potential.hpp"
#include "kinetic_harris/rng.hpp"

namespace kh {

ProcessSpec ProcessSpec::bgk(DomainSpec domain, FlowConfig flow)
{
    ProcessSpec p;
    p.kind = ProcessKind::BGK;
    p.domain = std::move(domain);
    p.flow = flow;
    p.validate();
    return p;
}

ProcessSpec ProcessSpec::boltzmann(DomainSpec domain, CollisionOperatorPtr op, FlowConfig flow)
{
    ProcessSpec p;
    p.kind = ProcessKind::LinearBoltzmann;
    p.domain = std::move(domain);
    p.collision = std::move(op);
    p.flow = flow;
    p.validate();
    return p;
}

void ProcessSpec::validate() const
{
    check_dimension(domain.dim);
    if (!domain.is_torus() && !domain.potential)
        throw PreconditionViolated("whole-space process needs a potential");
    if (kind == ProcessKind::LinearBoltzmann)
    {
        if (!collision)
            throw PreconditionViolated("linear Boltzmann process needs a collision kernel");
        if (collision->dim() != domain.dim)
            throw PreconditionViolated("collision kernel dimension differs from the domain");
        if (!(collision->gamma() >= 0) || !(collision->b_lower() > 0))
            throw PreconditionViolated("collision kernel needs gamma >= 0 and b bounded below");
    }
}

RateHistogram::RateHistogram(double max_speed, int bins)
    : edges(bins + 1), occupancy(bins, 0.0), events(bins, 0)
{
    for (int i = 0; i <= bins; ++i)
        edges[i] = max_speed * i / bins;
}

int RateHistogram::bin(double speed) const
{
    if (edges.size() < 2 || speed >= edges.back())
        return -1;
    double w = edges[1] - edges[0];
    return std::min(static_cast<int>(speed / w), static_cast<int>(occupancy.size()) - 1);
}

void RateHistogram::merge(const RateHistogram& other)
{
    for (std::size_t i = 0; i < occupancy.size(); ++i)
    {
        occupancy[i] += other.occupancy[i];
        events[i] += other.events[i];
    }
    proposals += other.proposals;
}

std::vector<double> RateHistogram::rates() const
{
    std::vector<double> r(occupancy.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < r.size(); ++i)
        if (occupancy[i] > 0)
            r[i] = static_cast<double>(events[i]) / occupancy[i];
    return r;
}

namespace {

void record_time(RateHistogram* hist, const ProcessSpec& p, const Vec& v, double dt)
{
    if (!hist || !p.domain.is_torus())
        return;
    int b = hist->bin(norm(v));
    if (b >= 0)
        hist->occupancy[b] += dt;
}

void record_event(RateHistogram* hist, const Vec& v)
{
    if (!hist)
        return;
    int b = hist->bin(norm(v));
    if (b >= 0)
        ++hist->events[b];
}

} // namespace

void advance_particle(PhasePoint& z, std::uint64_t& block, std::uint64_t& jumps, std::uint64_t seed,
                      std::uint64_t index, double t0, double t1, const ProcessSpec& process,
                      RateHistogram* hist)
{
    if (t1 <= t0)
        return;
    CounterRng rng(seed, stream_id(StreamTag::Simulation, index), block);
    const int d = process.dim();
    const bool boltzmann = process.kind == ProcessKind::LinearBoltzmann;
    const CollisionOperator* op = process.collision.get();
    const Potential* phi = process.domain.potential.get();
    const double phi_inf = phi ? phi->lower_bound() : 0.0;
    double t = t0;
    for (;;)
    {
        double bound = 1.0;
        if (boltzmann)
        {
            double energy = 0.5 * norm2(z.v) + (phi ? phi->value(z.x) : 0.0);
            bound = op->thinning_bound(energy, phi_inf);
        }
        double tau = rng.exponential() / bound;
        if (t + tau >= t1)
        {
            record_time(hist, process, z.v, t1 - t);
            z = flow(z, t1 - t, process.domain, process.flow);
            break;
        }
        record_time(hist, process, z.v, tau);
        z = flow(z, tau, process.domain, process.flow);
        t += tau;
        if (!boltzmann)
        {
            record_event(hist, z.v);
            z.v = sample_maxwellian(rng, d);
            ++jumps;
            continue;
        }
        if (hist)
            ++hist->proposals;
        double rate = op->kappa(z.v);
        if (rate > bound)
            throw ThinningBoundViolated("kappa(v) = " + std::to_string(rate) +
                                        " exceeds the flight bound " + std::to_string(bound));
        if (rng.uniform() * bound < rate)
        {
            record_event(hist, z.v);
            z.v = op->sample_post(z.v, rng);
            ++jumps;
        }
    }
    block = rng.next_block();
}

Ensemble simulate(const Ensemble& start, const ProcessSpec& process, double t_final,
                  const Execution& exec, RateHistogram* hist)
{
    if (t_final < start.t)
        throw PreconditionViolated("simulate cannot run backwards in time");
    if (start.dim != process.dim())
        throw PreconditionViolated("ensemble dimension differs from the process");
    Ensemble out = start;
    const std::size_t n = out.size();
    const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
    std::vector<RateHistogram> partial;
    if (hist)
        partial.assign(chunks, RateHistogram(hist->edges.back(), static_cast<int>(hist->occupancy.size())));
    parallel_for(chunks, exec, [&](std::size_t c) {
        std::size_t lo = c * reduction_chunk;
        std::size_t hi = std::min(n, lo + reduction_chunk);
        RateHistogram* h = hist ? &partial[c] : nullptr;
        for (std::size_t i = lo; i < hi; ++i)
            advance_particle(out.points[i], out.rng_block[i], out.jumps[i], out.seed, i, start.t,
                             t_final, process, h);
    });
    if (hist)
        for (const auto& h : partial)
            hist->merge(h);
    out.t = t_final;
    return out;
}

Ensemble simulate_serial(const Ensemble& start, const ProcessSpec& process, double t_final,
                         RateHistogram* hist)
{
    if (t_final < start.t)
        throw PreconditionViolated("simulate cannot run backwards in time");
    Ensemble out = start;
    for (std::size_t i = 0; i < out.size(); ++i)
        advance_particle(out.points[i], out.rng_block[i], out.jumps[i], out.seed, i, start.t,
                         t_final, process, hist);
    out.t = t_final;
    return out;
}

MeanEstimate ensemble_mean(const Ensemble& e, const std::function<double(const PhasePoint&)>& f,
                           const Execution& exec)
{
    const std::size_t n = e.size();
    if (n == 0)
        return {};
    const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
    std::vector<double> values(n);
    std::vector<double> partial(chunks, 0.0);
    auto chunk_sum = [&](auto&& g) {
        parallel_for(chunks, exec, [&](std::size_t c) {
            std::size_t lo = c * reduction_chunk;
            std::size_t hi = std::min(n, lo + reduction_chunk);
            double a = 0;
            for (std::size_t i = lo; i < hi; ++i)
                a += g(i);
            partial[c] = a;
        });
        double total = 0;
        for (double a : partial)
            total += a;
        return total;
    };
    double nn = static_cast<double>(n);
    MeanEstimate out;
    out.mean = chunk_sum([&](std::size_t i) { return values[i] = f(e.points[i]); }) / nn;
    double ss = chunk_sum([&](std::size_t i) {
        double r = values[i] - out.mean;
        return r * r;
    });
    out.stderr_ = n > 1 ? std::sqrt(ss / (nn - 1.0) / nn) : 0.0;
    return out;
}

Moments compute_moments(const Ensemble& e, const DomainSpec& domain, const Execution& exec)
{
    Moments m;
    m.v2 = ensemble_mean(e, [](const PhasePoint& z) { return norm2(z.v); }, exec);
    const Potential* phi = domain.potential.get();
    if (!domain.is_torus() && phi)
        m.phi = ensemble_mean(e, [phi](const PhasePoint& z) { return phi->value(z.x); }, exec);
    m.xv = ensemble_mean(e, [](const PhasePoint& z) { return dot(z.x, z.v); }, exec);
    return m;
}

} // namespace kh
