#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "kinetic_harris/certificates.hpp"
#include "kinetic_harris/errors.hpp"

namespace kh {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

struct ScenarioName
{
    ScenarioKind kind;
    const char* name;
};

constexpr ScenarioName scenario_names[] = {
    {ScenarioKind::TorusBGK, "torus-bgk"},
    {ScenarioKind::TorusBoltzmann, "torus-boltzmann"},
    {ScenarioKind::ConfinedBGK, "confined-bgk"},
    {ScenarioKind::ConfinedBoltzmann, "confined-boltzmann"},
    {ScenarioKind::SubgeometricBGK, "subgeometric-bgk"},
    {ScenarioKind::SubgeometricBoltzmann, "subgeometric-boltzmann"},
};

std::vector<double> geometric_grid(double lo, double hi, int n)
{
    std::vector<double> g;
    for (int i = 0; i < n; ++i)
        g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
    return g;
}

void append(AuditTrail& to, const AuditTrail& from, const std::string& prefix)
{
    for (const auto& e : from)
        to.push_back({prefix + e.name, e.value, e.tag});
}

LyapunovSpec plus_one(LyapunovSpec l)
{
    l.c0 += 1.0;
    return l;
}

} // namespace

std::string to_string(ScenarioKind k)
{
    for (const auto& n : scenario_names)
        if (n.kind == k)
            return n.name;
    return "unknown";
}

std::optional<ScenarioKind> scenario_from_string(const std::string& s)
{
    for (const auto& n : scenario_names)
        if (s == n.name)
            return n.kind;
    return std::nullopt;
}

bool is_torus(ScenarioKind k)
{
    return k == ScenarioKind::TorusBGK || k == ScenarioKind::TorusBoltzmann;
}

bool is_boltzmann(ScenarioKind k)
{
    return k == ScenarioKind::TorusBoltzmann || k == ScenarioKind::ConfinedBoltzmann ||
           k == ScenarioKind::SubgeometricBoltzmann;
}

bool is_subgeometric(ScenarioKind k)
{
    return k == ScenarioKind::SubgeometricBGK || k == ScenarioKind::SubgeometricBoltzmann;
}

DomainSpec Scenario::domain() const
{
    if (is_torus(kind))
        return DomainSpec::torus(dim);
    if (!potential)
        throw ConfigError("scenario " + to_string(kind) + " needs a potential");
    return DomainSpec::whole_space(dim, potential);
}

ProcessSpec make_process(const Scenario& s, CollisionOperatorPtr op)
{
    if (!is_boltzmann(s.kind))
        return ProcessSpec::bgk(s.domain(), s.flow);
    if (!op)
        op = std::make_shared<CollisionOperator>(s.kernel, s.dim);
    return ProcessSpec::boltzmann(s.domain(), op, s.flow);
}

double Certificate::log_rate() const
{
    if (doeblin)
        return std::log(doeblin->lambda_rate);
    if (harris)
        return harris->log_rate;
    return -inf;
}

double Certificate::algebraic_exponent() const
{
    return subgeometric ? subgeometric->asymptotic_exponent() : 0.0;
}

double Certificate::tv_bound(double t, double mu0_V, double initial) const
{
    switch (kind)
    {
    case CertificateKind::Doeblin:
        return doeblin->bound(t, initial);
    case CertificateKind::Harris:
        return std::exp(harris->log_bound(t, mu0_V, mustar_V));
    case CertificateKind::Subgeometric:
        return std::min(initial, subgeometric->bound(t, mu0_V));
    }
    return inf;
}

double Certificate::weighted_bound(double t, double mu0_V) const
{
    if (kind != CertificateKind::Harris)
        return inf;
    return weight_equivalence * std::exp(harris->log_bound(t, mu0_V, mustar_V));
}

Certificate assemble_certificate(const Scenario& s, const Equilibrium& eq, CollisionOperatorPtr op,
                                 const CertificateOptions& opt)
{
    check_dimension(s.dim);
    if (is_boltzmann(s.kind) && !op)
        op = std::make_shared<CollisionOperator>(s.kernel, s.dim);
    const Potential* phi = is_torus(s.kind) ? nullptr : s.potential.get();
    if (!is_torus(s.kind) && !phi)
        throw ConfigError("scenario " + to_string(s.kind) + " needs a potential");

    Certificate c;
    c.scenario = s.kind;
    c.audit.push_back({"d", static_cast<double>(s.dim), "dimension"});

    switch (s.kind)
    {
    case ScenarioKind::TorusBGK: {
        auto best = optimize_torus_bgk(s.dim);
        c.kind = CertificateKind::Doeblin;
        c.doeblin = best.rate;
        c.minorisation = best.cert;
        c.lyapunov = LyapunovSpec::torus_bgk_trivial();
        c.weight = LyapunovSpec::kinetic_energy();
        c.weight.c0 = 1.0;
        c.weight_equivalence = inf;
        c.audit.push_back({"t_star", best.t_star, "optimized minorisation time"});
        append(c.audit, best.cert.audit, "");
        break;
    }
    case ScenarioKind::TorusBoltzmann:
    case ScenarioKind::ConfinedBGK:
    case ScenarioKind::ConfinedBoltzmann: {
        LyapunovSpec lyap;
        MinorisationBuilder build;
        std::vector<double> grid = opt.t_grid;
        if (s.kind == ScenarioKind::TorusBoltzmann)
        {
            lyap = drift_constants_torus_boltzmann(*op);
            build = [&, op](double level, double t) {
                double vr = small_set_radii(lyap, nullptr, level).v;
                double delta = std::max(1.01 * torus_delta_min(t, s.dim), std::sqrt(0.5 * s.dim));
                auto m = doeblin_alpha_torus_boltzmann(t, vr, *op, delta, opt.carleman_grid);
                m.level = level;
                m.region = "V <= " + std::to_string(level);
                return m;
            };
            if (grid.empty())
                grid = {0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0};
            c.weight = plus_one(lyap);
        }
        else
        {
            ProcessKind pk = s.kind == ScenarioKind::ConfinedBGK ? ProcessKind::BGK
                                                                 : ProcessKind::LinearBoltzmann;
            lyap = pk == ProcessKind::BGK ? drift_constants_confined_bgk(*phi, s.dim)
                                          : drift_constants_confined_boltzmann(*phi, *op);
            build = [&, op, pk](double level, double t) {
                auto r = small_set_radii(lyap, phi, level);
                auto m = doeblin_alpha_confined(pk, *phi, op.get(), s.dim, t, std::max(r.x, r.v),
                                                s.flow, opt.jacobian_net, opt.carleman_grid);
                m.level = level;
                m.region = "V <= " + std::to_string(level);
                return m;
            };
            if (grid.empty())
                grid = geometric_grid(0.5, std::min(200.0, 8.0 / lyap.lambda), 10);
            c.weight = statement_weight(false);
        }
        auto h = optimize_harris(lyap, build, grid);
        c.kind = CertificateKind::Harris;
        c.lyapunov = lyap;
        c.minorisation = h.minorisation;
        c.mustar_V = equilibrium_mean(lyap, eq);
        c.weight_equivalence = weight_ratio_sup(c.weight, plus_one(lyap), phi);
        append(c.audit, lyap.audit, "");
        c.audit.push_back({"lambda", lyap.lambda, "drift rate, U V <= -lambda V + K"});
        c.audit.push_back({"K", lyap.K, "drift offset"});
        append(c.audit, h.minorisation.audit, "");
        append(c.audit, h.audit, "");
        c.audit.push_back({"mustar_V", c.mustar_V, "equilibrium mean of V"});
        c.audit.push_back({"weight_equivalence", c.weight_equivalence,
                           "sup W/(1 + V), converts to the reported weight"});
        c.harris = std::move(h);
        break;
    }
    case ScenarioKind::SubgeometricBGK:
    case ScenarioKind::SubgeometricBoltzmann: {
        LyapunovSpec lyap = s.kind == ScenarioKind::SubgeometricBGK
                                ? drift_constants_subgeometric_bgk(*phi, s.dim, s.beta)
                                : drift_constants_subgeometric_boltzmann(*phi, *op, s.delta);
        c.kind = CertificateKind::Subgeometric;
        c.lyapunov = lyap;
        c.subgeometric.emplace(lyap.q, lyap.lambda);
        c.weight = statement_weight(s.kind == ScenarioKind::SubgeometricBoltzmann);
        c.weight_equivalence = inf;
        c.mustar_V = equilibrium_mean(lyap, eq);
        append(c.audit, lyap.audit, "");
        c.audit.push_back({"lambda", lyap.lambda, "drift rate, U V <= -lambda V^q + K"});
        c.audit.push_back({"K", lyap.K, "drift offset"});
        c.audit.push_back({"q", lyap.q, "drift exponent, phi(s) = 1 + s^q"});
        c.audit.push_back({"C", c.subgeometric->constant(),
                           "curve constant, not explicit in the convergence result; normalized so the bound at t = 0 "
                           "is at least 2 when mu(V) >= 1"});
        c.audit.push_back({"algebraic_exponent", c.algebraic_exponent(), "q/(1 - q)"});
        c.audit.push_back({"mustar_V", c.mustar_V, "equilibrium mean of V"});
        break;
    }
    }
    c.audit.push_back({"log_rate", c.log_rate(), "log of the certified exponential rate"});
    return c;
}

std::string format_audit(const Certificate& c)
{
    std::ostringstream os;
    os << "# certificate for " << to_string(c.scenario) << "\n";
    os << "# kind = "
       << (c.kind == CertificateKind::Doeblin  ? "doeblin"
           : c.kind == CertificateKind::Harris ? "harris"
                                               : "subgeometric")
       << "\n";
    char buf[64];
    for (const auto& e : c.audit)
    {
        std::snprintf(buf, sizeof buf, "%.17g", e.value);
        os << e.name << " = " << buf << "  # " << e.tag << "\n";
    }
    return os.str();
}

} // namespace kh
