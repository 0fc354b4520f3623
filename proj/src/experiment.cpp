#include "kinetic_harris/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "kinetic_harris/distance.hpp"
#include "kinetic_harris/equilibrium.hpp"
#include "kinetic_harris/errors.hpp"
#include "kinetic_harris/rng.hpp"
#include "kinetic_harris/simulate.hpp"

namespace kh {

namespace {

std::string num(double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string weight_description(const Certificate& cert)
{
    switch (cert.scenario)
    {
    case ScenarioKind::TorusBGK:
        return "1 + |v|^2/2";
    case ScenarioKind::TorusBoltzmann:
        return "1 + V, V = |v|^2";
    case ScenarioKind::ConfinedBGK:
    case ScenarioKind::ConfinedBoltzmann:
    case ScenarioKind::SubgeometricBGK:
        return "1 + |v|^2/2 + Phi(x) + |x|^2";
    case ScenarioKind::SubgeometricBoltzmann:
        return "1 + |v|^2/2 + Phi(x) + <x>";
    }
    return "";
}

CollisionOperatorPtr make_operator(const ExperimentConfig& c)
{
    if (!is_boltzmann(c.scenario))
        return nullptr;
    return std::make_shared<CollisionOperator>(make_kernel(c), c.d);
}

Ensemble heavy_tail_ensemble(const ExperimentConfig& c)
{
    std::vector<PhasePoint> pts(c.N);
    for (std::size_t i = 0; i < c.N; ++i)
    {
        CounterRng rng(c.seed, stream_id(StreamTag::Initial, i));
        double r = c.tail_scale * std::pow(rng.uniform(), -1.0 / c.tail_index);
        Vec dir = sample_maxwellian(rng, c.d);
        pts[i].x = (r / norm(dir)) * dir;
        pts[i].v = sample_maxwellian(rng, c.d);
    }
    return Ensemble::from_points(c.d, std::move(pts), c.seed);
}

Ensemble initial_ensemble(const ExperimentConfig& c, const Equilibrium& eq, const Execution& exec)
{
    switch (c.initial)
    {
    case InitialLaw::Equilibrium: return sample_equilibrium(eq, c.N, c.seed, StreamTag::Initial, exec);
    case InitialLaw::HeavyTail: return heavy_tail_ensemble(c);
    case InitialLaw::Dirac: break;
    }
    return Ensemble::dirac(c.d, PhasePoint{c.x0, c.v0}, c.N, c.seed);
}

void check_distance_dimension(const ExperimentConfig& c)
{
    if (c.d > 2)
        throw ConfigError("scenario.d: binned distances need d <= 2, got " + std::to_string(c.d));
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error("cannot write " + p.string());
    out << text;
}

FitOutcome try_fit(const std::vector<double>& t, const std::vector<double>& d, const std::vector<double>& se,
                   DecayModel model, double t_min, double bias_floor)
{
    FitOutcome f;
    try
    {
        f.fit = fit_decay(t, d, se, model, t_min, bias_floor);
    }
    catch (const InsufficientSignal& e)
    {
        f.error = e.what();
    }
    return f;
}

void fit_lines(std::ostream& os, const std::string& prefix, const FitOutcome& f)
{
    if (!f.fit)
    {
        os << prefix << "_fit = none  # " << f.error << "\n";
        return;
    }
    os << prefix << "_fit_model = " << to_string(f.fit->model) << "\n";
    os << prefix << "_fit_rate = " << num(f.fit->rate) << "\n";
    os << prefix << "_fit_rate_stderr = " << num(f.fit->rate_stderr) << "\n";
    os << prefix << "_fit_log_C = " << num(f.fit->log_C) << "\n";
    os << prefix << "_fit_r2 = " << num(f.fit->r2) << "\n";
    os << prefix << "_fit_window = [" << num(f.fit->t_lo) << ", " << num(f.fit->t_hi) << "]\n";
    os << prefix << "_fit_points = " << f.fit->points << "\n";
}

} // namespace

RunReport run_experiment(const ExperimentConfig& c, const Execution& exec)
{
    check_distance_dimension(c);
    Scenario s = make_scenario(c);
    Equilibrium eq(s.domain());
    auto op = make_operator(c);
    ProcessSpec process = make_process(s, op);

    RunReport r;
    r.certificate = assemble_certificate(s, eq, op);
    const Certificate& cert = r.certificate;
    r.weight_name = weight_description(cert);

    BinnedReference ref(eq, BinningSpec::default_for(eq, c.bins, c.coverage), c.coverage);
    LyapunovSpec w_spec = cert.weight;
    w_spec.c0 -= 1.0;
    BinWeight w = make_bin_weight(ref, w_spec, s.potential.get(), 1.0);
    r.noise_floor = noise_floor(ref, c.N);
    r.weighted_noise_floor = noise_floor(ref, c.N, &w);

    Ensemble e = initial_ensemble(c, eq, exec);
    const Potential* phi = s.potential.get();
    r.mu0_V = ensemble_mean(e, [&](const PhasePoint& z) { return cert.lyapunov.eval(z, phi); }, exec).mean;

    for (double t : c.snapshots)
    {
        if (t > e.t)
            e = simulate(e, process, t, exec);
        SnapshotRow row;
        row.t = t;
        auto tv = estimate_tv(e, ref, exec);
        auto wtv = estimate_weighted_tv(e, ref, w, exec);
        row.tv = tv.value;
        row.tv_stderr = tv.stderr_;
        row.wtv = wtv.value;
        row.wtv_stderr = wtv.stderr_;
        row.bound = cert.tv_bound(t, r.mu0_V);
        row.wbound = cert.weighted_bound(t, r.mu0_V);
        double excess = row.tv - 3.0 * row.tv_stderr - row.bound;
        double wexcess = row.wtv - 3.0 * row.wtv_stderr - row.wbound;
        r.literal_violations += excess > 0;
        r.literal_weighted_violations += wexcess > 0;
        // the binned estimate sits above the binned distance by up to the
        // noise floor
        r.violations += excess > r.noise_floor;
        r.weighted_violations += wexcess > r.weighted_noise_floor;
        r.rows.push_back(row);
    }

    std::vector<double> ts, tv, tvse, wtv, wtvse;
    for (const auto& row : r.rows)
    {
        ts.push_back(row.t);
        tv.push_back(row.tv);
        tvse.push_back(row.tv_stderr);
        wtv.push_back(row.wtv);
        wtvse.push_back(row.wtv_stderr);
    }
    DecayModel model = is_subgeometric(c.scenario) ? DecayModel::Algebraic : DecayModel::Exponential;
    // the window stops at twice the expected binning bias of an exact sample
    r.tv_fit = try_fit(ts, tv, tvse, model, c.fit_t_min, 2.0 * r.noise_floor);
    r.wtv_fit = try_fit(ts, wtv, wtvse, model, c.fit_t_min, 2.0 * r.weighted_noise_floor);
    return r;
}

std::string snapshots_csv(const std::vector<SnapshotRow>& rows)
{
    std::ostringstream os;
    os << "t,tv,tv_stderr,wtv,wtv_stderr,bound\n";
    for (const auto& r : rows)
        os << num(r.t) << "," << num(r.tv) << "," << num(r.tv_stderr) << "," << num(r.wtv) << ","
           << num(r.wtv_stderr) << "," << num(r.bound) << "\n";
    return os.str();
}

std::string summary_text(const ExperimentConfig& c, const RunReport& r)
{
    const Certificate& cert = r.certificate;
    std::ostringstream os;
    os << "scenario = " << to_string(c.scenario) << "\n";
    os << "d = " << c.d << "\n";
    os << "N = " << c.N << "\n";
    os << "seed = " << c.seed << "\n";
    os << "t_final = " << num(c.t_final) << "\n";
    os << "initial = " << to_string(c.initial) << "\n";
    os << "weighted_distance_weight = " << r.weight_name << "\n";
    os << "mu0_V = " << num(r.mu0_V) << "\n";
    os << "noise_floor = " << num(r.noise_floor) << "\n";
    os << "weighted_noise_floor = " << num(r.weighted_noise_floor) << "\n";
    for (const auto& w : c.warnings)
        os << "# warning: " << w << "\n";

    os << "\n[rates]\n";
    if (cert.kind == CertificateKind::Subgeometric)
    {
        double p = cert.algebraic_exponent();
        os << "certified_algebraic_exponent = " << num(p) << "\n";
        fit_lines(os, "tv", r.tv_fit);
        fit_lines(os, "wtv", r.wtv_fit);
        if (r.tv_fit.fit)
            os << "tv_fit_exceeds_certified = " << (r.tv_fit.fit->rate > p ? "yes" : "no") << "\n";
    }
    else
    {
        double lr = cert.log_rate();
        os << "certified_log_rate = " << num(lr) << "\n";
        os << "certified_rate = " << num(std::exp(lr)) << "\n";
        fit_lines(os, "tv", r.tv_fit);
        fit_lines(os, "wtv", r.wtv_fit);
        for (const auto& [name, f] : {std::pair{"tv", &r.tv_fit}, std::pair{"wtv", &r.wtv_fit}})
            if (f->fit)
            {
                os << name << "_fit_log_rate_minus_certified = " << num(std::log(f->fit->rate) - lr) << "\n";
                os << name << "_fit_exceeds_certified = " << (std::log(f->fit->rate) > lr ? "yes" : "no")
                   << "\n";
            }
    }

    os << "\n[bounds]\n";
    os << "tv_bound_violations = " << r.violations << "\n";
    os << "wtv_bound_violations = " << r.weighted_violations << "\n";
    os << "tv_bound_crossings_without_floor_allowance = " << r.literal_violations << "\n";
    os << "wtv_bound_crossings_without_floor_allowance = " << r.literal_weighted_violations << "\n";
    os << "status = " << (r.violations + r.weighted_violations > 0 ? "BOUND VIOLATION" : "ok") << "\n";

    os << "\n[certificate]\n" << format_audit(cert);
    return os.str();
}

bool ValidationReport::ok() const
{
    for (const auto& i : items)
        if (!i.ok)
            return false;
    return true;
}

std::string ValidationReport::text() const
{
    std::ostringstream os;
    for (const auto& i : items)
        os << (i.ok ? "ok    " : "FAIL  ") << i.check << ": " << i.message << "\n";
    for (const auto& w : warnings)
        os << "warn  " << w << "\n";
    os << (ok() ? "valid" : "invalid") << "\n";
    return os.str();
}

ValidationReport validate_experiment(const ExperimentConfig& c)
{
    ValidationReport rep;
    rep.warnings = c.warnings;
    Scenario s = make_scenario(c);

    if (s.potential)
    {
        auto dp = s.potential->drift_params();
        if (!dp)
            rep.items.push_back({"drift_params", false, "potential " + s.potential->name() + " declares none"});
        else
        {
            auto chk = check_drift_params(*s.potential, *dp, c.d);
            std::ostringstream os;
            os << "gamma1 = " << num(dp->gamma1) << ", gamma2 = " << num(dp->gamma2) << ", A = " << num(dp->A)
               << ", " << chk.samples << " samples, worst margin " << num(chk.worst_margin);
            if (!chk.ok)
            {
                os << " at x = (";
                for (int i = 0; i < c.d; ++i)
                    os << (i ? ", " : "") << num(chk.worst_x[i]);
                os << ")";
            }
            rep.items.push_back({"drift_params", chk.ok, os.str()});
        }
    }

    if (is_boltzmann(c.scenario))
    {
        try
        {
            CollisionOperator op(s.kernel, c.d);
            bool ok = op.b_lower() > 0 && op.angular_mass() > 0;
            rep.items.push_back({"kernel_positivity", ok,
                                 "b in [" + num(op.b_lower()) + ", " + num(op.b_upper()) + "], angular mass " +
                                     num(op.angular_mass())});
        }
        catch (const Error& e)
        {
            rep.items.push_back({"kernel_positivity", false, e.what()});
        }
    }

    if (c.d > 2)
        rep.items.push_back({"binning", false, "binned distances need d <= 2"});
    else
    {
        try
        {
            Equilibrium eq(s.domain());
            BinnedReference ref(eq, BinningSpec::default_for(eq, c.bins, c.coverage), c.coverage);
            rep.items.push_back({"binning", true,
                                 std::to_string(ref.bin_count()) + " bins, coverage " + num(ref.coverage())});
        }
        catch (const Error& e)
        {
            rep.items.push_back({"binning", false, e.what()});
        }
    }
    return rep;
}

int command_run(const ExperimentConfig& c, const Execution& exec, std::ostream& out, std::ostream& err)
{
    try
    {
        for (const auto& w : c.warnings)
            err << "warning: " << w << "\n";
        auto report = run_experiment(c, exec);
        std::filesystem::path dir(c.output_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / "snapshots.csv", snapshots_csv(report.rows));
        write_file(dir / "certificate.txt", format_audit(report.certificate));
        write_file(dir / "summary.txt", summary_text(c, report));
        out << "wrote " << (dir / "snapshots.csv").string() << ", certificate.txt, summary.txt\n";
        int v = report.violations + report.weighted_violations;
        if (v > 0)
        {
            err << "certified bound crossed beyond 3 sigma at " << v << " snapshot(s)\n";
            return exit_violation;
        }
        return exit_ok;
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

int command_validate(const ExperimentConfig& c, std::ostream& out)
{
    auto rep = validate_experiment(c);
    out << rep.text();
    return rep.ok() ? exit_ok : exit_config;
}

int command_certificate(const ExperimentConfig& c, std::ostream& out, std::ostream& err)
{
    try
    {
        Scenario s = make_scenario(c);
        Equilibrium eq(s.domain());
        auto cert = assemble_certificate(s, eq, make_operator(c));
        out << format_audit(cert);
        return exit_ok;
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace kh
