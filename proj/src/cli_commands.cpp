#include "kvn/cli_commands.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "kvn/extended_dynamics.hpp"
#include "kvn/io.hpp"
#include "kvn/kvn_evolve.hpp"
#include "kvn/propagator.hpp"
#include "kvn/randomized.hpp"
#include "kvn/superfield.hpp"

namespace kvn::cli {

namespace {

using json = nlohmann::ordered_json;

RunStamp stamp_of(const RunConfig& cfg) { return RunStamp{cfg.hash(), cfg.seed()}; }

std::string out_path(const std::string& outdir, const std::string& name) {
    std::filesystem::create_directories(outdir);
    return (std::filesystem::path(outdir) / name).string();
}

void write_json(const std::string& path, const RunStamp& stamp, json j) {
    char hex[24];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(stamp.config_hash));
    j["config_hash"] = hex;
    j["seed"] = stamp.seed;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << j.dump(2) << '\n';
}

PhaseGrid grid_from(const RunConfig& cfg) {
    PhaseGrid g;
    g.qmin = cfg.get_double("grid", "qmin", -8.0);
    g.qmax = cfg.get_double("grid", "qmax", 8.0);
    g.pmin = cfg.get_double("grid", "pmin", -8.0);
    g.pmax = cfg.get_double("grid", "pmax", 8.0);
    const long n = cfg.get_long("grid", "n", 256);
    g.nq = static_cast<int>(cfg.get_long("grid", "nq", n));
    g.np = static_cast<int>(cfg.get_long("grid", "np", n));
    g.validate();
    return g;
}

SpatialGrid1D spatial_grid_from(const RunConfig& cfg, const std::string& section) {
    SpatialGrid1D g;
    g.xmin = cfg.get_double(section, "xmin", -20.0);
    g.xmax = cfg.get_double(section, "xmax", 20.0);
    g.n = static_cast<int>(cfg.get_long(section, "points", 1024));
    g.validate();
    return g;
}

std::vector<GaussianPacket> packets_from(const RunConfig& cfg, const std::string& section) {
    std::vector<GaussianPacket> out;
    for (const auto& line : cfg.get_all(section, "packet")) {
        GaussianPacket p;
        if (std::sscanf(line.c_str(), "%lf %lf %lf", &p.center, &p.width, &p.wavenumber) != 3)
            throw ConfigError("field [" + section + "].packet must read 'center width wavenumber'");
        out.push_back(p);
    }
    if (out.empty()) out = {{0.0, 1.0, 0.0}, {1.0, 1.0, 2.0}, {-2.0, 0.7, -1.0}};
    return out;
}

Eigen::VectorXd vector_from(const RunConfig& cfg, const std::string& section,
                            const std::string& key, int len, double fill) {
    Eigen::VectorXd v = Eigen::VectorXd::Constant(len, fill);
    if (!cfg.has(section, key)) return v;
    std::istringstream in(cfg.get_string(section, key));
    for (int i = 0; i < len; ++i)
        if (!(in >> v[i]))
            throw ConfigError("field [" + section + "]." + key + " needs " + std::to_string(len) +
                              " numbers");
    return v;
}

bool same_bits(double a, double b) {
    return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// one-line stamp sidecar for binary dumps (the grid format itself is fixed)
void write_meta(const std::string& path, const RunStamp& stamp) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << stamp.comment_line() << '\n';
}

json components_json(const SuperActionSlice& s) {
    json j;
    j["theta0"] = s.theta0.str();
    j["theta"] = s.theta_comp.str();
    j["thetabar"] = s.thetabar_comp.str();
    j["theta_thetabar"] = s.top_comp.str();
    return j;
}

struct ChargeOutcome {
    std::vector<std::vector<double>> rows;
    ChargeSeries::Drift drift;
};

ChargeOutcome charge_series_run(const RunConfig& cfg, const PolynomialHamiltonian& h) {
    const int d = h.dim();
    const double T = cfg.get_double("cpi", "T", 10.0);
    const double dt = cfg.require_positive("cpi", "dt", 1e-3);
    const int stride = static_cast<int>(cfg.get_long("cpi", "store_stride", 100));

    ExtendedState s0 = ExtendedState::zeros(h.dof());
    s0.phi = vector_from(cfg, "cpi", "phi", d, 1.0);
    const Eigen::VectorXd lam = vector_from(cfg, "cpi", "lambda", d, 0.5);
    for (int a = 0; a < d; ++a) s0.lambda[a] = lam[a];
    s0.c = vector_from(cfg, "cpi", "c", d, 1.0);
    s0.cbar = vector_from(cfg, "cpi", "cbar", d, -0.5);

    const auto traj = extended_flow(h, s0, T, dt, stride);
    const auto charges = conserved_charges(h, traj);
    ChargeOutcome out;
    out.drift = charges.max_drift();
    out.rows.reserve(charges.times.size());
    for (std::size_t k = 0; k < charges.times.size(); ++k)
        out.rows.push_back({charges.times[k], charges.h_tilde[k].real(),
                            charges.h_tilde[k].imag(), charges.ghost_pairing[k],
                            charges.q_charge[k].imag(), charges.qbar_charge[k].imag()});
    return out;
}

constexpr const char* kChargeHeader = "t,re_htilde,im_htilde,ghost_pairing,q_charge,qbar_charge";

}  // namespace

int check_superfield(const RunConfig& cfg, const std::string& outdir) {
    const long instances = cfg.get_long("superfield", "instances", 100);
    if (instances < 0) throw ConfigError("field [superfield].instances must be >= 0");
    const double tol = cfg.require_positive("superfield", "tolerance", 1e-12);
    const int min_slices = static_cast<int>(cfg.get_long("superfield", "min_slices", 3));
    const int max_slices = static_cast<int>(cfg.get_long("superfield", "max_slices", 20));
    const int max_dof = static_cast<int>(cfg.get_long("superfield", "max_dof", 2));
    const int max_degree = static_cast<int>(cfg.get_long("superfield", "max_degree", 6));
    if (min_slices < 1 || max_slices < min_slices)
        throw ConfigError("fields [superfield].min_slices/max_slices are inconsistent");

    const RunStamp stamp = stamp_of(cfg);
    std::mt19937_64 rng(stamp.seed);

    std::vector<std::vector<double>> rows;
    double worst_h = 0.0, worst_action = 0.0, worst_momentum = 0.0;
    bool theta0_exact = true;
    json detail;  // per-slice component report for the first instance
    for (long it = 0; it < instances; ++it) {
        const int dof = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_dof));
        const CpiAlgebra alg = CpiAlgebra::make(dof);
        const auto h = random_polynomial_hamiltonian(dof, max_degree, rng);
        const auto state = random_extended_state(dof, rng, (it % 2) == 1);
        const auto expansion = expand_hamiltonian(h, alg, state);

        const int slices =
            min_slices + static_cast<int>(rng() % static_cast<unsigned>(max_slices - min_slices + 1));
        const auto path = random_extended_path(dof, slices + 1, rng);
        const double dt = 0.05 + 0.001 * static_cast<double>(rng() % 100);
        const auto action = discretized_superaction(h, alg, path, dt);
        const auto momentum = momentum_superaction(h, alg, path, dt);

        const bool exact = action.theta0.coefficient(0) == Complex(action.s_phi, 0.0);
        theta0_exact = theta0_exact && exact;
        worst_h = std::max(worst_h, expansion.identity_residual);
        worst_action = std::max(worst_action, action.identity_residual);
        worst_momentum = std::max(worst_momentum, momentum.identity_residual);
        rows.push_back({static_cast<double>(it), static_cast<double>(dof),
                        static_cast<double>(h.degree()), expansion.identity_residual,
                        action.identity_residual, momentum.identity_residual,
                        exact ? 1.0 : 0.0});
        if (it == 0) {
            detail["slices"] = json::array();
            for (const auto& s : action.slices) detail["slices"].push_back(components_json(s));
            detail["totals"] =
                components_json({action.theta0, action.theta_comp, action.thetabar_comp,
                                 action.top_comp});
            detail["s_tilde"] = action.s_tilde.str();
            detail["surface_term"] = action.surface_term.str();
            detail["identity_residual"] = action.identity_residual;
        }
    }

    write_csv(out_path(outdir, "superfield_residuals.csv"), stamp,
              "instance,dof,degree,h_residual,action_residual,momentum_residual,theta0_exact",
              rows);
    const bool pass = worst_h <= tol && worst_action <= tol && worst_momentum <= tol &&
                      theta0_exact;
    json j;
    j["instances"] = instances;
    j["tolerance"] = tol;
    j["max_h_residual"] = worst_h;
    j["max_action_residual"] = worst_action;
    j["max_momentum_residual"] = worst_momentum;
    j["theta0_exact"] = theta0_exact;
    j["pass"] = pass;
    write_json(out_path(outdir, "superfield_summary.json"), stamp, j);
    if (instances > 0)
        write_json(out_path(outdir, "superfield_components.json"), stamp, detail);

    if (instances == 0) std::printf("check-superfield: warning: no instances requested\n");
    std::printf("check-superfield: %ld instances, max residuals H=%.3e S=%.3e P=%.3e, %s\n",
                instances, worst_h, worst_action, worst_momentum, pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

int evolve(const RunConfig& cfg, const std::string& outdir) {
    const auto h = cfg.hamiltonian();
    const PhaseGrid grid = grid_from(cfg);
    const double T = cfg.get_double("evolve", "T", M_PI / 2.0);
    TransportOptions opts;
    opts.dt = cfg.require_positive("evolve", "dt", 1e-3);
    opts.spline_order = static_cast<int>(cfg.get_long("evolve", "spline_order", 3));
    const double q0 = cfg.get_double("evolve", "q0", 1.0);
    const double p0 = cfg.get_double("evolve", "p0", 0.0);
    const double sigma = cfg.require_positive("evolve", "sigma", 1.0);
    const RunStamp stamp = stamp_of(cfg);

    const KvNWave psi0 = KvNWave::gaussian(grid, q0, p0, sigma,
                                           cfg.get_double("evolve", "kq", 0.0),
                                           cfg.get_double("evolve", "kp", 0.0));
    const std::string method = cfg.get_string("evolve", "method", std::string("characteristics"));
    TransportResult res;
    if (method == "characteristics")
        res = evolve_kvn(h, psi0, T, KvnMethod::characteristics, opts);
    else if (method == "spectral-split")
        res = evolve_kvn(h, psi0, T, KvnMethod::spectral_split, opts);
    else
        throw ConfigError("field [evolve].method must be characteristics or spectral-split");

    write_wave_csv(out_path(outdir, "wave_final.csv"), res.wave, stamp);
    write_grid_binary(out_path(outdir, "wave_final.grid"), res.wave);
    write_meta(out_path(outdir, "wave_final.grid.meta"), stamp);

    if (cfg.has("cpi", "T") || cfg.has("cpi", "phi")) {
        const auto charges = charge_series_run(cfg, h);
        write_csv(out_path(outdir, "charges.csv"), stamp, kChargeHeader, charges.rows);
    }

    const auto compat = density_compatibility(h, psi0, T, opts);
    const auto [qc, pc] = res.wave.centroid_abs2();
    write_csv(out_path(outdir, "evolve_summary.csv"), stamp,
              "T,centroid_q,centroid_p,norm_drift,l1_distance,support_violations",
              {{T, qc, pc, compat.psi_norm_drift, compat.l1_distance,
                static_cast<double>(res.support_violations)}});
    if (res.support_violations > 0)
        std::printf("evolve: warning: %ld backward points left the grid (set to zero)\n",
                    res.support_violations);

    bool pass = true;
    if (cfg.has("evolve", "l1_tolerance")) {
        const double tol = cfg.require_positive("evolve", "l1_tolerance", 1e-6);
        pass = compat.l1_distance <= tol && compat.psi_norm_drift <= tol;
    }
    std::printf("evolve: T=%g centroid=(%.6f, %.6f) l1=%.3e norm_drift=%.3e %s\n", T, qc, pc,
                compat.l1_distance, compat.psi_norm_drift, pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

int simulate_cpi(const RunConfig& cfg, const std::string& outdir) {
    const auto h = cfg.hamiltonian();
    const double T = cfg.get_double("cpi", "T", 10.0);
    const double tol = cfg.require_positive("cpi", "htilde_tolerance", 1e-6);
    const RunStamp stamp = stamp_of(cfg);

    const auto charges = charge_series_run(cfg, h);
    const auto& drift = charges.drift;
    write_csv(out_path(outdir, "charges.csv"), stamp, kChargeHeader, charges.rows);
    write_csv(out_path(outdir, "charge_drift.csv"), stamp,
              "htilde_drift,ghost_pairing_drift,q_drift,qbar_drift",
              {{drift.h_tilde, drift.ghost_pairing, drift.q_charge, drift.qbar_charge}});

    const bool pass = drift.h_tilde <= tol;
    std::printf("simulate-cpi: T=%g drifts: Htilde=%.3e pairing=%.3e Q=%.3e Qbar=%.3e %s\n", T,
                drift.h_tilde, drift.ghost_pairing, drift.q_charge, drift.qbar_charge,
                pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

int propagate(const RunConfig& cfg, const std::string& outdir) {
    const SpatialGrid1D grid = spatial_grid_from(cfg, "propagator");
    const double delta = cfg.require_positive("propagator", "delta", 1.0);
    const int slices = static_cast<int>(cfg.get_long("propagator", "slices", 256));
    const double t_free = cfg.get_double("propagator", "T_free", 1.0);
    const double t_mehler = cfg.get_double("propagator", "T_mehler", M_PI / 4.0);
    const double tol_free = cfg.require_positive("propagator", "tolerance_free", 1e-6);
    const double tol_mehler = cfg.require_positive("propagator", "tolerance_mehler", 1e-5);
    const double ratio_lo = cfg.get_double("propagator", "ratio_lo", 3.5);
    const double ratio_hi = cfg.get_double("propagator", "ratio_hi", 4.5);
    const auto packets = packets_from(cfg, "propagator");
    const RunStamp stamp = stamp_of(cfg);

    const auto free_h = PolynomialHamiltonian::free_particle();
    const auto harm = PolynomialHamiltonian::harmonic();

    const auto free_prop =
        position_propagator(free_h, grid, t_free, {slices, Splitting::strang}, delta);
    const double err_free = packet_oracle_error(free_prop, packets, [&](const GaussianPacket& p) {
        return free_kernel_action(grid, t_free, p, 1.0, delta);
    });

    auto mehler_err_at = [&](int ns) {
        const auto prop = position_propagator(harm, grid, t_mehler, {ns, Splitting::strang}, delta);
        return packet_oracle_error(prop, packets, [&](const GaussianPacket& p) {
            return mehler_kernel_action(grid, t_mehler, p, delta);
        });
    };
    std::vector<std::vector<double>> table;
    double prev = 0.0;
    bool ratios_ok = true;
    double err_mehler = 0.0;
    for (int ns : {slices / 4, slices / 2, slices}) {
        const double err = mehler_err_at(ns);
        const double ratio = prev > 0.0 ? prev / err : 0.0;
        if (prev > 0.0 && (ratio < ratio_lo || ratio > ratio_hi)) ratios_ok = false;
        table.push_back({static_cast<double>(ns), err, ratio});
        prev = err;
        err_mehler = err;
    }
    write_csv(out_path(outdir, "convergence.csv"), stamp, "slices,error,ratio", table);
    write_csv(out_path(outdir, "oracle_errors.csv"), stamp, "free_error,mehler_error",
              {{err_free, err_mehler}});

    if (cfg.get_long("propagator", "dump_kernel", 0) == 1 && grid.n <= 512) {
        // kernel samples dumped in the shared binary grid format, axes
        // (x_f, x_i); column-major Eigen storage maps x_i to axis 0
        KvNWave w;
        w.grid = PhaseGrid{grid.xmin, grid.xmax, grid.xmin, grid.xmax, grid.n, grid.n};
        const Eigen::MatrixXcd k = free_prop.materialize();
        w.values.assign(k.data(), k.data() + k.size());
        write_grid_binary(out_path(outdir, "kernel_position.grid"), w);
        write_meta(out_path(outdir, "kernel_position.grid.meta"), stamp);
    }

    const bool pass = err_free <= tol_free && err_mehler <= tol_mehler && ratios_ok;
    std::printf("propagate: free=%.3e (tol %.1e) mehler=%.3e (tol %.1e) ratios %s -> %s\n",
                err_free, tol_free, err_mehler, tol_mehler, ratios_ok ? "ok" : "out of window",
                pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

int duality(const RunConfig& cfg, const std::string& outdir) {
    const SpatialGrid1D grid = spatial_grid_from(cfg, "duality");
    const double delta = cfg.require_positive("duality", "delta", 1.0);
    const int slices = static_cast<int>(cfg.get_long("duality", "slices", 256));
    const double tol = cfg.require_positive("duality", "tolerance", 1e-4);
    const auto packets = packets_from(cfg, "duality");
    const RunStamp stamp = stamp_of(cfg);

    const double t_free = cfg.get_double("duality", "T_free", 1.0);
    const double t_harm = cfg.get_double("duality", "T_harmonic", M_PI / 4.0);

    const auto free_h = PolynomialHamiltonian::free_particle();
    const auto harm = PolynomialHamiltonian::harmonic();
    const double r_free = fourier_duality_residual(
        position_propagator(free_h, grid, t_free, {slices, Splitting::strang}, delta),
        momentum_propagator(free_h, grid, t_free, {slices, Splitting::strang}, delta), packets);
    const double r_harm = fourier_duality_residual(
        position_propagator(harm, grid, t_harm, {slices, Splitting::strang}, delta),
        momentum_propagator(harm, grid, t_harm, {slices, Splitting::strang}, delta), packets);

    write_csv(out_path(outdir, "duality.csv"), stamp, "system(0=free 1=harmonic),residual",
              {{0.0, r_free}, {1.0, r_harm}});
    const bool pass = r_free <= tol && r_harm <= tol;
    std::printf("duality: free=%.3e harmonic=%.3e (tol %.1e) %s\n", r_free, r_harm, tol,
                pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

int bridge(const RunConfig& cfg, const std::string& outdir) {
    BridgeSpec spec;
    spec.points = static_cast<int>(cfg.get_long("bridge", "points", 7));
    spec.slices = static_cast<int>(cfg.get_long("bridge", "slices", 3));
    spec.xmin = cfg.get_double("bridge", "xmin", -3.0);
    spec.xmax = cfg.get_double("bridge", "xmax", 3.0);
    spec.dt = cfg.require_positive("bridge", "dt", 0.25);
    spec.delta = cfg.require_positive("bridge", "delta", 1.0);
    const double tol = cfg.require_positive("bridge", "tolerance", 1e-10);
    const int phase_samples = static_cast<int>(cfg.get_long("bridge", "phase_samples", 100));
    const auto h = cfg.hamiltonian();
    const RunStamp stamp = stamp_of(cfg);

    const auto rep = bridge_demonstration(h, spec);

    // sampled phase-space lattice paths: the sliced-action accumulator must
    // agree bit for bit with the theta,thetabar -> 0 superspace restriction,
    // and doubling Delta must halve each sliced phase exactly
    std::mt19937_64 rng(stamp.seed);
    const CpiAlgebra alg = CpiAlgebra::make(1);
    const double dx = (spec.xmax - spec.xmin) / spec.points;
    bool bitwise_ok = true, scaling_ok = true;
    for (int s = 0; s < phase_samples; ++s) {
        std::vector<Eigen::VectorXd> path;
        std::vector<ExtendedState> states;
        for (int k = 0; k <= spec.slices; ++k) {
            Eigen::VectorXd st(2);
            st[0] = spec.xmin + dx * static_cast<double>(rng() % static_cast<unsigned>(spec.points));
            st[1] = spec.delta *
                    fft_frequency(static_cast<int>(rng() % static_cast<unsigned>(spec.points)),
                                  spec.points, dx);
            path.push_back(st);
            ExtendedState es = ExtendedState::zeros(1);
            es.phi = st;
            es.c << 0.3, -0.9;
            es.cbar << 1.1, 0.4;
            es.lambda << Complex(0.2, 0.0), Complex(-0.6, 0.0);
            states.push_back(es);
        }
        const double acc = sliced_action(h, path, spec.dt);
        const auto super = discretized_superaction(h, alg, states, spec.dt);
        const Complex s0 = super.theta0.coefficient(0);
        if (s0.imag() != 0.0 || (acc != 0.0 && !same_bits(s0.real(), acc))) bitwise_ok = false;
        const auto p1 = sliced_phases(h, path, spec.dt, spec.delta);
        const auto p2 = sliced_phases(h, path, spec.dt, 2.0 * spec.delta);
        for (std::size_t k = 0; k < p1.size(); ++k)
            if (!same_bits(p2[k], p1[k] / 2.0)) scaling_ok = false;
    }

    json j;
    j["points"] = spec.points;
    j["slices"] = spec.slices;
    j["interior_paths"] = rep.paths;
    j["rel_error"] = rep.rel_error;
    j["phase_samples"] = phase_samples;
    j["phase_bitwise_ok"] = bitwise_ok;
    j["delta_scaling_bitwise_ok"] = scaling_ok;
    const bool pass = rep.rel_error <= tol && bitwise_ok && scaling_ok;
    j["pass"] = pass;
    write_json(out_path(outdir, "bridge.json"), stamp, j);

    std::printf("bridge: %ld paths rel_error=%.3e phase_bitwise=%s delta_scaling=%s %s\n",
                rep.paths, rep.rel_error, bitwise_ok ? "ok" : "MISMATCH",
                scaling_ok ? "ok" : "MISMATCH", pass ? "pass" : "FAIL");
    return pass ? 0 : 1;
}

}  // namespace kvn::cli
