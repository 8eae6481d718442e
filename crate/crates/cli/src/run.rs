use std::fmt::Write as _;

use hslab_core::bounds::{
    contraction_rate_bound, density_bound_easy, density_bound_crossing, fugacity_bounds, lambda_for_gamma, lambert_w,
    mixing_time_bound, vigoda_c, D2_REFERENCE_CONSTANTS,
};
use hslab_core::dynamics::DEFAULT_HEAT_BATH_ATTEMPTS;
use hslab_core::experiments::*;
use hslab_core::geometry::sphere_radius;
use hslab_core::io::{read_snapshot, write_snapshot, Snapshot};
use hslab_core::model::{sample_with_stats, DEFAULT_POSITION_BINS, DEFAULT_QUADRATURE_CELLS};
use hslab_core::rng::rng_stream;
use hslab_core::{bounds, BoundaryCondition, ChainState, Cuboid, Kernel, ModelParams, Point, StateClass};

use crate::args::*;
use crate::config::{domain, parse_ball, tau, CliResult};

/// Reports plus free text for stdout.
#[derive(Default)]
pub struct Outcome {
    pub reports: Vec<ExperimentReport>,
    pub text: String,
}

fn core<T>(r: hslab_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| e.to_string())
}

/// Six significant digits without trailing zeros.
fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = (5 - x.abs().log10().floor() as i32).max(0) as usize;
    let s = format!("{x:.digits$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn bounds(a: &BoundsArgs) -> CliResult<Outcome> {
    let d = a.d.unwrap_or(2);
    let fb = core(fugacity_bounds(d))?;
    let mut t = String::new();
    let mut line = |k: &str, v: String| writeln!(t, "{k:<24} {v}").expect("string write");
    line("d", d.to_string());
    line("r", sig6(core(sphere_radius(d))?));
    line("lambda_bound", sig6(fb.lambda_bound));
    line("cluster_expansion_bound", sig6(fb.cluster_expansion_bound));
    line("density_bound", sig6(core(density_bound_easy(fb.lambda_bound, d))?));
    line("lambert_w_2", sig6(core(lambert_w(2.0))?));
    if d == 2 {
        let refs: Vec<String> = D2_REFERENCE_CONSTANTS.iter().map(|c| c.to_string()).collect();
        line("reference_constants", refs.join(" "));
    }
    if let Some(lambda) = a.lambda {
        line("lambda", sig6(lambda));
        line("c", sig6(core(vigoda_c(lambda, d))?));
        line("density_easy", sig6(core(density_bound_easy(lambda, d))?));
        if lambda > 0.0 {
            line("density_crossing", sig6(core(density_bound_crossing(lambda, d))?));
        }
    }
    if let Some(gamma) = a.gamma {
        line("gamma", sig6(gamma));
        line("lambda_for_gamma", sig6(core(lambda_for_gamma(gamma, d))?));
        if let Some(n) = a.n {
            let eps = a.eps.unwrap_or(0.25);
            let rate = core(contraction_rate_bound(n, d, gamma))?;
            line("per_step_drift", sig6(rate.per_step_drift));
            line("per_step_factor", sig6(rate.per_step_factor));
            line("mixing_time", core(mixing_time_bound(n, d, gamma, eps))?.to_string());
        }
    } else if a.n.is_some() || a.eps.is_some() {
        return Err("--n and --eps need --gamma".into());
    }
    Ok(Outcome {
        reports: Vec::new(),
        text: t,
    })
}

pub fn sample(a: &SampleArgs, seed: u64) -> CliResult<Outcome> {
    let params = a.model.params(&[5.0], 0.5)?;
    let mut rng = rng_stream(seed, 0);
    let (config, attempts) = core(sample_with_stats(&params, &mut rng, a.max_attempts.unwrap_or(1_000_000)))?;
    eprintln!("sampled {} centres after {attempts} attempts", config.len());
    let snap = Snapshot::new(params, config, StateClass::Omega).with_seed(seed);
    let mut out = Outcome::default();
    match &a.snapshot {
        Some(p) => core(write_snapshot(p, &snap))?,
        None => out.text = core(snap.to_json())?,
    }
    Ok(out)
}

fn kernel(k: Option<KernelArg>, l_ratio: Option<f64>, params: &ModelParams) -> Kernel {
    match k.unwrap_or(KernelArg::SingleCenter) {
        KernelArg::SingleCenter => Kernel::SingleCenter,
        KernelArg::HeatBath => Kernel::HeatBath {
            l: l_ratio.unwrap_or(2.0) * params.r(),
            max_attempts: DEFAULT_HEAT_BATH_ATTEMPTS,
        },
    }
}

const DENSITY_BATCHES: usize = 20;

pub fn chain(a: &ChainArgs, seed: u64) -> CliResult<Outcome> {
    let mut state = match &a.resume {
        Some(p) => core(core(read_snapshot(p))?.into_chain(rng_stream(seed, 0)))?,
        None => {
            let params = a.model.params(&[5.0], 0.5)?;
            let class = match a.class.unwrap_or(ClassArg::Omega) {
                ClassArg::Omega => StateClass::Omega,
                ClassArg::OmegaStar => StateClass::OmegaStar,
            };
            ChainState::empty(params, class, rng_stream(seed, 0))
        }
    };
    let params = state.params.clone();
    let k = kernel(a.kernel, a.l_ratio, &params);
    core(k.validate(&params))?;
    let steps = a.steps.unwrap_or(100_000);
    let stride = a.stride.unwrap_or(10);
    if stride == 0 || steps < stride * DENSITY_BATCHES as u64 {
        return Err(format!("--steps must be at least {DENSITY_BATCHES} strides"));
    }
    let burn_in = a.burn_in.unwrap_or_else(|| default_burn_in(params.n(), params.lambda));
    core(state.run(&k, burn_in))?;
    let mut densities = Vec::new();
    for t in 1..=steps {
        core(state.step_with(&k))?;
        if t % stride == 0 {
            densities.push(state.config.len() as f64 / params.n());
        }
    }
    let per = densities.len() / DENSITY_BATCHES;
    let batches: Vec<f64> = densities
        .chunks_exact(per)
        .take(DENSITY_BATCHES)
        .map(|c| c.iter().sum::<f64>() / c.len() as f64)
        .collect();
    let m = MeanEstimate::from_values(&batches);
    let fraction = params.interior_volume() / params.n();
    let bound = core(bounds::density_bound_easy_finite(params.lambda, params.d(), fraction))?;
    let rep = ExperimentReport::new("chain_density", m.mean, m.std_error, bound, Comparison::Ge)
        .param("d", params.d())
        .param("lambda", params.lambda)
        .param("sides", params.domain.sides())
        .param("kernel", format!("{k:?}"))
        .param("steps", steps)
        .param("burn_in", burn_in)
        .param("stride", stride)
        .param("final_centres", state.config.len())
        .seed(seed)
        .note("standard error from batch means; bound is the finite-volume easy bound");
    if let Some(p) = &a.snapshot {
        core(write_snapshot(p, &Snapshot::from_chain(&state).with_seed(seed)))?;
    }
    Ok(Outcome {
        reports: vec![rep],
        text: String::new(),
    })
}

pub fn contraction(a: &ContractionArgs, seed: u64) -> CliResult<Outcome> {
    let mut cfg = ContractionConfig::new(a.d.unwrap_or(2), a.gamma.unwrap_or(0.5), a.n.unwrap_or(25.0), a.trials.unwrap_or(10_000));
    cfg.burn_in = a.burn_in;
    if let Some(v) = a.outer_samples {
        cfg.outer_samples = v;
    }
    if let Some(v) = a.inner_samples {
        cfg.inner_samples = v;
    }
    if let Some(v) = a.blocked_samples {
        cfg.blocked_samples = v;
    }
    let out = core(contraction_experiment(&cfg, seed))?;
    Ok(Outcome {
        reports: vec![out.report, out.measured, out.a1_frequency],
        text: String::new(),
    })
}

fn corner(v: &Option<Vec<f64>>, default: Vec<f64>, d: usize, what: &str) -> CliResult<Point> {
    let v = v.clone().unwrap_or(default);
    if v.len() != d {
        return Err(format!("{what} needs {d} coordinates"));
    }
    Ok(Point::new(v))
}

pub fn disagreement(a: &DisagreementArgs, seed: u64) -> CliResult<Outcome> {
    let d = a.d.unwrap_or(2);
    let side = a.side.unwrap_or(12.0);
    let r = core(sphere_radius(d))?;
    let mid = side / 2.0;
    let rest = |x0: f64, x: f64| std::iter::once(x0).chain(std::iter::repeat_n(x, d - 1)).collect::<Vec<_>>();
    let params = core(ModelParams::new(a.lambda.unwrap_or(0.25), domain(d, &[side])?, BoundaryCondition::free()))?;
    let a_box = core(Cuboid::new(
        corner(&a.a_low, vec![0.0; d], d, "--a-low")?,
        corner(&a.a_high, rest(2.0, side), d, "--a-high")?,
    ))?;
    let b_box = core(Cuboid::new(
        corner(&a.b_low, rest(2.0 + 7.0 * r, mid - 1.0), d, "--b-low")?,
        corner(&a.b_high, rest(4.0 + 7.0 * r, mid + 1.0), d, "--b-high")?,
    ))?;
    let default_ball = vec![format!("{}:0.9", rest(1.0, mid).iter().map(f64::to_string).collect::<Vec<_>>().join(","))];
    let tau_y = tau(d, a.tau_ball.as_ref().unwrap_or(&default_ball), None)?;
    let cfg = DisagreementConfig {
        params,
        a: a_box,
        b: b_box,
        tau_y,
        eta: a.eta,
        trials: a.trials.unwrap_or(10_000),
        burn_in: a.burn_in,
    };
    Ok(Outcome {
        reports: vec![core(disagreement_experiment(&cfg, seed))?],
        text: String::new(),
    })
}

pub fn density(a: &DensityArgs, seed: u64) -> CliResult<Outcome> {
    let cfg = DensityConfig {
        d: a.d.unwrap_or(2),
        lambdas: a.lambdas.clone().unwrap_or_else(|| vec![0.1, 0.25, 0.5]),
        sides: a.sides.clone().unwrap_or_else(|| vec![10.0]),
        steps: a.steps.unwrap_or(50_000),
        burn_in: a.burn_in,
        replicas: a.replicas.unwrap_or(32),
        stride: a.stride.unwrap_or(10),
    };
    Ok(Outcome {
        reports: core(density_sweep(&cfg, seed))?,
        text: String::new(),
    })
}

pub fn stationarity(a: &StationarityArgs, seed: u64) -> CliResult<Outcome> {
    let params = a.model.params(&[1.5], 1.0)?;
    let cells = a.cells.unwrap_or(DEFAULT_QUADRATURE_CELLS);
    let reports = match a.mode.unwrap_or(StationarityMode::Chain) {
        StationarityMode::Chain => {
            let k = kernel(a.kernel, a.l_ratio, &params);
            let mut cfg = StationarityConfig::new(params, k, a.steps.unwrap_or(100_000));
            cfg.burn_in = a.burn_in.unwrap_or(cfg.burn_in);
            cfg.replicas = a.replicas.unwrap_or(cfg.replicas);
            cfg.stride = a.stride.unwrap_or(cfg.stride);
            cfg.threshold = a.threshold.unwrap_or(cfg.threshold);
            cfg.bins_per_axis = a.bins.unwrap_or(DEFAULT_POSITION_BINS);
            cfg.quadrature_cells = cells;
            vec![core(stationarity_check(&cfg, seed))?]
        }
        StationarityMode::Oracle => {
            if a.kernel.is_some_and(|k| k != KernelArg::SingleCenter) {
                return Err("oracle mode uses the single-center kernel".into());
            }
            let mut cfg = OracleEquivalenceConfig::new(params);
            cfg.rejection_draws = a.draws.unwrap_or(cfg.rejection_draws);
            cfg.chain_steps = a.steps.unwrap_or(cfg.chain_steps);
            cfg.burn_in = a.burn_in.unwrap_or(cfg.burn_in);
            cfg.threshold = a.threshold.unwrap_or(cfg.threshold);
            cfg.quadrature_cells = cells;
            core(oracle_equivalence_check(&cfg, seed))?
        }
        StationarityMode::Ceiling => {
            if a.threshold.is_some() {
                return Err("ceiling mode compares against --eps".into());
            }
            let cfg = MixingCeilingConfig {
                params,
                gamma: a.gamma.unwrap_or(0.5),
                eps: a.eps.unwrap_or(0.05),
                replicas: a.replicas.unwrap_or(20_000),
                quadrature_cells: cells,
            };
            vec![core(mixing_ceiling_check(&cfg, seed))?]
        }
    };
    Ok(Outcome {
        reports,
        text: String::new(),
    })
}

pub fn ssm_scan(a: &SsmArgs, seed: u64) -> CliResult<Outcome> {
    let d = a.d.unwrap_or(2);
    let sides = a.sides.clone().unwrap_or_else(|| std::iter::once(8.0).chain(std::iter::repeat_n(3.0, d - 1)).collect());
    let bx = domain(d, &sides)?;
    let params = core(ModelParams::new(a.lambda.unwrap_or(0.5), bx.clone(), BoundaryCondition::free()))?;
    let sub_sides = a
        .sub
        .clone()
        .unwrap_or_else(|| std::iter::once(2.0).chain(bx.sides().into_iter().skip(1)).collect());
    let sub = domain(d, &sub_sides)?;
    let radius = a.radius.unwrap_or(0.8);
    let centre_rest: Vec<f64> = (1..d).map(|i| sub.center()[i]).collect();
    let mut pairs = Vec::new();
    for s in a.distances.clone().unwrap_or_else(|| vec![0.0, 0.5, 1.0, 2.0, 3.0]) {
        let x0 = sub.high()[0] + s + radius;
        let ball = std::iter::once(x0).chain(centre_rest.iter().copied()).map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let (c, r) = parse_ball(&format!("{ball}:{radius}"), d)?;
        pairs.push(TauPair {
            tau: BoundaryCondition::free(),
            tau_prime: BoundaryCondition::free().with_ball(c, r),
        });
    }
    let cfg = SsmConfig {
        sub,
        pairs,
        samples_per_pair: a.samples.unwrap_or(4000),
        grid_cells: a.grid_cells.unwrap_or(4),
        burn_in: a.burn_in.unwrap_or_else(|| default_burn_in(params.n(), params.lambda)),
        stride: a.stride.unwrap_or(params.n().ceil() as u64),
        params,
    };
    Ok(Outcome {
        reports: core(spatial_mixing_scan(&cfg, seed))?,
        text: String::new(),
    })
}

pub fn free_volume(a: &FreeVolumeArgs, seed: u64) -> CliResult<Outcome> {
    let mut cfg = core(FreeVolumeConfig::cube(a.d.unwrap_or(2), a.side.unwrap_or(10.0), a.lambda.unwrap_or(0.25)))?;
    cfg.steps = a.steps.unwrap_or(50_000);
    cfg.burn_in = a.burn_in;
    cfg.replicas = a.replicas.unwrap_or(cfg.replicas);
    cfg.stride = a.stride.unwrap_or(cfg.stride);
    cfg.free_samples = a.free_samples.unwrap_or(cfg.free_samples);
    Ok(Outcome {
        reports: vec![core(free_volume_identity_check(&cfg, seed))?],
        text: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(sig6(0.5), "0.5");
        assert_eq!(sig6(1.0 / 6.0), "0.166667");
        assert_eq!(sig6(0.8526055020137254), "0.852606");
        assert_eq!(sig6(-0.042666666), "-0.0426667");
        assert_eq!(sig6(9587.0), "9587");
    }
}
