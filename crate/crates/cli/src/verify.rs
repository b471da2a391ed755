use clap::ValueEnum;
use dephrasure::antideg::verify_antidegradable;
use dephrasure::compci::positivity_witness;
use dephrasure::dephrasure::{coherent_info_z, g_curve, j_curve, k_curve, single_letter_ci, ChannelParams};
use dephrasure::multiletter::{brute_force_ci, multiletter_ci, repetition_ci_opt, CodeState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Antideg,
    Oracle,
    Thresholds,
    Compci,
}

impl Suite {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::Antideg => 1e-10,
            Suite::Oracle => 1e-9,
            Suite::Thresholds => 1e-3,
            Suite::Compci => 0.0,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub failures: usize,
    /// Largest deviation, or smallest margin for sign checks.
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub suite: Suite,
    pub passed: bool,
    pub checks: Vec<Check>,
}

pub fn run(suite: Suite, tol: f64, seed: u64) -> anyhow::Result<Report> {
    let checks = match suite {
        Suite::Antideg => antideg(tol)?,
        Suite::Oracle => oracle(tol, seed)?,
        Suite::Thresholds => thresholds(tol)?,
        Suite::Compci => compci(tol)?,
    };
    Ok(Report {
        suite,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

fn check(name: &str, tolerance: f64, worst: f64, outcomes: &[bool]) -> Check {
    let failures = outcomes.iter().filter(|&&ok| !ok).count();
    Check {
        name: name.into(),
        passed: failures == 0,
        cases: outcomes.len(),
        failures,
        worst,
        tolerance,
    }
}

const GRID: usize = 40;

fn antideg(tol: f64) -> anyhow::Result<Vec<Check>> {
    let points: Vec<(f64, f64)> = (0..GRID)
        .flat_map(|i| {
            let p = 0.5 * i as f64 / (GRID - 1) as f64;
            let k = k_curve(p);
            (0..GRID).map(move |j| (p, (k + (1.0 - k) * j as f64 / (GRID - 1) as f64).min(1.0)))
        })
        .collect();
    let reports = points
        .par_iter()
        .map(|&(p, q)| {
            let params = ChannelParams::new(p, q)?;
            Ok((verify_antidegradable(params, tol)?, single_letter_ci(params).value))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let residual = reports.iter().map(|(r, _)| r.composition_residual).fold(0.0, f64::max);
    let eig = reports
        .iter()
        .map(|(r, _)| r.cp_min_eigenvalue)
        .fold(f64::INFINITY, f64::min);
    let ci = reports.iter().map(|(_, c)| *c).fold(f64::NEG_INFINITY, f64::max);
    Ok(vec![
        check(
            "composition residual",
            tol,
            residual,
            &reports
                .iter()
                .map(|(r, _)| r.composition_residual < tol)
                .collect::<Vec<_>>(),
        ),
        check(
            "choi minimum eigenvalue",
            tol,
            eig,
            &reports
                .iter()
                .map(|(r, _)| r.cp_min_eigenvalue > -tol)
                .collect::<Vec<_>>(),
        ),
        check(
            "single-letter value vanishes",
            1e-9,
            ci,
            &reports.iter().map(|(_, c)| *c <= 1e-9).collect::<Vec<_>>(),
        ),
    ])
}

const ORACLE_CODES: usize = 100;

fn oracle(tol: f64, seed: u64) -> anyhow::Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::with_capacity(ORACLE_CODES);
    for i in 0..ORACLE_CODES {
        let n = 1 + i % 3;
        let ref_dim = rng.random_range(1..=(1usize << n));
        let code = CodeState::haar_random(n, ref_dim, &mut rng)?;
        let params = ChannelParams::new(rng.random_range(0.0..=0.5), rng.random_range(0.0..=0.5))?;
        cases.push((code, params));
    }
    let diffs = cases
        .par_iter()
        .map(|(code, params)| Ok((multiletter_ci(code, *params)? - brute_force_ci(code, *params)?).abs()))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    Ok(vec![check(
        "block decomposition against dense oracle",
        tol,
        worst,
        &diffs.iter().map(|&d| d <= tol).collect::<Vec<_>>(),
    )])
}

const THRESHOLD_P: [f64; 9] = [0.05, 0.10, 0.15, 0.20, 0.25, 0.30, 0.35, 0.40, 0.45];
const CURVATURE_STEP: f64 = 1e-4;

fn thresholds(offset: f64) -> anyhow::Result<Vec<Check>> {
    let mut rep_ok = Vec::new();
    let mut rep_margin = f64::INFINITY;
    for p in THRESHOLD_P {
        let g = g_curve(p);
        for n in 1..=5 {
            let below = repetition_ci_opt(ChannelParams::new(p, g - offset)?, n)?.value;
            let above = repetition_ci_opt(ChannelParams::new(p, g + offset)?, n)?.value;
            rep_ok.push(below > 0.0 && above <= 0.0);
            rep_margin = rep_margin.min(below).min(-above);
        }
    }
    let mut curv_ok = Vec::new();
    let mut curv_margin = f64::INFINITY;
    for p in THRESHOLD_P {
        let j = j_curve(p);
        for (q, sign) in [(j - offset, -1.0), (j + offset, 1.0)] {
            let params = ChannelParams::new(p, q)?;
            let h = CURVATURE_STEP;
            let second = (coherent_info_z(params, h)? - 2.0 * coherent_info_z(params, 0.0)?
                + coherent_info_z(params, -h)?)
                / (h * h);
            curv_ok.push(sign * second > 0.0);
            curv_margin = curv_margin.min(sign * second);
        }
    }
    Ok(vec![
        check("repetition codes change sign across g(p)", offset, rep_margin, &rep_ok),
        check(
            "curvature at z = 0 changes sign across j(p)",
            offset,
            curv_margin,
            &curv_ok,
        ),
    ])
}

fn compci(floor: f64) -> anyhow::Result<Vec<Check>> {
    let mut values = Vec::new();
    for i in 1..=10 {
        for j in 1..=10 {
            let params = ChannelParams::new(0.05 * i as f64, 0.05 * j as f64)?;
            values.push(
                positivity_witness(params)
                    .map(|w| w.ci_value)
                    .unwrap_or(f64::NEG_INFINITY),
            );
        }
    }
    let smallest = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(vec![check(
        "complementary witness is positive",
        floor,
        smallest,
        &values.iter().map(|&v| v > floor).collect::<Vec<_>>(),
    )])
}
