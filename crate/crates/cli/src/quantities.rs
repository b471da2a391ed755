use std::fmt;
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::ValueEnum;
use dephrasure::antideg::verify_antidegradable;
use dephrasure::compci::positivity_witness;
use dephrasure::dephrasure::{region_curves, single_letter_ci, ChannelParams};
use dephrasure::multiletter::{optimize_chi3, optimize_zdiag, repetition_ci_opt, MAX_USES};
use dephrasure::private::private_lower_bound;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quantity {
    /// Single-letter coherent information.
    SingleCi,
    /// max_λ I_c(rep_n)/n minus the single-letter value.
    RepetitionGap,
    /// max_λ I_c(rep_n)/n.
    RepetitionRate,
    /// Best Z-diagonal code rate on n uses.
    ZdiagRate,
    /// Best χ₃ code rate.
    Chi3Rate,
    /// Private information lower bound.
    PrivateLb,
    /// Private lower bound next to the single-letter value.
    Separation,
    /// Single-letter value with the region curves g, j, k.
    Regions,
    /// Antidegrading map verification.
    Antideg,
    /// Complementary-channel positivity witness.
    CompWitness,
}

impl Quantity {
    pub fn columns(self) -> Vec<&'static str> {
        match self {
            Quantity::SingleCi => vec!["single_ci", "z_star"],
            Quantity::RepetitionGap => vec!["repetition_gap"],
            Quantity::RepetitionRate => vec!["repetition_rate", "lambda_star"],
            Quantity::ZdiagRate => vec!["zdiag_rate"],
            Quantity::Chi3Rate => vec!["chi3_rate"],
            Quantity::PrivateLb => vec!["private_lb", "lambda_star"],
            Quantity::Separation => vec!["private_lb", "single_ci"],
            Quantity::Regions => vec!["single_ci", "g", "j", "k"],
            Quantity::Antideg => vec!["antidegradable", "composition_residual", "cp_min_eigenvalue"],
            Quantity::CompWitness => vec!["witness", "epsilon"],
        }
    }

    pub fn evaluate(self, params: ChannelParams, n: usize, seed: u64, tol: f64) -> anyhow::Result<Vec<f64>> {
        Ok(match self {
            Quantity::SingleCi => {
                let s = single_letter_ci(params);
                vec![s.value, s.z_star]
            }
            Quantity::RepetitionGap => {
                let rate = repetition_ci_opt(params, n)?.value / n as f64;
                vec![rate - single_letter_ci(params).value]
            }
            Quantity::RepetitionRate => {
                let r = repetition_ci_opt(params, n)?;
                vec![r.value / n as f64, r.lambda_star]
            }
            Quantity::ZdiagRate => vec![optimize_zdiag(params, n, seed)?.value / n as f64],
            Quantity::Chi3Rate => vec![optimize_chi3(params, seed)?.value / 3.0],
            Quantity::PrivateLb => {
                let b = private_lower_bound(params);
                vec![b.value, b.lambda_star]
            }
            Quantity::Separation => vec![private_lower_bound(params).value, single_letter_ci(params).value],
            Quantity::Regions => {
                let c = region_curves(params.p())?;
                vec![single_letter_ci(params).value, c.g, c.j, c.k]
            }
            Quantity::Antideg => {
                let r = verify_antidegradable(params, tol)?;
                vec![
                    if r.antidegradable { 1.0 } else { 0.0 },
                    r.composition_residual,
                    r.cp_min_eigenvalue,
                ]
            }
            Quantity::CompWitness => {
                let w = positivity_witness(params)?;
                vec![w.ci_value, w.epsilon]
            }
        })
    }
}

/// One column of the diagonal table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Code {
    Single,
    Repetition(usize),
    Zdiag(usize),
    Chi3,
    Private,
}

impl FromStr for Code {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let s = s.trim();
        let uses = |rest: &str| -> anyhow::Result<usize> {
            let n: usize = rest.parse().with_context(|| format!("bad code {s:?}"))?;
            if n == 0 || n > MAX_USES {
                bail!("code {s:?} needs 1..={MAX_USES} uses");
            }
            Ok(n)
        };
        Ok(match s {
            "single" => Code::Single,
            "chi3" => Code::Chi3,
            "private" => Code::Private,
            _ if s.starts_with("rep") => Code::Repetition(uses(&s[3..])?),
            _ if s.starts_with("zdiag") => Code::Zdiag(uses(&s[5..])?),
            _ if s.starts_with("theta") => Code::Zdiag(uses(&s[5..])?),
            _ => bail!("unknown code {s:?}; expected single, repN, zdiagN, chi3 or private"),
        })
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Single => write!(f, "single"),
            Code::Repetition(n) => write!(f, "rep{n}"),
            Code::Zdiag(n) => write!(f, "zdiag{n}"),
            Code::Chi3 => write!(f, "chi3"),
            Code::Private => write!(f, "private"),
        }
    }
}

impl Serialize for Code {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Code {
    /// Per-letter rate, or the bound itself for `private`.
    pub fn rate(self, params: ChannelParams, seed: u64) -> anyhow::Result<f64> {
        Ok(match self {
            Code::Single => single_letter_ci(params).value,
            Code::Repetition(n) => repetition_ci_opt(params, n)?.value / n as f64,
            Code::Zdiag(n) => optimize_zdiag(params, n, seed)?.value / n as f64,
            Code::Chi3 => optimize_chi3(params, seed)?.value / 3.0,
            Code::Private => private_lower_bound(params).value,
        })
    }
}

/// Evaluates `f` on every point in parallel, keeping input order.
pub fn evaluate_rows<F>(points: &[(f64, f64)], f: F) -> anyhow::Result<Vec<Vec<f64>>>
where
    F: Fn(ChannelParams) -> anyhow::Result<Vec<f64>> + Sync,
{
    points
        .par_iter()
        .map(|&(p, q)| {
            let params = ChannelParams::new(p, q)?;
            let mut row = vec![p, q];
            row.extend(f(params).with_context(|| format!("at p = {p}, q = {q}"))?);
            Ok(row)
        })
        .collect()
}
