use std::str::FromStr;

use anyhow::{bail, Context};
use serde::Serialize;

/// `lo:hi:steps`, inclusive of both ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Range {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / last
                }
            })
            .collect()
    }

    pub fn check_within(&self, lo: f64, hi: f64, name: &str) -> anyhow::Result<()> {
        if self.lo < lo || self.hi > hi {
            bail!("{name} range {}:{} leaves [{lo}, {hi}]", self.lo, self.hi);
        }
        Ok(())
    }
}

impl FromStr for Range {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, steps] = parts[..] else {
            bail!("expected lo:hi:steps, got {s:?}");
        };
        let lo: f64 = lo.trim().parse().with_context(|| format!("bad lower bound in {s:?}"))?;
        let hi: f64 = hi.trim().parse().with_context(|| format!("bad upper bound in {s:?}"))?;
        let steps: usize = steps
            .trim()
            .parse()
            .with_context(|| format!("bad step count in {s:?}"))?;
        if steps < 2 {
            bail!("need at least 2 steps, got {steps}");
        }
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            bail!("need finite lo <= hi, got {lo}:{hi}");
        }
        if lo < 0.0 || hi > 1.0 {
            bail!("range {lo}:{hi} leaves [0, 1]");
        }
        Ok(Range { lo, hi, steps })
    }
}

/// C's `%.12g`.
pub fn fmt_g(x: f64) -> String {
    const PRECISION: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PRECISION).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (PRECISION - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
