//! Student t and Fisher F distributions built on the incomplete beta.

use std::f64::consts::PI;

use super::special::{inc_beta_split, ln_gamma};
use super::StatsError;

const QUANTILE_MAX_ITER: usize = 400;

fn check_df(routine: &'static str, name: &'static str, df: f64) -> Result<(), StatsError> {
    if df > 0.0 && df.is_finite() {
        Ok(())
    } else {
        Err(StatsError::Domain {
            routine,
            name,
            value: df,
        })
    }
}

fn check_probability(routine: &'static str, p: f64) -> Result<(), StatsError> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(StatsError::Domain {
            routine,
            name: "p",
            value: p,
        })
    }
}

/// Lower tail mass `P(T <= -|t|)`.
fn t_lower_tail(t: f64, df: f64) -> Result<f64, StatsError> {
    let t2 = t * t;
    if t2.is_infinite() {
        return Ok(0.0);
    }
    let denom = df + t2;
    Ok(0.5 * inc_beta_split(0.5 * df, 0.5, df / denom, t2 / denom)?)
}

/// `P(T <= t)` for Student's t with `df` degrees of freedom.
pub fn t_cdf(t: f64, df: f64) -> Result<f64, StatsError> {
    check_df("t_cdf", "df", df)?;
    if t.is_nan() {
        return Err(StatsError::Domain {
            routine: "t_cdf",
            name: "t",
            value: t,
        });
    }
    let tail = t_lower_tail(t, df)?;
    Ok(if t <= 0.0 { tail } else { 1.0 - tail })
}

/// Upper tail `P(T > t)`, accurate far into the right tail.
pub fn t_sf(t: f64, df: f64) -> Result<f64, StatsError> {
    t_cdf(-t, df)
}

pub fn t_pdf(t: f64, df: f64) -> Result<f64, StatsError> {
    check_df("t_pdf", "df", df)?;
    let ln_norm = ln_gamma(0.5 * (df + 1.0))? - ln_gamma(0.5 * df)? - 0.5 * (df * PI).ln();
    Ok((ln_norm - 0.5 * (df + 1.0) * (t * t / df).ln_1p()).exp())
}

/// `P(F <= x)` for Fisher's F with `(d1, d2)` degrees of freedom.
pub fn f_cdf(x: f64, d1: f64, d2: f64) -> Result<f64, StatsError> {
    check_df("f_cdf", "d1", d1)?;
    check_df("f_cdf", "d2", d2)?;
    if x.is_nan() || x < 0.0 {
        return Err(StatsError::Domain {
            routine: "f_cdf",
            name: "x",
            value: x,
        });
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let denom = d1 * x + d2;
    inc_beta_split(0.5 * d1, 0.5 * d2, d1 * x / denom, d2 / denom)
}

/// Upper tail `P(F > x)`.
pub fn f_sf(x: f64, d1: f64, d2: f64) -> Result<f64, StatsError> {
    check_df("f_sf", "d1", d1)?;
    check_df("f_sf", "d2", d2)?;
    if x.is_nan() || x < 0.0 {
        return Err(StatsError::Domain {
            routine: "f_sf",
            name: "x",
            value: x,
        });
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let denom = d1 * x + d2;
    inc_beta_split(0.5 * d2, 0.5 * d1, d2 / denom, d1 * x / denom)
}

pub fn f_pdf(x: f64, d1: f64, d2: f64) -> Result<f64, StatsError> {
    check_df("f_pdf", "d1", d1)?;
    check_df("f_pdf", "d2", d2)?;
    if x <= 0.0 {
        return Ok(if x == 0.0 && d1 == 2.0 { 1.0 } else { 0.0 });
    }
    let ln_beta = ln_gamma(0.5 * d1)? + ln_gamma(0.5 * d2)? - ln_gamma(0.5 * (d1 + d2))?;
    let ln_num = 0.5 * d1 * (d1 / d2).ln() + (0.5 * d1 - 1.0) * x.ln()
        - 0.5 * (d1 + d2) * (d1 * x / d2).ln_1p();
    Ok((ln_num - ln_beta).exp())
}

/// Safeguarded Newton iteration inside a bracket `[lo, hi]` with
/// `cdf(lo) <= p <= cdf(hi)`.
fn invert_cdf(
    routine: &'static str,
    p: f64,
    mut lo: f64,
    mut hi: f64,
    cdf: impl Fn(f64) -> Result<f64, StatsError>,
    pdf: impl Fn(f64) -> Result<f64, StatsError>,
) -> Result<f64, StatsError> {
    let tol = 1e-14 * p.min(1.0 - p);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..QUANTILE_MAX_ITER {
        let err = cdf(x)? - p;
        if err.abs() <= tol {
            return Ok(x);
        }
        if err < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = pdf(x)?;
        let mut next = x - err / slope;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if next == x || (hi - lo) <= 2.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(next);
        }
        x = next;
    }
    Err(StatsError::NoConvergence {
        routine,
        inputs: format!("p = {p}"),
    })
}

/// Inverse of [`t_cdf`].
pub fn t_quantile(p: f64, df: f64) -> Result<f64, StatsError> {
    check_probability("t_quantile", p)?;
    check_df("t_quantile", "df", df)?;
    if p == 0.5 {
        return Ok(0.0);
    }
    if p > 0.5 {
        // solve in the lower tail, where p keeps full relative precision
        return Ok(-t_quantile(1.0 - p, df)?);
    }
    let mut lo = -1.0;
    while t_cdf(lo, df)? > p {
        lo *= 2.0;
        if !lo.is_finite() {
            return Err(StatsError::NoConvergence {
                routine: "t_quantile",
                inputs: format!("p = {p}, df = {df}"),
            });
        }
    }
    invert_cdf("t_quantile", p, lo, 0.0, |t| t_cdf(t, df), |t| t_pdf(t, df))
}

/// Inverse of [`f_cdf`].
pub fn f_quantile(p: f64, d1: f64, d2: f64) -> Result<f64, StatsError> {
    check_probability("f_quantile", p)?;
    check_df("f_quantile", "d1", d1)?;
    check_df("f_quantile", "d2", d2)?;
    let mut hi = 1.0;
    while f_cdf(hi, d1, d2)? < p {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(StatsError::NoConvergence {
                routine: "f_quantile",
                inputs: format!("p = {p}, d1 = {d1}, d2 = {d2}"),
            });
        }
    }
    invert_cdf(
        "f_quantile",
        p,
        0.0,
        hi,
        |x| f_cdf(x, d1, d2),
        |x| f_pdf(x, d1, d2),
    )
}
