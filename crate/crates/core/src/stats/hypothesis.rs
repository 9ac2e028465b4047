//! Two-sample tests: Fisher's variance-ratio test, Student's pooled t-test
//! and Welch's unequal-variance t-test, plus the variance gate that chooses
//! between the two t-tests.
//!
//! Report shapes follow R's `var.test` and `t.test`: the F interval is for the
//! variance ratio, the t intervals are for `mean(x) - mean(y)` and are
//! one-sided when the alternative is.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::dist::{f_cdf, f_quantile, f_sf, t_cdf, t_quantile, t_sf};
use super::{SampleSet, StatsError};
use crate::float_serde;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TestName {
    FisherF,
    StudentT,
    WelchT,
}

impl fmt::Display for TestName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestName::FisherF => "Fisher's F test",
            TestName::StudentT => "Student's t test",
            TestName::WelchT => "Welch's t test",
        })
    }
}

/// Direction of the alternative hypothesis, stated for `x` relative to `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Alternative {
    TwoSided,
    /// `mean(x) < mean(y)`.
    #[default]
    Less,
    /// `mean(x) > mean(y)`.
    Greater,
}

impl FromStr for Alternative {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two-sided" | "two.sided" => Ok(Alternative::TwoSided),
            "less" => Ok(Alternative::Less),
            "greater" => Ok(Alternative::Greater),
            other => Err(format!(
                "unknown alternative {other:?} (expected two-sided, less or greater)"
            )),
        }
    }
}

impl fmt::Display for Alternative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alternative::TwoSided => "two-sided",
            Alternative::Less => "less",
            Alternative::Greater => "greater",
        })
    }
}

/// Outcome of one hypothesis test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test_name: TestName,
    #[serde(with = "float_serde")]
    pub statistic: f64,
    pub df1: f64,
    pub df2: Option<f64>,
    pub p_value: f64,
    #[serde(with = "float_serde")]
    pub ci_low: f64,
    #[serde(with = "float_serde")]
    pub ci_high: f64,
    pub alpha: f64,
    pub mean_x: f64,
    pub mean_y: f64,
    pub alternative: Alternative,
    pub reject_null: bool,
}

fn check_alpha(alpha: f64) -> Result<(), StatsError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(StatsError::Domain {
            routine: "hypothesis test",
            name: "alpha",
            value: alpha,
        })
    }
}

/// Two-sided test of `var(x) = var(y)` on the ratio `F = var(x) / var(y)`.
///
/// The p-value doubles the smaller tail; the interval is
/// `[F / q(1 - alpha/2), F / q(alpha/2)]` with `q` the F quantile on
/// `(n_x - 1, n_y - 1)` degrees of freedom.
pub fn f_test(x: &SampleSet, y: &SampleSet, alpha: f64) -> Result<TestReport, StatsError> {
    check_alpha(alpha)?;
    let var_y = y.variance();
    if var_y == 0.0 {
        return Err(StatsError::Degenerate(
            "F test undefined: second sample has zero variance",
        ));
    }
    let ratio = x.variance() / var_y;
    let d1 = (x.len() - 1) as f64;
    let d2 = (y.len() - 1) as f64;
    let lower = f_cdf(ratio, d1, d2)?;
    let upper = f_sf(ratio, d1, d2)?;
    let p_value = (2.0 * lower.min(upper)).min(1.0);
    let ci_low = ratio / f_quantile(1.0 - alpha / 2.0, d1, d2)?;
    let ci_high = ratio / f_quantile(alpha / 2.0, d1, d2)?;
    Ok(TestReport {
        test_name: TestName::FisherF,
        statistic: ratio,
        df1: d1,
        df2: Some(d2),
        p_value,
        ci_low,
        ci_high,
        alpha,
        mean_x: x.mean(),
        mean_y: y.mean(),
        alternative: Alternative::TwoSided,
        reject_null: p_value < alpha,
    })
}

/// Shared tail of both t-tests once the statistic's pieces are known.
#[allow(clippy::too_many_arguments)]
fn t_report(
    test_name: TestName,
    diff: f64,
    se: f64,
    df: f64,
    alpha: f64,
    alternative: Alternative,
    mean_x: f64,
    mean_y: f64,
) -> Result<TestReport, StatsError> {
    let t = diff / se;
    let (p_value, ci_low, ci_high) = match alternative {
        Alternative::Less => {
            let q = t_quantile(1.0 - alpha, df)?;
            (t_cdf(t, df)?, f64::NEG_INFINITY, diff + q * se)
        }
        Alternative::Greater => {
            let q = t_quantile(1.0 - alpha, df)?;
            (t_sf(t, df)?, diff - q * se, f64::INFINITY)
        }
        Alternative::TwoSided => {
            let q = t_quantile(1.0 - alpha / 2.0, df)?;
            let p = (2.0 * t_cdf(-t.abs(), df)?).min(1.0);
            (p, diff - q * se, diff + q * se)
        }
    };
    Ok(TestReport {
        test_name,
        statistic: t,
        df1: df,
        df2: None,
        p_value,
        ci_low,
        ci_high,
        alpha,
        mean_x,
        mean_y,
        alternative,
        reject_null: p_value < alpha,
    })
}

/// Welch's t-test with Welch–Satterthwaite degrees of freedom.
pub fn welch_t_test(
    x: &SampleSet,
    y: &SampleSet,
    alpha: f64,
    alternative: Alternative,
) -> Result<TestReport, StatsError> {
    check_alpha(alpha)?;
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let vx = x.variance() / nx;
    let vy = y.variance() / ny;
    let se2 = vx + vy;
    if se2 == 0.0 {
        return Err(StatsError::Degenerate(
            "Welch test undefined: both samples have zero variance",
        ));
    }
    let df = se2 * se2 / (vx * vx / (nx - 1.0) + vy * vy / (ny - 1.0));
    let (mx, my) = (x.mean(), y.mean());
    t_report(
        TestName::WelchT,
        mx - my,
        se2.sqrt(),
        df,
        alpha,
        alternative,
        mx,
        my,
    )
}

/// Student's two-sample t-test with pooled variance.
pub fn student_t_test(
    x: &SampleSet,
    y: &SampleSet,
    alpha: f64,
    alternative: Alternative,
) -> Result<TestReport, StatsError> {
    check_alpha(alpha)?;
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let df = nx + ny - 2.0;
    let pooled = ((nx - 1.0) * x.variance() + (ny - 1.0) * y.variance()) / df;
    if pooled == 0.0 {
        return Err(StatsError::Degenerate(
            "Student test undefined: pooled variance is zero",
        ));
    }
    let se = (pooled * (1.0 / nx + 1.0 / ny)).sqrt();
    let (mx, my) = (x.mean(), y.mean());
    t_report(
        TestName::StudentT,
        mx - my,
        se,
        df,
        alpha,
        alternative,
        mx,
        my,
    )
}

/// The variance-gated comparison of two sample means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatedComparison {
    pub f_test: TestReport,
    pub chosen_mean_test: TestName,
    pub mean_test: TestReport,
}

/// Runs the F test first; Student's test when it keeps the equal-variance
/// null, Welch's test when it rejects it.
pub fn variance_gated_mean_test(
    x: &SampleSet,
    y: &SampleSet,
    alpha: f64,
    alternative: Alternative,
) -> Result<GatedComparison, StatsError> {
    let f = f_test(x, y, alpha)?;
    let (chosen, mean_test) = if f.reject_null {
        (TestName::WelchT, welch_t_test(x, y, alpha, alternative)?)
    } else {
        (
            TestName::StudentT,
            student_t_test(x, y, alpha, alternative)?,
        )
    };
    Ok(GatedComparison {
        f_test: f,
        chosen_mean_test: chosen,
        mean_test,
    })
}
