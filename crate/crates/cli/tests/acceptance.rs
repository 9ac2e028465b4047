//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use segpsnr::degrade::{salt_pepper, NoiseConfig, Prng};
use segpsnr::harness::{DENSITY_P_FILE, DENSITY_P_PRIME_FILE, REPORT_FILE, SAMPLES_FILE};
use segpsnr::image::{as_binary, GrayImage};
use segpsnr::metrics::{psnr, PsnrVariant};
use segpsnr::stats::{
    f_cdf, f_quantile, f_test, inc_beta, kde, t_cdf, t_quantile, variance_gated_mean_test,
    welch_t_test, Alternative, SampleSet, TestName,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    };
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/synthetic20")
}

fn rel_err(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn within_time(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(t)
    } else {
        Err(format!("took {t:?}, limit {limit:?}"))
    }
}

/// Unit-variance, zero-mean sample of size `n`.
fn standardized(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = Prng::new(seed);
    let raw: Vec<f64> = (0..n).map(|_| rng.next_f64()).collect();
    let s = SampleSet::new(raw.clone()).unwrap();
    let (m, sd) = (s.mean(), s.std_dev());
    raw.into_iter().map(|v| (v - m) / sd).collect()
}

fn affine(base: &[f64], mean: f64, var: f64) -> SampleSet {
    SampleSet::new(base.iter().map(|z| mean + var.sqrt() * z).collect()).unwrap()
}

fn run_cli(args: &[&str]) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_segpsnr"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "segpsnr {} exited with {}: {}",
            args.join(" "),
            out.status,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8_lossy(&out.stdout).into_owned())
}

fn fixture_run(out: &Path, density: &str) -> Result<String, String> {
    run_cli(&[
        "run",
        "--dataset",
        fixture().to_str().unwrap(),
        "--density",
        density,
        "--seed",
        "1",
        "--alpha",
        "0.05",
        "--variant",
        "standard",
        "--threshold",
        "127",
        "--out",
        out.to_str().unwrap(),
    ])
}

fn read_json(path: &Path) -> Result<serde_json::Value, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| e.to_string())
}

fn c1_variance_ratio() -> Outcome {
    let start = Instant::now();
    let base = standardized(300, 11);
    let ratio = 0.4617745;
    let x = affine(&base, 5.6, ratio);
    let y = affine(&base, 6.7, 1.0);
    let r = f_test(&x, &y, 0.05).map_err(|e| e.to_string())?;
    ensure!(rel_err(r.statistic, ratio) < 1e-12, "ratio {}", r.statistic);
    ensure!(rel_err(r.p_value, 4.265e-11) < 5e-3, "p = {:e}", r.p_value);
    ensure!((r.ci_low - 0.3679506).abs() < 1e-4, "ci_low = {}", r.ci_low);
    ensure!(
        (r.ci_high - 0.5795227).abs() < 1e-4,
        "ci_high = {}",
        r.ci_high
    );
    let t = within_time(start, Duration::from_secs(1))?;
    Ok(format!(
        "F = {:.7}, p = {:.4e}, CI [{:.7}, {:.7}], {t:?}",
        r.statistic, r.p_value, r.ci_low, r.ci_high
    ))
}

fn c2_welch() -> Outcome {
    let start = Instant::now();
    let n = 300.0_f64;
    let (mx, my): (f64, f64) = (5.638749, 6.740013);
    let (ratio, t_target): (f64, f64) = (0.4617745, -7.6524);
    // t^2 = (mx - my)^2 / ((vx + vy) / n) and vx = ratio * vy
    let sum = n * (mx - my) * (mx - my) / (t_target * t_target);
    let vy = sum / (1.0 + ratio);
    let vx = ratio * vy;
    ensure!(
        (vx - 1.9627).abs() < 1e-3 && (vy - 4.2504).abs() < 1e-3,
        "vx {vx}, vy {vy}"
    );

    let base = standardized(300, 12);
    let x = affine(&base, mx, vx);
    let y = affine(&base, my, vy);
    let r = welch_t_test(&x, &y, 0.05, Alternative::Less).map_err(|e| e.to_string())?;
    ensure!((r.statistic - t_target).abs() < 1e-3, "t = {}", r.statistic);
    ensure!((r.df1 - 526.607).abs() < 0.5, "df = {}", r.df1);
    ensure!(rel_err(r.p_value, 4.735e-14) < 1e-2, "p = {:e}", r.p_value);
    ensure!(
        (r.ci_high - -0.8641351).abs() < 1e-4,
        "ci_high = {}",
        r.ci_high
    );
    ensure!(r.ci_low == f64::NEG_INFINITY, "ci_low = {}", r.ci_low);
    let t = within_time(start, Duration::from_secs(1))?;
    Ok(format!(
        "vx = {vx:.4}, vy = {vy:.4}; t = {:.4}, df = {:.3}, p = {:.4e}, CI upper {:.7}, {t:?}",
        r.statistic, r.df1, r.p_value, r.ci_high
    ))
}

fn c3_special_functions() -> Outcome {
    let start = Instant::now();
    let mut rng = Prng::new(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let a = 0.5 + 49.5 * rng.next_f64();
        let b = 0.5 + 49.5 * rng.next_f64();
        let x = rng.next_f64();
        let s = inc_beta(a, b, x).map_err(|e| e.to_string())?
            + inc_beta(b, a, 1.0 - x).map_err(|e| e.to_string())?;
        worst = worst.max((s - 1.0).abs());
    }
    ensure!(worst < 1e-10, "symmetry error {worst:e}");

    for df in [0.3, 1.0, 2.5, 30.0, 526.607, 1e6] {
        let c = t_cdf(0.0, df).map_err(|e| e.to_string())?;
        ensure!(c == 0.5, "t_cdf(0, {df}) = {c}");
    }
    let mut f_worst = 0.0f64;
    for d in [0.5, 1.0, 2.0, 7.5, 30.0, 299.0, 1000.0, 5000.0] {
        f_worst = f_worst.max((f_cdf(1.0, d, d).map_err(|e| e.to_string())? - 0.5).abs());
    }
    ensure!(f_worst < 1e-12, "f_cdf(1, d, d) off by {f_worst:e}");

    let mut q_worst = 0.0f64;
    let mut checked = 0;
    while checked < 500 {
        let df = 1.0 + 99.0 * rng.next_f64();
        let t = -6.0 + 12.0 * rng.next_f64();
        let back =
            t_quantile(t_cdf(t, df).map_err(|e| e.to_string())?, df).map_err(|e| e.to_string())?;
        q_worst = q_worst.max((back - t).abs());

        let (d1, d2) = (1.0 + 99.0 * rng.next_f64(), 1.0 + 99.0 * rng.next_f64());
        let x = 0.05 + 5.0 * rng.next_f64();
        let p = f_cdf(x, d1, d2).map_err(|e| e.to_string())?;
        // far tails are not invertible in double precision
        if p > 1e-6 && p < 1.0 - 1e-6 {
            let back = f_quantile(p, d1, d2).map_err(|e| e.to_string())?;
            q_worst = q_worst.max((back - x).abs());
        }
        checked += 1;
    }
    ensure!(q_worst < 1e-8, "quantile(cdf(x)) off by {q_worst:e}");
    let t = within_time(start, Duration::from_secs(5))?;
    Ok(format!(
        "symmetry {worst:.1e}, f_cdf(1,d,d) {f_worst:.1e}, round trip {q_worst:.1e}, {t:?}"
    ))
}

fn c4_metric_suite() -> Outcome {
    let black = GrayImage::filled(8, 8, 0).unwrap();
    let white = GrayImage::filled(8, 8, 255).unwrap();
    let p = psnr(&black, &white, PsnrVariant::Standard).unwrap();
    ensure!(p == 0.0, "black vs white = {p}");

    let a = GrayImage::new(2, 1, vec![0, 0]).unwrap();
    let b = GrayImage::new(2, 1, vec![0, 255]).unwrap();
    let half = psnr(&a, &b, PsnrVariant::Standard).unwrap();
    ensure!((half - 3.010300).abs() < 1e-6, "half-error case = {half}");

    let img = GrayImage::from_fn(9, 7, |x, y| (x * 29 + y * 13) as u8).unwrap();
    let std = psnr(&img, &black, PsnrVariant::Standard);
    ensure!(std.is_err(), "mismatched dimensions accepted");
    let k = GrayImage::from_fn(9, 7, |x, y| (x * 31 + y * 7) as u8).unwrap();
    let offset = psnr(&img, &k, PsnrVariant::AsWritten).unwrap()
        - psnr(&img, &k, PsnrVariant::Standard).unwrap();
    ensure!((offset - 48.1308).abs() < 1e-4, "offset = {offset}");

    let same = psnr(&img, &img, PsnrVariant::Standard).unwrap();
    ensure!(same == f64::INFINITY, "identical images = {same}");
    Ok(format!(
        "0 dB, {half:.6} dB, offset {offset:.7} dB, identical -> {same}"
    ))
}

fn c5_determinism() -> Outcome {
    let start = Instant::now();
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    fixture_run(&a, "0.5")?;
    fixture_run(&b, "0.5")?;
    for name in [SAMPLES_FILE, REPORT_FILE] {
        let (x, y) = (fs::read(a.join(name)), fs::read(b.join(name)));
        ensure!(
            matches!((&x, &y), (Ok(x), Ok(y)) if x == y),
            "{name} differs between runs"
        );
    }
    let rows = fs::read_to_string(a.join(SAMPLES_FILE))
        .unwrap()
        .lines()
        .count()
        - 1;
    ensure!(rows == 20, "{rows} sample rows");
    let t = within_time(start, Duration::from_secs(10))?;
    Ok(format!(
        "samples.csv and report.json identical over 2 runs, {t:?}"
    ))
}

fn c6_noise_statistics() -> Outcome {
    let (w, h) = (100, 100);
    let density = 0.1;
    let white = as_binary(GrayImage::filled(w, h, 255).unwrap()).unwrap();
    let black = as_binary(GrayImage::filled(w, h, 0).unwrap()).unwrap();
    let n = (w * h) as f64;
    let expected = n * density / 2.0;
    let sigma = (n * density / 2.0 * (1.0 - density / 2.0)).sqrt();
    let (mut pepper_total, mut salt_total) = (0.0, 0.0);
    let mut worst = 0.0f64;
    for seed in 0..100 {
        let cfg = NoiseConfig::new(density, seed).unwrap();
        // same draws on a black mask expose the salt hits
        let pepper = (w * h - salt_pepper(&white, &cfg).unwrap().foreground_count()) as f64;
        let salt = salt_pepper(&black, &cfg).unwrap().foreground_count() as f64;
        for (name, count) in [("pepper", pepper), ("salt", salt)] {
            ensure!(
                (count - expected).abs() <= 3.0 * sigma,
                "seed {seed}: {name} count {count} outside 500 +- {:.1}",
                3.0 * sigma
            );
            worst = worst.max((count - expected).abs() / sigma);
        }
        pepper_total += pepper;
        salt_total += salt;
    }
    let agg_sigma = 10.0 * sigma;
    for (name, total) in [("pepper", pepper_total), ("salt", salt_total)] {
        ensure!(
            (total - 100.0 * expected).abs() <= 3.0 * agg_sigma,
            "{name} total {total} over 100 seeds"
        );
    }
    Ok(format!(
        "mean pepper {:.1}, mean salt {:.1}, largest deviation {worst:.2} sigma",
        pepper_total / 100.0,
        salt_total / 100.0
    ))
}

fn c7_gate() -> Outcome {
    let base = standardized(40, 5);
    let x = affine(&base, 10.0, 1.0);
    let similar = affine(&standardized(40, 6), 11.0, 1.1);
    let wide = affine(&standardized(40, 7), 11.0, 9.0);
    let accept = variance_gated_mean_test(&x, &similar, 0.05, Alternative::Less).unwrap();
    ensure!(!accept.f_test.reject_null, "F rejected similar variances");
    ensure!(
        accept.chosen_mean_test == TestName::StudentT,
        "similar variances chose {:?}",
        accept.chosen_mean_test
    );
    let reject = variance_gated_mean_test(&x, &wide, 0.05, Alternative::Less).unwrap();
    ensure!(reject.f_test.reject_null, "F accepted a 9x variance ratio");
    ensure!(
        reject.chosen_mean_test == TestName::WelchT,
        "unequal variances chose {:?}",
        reject.chosen_mean_test
    );

    // same gate through the full pipeline
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut chosen = Vec::new();
    for (density, want) in [("0", "StudentT"), ("0.5", "WelchT")] {
        let out = tmp.path().join(density);
        fixture_run(&out, density)?;
        let json = read_json(&out.join(REPORT_FILE))?;
        let got = json["chosen_mean_test"]
            .as_str()
            .unwrap_or("null")
            .to_owned();
        let f_reject = json["f_test"]["reject_null"].as_bool();
        ensure!(
            got == want,
            "density {density}: chose {got}, expected {want}"
        );
        ensure!(
            f_reject == Some(want == "WelchT"),
            "density {density}: F decision {f_reject:?}"
        );
        chosen.push(format!("density {density} -> {got}"));
    }
    Ok(format!(
        "F p = {:.3} -> Student, F p = {:.1e} -> Welch; {}",
        accept.f_test.p_value,
        reject.f_test.p_value,
        chosen.join(", ")
    ))
}

fn c8_external_dataset() -> Outcome {
    let Ok(root) = std::env::var("SEGPSNR_BSDS_DIR") else {
        return Ok("SKIP: set SEGPSNR_BSDS_DIR to a converted 300-pair dataset".into());
    };
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = tmp.path().join("bsds");
    run_cli(&[
        "run",
        "--dataset",
        &root,
        "--density",
        "0.5",
        "--out",
        out.to_str().unwrap(),
    ])?;
    let json = read_json(&out.join(REPORT_FILE))?;
    let processed = json["processed"].as_u64().unwrap_or(0);
    ensure!(processed == 300, "processed {processed} pairs");
    let verdict = json["verdict"].as_str().unwrap_or("");
    ensure!(!verdict.is_empty(), "no verdict");
    Ok(format!("{processed} pairs, verdict {verdict}"))
}

fn tsv_integral(path: &Path) -> Result<(usize, f64), String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut lines = text.lines();
    ensure!(
        lines.next() == Some("x\tdensity"),
        "{}: bad header",
        path.display()
    );
    let mut pts = Vec::new();
    for line in lines {
        let (x, d) = line.split_once('\t').ok_or("missing tab")?;
        pts.push((
            x.parse::<f64>().map_err(|e| e.to_string())?,
            d.parse::<f64>().map_err(|e| e.to_string())?,
        ));
    }
    let area = pts
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum();
    Ok((pts.len(), area))
}

fn c9_density_curves() -> Outcome {
    let skewed = SampleSet::new(
        (1..=60)
            .map(|i| (f64::from(i) * 0.37).exp().ln_1p())
            .collect(),
    )
    .unwrap();
    let direct = kde(&skewed).map_err(|e| e.to_string())?.integral();
    ensure!((direct - 1.0).abs() <= 0.01, "direct integral {direct}");

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    fixture_run(tmp.path(), "0.5")?;
    let mut parts = vec![format!("direct {direct:.5}")];
    for name in [DENSITY_P_FILE, DENSITY_P_PRIME_FILE] {
        let (rows, area) = tsv_integral(&tmp.path().join(name))?;
        ensure!(rows == 512, "{name}: {rows} rows");
        ensure!((area - 1.0).abs() <= 0.01, "{name}: integral {area}");
        parts.push(format!("{name} {rows} rows, integral {area:.5}"));
    }
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("C1 F test on variance ratio 0.4617745", c1_variance_ratio),
        ("C2 Welch test, n = 300", c2_welch),
        ("C3 special functions", c3_special_functions),
        ("C4 PSNR metric", c4_metric_suite),
        ("C5 run determinism", c5_determinism),
        ("C6 salt-and-pepper statistics", c6_noise_statistics),
        ("C7 variance gate", c7_gate),
        ("C8 external 300-pair dataset", c8_external_dataset),
        ("C9 density curves", c9_density_curves),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_owned()));
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
