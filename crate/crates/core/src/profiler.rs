//! Empirical space-growth classification.
//!
//! [`sample`] runs a metered family at each grid point on a fresh meter and
//! records the peak. [`classify`] fits `peak ≈ c·g(n) + d` for every candidate
//! `g` by weighted least squares (weights make the residual relative) and
//! picks the class with the smallest residual.

use std::error::Error;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::meter::SpaceMeter;

type BoxError = Box<dyn Error + Send + Sync>;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("the grid is empty")]
    EmptyGrid,
    #[error("grid is not strictly increasing at n = {0}")]
    GridNotIncreasing(u64),
    #[error("need at least {MIN_SAMPLES} samples spanning a factor of {MIN_SPAN} in n, got {count} spanning {span:.1}")]
    InsufficientSamples { count: usize, span: f64 },
    #[error("family failed at n = {n}: {source}")]
    Family {
        n: u64,
        #[source]
        source: BoxError,
    },
}

pub const MIN_SAMPLES: usize = 4;
/// Smallest accepted ratio `n_max / n_min`.
pub const MIN_SPAN: f64 = 16.0;
/// A fit is discarded if its `g`-term moves the prediction by less than this
/// fraction of the mean peak over the grid.
pub const MIN_CONTRIBUTION: f64 = 0.1;
const EPS: f64 = 1e-9;
const MAX_MARGIN: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceSample {
    pub n: u64,
    pub peak_cells: usize,
}

/// `2^lo, 2^(lo+1), …, 2^hi`.
pub fn geometric_grid(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

pub fn default_grid() -> Vec<u64> {
    geometric_grid(6, 12)
}

/// The shorter grid for root finding, whose space is linear but whose time
/// is not.
pub fn algebraic_grid() -> Vec<u64> {
    geometric_grid(6, 10)
}

/// Runs `family(n, meter)` once per grid point, in parallel, each on its own
/// meter.
pub fn sample<F, E>(family: F, grid: &[u64]) -> Result<Vec<TraceSample>, ProfileError>
where
    F: Fn(u64, &SpaceMeter) -> Result<(), E> + Sync,
    E: Into<BoxError>,
{
    if grid.is_empty() {
        return Err(ProfileError::EmptyGrid);
    }
    if let Some(w) = grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(ProfileError::GridNotIncreasing(w[1]));
    }
    grid.par_iter()
        .map(|&n| {
            let meter = SpaceMeter::new();
            family(n, &meter).map_err(|e| ProfileError::Family { n, source: e.into() })?;
            Ok(TraceSample {
                n,
                peak_cells: meter.peak_cells(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GrowthClass {
    #[serde(rename = "constant")]
    Constant,
    #[serde(rename = "log n")]
    Log,
    #[serde(rename = "n")]
    Linear,
    #[serde(rename = "n log n")]
    LinearLog,
    #[serde(rename = "n^2")]
    Quadratic,
}

impl GrowthClass {
    pub const ALL: [GrowthClass; 5] = [
        GrowthClass::Constant,
        GrowthClass::Log,
        GrowthClass::Linear,
        GrowthClass::LinearLog,
        GrowthClass::Quadratic,
    ];

    pub fn g(self, n: f64) -> f64 {
        match self {
            GrowthClass::Constant => 1.0,
            GrowthClass::Log => n.log2(),
            GrowthClass::Linear => n,
            GrowthClass::LinearLog => n * n.log2(),
            GrowthClass::Quadratic => n * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GrowthClass::Constant => "constant",
            GrowthClass::Log => "log n",
            GrowthClass::Linear => "n",
            GrowthClass::LinearLog => "n log n",
            GrowthClass::Quadratic => "n^2",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthVerdict {
    pub best_class: GrowthClass,
    pub fit_constant: f64,
    /// Root-mean-square relative error of the best fit.
    pub residual: f64,
    /// Runner-up residual over best residual, at least 1.
    pub margin: f64,
}

#[derive(Debug, Clone, Copy)]
struct Fit {
    c: f64,
    residual: f64,
}

/// Weighted least squares for `y ≈ c·x + d` with weights `w`, or `y ≈ d`
/// when `x` is constant.
fn fit(class: GrowthClass, xs: &[f64], ys: &[f64]) -> Option<Fit> {
    let ws: Vec<f64> = ys.iter().map(|&y| 1.0 / y.max(1.0).powi(2)).collect();
    let sw: f64 = ws.iter().sum();
    let (c, d) = if class == GrowthClass::Constant {
        let d = ws.iter().zip(ys).map(|(w, y)| w * y).sum::<f64>() / sw;
        (d, 0.0)
    } else {
        let sx: f64 = ws.iter().zip(xs).map(|(w, x)| w * x).sum();
        let sy: f64 = ws.iter().zip(ys).map(|(w, y)| w * y).sum();
        let sxx: f64 = ws.iter().zip(xs).map(|(w, x)| w * x * x).sum();
        let sxy: f64 = ws.iter().zip(xs.iter().zip(ys)).map(|(w, (x, y))| w * x * y).sum();
        let det = sw * sxx - sx * sx;
        if det.abs() <= f64::EPSILON * sw * sxx {
            return None;
        }
        let c = (sw * sxy - sx * sy) / det;
        (c, (sy - c * sx) / sw)
    };
    let predict = |x: f64| if class == GrowthClass::Constant { c } else { c * x + d };
    let mse = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| ((y - predict(x)) / y.max(1.0)).powi(2))
        .sum::<f64>()
        / ys.len() as f64;
    Some(Fit {
        c,
        residual: mse.sqrt(),
    })
}

/// Picks the candidate class whose fit has the smallest relative residual.
///
/// A non-constant fit only counts if its coefficient is positive and its
/// `g`-term contributes at least [`MIN_CONTRIBUTION`] of the mean peak across
/// the grid, so flat data is not explained by a vanishing slope.
pub fn classify(samples: &[TraceSample], classes: &[GrowthClass]) -> Result<GrowthVerdict, ProfileError> {
    let span = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) if a.n > 0 => b.n as f64 / a.n as f64,
        _ => 0.0,
    };
    if samples.len() < MIN_SAMPLES || span < MIN_SPAN {
        return Err(ProfileError::InsufficientSamples {
            count: samples.len(),
            span,
        });
    }
    let ns: Vec<f64> = samples.iter().map(|s| s.n as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.peak_cells as f64).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let (lo, hi) = (ns[0], ns[ns.len() - 1]);

    let mut fits: Vec<(GrowthClass, Fit)> = classes
        .iter()
        .filter_map(|&class| {
            let xs: Vec<f64> = ns.iter().map(|&n| class.g(n)).collect();
            let f = fit(class, &xs, &ys)?;
            let admissible = class == GrowthClass::Constant
                || (f.c > 0.0 && f.c * (class.g(hi) - class.g(lo)) >= MIN_CONTRIBUTION * mean);
            admissible.then_some((class, f))
        })
        .collect();
    fits.sort_by(|a, b| a.1.residual.total_cmp(&b.1.residual));
    let (best_class, best) = *fits.first().ok_or(ProfileError::InsufficientSamples {
        count: samples.len(),
        span,
    })?;
    let margin = fits
        .get(1)
        .map_or(MAX_MARGIN, |(_, r)| ((r.residual + EPS) / (best.residual + EPS)).min(MAX_MARGIN));
    Ok(GrowthVerdict {
        best_class,
        fit_constant: best.c,
        residual: best.residual,
        margin,
    })
}

/// Samples `family` on `grid` and classifies the result.
pub fn profile<F, E>(family: F, grid: &[u64]) -> Result<(Vec<TraceSample>, GrowthVerdict), ProfileError>
where
    F: Fn(u64, &SpaceMeter) -> Result<(), E> + Sync,
    E: Into<BoxError>,
{
    let samples = sample(family, grid)?;
    let verdict = classify(&samples, &GrowthClass::ALL)?;
    Ok((samples, verdict))
}

pub fn write_samples_csv<W: std::io::Write>(samples: &[TraceSample], mut w: W) -> std::io::Result<()> {
    writeln!(w, "n,peak_cells")?;
    for s in samples {
        writeln!(w, "{},{}", s.n, s.peak_cells)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::convert::Infallible;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::generators::builtins;
    use crate::meter::Register;

    fn synthetic(mut f: impl FnMut(f64) -> f64) -> Vec<TraceSample> {
        default_grid()
            .into_iter()
            .map(|n| TraceSample {
                n,
                peak_cells: f(n as f64).round() as usize,
            })
            .collect()
    }

    #[test]
    fn sampling() {
        let third = builtins::rational(1, 3, 2).unwrap();
        let s = sample(|n, m| third.eval(n as usize, m).map(drop), &[16, 64, 256]).unwrap();
        assert!(s.iter().all(|x| x.peak_cells == s[0].peak_cells));

        let log = sample(
            |n, m| {
                let mut r = Register::new(m);
                r.set(n - 1);
                Ok::<_, Infallible>(())
            },
            &[16, 64, 256],
        )
        .unwrap();
        let peaks: Vec<usize> = log.iter().map(|s| s.peak_cells).collect();
        assert_eq!(peaks, [4, 6, 8]);

        assert!(matches!(
            sample(|_, _| Ok::<_, Infallible>(()), &[]),
            Err(ProfileError::EmptyGrid)
        ));
        assert!(matches!(
            sample(|_, _| Ok::<_, Infallible>(()), &[4, 4]),
            Err(ProfileError::GridNotIncreasing(4))
        ));
    }

    #[test]
    fn synthetic_classes() {
        let v = classify(&synthetic(|n| 5.0 * n.log2()), &GrowthClass::ALL).unwrap();
        assert_eq!(v.best_class, GrowthClass::Log);
        assert!(v.margin >= 10.0, "{v:?}");
        let v = classify(&synthetic(|n| 3.0 * n + 7.0), &GrowthClass::ALL).unwrap();
        assert_eq!(v.best_class, GrowthClass::Linear);
        assert!((v.fit_constant - 3.0).abs() < 0.01);
        let v = classify(&synthetic(|_| 12.0), &GrowthClass::ALL).unwrap();
        assert_eq!(v.best_class, GrowthClass::Constant);
        assert!(v.residual < 1e-12);
        let v = classify(&synthetic(|n| n * n.log2()), &GrowthClass::ALL).unwrap();
        assert_eq!(v.best_class, GrowthClass::LinearLog);
        let v = classify(&synthetic(|n| 0.5 * n * n + 3.0), &GrowthClass::ALL).unwrap();
        assert_eq!(v.best_class, GrowthClass::Quadratic);
    }

    #[test]
    fn scale_equivariance() {
        for f in [|n: f64| 2.0 * n.log2() + 3.0, |n: f64| n + 40.0, |n: f64| n * n.log2()] {
            let base = classify(&synthetic(f), &GrowthClass::ALL).unwrap();
            for k in [2.0, 7.0, 100.0] {
                let scaled = classify(&synthetic(|n| k * f(n)), &GrowthClass::ALL).unwrap();
                assert_eq!(scaled.best_class, base.best_class);
            }
        }
    }

    #[test]
    fn noisy_recovery() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for class in GrowthClass::ALL {
            let mut hits = 0;
            for _ in 0..100 {
                let c = rng.gen_range(2.0..20.0);
                let d = rng.gen_range(0.0..10.0);
                let s = synthetic(|n| {
                    let noise = rng.gen_range(-0.05..=0.05);
                    (c * class.g(n) + d) * (1.0 + noise)
                });
                let v = classify(&s, &GrowthClass::ALL).unwrap();
                if v.best_class == class && v.margin >= 2.0 {
                    hits += 1;
                }
            }
            assert!(hits >= 95, "{class}: {hits}/100");
        }
    }

    #[test]
    fn too_few_samples() {
        let s = synthetic(|n| n);
        assert!(matches!(
            classify(&s[..3], &GrowthClass::ALL),
            Err(ProfileError::InsufficientSamples { count: 3, .. })
        ));
        assert!(classify(&s[..4], &GrowthClass::ALL).is_err());
        assert!(classify(&s[..5], &GrowthClass::ALL).is_ok());
    }

    #[test]
    fn verdict_json() {
        let v = classify(&synthetic(|n| n), &GrowthClass::ALL).unwrap();
        let j: serde_json::Value = serde_json::to_value(&v).unwrap();
        assert_eq!(j["best_class"], "n");
        assert!(j["margin"].as_f64().unwrap() >= 1.0);
    }
}
