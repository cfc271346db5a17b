use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law `value ≈ C ε^slope`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub eps_values: Vec<f64>,
    pub norm_values: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    #[serde(rename = "r2")]
    pub r_squared: f64,
    /// Points dropped from the fit, with the reason.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Values below this are treated as numerically zero and left out of the fit.
pub const FIT_FLOOR: f64 = 1e-14;

pub fn fit_rate(eps_values: &[f64], norm_values: &[f64]) -> Result<RateFit> {
    if eps_values.len() != norm_values.len() {
        return Err(Error::Fit(format!(
            "{} epsilons against {} values",
            eps_values.len(),
            norm_values.len()
        )));
    }
    let mut pts: Vec<(f64, f64)> = Vec::new();
    let mut notes = Vec::new();
    for (&e, &v) in eps_values.iter().zip(norm_values) {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::Fit(format!("epsilon must be positive, got {e}")));
        }
        if !(v >= FIT_FLOOR) || !v.is_finite() {
            notes.push(format!("epsilon {e:e}: value {v:e} excluded"));
            continue;
        }
        pts.push((e, v));
    }
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    if pts.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::Fit("epsilon values must be distinct".into()));
    }
    if pts.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 usable points, have {}", pts.len())));
    }
    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if ss_tot <= f64::EPSILON * (1.0 + my * my) * n {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    };
    Ok(RateFit {
        eps_values: pts.iter().map(|p| p.0).collect(),
        norm_values: pts.iter().map(|p| p.1).collect(),
        slope,
        intercept,
        r_squared,
        notes,
    })
}
