//! Closed-form growth exponents, log-log fitting of count series and
//! bound-compliance reports.
//!
//! Compliance is always a "consistent with" statement: the implied
//! constants of the bounds are not explicit, so a report can only say
//! whether a series fits under `C·B^{θ+ε}` for the calibrated `C`.

use serde::Serialize;

use crate::census::CountSeries;
use crate::error::{Error, Result};

/// Default `ε` margin for [`bound_report`].
pub const DEFAULT_EPSILON: f64 = 0.1;

/// An exponent formula with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "formula", rename_all = "snake_case")]
pub enum Formula {
    /// `n − 2 + 2/√d + 1/(d−1) − 1/((d−2)√d)`, `d ≥ 4`, `n ≥ 3`.
    Theorem1 { d: u32, n: u32 },
    /// `2/√δ + 1/(δ−1) − 1/((δ−2)√δ)`, `δ ≥ 4`.
    Theorem2 { delta: u32 },
    /// `2/√d + 1/(k+1) − 1/(k√d)`, `2 ≤ k ≤ d−1`.
    Proposition1 { d: u32, k: u32 },
    /// The older bound for absolutely irreducible forms, `d ≥ 3`, `n ≥ 3`.
    Sand { d: u32, n: u32 },
    /// `2/√d + 2/(d−1)`, `d ≥ 2`.
    HbTheta { d: u32 },
    /// `2/√d + 1/(d−1) − 1/((d−2)√d)`, `d ≥ 4`.
    Cor1Theta { d: u32 },
    /// `1/δ`, `δ ≥ 1`.
    Pila { delta: u32 },
    /// `1/e − 1/((e−1)√d)`, `e ≥ 3`, `d ≥ 4`.
    Lemma7 { d: u32, e: u32 },
}

/// Loose parameter bag, as collected from command-line flags.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FormulaParams {
    pub d: Option<u32>,
    pub n: Option<u32>,
    pub delta: Option<u32>,
    pub k: Option<u32>,
    pub e: Option<u32>,
}

pub const FORMULA_IDS: [&str; 8] = [
    "theorem1",
    "theorem2",
    "proposition1",
    "sand",
    "hb_theta",
    "cor1_theta",
    "pila",
    "lemma7",
];

fn need(value: Option<u32>, name: &str, id: &str) -> Result<u32> {
    value.ok_or_else(|| Error::InvalidArgument(format!("formula {id} needs parameter {name}")))
}

fn range_error(what: String) -> Error {
    Error::InvalidArgument(format!("parameter out of range: {what}"))
}

impl Formula {
    /// Builds a formula from its id. `δ` falls back to `d` when absent.
    pub fn from_params(id: &str, p: &FormulaParams) -> Result<Formula> {
        let delta = || need(p.delta.or(p.d), "delta", id);
        let formula = match id {
            "theorem1" => Formula::Theorem1 {
                d: need(p.d, "d", id)?,
                n: need(p.n, "n", id)?,
            },
            "theorem2" => Formula::Theorem2 { delta: delta()? },
            "proposition1" => Formula::Proposition1 {
                d: need(p.d, "d", id)?,
                k: need(p.k, "k", id)?,
            },
            "sand" => Formula::Sand {
                d: need(p.d, "d", id)?,
                n: need(p.n, "n", id)?,
            },
            "hb_theta" => Formula::HbTheta {
                d: need(p.d, "d", id)?,
            },
            "cor1_theta" => Formula::Cor1Theta {
                d: need(p.d, "d", id)?,
            },
            "pila" => Formula::Pila { delta: delta()? },
            "lemma7" => Formula::Lemma7 {
                d: need(p.d, "d", id)?,
                e: need(p.e, "e", id)?,
            },
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown formula `{other}`; expected one of {}",
                    FORMULA_IDS.join(", ")
                )))
            }
        };
        formula.validate()?;
        Ok(formula)
    }

    pub fn id(&self) -> &'static str {
        match self {
            Formula::Theorem1 { .. } => "theorem1",
            Formula::Theorem2 { .. } => "theorem2",
            Formula::Proposition1 { .. } => "proposition1",
            Formula::Sand { .. } => "sand",
            Formula::HbTheta { .. } => "hb_theta",
            Formula::Cor1Theta { .. } => "cor1_theta",
            Formula::Pila { .. } => "pila",
            Formula::Lemma7 { .. } => "lemma7",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Formula::Theorem1 { d, n } if d < 4 || n < 3 => Err(range_error(format!(
                "theorem1 needs d ≥ 4 and n ≥ 3, got d = {d}, n = {n}"
            ))),
            Formula::Theorem2 { delta } if delta < 4 => Err(range_error(format!(
                "theorem2 needs δ ≥ 4, got δ = {delta}"
            ))),
            Formula::Proposition1 { d, k } if k < 2 || k + 1 > d => Err(range_error(format!(
                "proposition1 needs 2 ≤ k ≤ d − 1, got d = {d}, k = {k}"
            ))),
            Formula::Sand { d, n } if d < 3 || n < 3 => Err(range_error(format!(
                "sand needs d ≥ 3 and n ≥ 3, got d = {d}, n = {n}"
            ))),
            Formula::HbTheta { d } if d < 2 => {
                Err(range_error(format!("hb_theta needs d ≥ 2, got d = {d}")))
            }
            Formula::Cor1Theta { d } if d < 4 => {
                Err(range_error(format!("cor1_theta needs d ≥ 4, got d = {d}")))
            }
            Formula::Pila { delta } if delta < 1 => {
                Err(range_error("pila needs δ ≥ 1, got δ = 0".to_string()))
            }
            Formula::Lemma7 { d, e } if e < 3 || d < 4 => Err(range_error(format!(
                "lemma7 needs e ≥ 3 and d ≥ 4, got d = {d}, e = {e}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn value(&self) -> Result<f64> {
        self.validate()?;
        Ok(match *self {
            Formula::Theorem1 { d, n } => n as f64 - 2.0 + surface_term(d),
            Formula::Theorem2 { delta } => surface_term(delta),
            Formula::Proposition1 { d, k } => {
                let (k, r) = (k as f64, (d as f64).sqrt());
                2.0 / r + 1.0 / (k + 1.0) - 1.0 / (k * r)
            }
            Formula::Sand { d, n } => {
                let n = n as f64;
                if d == 3 {
                    n - 7.0 / 4.0 + 5.0 / (3.0 * 3f64.sqrt())
                } else {
                    n - 5.0 / 3.0 + 3.0 / (2.0 * (d as f64).sqrt())
                }
            }
            Formula::HbTheta { d } => 2.0 / (d as f64).sqrt() + 2.0 / (d as f64 - 1.0),
            Formula::Cor1Theta { d } => surface_term(d),
            Formula::Pila { delta } => 1.0 / delta as f64,
            Formula::Lemma7 { d, e } => {
                let e = e as f64;
                1.0 / e - 1.0 / ((e - 1.0) * (d as f64).sqrt())
            }
        })
    }

    /// Exact closed form with the parameters substituted.
    pub fn symbolic(&self) -> String {
        match *self {
            Formula::Theorem1 { d, n } => {
                format!("{n} - 2 + 2/sqrt({d}) + 1/({d}-1) - 1/(({d}-2)*sqrt({d}))")
            }
            Formula::Theorem2 { delta: t } | Formula::Cor1Theta { d: t } => {
                format!("2/sqrt({t}) + 1/({t}-1) - 1/(({t}-2)*sqrt({t}))")
            }
            Formula::Proposition1 { d, k } => {
                format!("2/sqrt({d}) + 1/({k}+1) - 1/({k}*sqrt({d}))")
            }
            Formula::Sand { d: 3, n } => format!("{n} - 7/4 + 5/(3*sqrt(3))"),
            Formula::Sand { d, n } => format!("{n} - 5/3 + 3/(2*sqrt({d}))"),
            Formula::HbTheta { d } => format!("2/sqrt({d}) + 2/({d}-1)"),
            Formula::Pila { delta } => format!("1/{delta}"),
            Formula::Lemma7 { d, e } => format!("1/{e} - 1/(({e}-1)*sqrt({d}))"),
        }
    }

    /// Largest exponent of the full bound, including the `B^{n−1}` term of
    /// `theorem1` and `sand` (for `d ≥ 4`) and the `B^1` term of `theorem2`.
    pub fn dominant_exponent(&self) -> Result<f64> {
        let v = self.value()?;
        Ok(match *self {
            Formula::Theorem1 { n, .. } => v.max(n as f64 - 1.0),
            Formula::Sand { d, n } if d >= 4 => v.max(n as f64 - 1.0),
            Formula::Theorem2 { .. } => v.max(1.0),
            _ => v,
        })
    }
}

/// Shared tail `2/√d + 1/(d−1) − 1/((d−2)√d)`.
fn surface_term(d: u32) -> f64 {
    let (d, r) = (d as f64, (d as f64).sqrt());
    2.0 / r + 1.0 / (d - 1.0) - 1.0 / ((d - 2.0) * r)
}

pub fn theorem1_exponent(d: u32, n: u32) -> Result<f64> {
    Formula::Theorem1 { d, n }.value()
}

pub fn theorem2_exponent(delta: u32) -> Result<f64> {
    Formula::Theorem2 { delta }.value()
}

pub fn proposition1_exponent(d: u32, k: u32) -> Result<f64> {
    Formula::Proposition1 { d, k }.value()
}

pub fn sand_exponent(d: u32, n: u32) -> Result<f64> {
    Formula::Sand { d, n }.value()
}

pub fn hb_theta(d: u32) -> Result<f64> {
    Formula::HbTheta { d }.value()
}

pub fn cor1_theta(d: u32) -> Result<f64> {
    Formula::Cor1Theta { d }.value()
}

pub fn pila_exponent(delta: u32) -> Result<f64> {
    Formula::Pila { delta }.value()
}

pub fn lemma7_exponent(d: u32, e: u32) -> Result<f64> {
    Formula::Lemma7 { d, e }.value()
}

/// Least-squares line through `(log B, log count)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Maximum absolute deviation of a point from the line, in log space.
    pub residual: f64,
    pub points_used: usize,
}

/// Fits the growth exponent of a series. Points with zero count are
/// skipped; at least three positive points are required.
pub fn fit_exponent(series: &CountSeries) -> Result<Fit> {
    let logs: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter(|&&(b, c)| b > 0 && c > 0)
        .map(|&(b, c)| ((b as f64).ln(), (c as f64).ln()))
        .collect();
    if logs.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "fit needs at least 3 points with positive bound and count, got {}",
            logs.len()
        )));
    }
    least_squares(&logs)
}

fn least_squares(logs: &[(f64, f64)]) -> Result<Fit> {
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "fit needs at least two distinct bounds".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = logs
        .iter()
        .map(|&(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    Ok(Fit {
        slope,
        intercept,
        residual,
        points_used: logs.len(),
    })
}

/// Closed form, optionally with the fit of a supplied series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExponentReport {
    #[serde(flatten)]
    pub formula: Formula,
    pub value: f64,
    pub symbolic: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_slope: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted_intercept: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl ExponentReport {
    pub fn new(formula: Formula, series: Option<&CountSeries>) -> Result<ExponentReport> {
        let value = formula.value()?;
        let fit = series.map(fit_exponent).transpose()?;
        Ok(ExponentReport {
            formula,
            value,
            symbolic: formula.symbolic(),
            fitted_slope: fit.map(|f| f.slope),
            fitted_intercept: fit.map(|f| f.intercept),
            residual: fit.map(|f| f.residual),
        })
    }
}

/// Growth of a series beyond the allowed `θ + ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub fitted_slope: f64,
    pub allowed: f64,
    /// Point with the largest `count / B^{θ+ε}`.
    pub worst_bound: u64,
    pub worst_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub formula: Formula,
    /// Exponent of the dominant term of the bound, before `ε`.
    pub exponent: f64,
    pub epsilon: f64,
    /// `C = count / B^{θ+ε}` at the largest bound.
    pub constant: f64,
    pub compliant: bool,
    pub low_confidence: bool,
    pub fitted_slope: Option<f64>,
    pub violation: Option<Violation>,
    pub summary: String,
}

/// Compares a series against `C·B^{θ+ε}` with `C` calibrated at the
/// largest bound.
///
/// An envelope pinned at the last point cannot see growth that is too
/// fast, so compliance is decided by the log-log slope through all
/// positive points: the series is consistent with the bound when the
/// slope does not exceed `θ + ε`. A single point is always compliant;
/// fewer than three points are flagged low-confidence.
pub fn bound_report(series: &CountSeries, formula: Formula, epsilon: f64) -> Result<BoundReport> {
    let &(b_max, c_max) = series
        .points
        .last()
        .ok_or_else(|| Error::InvalidArgument("bound report needs a non-empty series".into()))?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "ε must be finite and non-negative, got {epsilon}"
        )));
    }
    if series.points.iter().any(|&(b, _)| b == 0) {
        return Err(Error::InvalidArgument("bounds must be positive".into()));
    }
    let exponent = formula.dominant_exponent()?;
    let allowed = exponent + epsilon;
    let normalized = |b: u64, c: u64| c as f64 / (b as f64).powf(allowed);
    let constant = normalized(b_max, c_max);

    let logs: Vec<(f64, f64)> = series
        .points
        .iter()
        .filter(|&&(_, c)| c > 0)
        .map(|&(b, c)| ((b as f64).ln(), (c as f64).ln()))
        .collect();
    let fitted_slope = if logs.len() >= 2 {
        least_squares(&logs).ok().map(|f| f.slope)
    } else {
        None
    };
    let violation = fitted_slope.filter(|&s| s > allowed).map(|s| {
        let &(worst_bound, worst_count) = series
            .points
            .iter()
            .max_by(|x, y| normalized(x.0, x.1).total_cmp(&normalized(y.0, y.1)))
            .expect("series is non-empty");
        Violation {
            fitted_slope: s,
            allowed,
            worst_bound,
            worst_count,
        }
    });
    let compliant = violation.is_none();
    let low_confidence = series.points.len() < 3;
    let mut summary = if compliant {
        format!(
            "consistent with C·B^{allowed:.6}, C = {constant:.6e}; implied constants are not explicit, so this is not a proof"
        )
    } else {
        format!(
            "grows faster than B^{allowed:.6}; implied constants are not explicit, so this is not a refutation"
        )
    };
    if low_confidence {
        summary.push_str(" (low confidence: fewer than 3 points)");
    }
    Ok(BoundReport {
        formula,
        exponent,
        epsilon,
        constant,
        compliant,
        low_confidence,
        fitted_slope,
        violation,
        summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    fn series(points: &[(u64, u64)]) -> CountSeries {
        let mut s = CountSeries::new("test");
        for &(b, c) in points {
            s.push(b, c).unwrap();
        }
        s
    }

    #[test]
    fn closed_form_examples() {
        assert!(close(
            theorem1_exponent(4, 3).unwrap(),
            1.0 + 1.0 + 1.0 / 3.0 - 0.25
        ));
        let t = theorem1_exponent(5, 3).unwrap();
        assert!((t - 1.9954).abs() < 1e-4 && t < 2.0);
        assert!((theorem1_exponent(1_000_000, 3).unwrap() - 1.0).abs() < 3e-3);
        assert!(close(theorem2_exponent(4).unwrap(), 1.0 + 1.0 / 3.0 - 0.25));
        assert!((theorem2_exponent(9).unwrap() - 0.7440).abs() < 1e-4);
        assert!(close(pila_exponent(3).unwrap(), 1.0 / 3.0));
        assert!(close(
            sand_exponent(3, 3).unwrap(),
            3.0 - 1.75 + 5.0 / (3.0 * 3f64.sqrt())
        ));
        assert!(close(lemma7_exponent(4, 3).unwrap(), 1.0 / 3.0 - 0.25));
    }

    #[test]
    fn identities() {
        for d in 4..=50 {
            let t2 = theorem2_exponent(d).unwrap();
            assert!(close(t2, proposition1_exponent(d, d - 2).unwrap()));
            assert!(close(t2, cor1_theta(d).unwrap()));
            for n in 3..=10 {
                assert!(close(theorem1_exponent(d, n).unwrap(), t2 + n as f64 - 2.0));
            }
        }
        for n in 3..=10 {
            assert!(close(
                sand_exponent(4, n).unwrap(),
                theorem1_exponent(4, n).unwrap()
            ));
        }
        for d in 4..=10_000 {
            let c = cor1_theta(d).unwrap();
            assert!(c < hb_theta(d).unwrap());
            assert_eq!(c < 1.0, d >= 5, "d = {d}");
        }
    }

    #[test]
    fn range_checks() {
        assert!(theorem1_exponent(3, 3).is_err());
        assert!(theorem1_exponent(4, 2).is_err());
        assert!(theorem2_exponent(3).is_err());
        assert!(proposition1_exponent(5, 1).is_err());
        assert!(proposition1_exponent(5, 5).is_err());
        assert!(proposition1_exponent(5, 4).is_ok());
        assert!(lemma7_exponent(5, 2).is_err());
        assert!(pila_exponent(0).is_err());
        assert!(cor1_theta(3).is_err());
    }

    #[test]
    fn from_params() {
        let p = FormulaParams {
            d: Some(5),
            n: Some(3),
            ..Default::default()
        };
        assert_eq!(
            Formula::from_params("theorem1", &p).unwrap(),
            Formula::Theorem1 { d: 5, n: 3 }
        );
        assert_eq!(
            Formula::from_params("theorem2", &p).unwrap(),
            Formula::Theorem2 { delta: 5 }
        );
        assert!(Formula::from_params("proposition1", &p).is_err());
        assert!(Formula::from_params("nope", &p).is_err());
        let json =
            serde_json::to_value(ExponentReport::new(Formula::Pila { delta: 3 }, None).unwrap())
                .unwrap();
        assert_eq!(json["formula"], "pila");
        assert_eq!(json["delta"], 3);
        assert!(json.get("fitted_slope").is_none());
    }

    #[test]
    fn symbolic_strings() {
        assert_eq!(
            Formula::Theorem1 { d: 5, n: 3 }.symbolic(),
            "3 - 2 + 2/sqrt(5) + 1/(5-1) - 1/((5-2)*sqrt(5))"
        );
        assert_eq!(
            Formula::Sand { d: 3, n: 4 }.symbolic(),
            "4 - 7/4 + 5/(3*sqrt(3))"
        );
    }

    #[test]
    fn fits() {
        let s = series(&[
            (10, 700),
            (100, 70_000),
            (1000, 7_000_000),
            (10_000, 700_000_000),
        ]);
        let f = fit_exponent(&s).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!(f.residual < 1e-9);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-9);

        let flat = series(&[(10, 5), (20, 5), (40, 5)]);
        assert!(fit_exponent(&flat).unwrap().slope.abs() < 1e-12);

        assert!(fit_exponent(&series(&[(10, 5), (20, 0), (40, 5)])).is_err());
        let report = ExponentReport::new(Formula::Pila { delta: 2 }, Some(&s)).unwrap();
        assert!(report.fitted_slope.is_some() && report.residual.is_some());
    }

    #[test]
    fn bound_reports() {
        let quad = series(&[(20, 400), (40, 1600), (80, 6400)]);
        let ok = bound_report(&quad, Formula::Theorem1 { d: 5, n: 3 }, 0.1).unwrap();
        assert!(ok.compliant && !ok.low_confidence);
        assert!(close(ok.exponent, 2.0));
        assert!(ok.summary.contains("consistent with"));

        let cubic = series(&[(10, 1000), (20, 8000), (40, 64_000)]);
        let bad = bound_report(&cubic, Formula::Theorem1 { d: 5, n: 3 }, 0.1).unwrap();
        assert!(!bad.compliant);
        let v = bad.violation.unwrap();
        assert!((v.fitted_slope - 3.0).abs() < 1e-9);
        assert_eq!((v.worst_bound, v.worst_count), (40, 64_000));

        let flat = series(&[(10, 100), (100, 100), (1000, 100)]);
        assert!(
            bound_report(&flat, Formula::Pila { delta: 3 }, 0.1)
                .unwrap()
                .compliant
        );

        let single = bound_report(&series(&[(100, 1)]), Formula::Pila { delta: 3 }, 0.1).unwrap();
        assert!(single.compliant && single.low_confidence);

        assert!(bound_report(&CountSeries::new("empty"), Formula::Pila { delta: 3 }, 0.1).is_err());
    }
}
