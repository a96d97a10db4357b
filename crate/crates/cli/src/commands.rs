use std::io::Write;

use census_core::census::{self, CountOptions, CountSeries, Engine};
use census_core::exponents::{self, ExponentReport, Formula, FormulaParams};
use census_core::smoothcheck::{self, Model, SliceSearchConfig, SmoothnessConfig};
use census_core::{diophantine, Error, IntPolynomial, VarStyle};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::output::Emitter;
use crate::{
    series, BoundArgs, Command, CountMode, EngineArg, EngineArgs, FormulaArgs, ModelArg,
    PolySource, Settings,
};

struct LoadedPoly {
    poly: IntPolynomial,
    style: VarStyle,
}

impl LoadedPoly {
    fn text(&self) -> String {
        self.poly.to_text(self.style)
    }
}

fn load_poly(src: &PolySource) -> CliResult<LoadedPoly> {
    let (origin, text) = match (&src.poly, &src.poly_file) {
        (Some(t), _) => ("--poly".to_string(), t.clone()),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            (path.display().to_string(), text.trim().to_string())
        }
        (None, None) => return Err(CliError::Invalid("a polynomial is required".into())),
    };
    let parsed = match src.arity {
        Some(a) => IntPolynomial::parse_with_arity(&text, a),
        None => IntPolynomial::parse(&text),
    };
    let poly = parsed.map_err(|e| match e {
        Error::Parse { column, message } => CliError::Invalid(format!(
            "{origin}: parse error at column {column}: {message}\n  {text}\n  {}^",
            " ".repeat(column.saturating_sub(1))
        )),
        other => CliError::Core(other),
    })?;
    Ok(LoadedPoly {
        poly,
        style: VarStyle::detect(&text).unwrap_or_default(),
    })
}

fn bounds(args: &BoundArgs) -> CliResult<Vec<i64>> {
    let raw: Vec<u64> = match (&args.bound, &args.grid) {
        (Some(b), _) => vec![*b],
        (None, Some(g)) => {
            let parts: Vec<u64> = g
                .split(',')
                .map(|p| p.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|_| {
                    CliError::Invalid(format!("grid `{g}`: expected start,factor,steps"))
                })?;
            let [start, factor, steps] = parts[..] else {
                return Err(CliError::Invalid(format!(
                    "grid `{g}`: expected start,factor,steps"
                )));
            };
            if start == 0 || factor < 2 || steps == 0 {
                return Err(CliError::Invalid(format!(
                    "grid `{g}`: need start ≥ 1, factor ≥ 2 and steps ≥ 1"
                )));
            }
            let mut out = Vec::with_capacity(steps as usize);
            let mut b = start;
            for k in 0..steps {
                out.push(b);
                if k + 1 < steps {
                    b = b
                        .checked_mul(factor)
                        .ok_or_else(|| CliError::Invalid(format!("grid `{g}` overflows")))?;
                }
            }
            out
        }
        (None, None) => return Err(CliError::Invalid("--bound or --grid is required".into())),
    };
    raw.into_iter()
        .map(|b| {
            i64::try_from(b)
                .ok()
                .filter(|&b| b >= 1)
                .ok_or_else(|| CliError::Invalid(format!("bound {b} must lie in [1, 2^63)")))
        })
        .collect()
}

fn engine(args: &EngineArgs) -> CliResult<Engine> {
    match (args.engine, args.prime) {
        (EngineArg::Sieve, p) => Ok(Engine::Sieve { prime: p }),
        (_, Some(_)) => Err(CliError::Invalid(
            "--prime applies to the sieve engine only".into(),
        )),
        (EngineArg::Brute, None) => Ok(Engine::Brute),
        (EngineArg::Slice, None) => Ok(Engine::Slice),
    }
}

fn formula(args: &FormulaArgs) -> CliResult<Formula> {
    let params = FormulaParams {
        d: args.d,
        n: args.n,
        delta: args.delta,
        k: args.k,
        e: args.e,
    };
    Ok(Formula::from_params(&args.formula, &params)?)
}

fn formula_params(f: &Formula) -> Value {
    let mut v = serde_json::to_value(f).expect("formula serializes");
    if let Value::Object(m) = &mut v {
        m.remove("formula");
    }
    v
}

fn series_value(s: &CountSeries) -> Value {
    json!(s.points)
}

fn emitter(
    settings: &Settings,
    spec: &Value,
    columns: &[&'static str],
) -> CliResult<Emitter<Box<dyn Write>>> {
    let out: Box<dyn Write> = match &settings.out {
        Some(path) => Box::new(std::io::BufWriter::new(
            std::fs::File::create(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?,
        )),
        None => Box::new(std::io::stdout().lock()),
    };
    Emitter::start(settings.format, out, spec, columns)
}

fn require_projective(p: &LoadedPoly) -> CliResult<()> {
    p.poly.require_homogeneous_in(p.style)?;
    Ok(())
}

pub fn run(command: &Command, settings: &Settings) -> CliResult<()> {
    let count_opts = |engine: Engine| CountOptions {
        engine,
        shards: settings.shards,
        mem_cap: settings.mem_cap,
    };
    match command {
        Command::Count {
            poly,
            mode,
            bounds: b,
            engine: e,
            identify_antipodes,
        } => {
            let p = load_poly(poly)?;
            let grid = bounds(b)?;
            let engine = engine(e)?;
            match mode {
                CountMode::Projective => require_projective(&p)?,
                CountMode::Curve if p.poly.arity() != 2 => {
                    return Err(CliError::Invalid(format!(
                        "curve mode needs a polynomial in 2 variables, got {}",
                        p.poly.arity()
                    )))
                }
                _ => {}
            }
            if *identify_antipodes && *mode != CountMode::Projective {
                return Err(CliError::Invalid(
                    "--identify-antipodes applies to projective mode only".into(),
                ));
            }
            let spec = json!({
                "command": "count",
                "polynomial": p.text(),
                "arity": p.poly.arity(),
                "mode": mode,
                "grid": grid,
                "engine": engine,
                "identify_antipodes": identify_antipodes,
            });
            let mut out = emitter(settings, &spec, &["bound", "count"])?;
            let opts = count_opts(engine);
            for &bound in &grid {
                let count = match mode {
                    CountMode::Affine | CountMode::Curve => {
                        census::count_affine_with(&p.poly, bound, &opts)?
                    }
                    CountMode::Projective => {
                        let n = census::count_projective_with(&p.poly, bound, &opts)?;
                        if *identify_antipodes {
                            n / 2
                        } else {
                            n
                        }
                    }
                };
                out.row(vec![json!(bound), json!(count)])?;
            }
        }
        Command::Modp { poly, prime } => {
            let p = load_poly(poly)?;
            require_projective(&p)?;
            let spec = json!({"command": "modp", "polynomial": p.text(), "arity": p.poly.arity(), "primes": prime});
            let mut out = emitter(
                settings,
                &spec,
                &[
                    "prime",
                    "affine_zero_count",
                    "projective_count",
                    "u_count",
                    "singular_count",
                    "degenerate_count",
                ],
            )?;
            for &q in prime {
                let s = census::count_mod_p(&p.poly, q)?;
                out.row(vec![
                    json!(s.prime),
                    json!(s.affine_zero_count),
                    json!(s.projective_count),
                    json!(s.u_count),
                    json!(s.singular_count),
                    json!(s.degenerate_count),
                ])?;
            }
        }
        Command::Smooth {
            poly,
            model,
            primes,
        } => {
            let p = load_poly(poly)?;
            let model = match model {
                ModelArg::Auto => Model::infer(&p.poly),
                ModelArg::Projective => {
                    require_projective(&p)?;
                    Model::Projective
                }
                ModelArg::Affine => Model::Affine,
            };
            let mut config = SmoothnessConfig::default();
            if let Some(ps) = primes {
                config.primes = ps.clone();
            }
            let spec = json!({
                "command": "smooth",
                "polynomial": p.text(),
                "arity": p.poly.arity(),
                "model": format!("{model:?}").to_lowercase(),
                "primes": config.primes,
            });
            let mut out = emitter(
                settings,
                &spec,
                &[
                    "status",
                    "passes",
                    "primes_checked",
                    "clean_primes",
                    "skipped_primes",
                    "witnesses",
                ],
            )?;
            let v = smoothcheck::smoothness_verdict(&p.poly, model, &config)?;
            out.row(vec![
                serde_json::to_value(&v.status).expect("status serializes"),
                json!(v.passes()),
                json!(v.primes_checked),
                json!(v.clean_primes),
                json!(v.skipped_primes),
                serde_json::to_value(&v.witnesses).expect("witnesses serialize"),
            ])?;
        }
        Command::SliceScan {
            poly,
            direction,
            bound,
            override_smoothness,
        } => {
            let p = load_poly(poly)?;
            let spec = json!({
                "command": "slice-scan",
                "polynomial": p.text(),
                "arity": p.poly.arity(),
                "direction": direction,
                "bound": bound,
                "override_smoothness": override_smoothness,
            });
            match direction {
                Some(dir) => {
                    let bad = smoothcheck::bad_slice_values(
                        &p.poly,
                        dir,
                        *bound,
                        &SmoothnessConfig::default(),
                    )?;
                    let mut out = emitter(settings, &spec, &["value", "reason"])?;
                    for b in bad {
                        out.row(vec![
                            json!(b.value),
                            serde_json::to_value(b.reason).expect("reason serializes"),
                        ])?;
                    }
                }
                None => {
                    let config = SliceSearchConfig {
                        override_smoothness: *override_smoothness,
                        ..SliceSearchConfig::default()
                    };
                    let r = smoothcheck::good_slice_search(&p.poly, &config)?;
                    let mut out = emitter(
                        settings,
                        &spec,
                        &[
                            "direction",
                            "completion",
                            "good_value",
                            "bad_values",
                            "slice",
                            "radius",
                        ],
                    )?;
                    let report = serde_json::to_value(&r).expect("report serializes");
                    out.row(vec![
                        json!(r.direction),
                        report["completion"].clone(),
                        json!(r.good_value),
                        report["bad_values"].clone(),
                        json!(r.slice.to_text(p.style)),
                        json!(r.radius),
                    ])?;
                }
            }
        }
        Command::Lines {
            poly,
            bounds: b,
            engine: e,
        } => {
            let p = load_poly(poly)?;
            require_projective(&p)?;
            let grid = bounds(b)?;
            let engine = engine(e)?;
            let spec = json!({
                "command": "lines",
                "polynomial": p.text(),
                "arity": p.poly.arity(),
                "grid": grid,
                "engine": engine,
                "seed": settings.seed,
            });
            let mut out = emitter(
                settings,
                &spec,
                &["bound", "total", "on_lines", "off_lines", "lines"],
            )?;
            let opts = count_opts(engine);
            for &bound in &grid {
                let r = census::count_off_lines(&p.poly, bound, &opts, settings.seed)?;
                let lines: Vec<Value> = r.lines.iter().map(|l| json!(l.basis)).collect();
                out.row(vec![
                    json!(bound),
                    json!(r.total),
                    json!(r.on_lines),
                    json!(r.off_lines),
                    json!(lines),
                ])?;
            }
        }
        Command::R3 { n, d } => {
            let spec = json!({"command": "r3", "n": n, "d": d});
            let r = diophantine::r_d(*n, *d)?;
            let mut out = emitter(settings, &spec, &["n", "d", "r"])?;
            out.row(vec![json!(r.n), json!(r.d), json!(r.r)])?;
        }
        Command::R3Batch { limit, d, full } => {
            let spec = json!({"command": "r3-batch", "limit": limit, "d": d, "full": full});
            let opts = diophantine::BatchOptions {
                mem_cap: settings.mem_cap,
                allow_sharding: true,
            };
            let counts = diophantine::r_d_batch(*limit, *d, &opts)?;
            if *full {
                let mut out = emitter(settings, &spec, &["n", "r"])?;
                for &(n, r) in &counts.nonzero {
                    out.row(vec![json!(n), json!(r)])?;
                }
            } else {
                let mut out = emitter(
                    settings,
                    &spec,
                    &["limit", "d", "total", "represented", "max", "argmax"],
                )?;
                out.row(vec![
                    json!(counts.limit),
                    json!(counts.d),
                    json!(counts.total()),
                    json!(counts.nonzero.len()),
                    json!(counts.max),
                    json!(counts.argmax),
                ])?;
            }
        }
        Command::EqualSums { poly, s, bounds: b } => {
            let p = load_poly(poly)?;
            let grid = bounds(b)?;
            let spec = json!({
                "command": "equal-sums",
                "polynomial": p.text(),
                "s": s,
                "grid": grid,
            });
            let mut out = emitter(
                settings,
                &spec,
                &["bound", "s", "total", "trivial", "nontrivial"],
            )?;
            for &bound in &grid {
                let t = diophantine::equal_sums(&p.poly, *s, bound as u64, settings.mem_cap)?;
                out.row(vec![
                    json!(t.bound),
                    json!(t.s),
                    json!(t.total),
                    json!(t.trivial),
                    json!(t.nontrivial),
                ])?;
            }
        }
        Command::Exponents { formula: fa, input } => {
            let f = formula(fa)?;
            let series = input.as_deref().map(series::read).transpose()?;
            let report = ExponentReport::new(f, series.as_ref())?;
            let spec = json!({
                "command": "exponents",
                "formula": f.id(),
                "params": formula_params(&f),
                "series": series.as_ref().map(series_value),
            });
            let mut out = emitter(
                settings,
                &spec,
                &[
                    "formula",
                    "params",
                    "value",
                    "symbolic",
                    "fitted_slope",
                    "fitted_intercept",
                    "residual",
                ],
            )?;
            out.row(vec![
                json!(f.id()),
                formula_params(&f),
                json!(report.value),
                json!(report.symbolic),
                json!(report.fitted_slope),
                json!(report.fitted_intercept),
                json!(report.residual),
            ])?;
        }
        Command::Fit { input } => {
            let s = series::read(input)?;
            let spec = json!({"command": "fit", "series": series_value(&s)});
            let fit = exponents::fit_exponent(&s)?;
            let mut out = emitter(
                settings,
                &spec,
                &["slope", "intercept", "residual", "points_used"],
            )?;
            out.row(vec![
                json!(fit.slope),
                json!(fit.intercept),
                json!(fit.residual),
                json!(fit.points_used),
            ])?;
        }
        Command::Verify {
            input,
            formula: fa,
            eps,
        } => {
            let s = series::read(input)?;
            let f = formula(fa)?;
            let spec = json!({
                "command": "verify",
                "series": series_value(&s),
                "formula": f.id(),
                "params": formula_params(&f),
                "eps": eps,
            });
            let r = exponents::bound_report(&s, f, *eps)?;
            let mut out = emitter(
                settings,
                &spec,
                &[
                    "formula",
                    "params",
                    "exponent",
                    "epsilon",
                    "constant",
                    "compliant",
                    "low_confidence",
                    "fitted_slope",
                    "violation",
                    "summary",
                ],
            )?;
            out.row(vec![
                json!(f.id()),
                formula_params(&f),
                json!(r.exponent),
                json!(r.epsilon),
                json!(r.constant),
                json!(r.compliant),
                json!(r.low_confidence),
                json!(r.fitted_slope),
                serde_json::to_value(&r.violation).expect("violation serializes"),
                json!(r.summary),
            ])?;
        }
    }
    Ok(())
}
