//! Parameter sweeps over a function or sequence family.
//!
//! A grid is one or more axes `name=lo:hi[:step]` (step 1 when omitted) and
//! is expanded as a cartesian product, first axis slowest. Each point yields a
//! row; the footer records the extremes of the equivalence ratio.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use hardy_core::cont_ops::ContReport;
use hardy_core::funcspace::FunctionCatalog;
use hardy_core::quad::QuadConfig;
use hardy_core::report::{Check, Measured};
use hardy_core::seq_ops::{disc_equivalence_ratio, DiscReport, PreparedSeq, SeqConfig, SequenceCatalog};
use hardy_core::{HardyError, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::record::csv_field;

/// Most points a grid may expand to.
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

/// Parses `name=lo:hi[:step]` or `name=value`.
pub fn parse_axis(src: &str) -> Result<Axis> {
    let (name, range) = src
        .split_once('=')
        .ok_or_else(|| HardyError::Parse(format!("expected name=lo:hi[:step], got {src:?}")))?;
    Ok(Axis {
        name: name.trim().to_string(),
        values: parse_range(range)?,
    })
}

pub fn parse_range(src: &str) -> Result<Vec<f64>> {
    let nums = src
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|e| HardyError::Parse(format!("{s:?} in range {src:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let (lo, hi, step) = match nums[..] {
        [v] => (v, v, 1.0),
        [lo, hi] => (lo, hi, 1.0),
        [lo, hi, step] => (lo, hi, step),
        _ => return Err(HardyError::Parse(format!("range {src:?} has too many parts"))),
    };
    if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0) {
        return Err(HardyError::Parameter(format!("range {src:?} needs finite bounds and a positive step")));
    }
    if hi < lo {
        return Err(HardyError::Parameter(format!("range {src:?} is empty")));
    }
    // tolerate rounding in (hi - lo)/step
    let n = ((hi - lo) / step * (1.0 + 1e-12)).floor() as usize + 1;
    if n > MAX_POINTS {
        return Err(HardyError::Parameter(format!("range {src:?} has more than {MAX_POINTS} points")));
    }
    // 12 significant digits keep 1.1 + 3*0.1 from printing as 1.4000000000000001
    Ok((0..n).map(|i| format!("{:.12e}", lo + i as f64 * step).parse().unwrap()).collect())
}

/// Cartesian product of the axes.
pub fn expand(axes: &[Axis]) -> Result<Vec<BTreeMap<String, f64>>> {
    if axes.is_empty() || axes.iter().any(|a| a.values.is_empty()) {
        return Err(HardyError::Parameter("empty grid".into()));
    }
    let mut points = vec![BTreeMap::new()];
    for axis in axes {
        if points[0].contains_key(&axis.name) {
            return Err(HardyError::Parameter(format!("axis {} given twice", axis.name)));
        }
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.insert(axis.name.clone(), v);
                    q
                })
            })
            .collect();
        if points.len() > MAX_POINTS {
            return Err(HardyError::Parameter(format!("grid has more than {MAX_POINTS} points")));
        }
    }
    Ok(points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cont,
    Disc,
}

impl Kind {
    /// Functionals a row can carry, in column order.
    pub fn functionals(self) -> &'static [&'static str] {
        match self {
            Kind::Cont => &["l1", "w", "h1", "i1", "i2", "ratio", "checks"],
            Kind::Disc => &["sum", "l1_mod", "log_weight", "j1", "j2", "ratio", "checks"],
        }
    }

    /// The catalog that knows `family`.
    pub fn of_family(family: &str) -> Result<Kind> {
        if FunctionCatalog::standard().family(family).is_ok() {
            Ok(Kind::Cont)
        } else if SequenceCatalog::standard().family(family).is_ok() {
            Ok(Kind::Disc)
        } else {
            Err(HardyError::Lookup(family.to_string()))
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub kind: Kind,
    pub family: String,
    pub axes: Vec<Axis>,
    /// Requested functionals; empty means all.
    pub functionals: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub spec: String,
    pub params: BTreeMap<String, f64>,
    pub values: BTreeMap<String, Measured>,
    pub ratio: Option<f64>,
    pub checks: Vec<Check>,
    /// A failure at this point; the sweep goes on.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepFooter {
    pub points: usize,
    pub errors: usize,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub argmin: Option<String>,
    pub argmax: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub kind: Kind,
    pub family: String,
    pub axes: Vec<Axis>,
    pub functionals: Vec<String>,
    pub rows: Vec<SweepRow>,
    pub footer: SweepFooter,
}

pub struct Engines<'a> {
    pub quad: &'a QuadConfig,
    pub seq: &'a SeqConfig,
}

fn want(fs: &[String], name: &str) -> bool {
    fs.iter().any(|f| f == name)
}

fn cont_row(family: &str, params: &BTreeMap<String, f64>, fs: &[String], cfg: &QuadConfig) -> Result<SweepRow> {
    let f = FunctionCatalog::standard().build(family, params)?;
    let r = ContReport::build(&f, cfg)?;
    let all = [
        ("l1", r.l1_norm),
        ("w", r.weighted_norm),
        ("h1", r.h_l1_norm),
        ("i1", r.i1),
        ("i2", r.i2),
    ];
    Ok(SweepRow {
        index: 0,
        spec: f.name().to_string(),
        params: params.clone(),
        values: all.into_iter().filter(|(k, _)| want(fs, k)).map(|(k, v)| (k.to_string(), v)).collect(),
        ratio: r.equivalence_ratio.filter(|_| want(fs, "ratio")),
        checks: if want(fs, "checks") { r.checks } else { Vec::new() },
        error: None,
    })
}

fn disc_row(family: &str, params: &BTreeMap<String, f64>, fs: &[String], cfg: &SeqConfig) -> Result<SweepRow> {
    let a = SequenceCatalog::standard().build(family, params)?;
    let mut row = SweepRow {
        index: 0,
        spec: a.name().to_string(),
        params: params.clone(),
        values: BTreeMap::new(),
        ratio: None,
        checks: Vec::new(),
        error: None,
    };
    if want(fs, "checks") || want(fs, "j1") || want(fs, "j2") {
        let r = DiscReport::build(&a, cfg)?;
        let all = [
            ("sum", Some(r.sum)),
            ("l1_mod", Some(r.l1_mod)),
            ("log_weight", Some(r.log_weight)),
            ("j1", r.j1_sum),
            ("j2", r.j2_sum),
        ];
        row.values = all
            .into_iter()
            .filter(|(k, _)| want(fs, k))
            .map(|(k, v)| (k.to_string(), v.unwrap_or_else(|| Measured::missing("NOT-APPLICABLE"))))
            .collect();
        row.ratio = r.equivalence_ratio.filter(|_| want(fs, "ratio"));
        if want(fs, "checks") {
            row.checks = r.checks;
        }
        return Ok(row);
    }
    // the cheap path: only what the ratio needs
    let p = PreparedSeq::new(&a, cfg)?;
    if want(fs, "sum") {
        row.values.insert("sum".into(), p.total().measured());
    }
    if want(fs, "ratio") {
        let e = disc_equivalence_ratio(&p)?;
        row.ratio = Some(e.ratio);
        for (k, v) in [("l1_mod", e.l1_mod), ("log_weight", e.log_weight)] {
            if want(fs, k) {
                row.values.insert(k.into(), v);
            }
        }
    } else {
        if want(fs, "l1_mod") {
            row.values.insert("l1_mod".into(), p.l1_norm_mod()?.measured());
        }
        if want(fs, "log_weight") {
            row.values.insert("log_weight".into(), p.log_weight()?.measured());
        }
    }
    Ok(row)
}

/// Runs a sweep. Invalid grids and unknown functionals fail before any point
/// is computed; a failing point is recorded in its row.
pub fn sweep(spec: &SweepSpec, eng: &Engines) -> Result<SweepTable> {
    let known = spec.kind.functionals();
    let fs: Vec<String> = if spec.functionals.is_empty() {
        known.iter().map(|s| s.to_string()).collect()
    } else {
        spec.functionals.clone()
    };
    if let Some(bad) = fs.iter().find(|f| !known.contains(&f.as_str())) {
        return Err(HardyError::Parameter(format!(
            "unknown functional {bad:?}, expected one of {}",
            known.join(", ")
        )));
    }
    match spec.kind {
        Kind::Cont => {
            FunctionCatalog::standard().family(&spec.family)?;
            sweep_with(spec, fs, |p, fs| cont_row(&spec.family, p, fs, eng.quad))
        }
        Kind::Disc => {
            SequenceCatalog::standard().family(&spec.family)?;
            sweep_with(spec, fs, |p, fs| disc_row(&spec.family, p, fs, eng.seq))
        }
    }
}

fn sweep_with<F>(spec: &SweepSpec, fs: Vec<String>, row: F) -> Result<SweepTable>
where
    F: Fn(&BTreeMap<String, f64>, &[String]) -> Result<SweepRow> + Sync,
{
    let points = expand(&spec.axes)?;
    let rows: Vec<SweepRow> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut r = row(p, &fs).unwrap_or_else(|e| SweepRow {
                index: 0,
                spec: format!("{}{:?}", spec.family, p),
                params: p.clone(),
                values: BTreeMap::new(),
                ratio: None,
                checks: Vec::new(),
                error: Some(e.to_string()),
            });
            r.index = i;
            r
        })
        .collect();
    let footer = footer(&rows);
    Ok(SweepTable {
        kind: spec.kind,
        family: spec.family.clone(),
        axes: spec.axes.clone(),
        functionals: fs,
        rows,
        footer,
    })
}

fn footer(rows: &[SweepRow]) -> SweepFooter {
    let mut lo: Option<(f64, &str)> = None;
    let mut hi: Option<(f64, &str)> = None;
    for r in rows {
        if let Some(x) = r.ratio.filter(|x| x.is_finite()) {
            if lo.is_none_or(|(v, _)| x < v) {
                lo = Some((x, &r.spec));
            }
            if hi.is_none_or(|(v, _)| x > v) {
                hi = Some((x, &r.spec));
            }
        }
    }
    SweepFooter {
        points: rows.len(),
        errors: rows.iter().filter(|r| r.error.is_some()).count(),
        ratio_min: lo.map(|l| l.0),
        ratio_max: hi.map(|h| h.0),
        argmin: lo.map(|l| l.1.to_string()),
        argmax: hi.map(|h| h.1.to_string()),
    }
}

fn num(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| format!("{v:e}"))
}

impl SweepTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize") + "\n"
    }

    /// One row per point, values in scientific notation; missing values are
    /// written as their status. The footer is a trailing `#` line.
    pub fn to_csv(&self) -> String {
        let names: Vec<&String> = self.axes.iter().map(|a| &a.name).collect();
        let cols: Vec<&str> = self
            .functionals
            .iter()
            .map(String::as_str)
            .filter(|f| *f != "ratio" && *f != "checks")
            .collect();
        let mut out = String::from("index,spec");
        for n in &names {
            let _ = write!(out, ",{}", csv_field(n));
        }
        for c in &cols {
            let _ = write!(out, ",{c},{c}_err");
        }
        out.push_str(",ratio,verdicts,error\n");
        for r in &self.rows {
            let _ = write!(out, "{},{}", r.index, csv_field(&r.spec));
            for n in &names {
                let _ = write!(out, ",{}", num(r.params.get(*n).copied()));
            }
            for c in &cols {
                match r.values.get(*c) {
                    Some(m) if m.value.is_some() => {
                        let _ = write!(out, ",{},{}", num(m.value), num(m.err));
                    }
                    Some(m) => {
                        let _ = write!(out, ",{},", m.status);
                    }
                    None => out.push_str(",,"),
                }
            }
            let verdicts: Vec<String> = r.checks.iter().map(|c| format!("{}={}", c.claim, c.verdict)).collect();
            let _ = writeln!(
                out,
                ",{},{},{}",
                num(r.ratio),
                csv_field(&verdicts.join(";")),
                csv_field(r.error.as_deref().unwrap_or(""))
            );
        }
        let f = &self.footer;
        let _ = writeln!(
            out,
            "# footer: points={} errors={} ratio_min={} ratio_max={} argmin={} argmax={}",
            f.points,
            f.errors,
            num(f.ratio_min),
            num(f.ratio_max),
            f.argmin.as_deref().unwrap_or(""),
            f.argmax.as_deref().unwrap_or("")
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let v = parse_range("1.1:4.0:0.1").unwrap();
        assert_eq!(v.len(), 30);
        assert_eq!(v[3], 1.4);
        assert_eq!(*v.last().unwrap(), 4.0);
        assert_eq!(parse_range("1:5").unwrap(), [1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(parse_range("2").unwrap(), [2.0]);
        assert!(parse_range("5:1").is_err());
        assert!(parse_range("1:2:0").is_err());
        assert!(parse_range("a:b").is_err());
    }

    #[test]
    fn empty_grid_is_an_error() {
        assert!(expand(&[]).is_err());
        let spec = SweepSpec {
            kind: Kind::Cont,
            family: "power_tail".into(),
            axes: Vec::new(),
            functionals: Vec::new(),
        };
        let (q, s) = (QuadConfig::default(), SeqConfig::default());
        assert!(sweep(&spec, &Engines { quad: &q, seq: &s }).is_err());
    }

    #[test]
    fn product_order() {
        let axes = [parse_axis("a=1:2").unwrap(), parse_axis("b=5:6").unwrap()];
        let pts = expand(&axes).unwrap();
        let flat: Vec<(f64, f64)> = pts.iter().map(|p| (p["a"], p["b"])).collect();
        assert_eq!(flat, [(1.0, 5.0), (1.0, 6.0), (2.0, 5.0), (2.0, 6.0)]);
    }

    #[test]
    fn failing_points_stay_in_the_table() {
        let spec = SweepSpec {
            kind: Kind::Disc,
            family: "em".into(),
            axes: vec![parse_axis("m=0:2").unwrap()],
            functionals: vec!["ratio".into()],
        };
        let (q, s) = (QuadConfig::default(), SeqConfig::default());
        let t = sweep(&spec, &Engines { quad: &q, seq: &s }).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows[0].error.is_some());
        assert_eq!(t.footer.errors, 1);
        assert!((t.footer.ratio_max.unwrap() - 1.5743533488445738).abs() < 1e-12);
        assert!(t.to_csv().lines().last().unwrap().starts_with("# footer: points=3 errors=1"));
    }
}
