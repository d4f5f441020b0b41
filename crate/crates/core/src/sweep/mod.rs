//! Parameter sweeps over `u`, `r` or the energy along a Sturmian curve.

mod format;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eploc::{self, EpError};
use crate::exactpoly::{isolate_real_roots, q_to_f64, sort_roots, PolyError};
use crate::lattice::{Convention, LatticeError, ModelParams};
use crate::secular::{spectrum, sturmian_r2, sturmian_u, Branch, SecularError};

pub use format::{fmt_g17, parse_csv, plot_script, to_csv};

pub const DEFAULT_REALITY_TOL: f64 = 1e-9;
pub const ENDPOINT_TOL: f64 = 1e-8;

/// Reality tolerance, overridable through `EPSPECT_TOL`.
pub fn default_tol() -> f64 {
    std::env::var("EPSPECT_TOL")
        .ok()
        .and_then(|s| s.trim().parse::<f64>().ok())
        .filter(|t| *t > 0.0 && t.is_finite())
        .unwrap_or(DEFAULT_REALITY_TOL)
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid grid: {0}")]
    Grid(&'static str),
    #[error("tolerance must be positive and finite")]
    Tolerance,
    #[error("thread pool: {0}")]
    Pool(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed csv: {0}")]
    Malformed(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Secular(#[from] SecularError),
    #[error(transparent)]
    Ep(#[from] EpError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Swept {
    R,
    U,
    #[serde(rename = "E_on_sturmian")]
    EOnSturmian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SturmianKind {
    #[serde(rename = "r2_of_E2")]
    R2OfE2,
    #[serde(rename = "u_of_E_plus")]
    UOfEPlus,
    #[serde(rename = "u_of_E_minus")]
    UOfEMinus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Range { lo: f64, hi: f64, count: usize },
    List(Vec<f64>),
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>, SweepError> {
        match self {
            Grid::Range { lo, hi, count } => {
                if *count < 2 {
                    return Err(SweepError::Grid("count must be at least 2"));
                }
                if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                    return Err(SweepError::Grid("need finite lo < hi"));
                }
                let step = (hi - lo) / (*count as f64 - 1.0);
                Ok((0..*count).map(|k| if k + 1 == *count { *hi } else { lo + step * k as f64 }).collect())
            }
            Grid::List(v) => {
                if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                    return Err(SweepError::Grid("list must be non-empty and finite"));
                }
                let mut v = v.clone();
                v.sort_by(f64::total_cmp);
                v.dedup();
                Ok(v)
            }
        }
    }
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n: usize,
    pub swept: Swept,
    /// Value of the parameter that is not swept (`u` when sweeping `r` and
    /// vice versa); unused on Sturmian curves.
    #[serde(default)]
    pub fixed: f64,
    pub grid: Grid,
    #[serde(default)]
    pub convention: Convention,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub sturmian: Option<SturmianKind>,
    /// Attach EP certificates (u sweeps at r = 0 only).
    #[serde(default = "default_true")]
    pub ep_markers: bool,
}

impl SweepSpec {
    pub fn new(n: usize, swept: Swept, fixed: f64, grid: Grid) -> Self {
        SweepSpec {
            n,
            swept,
            fixed,
            grid,
            convention: Convention::Shifted,
            tol: default_tol(),
            sturmian: None,
            ep_markers: true,
        }
    }

    fn params(&self, x: f64) -> Result<ModelParams, LatticeError> {
        let p = match self.swept {
            Swept::U => ModelParams::with_shift(self.n, x, self.fixed)?,
            _ => ModelParams::with_shift(self.n, self.fixed, x)?,
        };
        Ok(p.convention(self.convention))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    #[serde(serialize_with = "ser_complex_list")]
    pub eigenvalues: Vec<Complex64>,
    pub n_real: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sturmian: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn ser_complex_list<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|z| [z.re, z.im]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EpMarker {
    pub u: f64,
    pub e_re: f64,
    pub e_im: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Extremum {
    pub e: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub n: usize,
    pub swept: Swept,
    pub rows: Vec<SweepRow>,
    pub reality_intervals: Vec<(f64, f64)>,
    pub ep_markers: Vec<EpMarker>,
    pub extrema: Vec<Extremum>,
}

fn is_real_spectrum(spec: &[Complex64], tol: f64) -> bool {
    spec.iter().all(|z| z.im.abs() <= tol)
}

fn eigen_row(spec: &SweepSpec, x: f64) -> SweepRow {
    let result = spec.params(x).map_err(|e| e.to_string()).and_then(|p| spectrum(&p).map_err(|e| e.to_string()));
    match result {
        Ok(mut ev) => {
            sort_roots(&mut ev);
            let n_real = ev.iter().filter(|z| z.im.abs() <= spec.tol).count();
            SweepRow { param: x, eigenvalues: ev, n_real, sturmian: None, error: None }
        }
        Err(e) => SweepRow { param: x, eigenvalues: Vec::new(), n_real: 0, sturmian: None, error: Some(e) },
    }
}

fn fully_real(spec: &SweepSpec, x: f64) -> bool {
    let row = eigen_row(spec, x);
    row.error.is_none() && is_real_spectrum(&row.eigenvalues, spec.tol)
}

/// Bisects between a real point `a` and a non-real point `b`.
fn bisect_edge(spec: &SweepSpec, mut a: f64, mut b: f64) -> f64 {
    while (b - a).abs() > ENDPOINT_TOL {
        let m = 0.5 * (a + b);
        if fully_real(spec, m) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

fn with_pool<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, SweepError> {
    match jobs {
        Some(k) if k > 0 => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k).build().map_err(|e| SweepError::Pool(e.to_string()))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    run_sweep_with_jobs(spec, None)
}

/// Rows are computed in parallel (on `jobs` threads when given) and emitted
/// in grid order.
pub fn run_sweep_with_jobs(spec: &SweepSpec, jobs: Option<usize>) -> Result<SweepTable, SweepError> {
    if !(spec.tol > 0.0 && spec.tol.is_finite()) {
        return Err(SweepError::Tolerance);
    }
    if spec.swept == Swept::EOnSturmian {
        let kind = spec.sturmian.unwrap_or(SturmianKind::R2OfE2);
        return with_pool(jobs, || sturmian_plotdata(spec.n, kind, &spec.grid))?;
    }
    if spec.n < 2 {
        return Err(LatticeError::Dimension(spec.n).into());
    }
    let xs = spec.grid.points()?;
    let rows: Vec<SweepRow> = with_pool(jobs, || xs.par_iter().map(|&x| eigen_row(spec, x)).collect())?;

    let real: Vec<bool> = rows.iter().map(|r| r.error.is_none() && r.n_real == spec.n).collect();
    let edges: Vec<(usize, usize)> = runs(&real);
    let reality_intervals = with_pool(jobs, || {
        edges
            .par_iter()
            .map(|&(i, j)| {
                let lo = if i == 0 { xs[0] } else { bisect_edge(spec, xs[i], xs[i - 1]) };
                let hi = if j + 1 == xs.len() { xs[j] } else { bisect_edge(spec, xs[j], xs[j + 1]) };
                (lo, hi)
            })
            .collect()
    })?;

    let mut ep_markers = Vec::new();
    if spec.ep_markers && spec.swept == Swept::U && spec.fixed == 0.0 {
        let (lo, hi) = (xs[0], xs[xs.len() - 1]);
        match eploc::locate_eps(spec.n) {
            Ok(certs) => ep_markers.extend(
                certs
                    .iter()
                    .filter(|c| c.u() >= lo && c.u() <= hi)
                    .map(|c| EpMarker { u: c.u(), e_re: c.e().re, e_im: c.e().im }),
            ),
            Err(EpError::EpLine { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(SweepTable { n: spec.n, swept: spec.swept, rows, reality_intervals, ep_markers, extrema: Vec::new() })
}

/// Maximal runs of `true` as inclusive index ranges.
fn runs(flags: &[bool]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &f) in flags.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push((s, k - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, flags.len() - 1));
    }
    out
}

/// Samples a Sturmian curve over an energy grid; points off the real branch
/// (or at poles) have no value. Extrema inside the grid range are attached.
pub fn sturmian_plotdata(n: usize, kind: SturmianKind, e_grid: &Grid) -> Result<SweepTable, SweepError> {
    let xs = e_grid.points()?;
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    let (values, extrema): (Vec<Option<f64>>, Vec<Extremum>) = match kind {
        SturmianKind::R2OfE2 => {
            let curve = sturmian_r2(n)?;
            let values = xs.par_iter().map(|&e| curve.eval(e).ok()).collect();
            let in_e = curve.in_e();
            let dnum = in_e.derivative_numerator();
            let mut extrema = Vec::new();
            if !dnum.is_zero() && dnum.degree().unwrap_or(0) > 0 {
                for b in isolate_real_roots(&dnum, crate::exactpoly::DEFAULT_ROOT_TOL)? {
                    let e = b.value();
                    if e >= lo && e <= hi {
                        if let Some(v) = in_e.eval(&b.midpoint().expect("real")) {
                            extrema.push(Extremum { e, value: q_to_f64(&v) });
                        }
                    }
                }
            }
            (values, extrema)
        }
        SturmianKind::UOfEPlus | SturmianKind::UOfEMinus => {
            let branch = if kind == SturmianKind::UOfEPlus { Branch::Plus } else { Branch::Minus };
            let curve = sturmian_u(n, branch)?;
            let values = xs.par_iter().map(|&e| curve.eval(e).ok()).collect();
            let mut extrema = Vec::new();
            match eploc::locate_eps(n) {
                Ok(certs) => {
                    for c in certs.iter().filter(|c| c.e().im == 0.0) {
                        let e = c.e().re;
                        if e < lo || e > hi {
                            continue;
                        }
                        if let Ok(u) = curve.eval(e) {
                            if (u - c.u()).abs() <= 1e-6 {
                                extrema.push(Extremum { e, value: c.u() });
                            }
                        }
                    }
                }
                Err(EpError::EpLine { .. }) => {}
                Err(e) => return Err(e.into()),
            }
            (values, extrema)
        }
    };
    let rows = xs
        .iter()
        .zip(values)
        .map(|(&e, v)| SweepRow { param: e, eigenvalues: Vec::new(), n_real: 0, sturmian: v, error: None })
        .collect();
    Ok(SweepTable { n, swept: Swept::EOnSturmian, rows, reality_intervals: Vec::new(), ep_markers: Vec::new(), extrema })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_points() {
        let g = Grid::Range { lo: -1.0, hi: 1.0, count: 5 };
        assert_eq!(g.points().unwrap(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!(Grid::Range { lo: 1.0, hi: 0.0, count: 5 }.points().is_err());
        assert!(Grid::Range { lo: 0.0, hi: 1.0, count: 1 }.points().is_err());
    }

    #[test]
    fn runs_are_maximal() {
        assert_eq!(runs(&[true, true, false, true, false, false, true]), vec![(0, 1), (3, 3), (6, 6)]);
        assert!(runs(&[false, false]).is_empty());
    }

    #[test]
    fn five_site_single_interval() {
        let mut spec = SweepSpec::new(5, Swept::U, 0.0, Grid::Range { lo: -1.0, hi: 1.0, count: 81 });
        spec.ep_markers = false;
        let t = run_sweep(&spec).unwrap();
        assert_eq!(t.reality_intervals.len(), 1);
        let (lo, hi) = t.reality_intervals[0];
        assert!((hi - 0.19614283648641273).abs() < 1e-6 && (lo + 0.19614283648641273).abs() < 1e-6);
        for row in t.rows.iter().filter(|r| r.param.abs() > 0.2) {
            assert_eq!(row.n_real, 3);
        }
    }

    #[test]
    fn spec_json() {
        let s: SweepSpec =
            serde_json::from_str(r#"{"n": 7, "swept": "u", "fixed": 0, "grid": {"lo": -0.6, "hi": 0.6, "count": 11}}"#).unwrap();
        assert_eq!(s.grid.points().unwrap().len(), 11);
        let s: SweepSpec = serde_json::from_str(
            r#"{"n": 3, "swept": "E_on_sturmian", "sturmian": "u_of_E_minus", "grid": [0.1, 0.5]}"#,
        )
        .unwrap();
        assert_eq!(s.sturmian, Some(SturmianKind::UOfEMinus));
    }

    #[test]
    fn sturmian_extrema() {
        let t = sturmian_plotdata(3, SturmianKind::UOfEMinus, &Grid::Range { lo: 0.05, hi: 0.99, count: 50 }).unwrap();
        assert_eq!(t.extrema.len(), 1);
        assert!((t.extrema[0].e - 0.7861513775).abs() < 1e-8);
        assert!((t.extrema[0].value - 0.3002831061).abs() < 1e-8);
        let t = sturmian_plotdata(2, SturmianKind::R2OfE2, &Grid::Range { lo: -1.0, hi: 1.0, count: 5 }).unwrap();
        for row in &t.rows {
            assert!((row.sturmian.unwrap() - row.param * row.param).abs() < 1e-15);
        }
    }
}
