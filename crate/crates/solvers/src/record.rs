use qhj_fields::export::{fmt_f64, table_csv};
use qhj_fields::{Complex64, Constants, Grid, WaveFunction};
use serde::Serialize;

use crate::{Dynamics, SolverError};

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub values: Vec<Complex64>,
    /// Time derivative, stored by the Klein-Gordon solver.
    pub rate: Option<Vec<Complex64>>,
    /// Conserved discrete energy, Klein-Gordon only.
    pub energy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverMeta {
    pub method: String,
    pub time_order: u32,
    pub space: String,
    pub dt: f64,
    pub steps: usize,
    pub output_stride: usize,
}

/// Snapshots of one propagation, in strictly increasing time order.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionRecord {
    pub grid: Grid,
    pub constants: Constants,
    pub dynamics: Dynamics,
    pub meta: SolverMeta,
    pub snapshots: Vec<Snapshot>,
}

impl EvolutionRecord {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|s| s.time).collect()
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("a record holds at least the initial slice")
    }

    pub fn wave(&self, i: usize) -> Result<WaveFunction, SolverError> {
        let s = &self.snapshots[i];
        Ok(WaveFunction::new(&self.grid, s.values.clone(), s.time, self.constants)?)
    }

    /// Discrete `sum |psi|^2 dV` of slice `i`.
    pub fn norm_sq(&self, i: usize) -> f64 {
        self.snapshots[i].values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.cell_volume()
    }

    /// Largest `|norm(t) - norm(0)|` over stored slices.
    pub fn norm_drift(&self) -> f64 {
        let n0 = self.norm_sq(0).sqrt();
        (0..self.len()).map(|i| (self.norm_sq(i).sqrt() - n0).abs()).fold(0.0, f64::max)
    }

    /// Largest relative change of the stored energies (absolute when the
    /// initial energy is zero).
    pub fn energy_drift(&self) -> Option<f64> {
        let e: Vec<f64> = self.snapshots.iter().filter_map(|s| s.energy).collect();
        let e0 = *e.first()?;
        let scale = if e0 == 0.0 { 1.0 } else { e0.abs() };
        Some(e.iter().map(|x| ((x - e0) / scale).abs()).fold(0.0, f64::max))
    }

    /// CSV of slice `i`: coordinates, `re`, `im`, `density` and, when stored, `re_t`, `im_t`.
    pub fn slice_csv(&self, i: usize) -> String {
        let s = &self.snapshots[i];
        let re: Vec<f64> = s.values.iter().map(|z| z.re).collect();
        let im: Vec<f64> = s.values.iter().map(|z| z.im).collect();
        let rho: Vec<f64> = s.values.iter().map(|z| z.norm_sqr()).collect();
        let mut cols: Vec<(&str, &[f64])> = vec![("re", &re), ("im", &im), ("density", &rho)];
        let (rt, it): (Vec<f64>, Vec<f64>) = s.rate.iter().flatten().map(|z| (z.re, z.im)).unzip();
        if s.rate.is_some() {
            cols.push(("re_t", &rt));
            cols.push(("im_t", &it));
        }
        table_csv(&self.grid, &cols)
    }

    /// Serializable view for JSON export.
    pub fn view(&self) -> RecordView<'_> {
        RecordView {
            dynamics: self.dynamics,
            meta: &self.meta,
            grid: &self.grid,
            constants: &self.constants,
            norm_drift: self.norm_drift(),
            energy_drift: self.energy_drift(),
            slices: self
                .snapshots
                .iter()
                .map(|s| SliceView {
                    step: s.step,
                    time: s.time,
                    re: s.values.iter().map(|z| z.re).collect(),
                    im: s.values.iter().map(|z| z.im).collect(),
                    re_t: s.rate.as_ref().map(|r| r.iter().map(|z| z.re).collect()),
                    im_t: s.rate.as_ref().map(|r| r.iter().map(|z| z.im).collect()),
                    energy: s.energy,
                })
                .collect(),
        }
    }

    /// One line per slice: step, time, norm and energy.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("step,time,norm,energy\n");
        for (i, s) in self.snapshots.iter().enumerate() {
            let e = s.energy.map_or_else(String::new, fmt_f64);
            out.push_str(&format!("{},{},{},{}\n", s.step, fmt_f64(s.time), fmt_f64(self.norm_sq(i).sqrt()), e));
        }
        out
    }
}

#[derive(Serialize)]
pub struct SliceView {
    pub step: usize,
    pub time: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub re_t: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im_t: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
}

#[derive(Serialize)]
pub struct RecordView<'a> {
    pub dynamics: Dynamics,
    pub meta: &'a SolverMeta,
    pub grid: &'a Grid,
    pub constants: &'a Constants,
    pub norm_drift: f64,
    pub energy_drift: Option<f64>,
    pub slices: Vec<SliceView>,
}
