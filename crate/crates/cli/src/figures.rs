//! Datasets behind the figures: Vidal roofs on isotropic states, optimal
//! `t` values, Vidal roofs on OO-invariant states and the isotropic witness
//! curve.

use anyhow::{bail, Result};
use symroof::roofs::extension::{extended_roof, region_membership, Region};
use symroof::roofs::isotropic::{iso_vidal_roof, tgen1, tgen2};
use symroof::witness::{pure_to_isotropic_nogo_with, IsoWitnessOptions, Verdict};
use symroof::{FamilyPoint, MonotoneSpec, SchmidtVector};

use crate::record::{Format, OutputRecord};

/// Figures that `emit-figure` can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FigureName {
    /// Vidal roofs E_1 … E_{d−1} on isotropic states over b in [0, 1] (CSV).
    VidalIso,
    /// Optimal t(b) of the top-heavy and truncated profiles over b in [1/d, 1] (CSV).
    TOpt,
    /// Vidal roofs on the covered OO-invariant states over an (a, b) grid (JSON).
    OoVidalSurface,
    /// Isotropic no-go witness W(λ, b) over b in [1/d, 1] with its zero crossing (CSV).
    WitnessCurve,
}

impl FigureName {
    pub fn label(self) -> String {
        use clap::ValueEnum as _;
        self.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string())
    }

    pub fn format(self) -> Format {
        match self {
            FigureName::OoVidalSurface => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Settings shared by all figures.
#[derive(Debug, Clone)]
pub struct FigureParams {
    pub d: usize,
    pub points: usize,
    pub lambda: Option<SchmidtVector>,
    pub seed: u64,
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub fn emit(name: FigureName, command: &str, p: &FigureParams) -> Result<OutputRecord> {
    if p.points < 2 {
        bail!("figures need at least 2 grid points per axis, got {}", p.points);
    }
    if p.d < 2 {
        bail!("figures need d >= 2, got {}", p.d);
    }
    let mut record = OutputRecord::new(command);
    record.meta("figure", name.label()).meta("d", p.d).meta("points", p.points);
    match name {
        FigureName::VidalIso => vidal_iso(&mut record, p)?,
        FigureName::TOpt => t_opt(&mut record, p)?,
        FigureName::OoVidalSurface => oo_vidal_surface(&mut record, p)?,
        FigureName::WitnessCurve => witness_curve(&mut record, p)?,
    }
    Ok(record)
}

fn vidal_iso(record: &mut OutputRecord, p: &FigureParams) -> Result<()> {
    let bs = grid(0.0, 1.0, p.points);
    let mut columns = Vec::new();
    for k in 1..p.d {
        let v = bs.iter().map(|&b| iso_vidal_roof(k, b, p.d)).collect::<symroof::Result<Vec<_>>>()?;
        columns.push((format!("E{k}"), v));
    }
    record.column("b", bs);
    for (name, v) in columns {
        record.column(name, v);
    }
    Ok(())
}

fn t_opt(record: &mut OutputRecord, p: &FigureParams) -> Result<()> {
    let bs = grid(1.0 / p.d as f64, 1.0, p.points);
    let mut t1 = Vec::with_capacity(bs.len());
    let mut t2 = Vec::with_capacity(bs.len());
    let mut k2 = Vec::with_capacity(bs.len());
    for &b in &bs {
        t1.push(tgen1(b, p.d)?);
        let (t, k) = tgen2(b, p.d)?;
        t2.push(t);
        k2.push(k as f64);
    }
    record
        .meta("t1", "top-heavy profile (t, (1-t)/(d-1), ...)")
        .meta("t2", "truncated profile (t, ..., t, 1-kt, 0, ...) with k copies of t")
        .column("b", bs)
        .column("t1", t1)
        .column("t2", t2)
        .column("k", k2);
    Ok(())
}

fn oo_vidal_surface(record: &mut OutputRecord, p: &FigureParams) -> Result<()> {
    let axis = grid(0.0, 1.0, p.points);
    let specs: Vec<MonotoneSpec> = (1..p.d).map(MonotoneSpec::vidal).collect::<symroof::Result<_>>()?;
    let mut a_col = Vec::new();
    let mut b_col = Vec::new();
    let mut region_col = Vec::new();
    let mut values = vec![Vec::new(); specs.len()];
    for &a in &axis {
        for &b in axis.iter().take_while(|&&b| a + b <= 1.0 + 1e-12) {
            let point = FamilyPoint::oo(a, b.min(1.0 - a), p.d)?;
            let code = match region_membership(&point) {
                Region::WernerOrbit => 1.0,
                Region::IsoOrbit => 2.0,
                Region::Separable | Region::Unknown => continue,
            };
            for (spec, col) in specs.iter().zip(values.iter_mut()) {
                col.push(extended_roof(spec, &point)?.value);
            }
            a_col.push(a);
            b_col.push(b.min(1.0 - a));
            region_col.push(code);
        }
    }
    record
        .meta("region", "1 = Werner-orbit region (A), 2 = isotropic-orbit region (B)")
        .column("a", a_col)
        .column("b", b_col)
        .column("region", region_col);
    for (k, v) in values.into_iter().enumerate() {
        record.column(format!("E{}", k + 1), v);
    }
    Ok(())
}

fn witness_curve(record: &mut OutputRecord, p: &FigureParams) -> Result<()> {
    let Some(lambda) = &p.lambda else {
        bail!("witness-curve needs --lambda");
    };
    let options = IsoWitnessOptions {
        seed: p.seed,
        ..IsoWitnessOptions::default()
    };
    let w = |b: f64| pure_to_isotropic_nogo_with(lambda, b, p.d, &options);
    let bs = grid(1.0 / p.d as f64, 1.0, p.points);
    let mut values = Vec::with_capacity(bs.len());
    let mut nogo = Vec::with_capacity(bs.len());
    for &b in &bs {
        let r = w(b)?;
        values.push(r.value);
        nogo.push(if r.verdict == Verdict::NoGo { 1.0 } else { 0.0 });
    }
    let parts: Vec<String> = lambda.as_slice().iter().map(|x| x.to_string()).collect();
    record.meta("lambda", parts.join(",")).meta("seed", p.seed);
    let cell = values.windows(2).position(|v| v[0] >= 0.0 && v[1] < 0.0);
    match cell {
        Some(i) => {
            let (mut lo, mut hi) = (bs[i], bs[i + 1]);
            while hi - lo > 1e-7 {
                let mid = 0.5 * (lo + hi);
                if w(mid)?.value >= 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let crossing = 0.5 * (lo + hi);
            record.meta("crossing", format!("{crossing:.7}"));
            eprintln!("zero crossing at b = {crossing:.5}");
        }
        None => {
            record.meta("crossing", "none");
            eprintln!("no zero crossing on the grid");
        }
    }
    record.column("b", bs).column("W", values).column("nogo", nogo);
    Ok(())
}
