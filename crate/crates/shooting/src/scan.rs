use std::collections::BTreeMap;
use std::sync::Arc;

use g2_geometries::{Family, Profile};
use g2_instantons::{bggg_pid_b2p, Boundary, BoundaryData, Bundle};
use rayon::prelude::*;

use crate::classify::{shoot, Classification, ShootOptions, Verdict};
use crate::fit::{curvature_decay_fit, holonomy_at_infinity};
use crate::ShootError;

/// Evenly spaced parameter values, endpoints included.
#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn new(name: &str, lo: f64, hi: f64, n: usize) -> Self {
        Self { name: name.to_string(), lo, hi, n }
    }

    pub fn step(&self) -> f64 {
        if self.n > 1 {
            (self.hi - self.lo) / (self.n - 1) as f64
        } else {
            0.0
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.lo + i as f64 * self.step()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct ScanSpec {
    pub family: Family,
    pub bundle: Bundle,
    /// One axis per boundary parameter; the first varies slowest.
    pub axes: Vec<Axis>,
    pub shoot: ShootOptions,
    /// Cells this close to f₁⁺ = ½ or f₁⁺ = ½ + g₁⁺ are Undetermined by policy.
    pub boundary_tol: f64,
}

impl ScanSpec {
    /// The square [0, 2]² over (f₁⁺, g₁⁺) on BGGG, P₁.
    pub fn bggg_square(n: usize) -> Self {
        Self {
            family: Family::Bggg,
            bundle: Bundle::P1,
            axes: vec![Axis::new("f1p", 0.0, 2.0, n), Axis::new("g1p", 0.0, 2.0, n)],
            shoot: ShootOptions::default(),
            boundary_tol: 1e-9,
        }
    }
}

/// Regions of the (f₁⁺, g₁⁺) plane for BGGG on P₁.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Region {
    /// f₁⁺ ≤ ½, or g₁⁺ ≥ max(f₁⁺, 0): bounded only when abelian.
    A,
    /// f₁⁺ ≥ ½ + g₁⁺ > ½: bounded and irreducible.
    B,
    /// 0 < f₁⁺ − ½ < g₁⁺ < f₁⁺, not covered by either statement.
    Open,
    /// Everything else, e.g. g₁⁺ = 0 < f₁⁺ − ½ or g₁⁺ < 0.
    Outside,
    /// Not a BGGG P₁ scan.
    NotApplicable,
}

impl Region {
    pub fn of(f: f64, g: f64) -> Region {
        if f >= 0.5 + g && g > 0.0 {
            Region::B
        } else if f <= 0.5 || (g >= 0.0 && g >= f) {
            Region::A
        } else if 0.0 < f - 0.5 && f - 0.5 < g && g < f {
            Region::Open
        } else {
            Region::Outside
        }
    }

    /// Whether the disc of radius `margin` about (f, g) stays in this region.
    pub fn contains_with_margin(self, f: f64, g: f64, margin: f64) -> bool {
        Region::of(f, g) == self
            && (0..32).all(|k| {
                let a = std::f64::consts::TAU * k as f64 / 32.0;
                Region::of(f + margin * a.cos(), g + margin * a.sin()) == self
            })
    }

    pub fn name(self) -> &'static str {
        match self {
            Region::A => "a",
            Region::B => "b",
            Region::Open => "open",
            Region::Outside => "outside",
            Region::NotApplicable => "-",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanCell {
    pub params: Vec<f64>,
    pub region: Region,
    pub classification: Classification,
    /// Log-log slope of |F| over the final decade, for GlobalBounded cells.
    pub slope: Option<f64>,
    pub holonomy: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionSummary {
    pub region: Region,
    pub counts: BTreeMap<Verdict, usize>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub spec: ScanSpec,
    pub cells: Vec<ScanCell>,
    pub summaries: Vec<RegionSummary>,
}

impl ScanReport {
    pub fn undetermined(&self) -> usize {
        self.cells.iter().filter(|c| c.classification.verdict == Verdict::Undetermined).count()
    }

    /// Cells of the open region 0 < f₁⁺ − ½ < g₁⁺ < f₁⁺.
    pub fn open_region(&self) -> impl Iterator<Item = &ScanCell> {
        self.cells.iter().filter(|c| c.region == Region::Open)
    }

    pub fn summary(&self, region: Region) -> Option<&RegionSummary> {
        self.summaries.iter().find(|s| s.region == region)
    }
}

/// Boundary data from scan parameters. On BGGG P_id a single parameter b₀⁻ is
/// accepted and completed with the compatible b₂⁺.
pub fn boundary_for(
    family: Family,
    bundle: Bundle,
    params: &[f64],
    profile: &dyn Profile<f64>,
) -> Result<Boundary, ShootError> {
    if family == Family::Bggg && bundle == Bundle::Pid && params.len() == 1 {
        let b2p = bggg_pid_b2p(params[0], profile)?;
        return Ok(BoundaryData::BgggPid { b0m: params[0], b2p });
    }
    Ok(BoundaryData::new(family, bundle, params)?)
}

fn cartesian(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![vec![]], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values().into_iter().map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

fn run_cell(spec: &ScanSpec, profile: &Arc<dyn Profile<f64>>, params: Vec<f64>) -> ScanCell {
    let bggg_p1 = spec.family == Family::Bggg && spec.bundle == Bundle::P1 && params.len() == 2;
    let region = if bggg_p1 { Region::of(params[0], params[1]) } else { Region::NotApplicable };
    let result = boundary_for(spec.family, spec.bundle, &params, profile.as_ref())
        .and_then(|data| shoot(&data, profile.clone(), &spec.shoot));
    let (traj, mut class) = match result {
        Ok((t, c)) => (Some(t), c),
        Err(e) => (None, Classification::undetermined(e.to_string(), f64::NAN)),
    };
    let mut slope = None;
    let mut holonomy = None;
    if let Some(traj) = &traj {
        if class.verdict == Verdict::GlobalBounded {
            slope = curvature_decay_fit(traj).ok().map(|f| f.slope);
        }
        holonomy = holonomy_at_infinity(traj, &class).ok();
    }
    if bggg_p1 {
        let (f, g) = (params[0], params[1]);
        if (f - 0.5).abs() < spec.boundary_tol || (f - 0.5 - g).abs() < spec.boundary_tol {
            let shot = class.verdict;
            class = Classification::undetermined(
                format!("on a region boundary (shot verdict {shot})"),
                class.curvature_sup,
            );
        }
    }
    ScanCell { params, region, classification: class, slope, holonomy }
}

/// Shoot every grid cell in parallel; cells come back in grid order and a failed
/// cell is reported Undetermined rather than aborting the scan.
pub fn scan(spec: &ScanSpec) -> ScanReport {
    let profile: Arc<dyn Profile<f64>> = Arc::from(spec.family.profile::<f64>());
    let cells: Vec<ScanCell> =
        cartesian(&spec.axes).into_par_iter().map(|p| run_cell(spec, &profile, p)).collect();
    let mut by_region: BTreeMap<Region, BTreeMap<Verdict, usize>> = BTreeMap::new();
    for c in &cells {
        *by_region.entry(c.region).or_default().entry(c.classification.verdict).or_default() += 1;
    }
    let summaries = by_region.into_iter().map(|(region, counts)| RegionSummary { region, counts }).collect();
    ScanReport { spec: spec.clone(), cells, summaries }
}
