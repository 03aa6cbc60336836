//! Hitchin flow of SU(2)²×U(1)-invariant half-flat structures on S³×S³.
//!
//! With A₂ = A₃ and B₂ = B₃ the flow is a 4-dimensional ODE in (A₁, A₂, B₁, B₂).
//! Solutions sweep out torsion-free G2-structures φ = dt∧ω + γ₁.

use g2_geometries::{g2_from_su3, su3_forms, GeomError, Real, SU3StructureState, Symmetry};
use g2_liealg::CoframeAlgebra;
use g2_numerics::{lit, Dopri5, OdeOptions, OdeStatus, Solution};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("state {0} has a vanishing coefficient; start from a series expansion instead")]
    Singular(String),
    #[error("flow needs A2 = A3 and B2 = B3")]
    NotReduced,
    #[error(transparent)]
    Geometry(#[from] GeomError),
}

/// (Ȧ₁, Ȧ₂, Ḃ₁, Ḃ₂) for the U(1)-reduced flow, returned as a full rate state.
pub fn hitchin_rhs<T: Real>(s: &SU3StructureState<T>) -> Result<SU3StructureState<T>, FlowError> {
    if s.symmetry(lit(1e-12)) == Symmetry::Generic {
        return Err(FlowError::NotReduced);
    }
    let [a1, a2, b1, b2] = [s.a[0], s.a[1], s.b[0], s.b[1]];
    if [a1, a2, b1, b2].iter().any(|v| *v == T::zero()) {
        return Err(FlowError::Singular(format!("{s:?}")));
    }
    let d = reduced_rhs([a1, a2, b1, b2]);
    Ok(SU3StructureState::reduced(d[0], d[1], d[2], d[3]))
}

fn reduced_rhs<T: Real>([a1, a2, b1, b2]: [T; 4]) -> [T; 4] {
    let half: T = lit(0.5);
    [
        half * (a1 * a1 / (a2 * a2) - a1 * a1 / (b2 * b2)),
        half * ((b1 * b1 + b2 * b2 - a2 * a2) / (b1 * b2) - a1 / a2),
        (a2 * a2 + b2 * b2 - b1 * b1) / (a2 * b2),
        half * ((a2 * a2 + b1 * b1 - b2 * b2) / (a2 * b1) + a1 / b2),
    ]
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlowDiagnostics<T> {
    /// max over samples of max(|dφ|, |dψ|).
    pub max_torsion: T,
    /// max over samples of max(|dγ₁|, |d(ω²)|) on the orbit.
    pub max_constraint: T,
    pub status: OdeStatus<T>,
}

#[derive(Clone, Debug)]
pub struct FlowTrajectory<T> {
    pub grid: Vec<T>,
    pub states: Vec<SU3StructureState<T>>,
    pub diagnostics: FlowDiagnostics<T>,
    solution: Solution<T>,
}

impl<T: Real> FlowTrajectory<T> {
    /// Interpolated state at t inside the integrated range.
    pub fn state_at(&self, t: T) -> Option<SU3StructureState<T>> {
        self.solution.eval(t).map(|y| SU3StructureState::reduced(y[0], y[1], y[2], y[3]))
    }

    pub fn truncated(&self) -> bool {
        self.diagnostics.status != OdeStatus::Completed
    }

    pub fn csv_header() -> [&'static str; 9] {
        ["t", "A1", "A2", "A3", "B1", "B2", "B3", "dphi", "dpsi"]
    }

    /// Rows (t, A₁..B₃, |dφ|, |dψ|) for export.
    pub fn rows(&self, alg: &CoframeAlgebra<T>) -> Result<Vec<[T; 9]>, FlowError> {
        let res = torsion_residual(self, alg)?;
        Ok(self
            .grid
            .iter()
            .zip(&self.states)
            .zip(res)
            .map(|((&t, s), (p, q))| {
                let v = s.values();
                [t, v[0], v[1], v[2], v[3], v[4], v[5], p, q]
            })
            .collect())
    }
}

/// Blow-up guard: any coefficient above this or at/below zero ends the run.
pub const BLOW_UP: f64 = 1e8;

/// Integrate the reduced flow from `initial` at t0 to t1 with local tolerance `tol`.
pub fn integrate_flow<T: Real>(
    initial: &SU3StructureState<T>,
    t0: T,
    t1: T,
    tol: T,
) -> Result<FlowTrajectory<T>, FlowError> {
    initial.validate()?;
    hitchin_rhs(initial)?;
    let y0 = [initial.a[0], initial.a[1], initial.b[0], initial.b[1]];
    let solver = Dopri5::new(OdeOptions { rtol: tol, atol: tol, ..OdeOptions::default() });
    let cap: T = lit(BLOW_UP);
    let solution = solver.solve(
        |_, y, dy| dy.copy_from_slice(&reduced_rhs([y[0], y[1], y[2], y[3]])),
        t0,
        &y0,
        t1,
        |_, y| {
            if y.iter().any(|v| !(*v > T::zero())) {
                Some("metric coefficient reached zero".into())
            } else if y.iter().any(|v| *v > cap) {
                Some("metric coefficient exceeded blow-up bound".into())
            } else {
                None
            }
        },
    );
    let states: Vec<_> = solution.y.iter().map(|y| SU3StructureState::reduced(y[0], y[1], y[2], y[3])).collect();
    // drop a final state that left the admissible region
    let keep = states.iter().take_while(|s| s.validate().is_ok()).count();
    let mut tr = FlowTrajectory {
        grid: solution.t[..keep].to_vec(),
        states: states[..keep].to_vec(),
        diagnostics: FlowDiagnostics { max_torsion: T::zero(), max_constraint: T::zero(), status: solution.status.clone() },
        solution,
    };
    let alg = CoframeAlgebra::s3xs3();
    let mut worst = T::zero();
    for (p, q) in torsion_residual(&tr, &alg)? {
        worst = worst.max(p).max(q);
    }
    let mut drift = T::zero();
    for s in &tr.states {
        let (g, w) = half_flat_defect(s, &alg)?;
        drift = drift.max(g).max(w);
    }
    tr.diagnostics.max_torsion = worst;
    tr.diagnostics.max_constraint = drift;
    Ok(tr)
}

/// (|dφ|, |dψ|) for a state with given t-derivative.
pub fn torsion_at<T: Real>(
    s: &SU3StructureState<T>,
    rate: &SU3StructureState<T>,
    alg: &CoframeAlgebra<T>,
) -> Result<(T, T), FlowError> {
    Ok(g2_from_su3(s, Some(rate))?.torsion(alg)?)
}

/// Torsion at every stored sample, with t-derivatives taken from the flow itself.
pub fn torsion_residual<T: Real>(tr: &FlowTrajectory<T>, alg: &CoframeAlgebra<T>) -> Result<Vec<(T, T)>, FlowError> {
    tr.states.iter().map(|s| torsion_at(s, &hitchin_rhs(s)?, alg)).collect()
}

/// Half-flat defect (|dγ₁|, |d(ω²)|) on the orbit, in the orbit metric.
pub fn half_flat_defect<T: Real>(s: &SU3StructureState<T>, alg: &CoframeAlgebra<T>) -> Result<(T, T), FlowError> {
    let f = su3_forms(s, None);
    let m = s.orbit_metric()?;
    let dg = f.gamma1.d_spatial(alg);
    let dw = f.omega.wedge(&f.omega).d_spatial(alg);
    let norm = |x| -> Result<T, FlowError> { Ok(m.norm_sq(x).map_err(GeomError::from)?.sqrt()) };
    Ok((norm(&dg)?, norm(&dw)?))
}
