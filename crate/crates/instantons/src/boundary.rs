use g2_geometries::{Family, Real};

use crate::trajectory::Ansatz;
use crate::InstantonError;

/// The two extensions of the homogeneous SU(2)-bundle over the singular orbit,
/// by the trivial and by the identity homomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bundle {
    P1,
    Pid,
}

impl std::str::FromStr for Bundle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "p1" => Ok(Bundle::P1),
            "pid" => Ok(Bundle::Pid),
            other => Err(format!("unknown bundle '{other}' (expected p1 or pid)")),
        }
    }
}

/// Free parameters of the smooth local solutions at the singular orbit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundaryData<T> {
    /// x = x₁t + O(t³), y = 0.
    BsP1 { x1: T },
    /// x = 2/t + O(t), y = y₀ + O(t²).
    BsPid { y0: T },
    /// f⁺ = f₁⁺t + O(t³), g⁺ = g₁⁺t + O(t³), f⁻ = g⁻ = 0.
    BgggP1 { f1p: T, g1p: T },
    /// f⁺, g⁺ = 2/t + O(t), f⁻ = g⁻ = b₀⁻ + O(t²); b₂⁺ fixes the O(t) terms.
    BgggPid { b0m: T, b2p: T },
}

impl<T: Real> BoundaryData<T> {
    pub fn new(family: Family, bundle: Bundle, params: &[T]) -> Result<Self, InstantonError> {
        let need = match (family, bundle) {
            (Family::BryantSalamon, _) => 1,
            (Family::Bggg, _) => 2,
        };
        if params.len() != need {
            return Err(InstantonError::Unsupported(format!(
                "{} on {bundle:?} takes {need} parameter(s), got {}",
                family.name(),
                params.len()
            )));
        }
        Ok(match (family, bundle) {
            (Family::BryantSalamon, Bundle::P1) => Self::BsP1 { x1: params[0] },
            (Family::BryantSalamon, Bundle::Pid) => Self::BsPid { y0: params[0] },
            (Family::Bggg, Bundle::P1) => Self::BgggP1 { f1p: params[0], g1p: params[1] },
            (Family::Bggg, Bundle::Pid) => Self::BgggPid { b0m: params[0], b2p: params[1] },
        })
    }

    pub fn bundle(&self) -> Bundle {
        match self {
            Self::BsP1 { .. } | Self::BgggP1 { .. } => Bundle::P1,
            Self::BsPid { .. } | Self::BgggPid { .. } => Bundle::Pid,
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::BsP1 { .. } | Self::BsPid { .. } => Family::BryantSalamon,
            Self::BgggP1 { .. } | Self::BgggPid { .. } => Family::Bggg,
        }
    }

    pub fn ansatz(&self) -> Ansatz {
        match self.family() {
            Family::BryantSalamon => Ansatz::Clarke,
            Family::Bggg => Ansatz::Bggg,
        }
    }

    pub fn params(&self) -> Vec<T> {
        match *self {
            Self::BsP1 { x1 } => vec![x1],
            Self::BsPid { y0 } => vec![y0],
            Self::BgggP1 { f1p, g1p } => vec![f1p, g1p],
            Self::BgggPid { b0m, b2p } => vec![b0m, b2p],
        }
    }

    /// Components with a 2/t pole at the singular orbit.
    pub fn pole_mask(&self) -> Vec<bool> {
        match self {
            Self::BsP1 { .. } => vec![false, false],
            Self::BsPid { .. } => vec![true, false],
            Self::BgggP1 { .. } => vec![false; 4],
            Self::BgggPid { .. } => vec![true, true, false, false],
        }
    }
}
