use crate::branching::law::{ttbp_law, OffspringLaw};
use crate::model::ModelParams;

/// First-moment matrix: `m[i][j]` is the expected number of type `j + 1`
/// children of a type `i + 1` parent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatrix {
    pub m: [[f64; 2]; 2],
}

impl MomentMatrix {
    pub fn from_laws(type1: &OffspringLaw, type2: &OffspringLaw) -> Self {
        let (a, b) = type1.mean();
        let (c, d) = type2.mean();
        MomentMatrix { m: [[a, b], [c, d]] }
    }

    pub fn zero() -> Self {
        MomentMatrix { m: [[0.0; 2]; 2] }
    }
}

/// Moment matrix of the dominating two-type process.
pub fn moment_matrix(params: ModelParams) -> MomentMatrix {
    let l1 = ttbp_law(1, params).expect("type 1 is valid");
    let l2 = ttbp_law(2, params).expect("type 2 is valid");
    MomentMatrix::from_laws(&l1, &l2)
}

/// Largest eigenvalue of a non-negative 2x2 matrix.
pub fn spectral_radius(mm: &MomentMatrix) -> f64 {
    let [[a, b], [c, d]] = mm.m;
    let half_trace = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    half_trace + (half_diff * half_diff + b * c).max(0.0).sqrt()
}

/// `rho` in closed form for the dominating process.
pub fn ttbp_spectral_radius(params: ModelParams) -> f64 {
    let d = params.d() as f64;
    ((4.0 * d * d + 4.0 * d - 3.0).sqrt() + 2.0 * d + 1.0) * params.p() / (2.0 * (d + 1.0))
}
